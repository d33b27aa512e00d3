#include "tracemon/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "tracemon/errors.hpp"
#include "tracemon/field_selector.hpp"
#include "tracemon/pattern_miner.hpp"
#include "tracemon/trace_io.hpp"

namespace tracemon {

namespace {
using ojson = nlohmann::ordered_json;
}

std::string to_string(Approach a) {
    switch (a) {
        case Approach::Mr: return "mr";
        case Approach::Un: return "un";
        case Approach::Pm: return "pm";
        case Approach::RestOnly: return "rest-only";
        case Approach::Combined: return "combined";
    }
    return "mr";
}

Approach approach_from_string(const std::string& s) {
    if (s == "mr") return Approach::Mr;
    if (s == "un") return Approach::Un;
    if (s == "pm") return Approach::Pm;
    if (s == "rest-only") return Approach::RestOnly;
    if (s == "combined") return Approach::Combined;
    throw InvalidConfig("unknown approach '" + s + "'");
}

void simulate_corpus(const WorkloadConfig& cfg, int n_traces,
                     const std::filesystem::path& out_dir) {
    if (n_traces < 1) throw InvalidConfig("need at least one trace");
    std::filesystem::create_directories(out_dir);
    for (int i = 0; i < n_traces; ++i) {
        WorkloadConfig one = cfg;
        one.seed = derive_seed(cfg.seed, 40000 + static_cast<std::uint64_t>(i));
        auto [trace, truth] = generate(one);
        (void)truth;
        char name[32];
        std::snprintf(name, sizeof name, "trace%03d.jsonl", i);
        write_trace(trace, out_dir / name);
    }
}

void write_single_experiment(const WorkloadConfig& cfg, const FaultSpec& fault,
                             const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto [trace, truth] = inject(cfg, fault);
    write_trace(trace, dir / "trace.jsonl");
    ExperimentRecord rec;
    rec.trace_path = "trace.jsonl";
    rec.t_start_us = truth.t_start_us;
    rec.fault = truth.fault;
    rec.first_failure_us = truth.first_failure_us;
    write_experiment(rec, dir / "experiment.json");
    write_ground_truth_debug(truth, dir / "truth.debug.json");
}

void run_campaign(const WorkloadConfig& cfg, int n_experiments, std::uint64_t campaign_seed,
                  const std::filesystem::path& out_dir) {
    if (n_experiments < 1) throw InvalidConfig("need at least one experiment");
    std::filesystem::create_directories(out_dir);
    for (int i = 0; i < n_experiments; ++i) {
        WorkloadConfig one = cfg;
        one.seed = derive_seed(campaign_seed, 60000 + static_cast<std::uint64_t>(i));
        const FaultSpec fault = sample_fault(one, campaign_seed, i);
        char name[32];
        std::snprintf(name, sizeof name, "exp%03d", i);
        write_single_experiment(one, fault, out_dir / name);
    }
}

std::vector<std::filesystem::path> experiment_dirs(const std::filesystem::path& root) {
    if (!std::filesystem::is_directory(root))
        throw IoError(root.string() + " is not a directory");
    std::vector<std::filesystem::path> dirs;
    for (const auto& entry : std::filesystem::directory_iterator(root))
        if (entry.is_directory() &&
            std::filesystem::exists(entry.path() / "experiment.json"))
            dirs.push_back(entry.path());
    std::sort(dirs.begin(), dirs.end());
    if (dirs.empty()) throw IoError("no experiment directories under " + root.string());
    return dirs;
}

BaselineModels train_baselines(const std::vector<Trace>& corpus, const DetectorConfig& cfg) {
    BaselineModels models;
    models.cfg = cfg;
    models.un = ngram_train(corpus, cfg.n);
    models.pm = vmm_train(corpus, cfg.max_order);
    return models;
}

std::vector<FailureAlert> run_approach(Approach approach, const RuleSet* rules,
                                       const BaselineModels* models, const Trace& trace,
                                       bool under_count_alerts) {
    switch (approach) {
        case Approach::Mr: {
            if (!rules) throw InvalidConfig("the mr approach needs a rule set");
            Monitor monitor(*rules, MonitorConfig{under_count_alerts});
            return run_stream(monitor, trace);
        }
        case Approach::RestOnly: {
            RuleSet empty;
            empty.delta_t_us = rules ? rules->delta_t_us : 35'000'000;
            Monitor monitor(empty);
            return run_stream(monitor, trace);
        }
        case Approach::Un:
            if (!models) throw InvalidConfig("the un approach needs trained baselines");
            return ngram_detect(models->un, trace);
        case Approach::Pm:
            if (!models) throw InvalidConfig("the pm approach needs trained baselines");
            return vmm_detect(models->pm, trace, models->cfg.epsilon_pm);
        case Approach::Combined:
            throw InvalidConfig("combined is evaluated by merging mr and rest-only alerts");
    }
    return {};
}

void monitor_experiments(const std::filesystem::path& root, Approach approach,
                         const RuleSet* rules, const BaselineModels* models,
                         bool under_count_alerts) {
    for (const auto& dir : experiment_dirs(root)) {
        const Trace trace = load_trace(dir / "trace.jsonl");
        const auto alerts = run_approach(approach, rules, models, trace, under_count_alerts);
        write_alerts(alerts, dir / ("alerts." + to_string(approach) + ".jsonl"));
    }
}

namespace {

std::vector<FailureAlert> load_approach_alerts(const std::filesystem::path& dir,
                                               Approach approach) {
    if (approach == Approach::Combined) {
        auto a = load_alerts(dir / "alerts.mr.jsonl");
        auto b = load_alerts(dir / "alerts.rest-only.jsonl");
        std::vector<FailureAlert> merged;
        merged.reserve(a.size() + b.size());
        std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(merged),
                   [](const FailureAlert& x, const FailureAlert& y) { return x.ts_us < y.ts_us; });
        return merged;
    }
    return load_alerts(dir / ("alerts." + to_string(approach) + ".jsonl"));
}

}  // namespace

EvalReport evaluate_experiments(const std::filesystem::path& root, Approach approach,
                                const ScoringConfig& scoring) {
    EvalReport report;
    report.approach = approach;
    report.scoring = scoring;

    std::vector<Outcome> outcomes;
    for (const auto& dir : experiment_dirs(root)) {
        const ExperimentRecord rec = load_experiment(dir / "experiment.json");
        const auto alerts = load_approach_alerts(dir, approach);
        const Outcome outcome = score(alerts, rec, scoring);
        outcomes.push_back(outcome);
        report.per_experiment.emplace_back(dir.filename().string(), outcome);
    }
    report.metrics = aggregate(outcomes);
    return report;
}

void write_report(const EvalReport& report, const std::filesystem::path& path) {
    ojson j;
    j["approach"] = to_string(report.approach);
    j["delta_t_us"] = report.scoring.delta_t_us;
    j["grace_us"] = report.scoring.grace_us;
    j["experiments"] = report.per_experiment.size();
    j["tp"] = report.metrics.tp;
    j["fp"] = report.metrics.fp;
    j["fn"] = report.metrics.fn;
    j["tn"] = report.metrics.tn;
    j["precision"] = report.metrics.precision;
    j["recall"] = report.metrics.recall;
    j["f1"] = report.metrics.f1;
    j["accuracy"] = report.metrics.accuracy;
    if (report.metrics.mean_latency_us)
        j["mean_latency_us"] = *report.metrics.mean_latency_us;
    else
        j["mean_latency_us"] = nullptr;
    j["outcomes"] = ojson::array();
    for (const auto& [name, outcome] : report.per_experiment) {
        ojson jo;
        jo["experiment"] = name;
        jo["label"] = to_string(outcome.label);
        if (outcome.detection_latency_us)
            jo["detection_latency_us"] = *outcome.detection_latency_us;
        else
            jo["detection_latency_us"] = nullptr;
        j["outcomes"].push_back(std::move(jo));
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

std::vector<SweepRow> sweep_delta_t(const std::vector<Trace>& corpus,
                                    const std::filesystem::path& experiments_root,
                                    const std::vector<double>& values_s,
                                    const PipelineConfig& cfg) {
    if (values_s.empty()) throw InvalidConfig("sweep needs at least one window value");

    const auto selection =
        select_fields(corpus, FieldSelectorConfig{cfg.eps1, cfg.eps2});

    struct LoadedExperiment {
        ExperimentRecord record;
        Trace trace;
    };
    std::vector<LoadedExperiment> experiments;
    for (const auto& dir : experiment_dirs(experiments_root))
        experiments.push_back(
            {load_experiment(dir / "experiment.json"), load_trace(dir / "trace.jsonl")});

    std::vector<SweepRow> rows;
    for (double seconds : values_s) {
        MiningConfig mining;
        mining.delta_t_us = static_cast<std::int64_t>(seconds * 1e6);
        mining.fields_of_interest = selection.fields;
        const RuleSet rules = mine_rules(corpus, mining);

        ScoringConfig scoring{mining.delta_t_us, cfg.grace_us()};
        std::vector<Outcome> outcomes;
        for (const auto& exp : experiments) {
            Monitor monitor(rules);
            outcomes.push_back(score(run_stream(monitor, exp.trace), exp.record, scoring));
        }
        rows.push_back(SweepRow{seconds, rules.rules.size(), aggregate(outcomes)});
    }
    return rows;
}

void write_sweep(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
    ojson j;
    j["rows"] = ojson::array();
    for (const auto& row : rows) {
        ojson jr;
        jr["delta_t_s"] = row.delta_t_s;
        jr["rules"] = row.rules;
        jr["tp"] = row.metrics.tp;
        jr["fp"] = row.metrics.fp;
        jr["fn"] = row.metrics.fn;
        jr["tn"] = row.metrics.tn;
        jr["precision"] = row.metrics.precision;
        jr["recall"] = row.metrics.recall;
        jr["f1"] = row.metrics.f1;
        jr["accuracy"] = row.metrics.accuracy;
        if (row.metrics.mean_latency_us)
            jr["mean_latency_us"] = *row.metrics.mean_latency_us;
        else
            jr["mean_latency_us"] = nullptr;
        j["rows"].push_back(std::move(jr));
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

}  // namespace tracemon
