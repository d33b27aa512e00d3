// tracemon: mine lightweight monitoring rules from fault-free traces, replay
// them against labeled experiments and score the detectors.
//
// Subcommands: select-fields, mine, simulate, inject, monitor, evaluate, sweep.
// Exit codes: 0 success, 1 usage error, 2 data/configuration error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "tracemon/errors.hpp"
#include "tracemon/field_selector.hpp"
#include "tracemon/monitor.hpp"
#include "tracemon/pattern_miner.hpp"
#include "tracemon/pipeline.hpp"
#include "tracemon/trace_io.hpp"

namespace fs = std::filesystem;
using namespace tracemon;

namespace {

bool verbose() {
    const char* level = std::getenv("TRACEMON_LOG");
    return level && std::string(level) != "quiet" && std::string(level) != "error";
}

void log_line(const std::string& msg) {
    if (verbose()) std::cerr << "tracemon: " << msg << "\n";
}

std::vector<Trace> load_corpus(const fs::path& dir) {
    auto traces = load_trace_dir(dir);
    if (traces.empty()) throw IoError("no .jsonl traces under " + dir.string());
    log_line("loaded " + std::to_string(traces.size()) + " traces from " + dir.string());
    return traces;
}

// Follow a growing trace file, mapping wall-clock time onto trace time so
// instance timers expire while the producer is quiet.
int follow_stream(Monitor& monitor, const fs::path& input, const fs::path& alerts_path,
                  double idle_timeout_s) {
    std::ofstream alerts_out(alerts_path, std::ios::trunc);
    if (!alerts_out) throw IoError("cannot write " + alerts_path.string());

    auto emit = [&](const std::vector<FailureAlert>& alerts) {
        for (const auto& a : alerts) {
            alerts_out << to_line(a) << "\n";
            alerts_out.flush();
        }
    };

    std::ifstream in(input);
    if (!in) throw IoError("cannot open " + input.string());

    std::string pending;  // bytes of an incomplete trailing line
    std::size_t line_no = 0;
    bool have_origin = false;
    std::int64_t origin_trace_us = 0;
    std::chrono::steady_clock::time_point origin_wall;
    auto last_progress = std::chrono::steady_clock::now();

    while (true) {
        std::string chunk((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        in.clear();
        bool advanced = false;
        if (!chunk.empty()) {
            pending += chunk;
            std::size_t start = 0;
            for (std::size_t nl = pending.find('\n'); nl != std::string::npos;
                 nl = pending.find('\n', start)) {
                const std::string line = pending.substr(start, nl - start);
                start = nl + 1;
                ++line_no;
                if (line.empty()) continue;
                const Event event = parse_event_line(line, line_no);
                if (!have_origin) {
                    have_origin = true;
                    origin_trace_us = event.ts_us;
                    origin_wall = std::chrono::steady_clock::now();
                }
                emit(monitor.feed(event));
                advanced = true;
            }
            pending.erase(0, start);
        }
        if (advanced) {
            last_progress = std::chrono::steady_clock::now();
            continue;
        }
        if (have_origin) {
            const auto wall_elapsed = std::chrono::duration_cast<std::chrono::microseconds>(
                                          std::chrono::steady_clock::now() - origin_wall)
                                          .count();
            const std::int64_t virtual_now = origin_trace_us + wall_elapsed;
            if (virtual_now > monitor.clock()) emit(monitor.tick(virtual_now));
        }
        if (idle_timeout_s > 0.0) {
            const auto idle =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - last_progress)
                    .count();
            if (idle >= idle_timeout_s) break;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(25));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Session-id-free monitoring-rule miner, runtime monitor and evaluation harness"};
    app.require_subcommand(1);

    PipelineConfig defaults;

    // ---- select-fields ----------------------------------------------------
    auto* cmd_select = app.add_subcommand(
        "select-fields", "Score RPC body fields by propagation (P1) and diversity (P2)");
    std::string sf_traces, sf_report = "fields.json";
    double sf_eps1 = defaults.eps1, sf_eps2 = defaults.eps2;
    cmd_select->add_option("--traces", sf_traces, "directory of fault-free traces")->required();
    cmd_select->add_option("--eps1", sf_eps1, "P1 threshold");
    cmd_select->add_option("--eps2", sf_eps2, "P2 threshold");
    cmd_select->add_option("--report", sf_report, "output field report");

    // ---- mine --------------------------------------------------------------
    auto* cmd_mine =
        app.add_subcommand("mine", "Mine monitoring rules from a fault-free trace corpus");
    std::string mn_traces, mn_out = "rules.json", mn_fields;
    double mn_delta = defaults.delta_t_s, mn_eps1 = defaults.eps1, mn_eps2 = defaults.eps2;
    cmd_mine->add_option("--traces", mn_traces, "directory of fault-free traces")->required();
    cmd_mine->add_option("--delta-t-s", mn_delta, "time window in seconds");
    cmd_mine->add_option("--eps1", mn_eps1, "P1 threshold");
    cmd_mine->add_option("--eps2", mn_eps2, "P2 threshold");
    cmd_mine->add_option("--fields", mn_fields, "field report to reuse (skips selection)");
    cmd_mine->add_option("--out", mn_out, "output rule set");

    // ---- simulate ----------------------------------------------------------
    auto* cmd_sim = app.add_subcommand("simulate", "Generate fault-free multi-tenant traces");
    std::string sim_out, sim_templates, sim_dump;
    int sim_traces = 1, sim_tenants = 10;
    double sim_duration = 960.0;
    std::uint64_t sim_seed = defaults.seed;
    cmd_sim->add_option("--out", sim_out, "output directory");
    cmd_sim->add_option("--traces", sim_traces, "number of traces");
    cmd_sim->add_option("--tenants", sim_tenants, "concurrent tenants");
    cmd_sim->add_option("--duration-s", sim_duration, "workload duration in seconds");
    cmd_sim->add_option("--seed", sim_seed, "corpus seed");
    cmd_sim->add_option("--templates", sim_templates, "operation template catalog");
    cmd_sim->add_option("--dump-templates", sim_dump, "write the built-in catalog and exit");

    // ---- inject ------------------------------------------------------------
    auto* cmd_inject = app.add_subcommand(
        "inject", "Run a fault-injection campaign (or a single targeted experiment)");
    std::string in_out, in_templates, in_kind, in_target_op;
    int in_experiments = 0, in_tenants = 10, in_tenant = -1;
    double in_duration = 960.0, in_benign = 0.2, in_activation = -1.0;
    std::uint64_t in_seed = defaults.seed;
    cmd_inject->add_option("--out", in_out, "output directory")->required();
    cmd_inject->add_option("--experiments", in_experiments, "campaign size");
    cmd_inject->add_option("--tenants", in_tenants, "concurrent tenants");
    cmd_inject->add_option("--duration-s", in_duration, "workload duration in seconds");
    cmd_inject->add_option("--seed", in_seed, "campaign seed");
    cmd_inject->add_option("--benign-prob", in_benign, "probability a fault stays benign");
    cmd_inject->add_option("--templates", in_templates, "operation template catalog");
    cmd_inject->add_option("--kind", in_kind,
                           "single experiment: throw_exception|wrong_return|wrong_param");
    cmd_inject->add_option("--target-op", in_target_op, "single experiment: operation name");
    cmd_inject->add_option("--target-tenant", in_tenant, "single experiment: tenant index");
    cmd_inject->add_option("--activation-s", in_activation,
                           "single experiment: activation time in seconds");

    // ---- monitor -----------------------------------------------------------
    auto* cmd_monitor =
        app.add_subcommand("monitor", "Replay rules (or a baseline detector) over traces");
    std::string mo_approach = "mr", mo_rules, mo_input, mo_alerts = "alerts.jsonl";
    std::string mo_experiments, mo_train;
    bool mo_follow = false, mo_under = false;
    int mo_n = defaults.n, mo_order = defaults.max_order;
    double mo_pm = defaults.pm_threshold, mo_delta = defaults.delta_t_s, mo_idle = 0.0;
    cmd_monitor->add_option("--approach", mo_approach, "mr|un|pm|rest-only");
    cmd_monitor->add_option("--rules", mo_rules, "rule set (mr)");
    cmd_monitor->add_option("--input", mo_input, "trace file to replay");
    cmd_monitor->add_option("--alerts", mo_alerts, "alert output file");
    cmd_monitor->add_option("--experiments", mo_experiments,
                            "batch mode: write alerts.<approach>.jsonl per experiment dir");
    cmd_monitor->add_option("--train", mo_train, "training corpus (un/pm)");
    cmd_monitor->add_option("--n", mo_n, "n-gram length (un)");
    cmd_monitor->add_option("--max-order", mo_order, "context depth (pm)");
    cmd_monitor->add_option("--pm-threshold", mo_pm, "probability threshold (pm)");
    cmd_monitor->add_option("--delta-t-s", mo_delta, "window for rest-only without rules");
    cmd_monitor->add_flag("--follow", mo_follow, "tail a growing trace file");
    cmd_monitor->add_option("--idle-timeout-s", mo_idle,
                            "stop following after this much quiet time (0 = never)");
    cmd_monitor->add_flag("--under-count-alerts", mo_under,
                          "alert when a COUNT tally ends below its minimum");

    // ---- evaluate ----------------------------------------------------------
    auto* cmd_eval = app.add_subcommand("evaluate", "Score alert streams against ground truth");
    std::string ev_experiments, ev_approach = "mr", ev_report = "report.json";
    double ev_grace = defaults.grace_s, ev_delta = defaults.delta_t_s;
    cmd_eval->add_option("--experiments", ev_experiments, "experiment directory")->required();
    cmd_eval->add_option("--approach", ev_approach, "mr|un|pm|rest-only|combined");
    cmd_eval->add_option("--grace-s", ev_grace, "TP attribution grace in seconds");
    cmd_eval->add_option("--delta-t-s", ev_delta, "window used for TP attribution");
    cmd_eval->add_option("--report", ev_report, "output report");

    // ---- sweep -------------------------------------------------------------
    auto* cmd_sweep =
        app.add_subcommand("sweep", "Re-mine and re-score across time-window values");
    std::string sw_traces, sw_experiments, sw_report = "sweep.json";
    std::vector<double> sw_values{5, 20, 35, 50};
    double sw_eps1 = defaults.eps1, sw_eps2 = defaults.eps2, sw_grace = defaults.grace_s;
    cmd_sweep->add_option("--traces", sw_traces, "fault-free training corpus")->required();
    cmd_sweep->add_option("--experiments", sw_experiments, "experiment directory")->required();
    cmd_sweep->add_option("--delta-t-s", sw_values, "window values in seconds")->delimiter(',');
    cmd_sweep->add_option("--eps1", sw_eps1, "P1 threshold");
    cmd_sweep->add_option("--eps2", sw_eps2, "P2 threshold");
    cmd_sweep->add_option("--grace-s", sw_grace, "TP attribution grace in seconds");
    cmd_sweep->add_option("--report", sw_report, "output table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (cmd_select->parsed()) {
            const auto traces = load_corpus(sf_traces);
            const auto selection = select_fields(traces, FieldSelectorConfig{sf_eps1, sf_eps2});
            write_field_selection(selection, sf_report);
            std::cout << "selected " << selection.fields.size() << " field(s):";
            for (const auto& f : selection.fields) std::cout << " " << f;
            std::cout << "\n";
            return 0;
        }

        if (cmd_mine->parsed()) {
            const auto traces = load_corpus(mn_traces);
            MiningConfig mining;
            mining.delta_t_us = static_cast<std::int64_t>(mn_delta * 1e6);
            if (!mn_fields.empty()) {
                mining.fields_of_interest = load_selected_fields(mn_fields);
            } else {
                mining.fields_of_interest =
                    select_fields(traces, FieldSelectorConfig{mn_eps1, mn_eps2}).fields;
            }
            log_line("fields of interest: " + std::to_string(mining.fields_of_interest.size()));
            const RuleSet rules = mine_rules(traces, mining);
            write_ruleset(rules, mn_out);
            std::cout << "mined " << rules.rules.size() << " rule(s) -> " << mn_out << "\n";
            return 0;
        }

        if (cmd_sim->parsed()) {
            if (!sim_dump.empty()) {
                write_catalog(TemplateCatalog::defaults(), sim_dump);
                std::cout << "wrote default templates -> " << sim_dump << "\n";
                return 0;
            }
            if (sim_out.empty()) throw InvalidConfig("--out is required");
            WorkloadConfig cfg;
            cfg.tenants = sim_tenants;
            cfg.duration_us = static_cast<std::int64_t>(sim_duration * 1e6);
            cfg.seed = sim_seed;
            if (!sim_templates.empty()) cfg.catalog = load_catalog(sim_templates);
            simulate_corpus(cfg, sim_traces, sim_out);
            std::cout << "wrote " << sim_traces << " trace(s) -> " << sim_out << "\n";
            return 0;
        }

        if (cmd_inject->parsed()) {
            WorkloadConfig cfg;
            cfg.tenants = in_tenants;
            cfg.duration_us = static_cast<std::int64_t>(in_duration * 1e6);
            cfg.seed = in_seed;
            cfg.benign_prob = in_benign;
            if (!in_templates.empty()) cfg.catalog = load_catalog(in_templates);

            if (!in_kind.empty() || !in_target_op.empty()) {
                if (in_kind.empty() || in_target_op.empty() || in_tenant < 0 || in_activation < 0)
                    throw InvalidConfig(
                        "single-experiment mode needs --kind, --target-op, --target-tenant "
                        "and --activation-s");
                FaultSpec fault;
                fault.kind = fault_kind_from_string(in_kind);
                fault.target_op = in_target_op;
                fault.target_tenant = in_tenant;
                fault.activation_us = static_cast<std::int64_t>(in_activation * 1e6);
                write_single_experiment(cfg, fault, in_out);
                std::cout << "wrote experiment -> " << in_out << "\n";
                return 0;
            }
            if (in_experiments < 1)
                throw InvalidConfig("--experiments N (or a single-experiment target) required");
            run_campaign(cfg, in_experiments, in_seed, in_out);
            std::cout << "wrote " << in_experiments << " experiment(s) -> " << in_out << "\n";
            return 0;
        }

        if (cmd_monitor->parsed()) {
            const Approach approach = approach_from_string(mo_approach);
            if (approach == Approach::Combined)
                throw InvalidConfig("combined is an evaluate-time merge, not a detector");

            RuleSet rules;
            bool have_rules = false;
            if (!mo_rules.empty()) {
                rules = load_ruleset(mo_rules);
                have_rules = true;
            } else {
                rules.delta_t_us = static_cast<std::int64_t>(mo_delta * 1e6);
            }
            if (approach == Approach::Mr && !have_rules)
                throw InvalidConfig("--rules is required for the mr approach");

            BaselineModels models;
            bool have_models = false;
            if (approach == Approach::Un || approach == Approach::Pm) {
                if (mo_train.empty()) throw InvalidConfig("--train DIR is required for un/pm");
                DetectorConfig dcfg;
                dcfg.n = mo_n;
                dcfg.max_order = mo_order;
                dcfg.epsilon_pm = mo_pm;
                models = train_baselines(load_corpus(mo_train), dcfg);
                have_models = true;
            }

            if (!mo_experiments.empty()) {
                monitor_experiments(mo_experiments, approach, have_rules ? &rules : nullptr,
                                    have_models ? &models : nullptr, mo_under);
                std::cout << "monitored experiments under " << mo_experiments << "\n";
                return 0;
            }
            if (mo_input.empty()) throw InvalidConfig("--input or --experiments is required");

            if (mo_follow) {
                if (approach != Approach::Mr && approach != Approach::RestOnly)
                    throw InvalidConfig("--follow supports the rule-based approaches");
                Monitor monitor(rules, MonitorConfig{mo_under});
                return follow_stream(monitor, mo_input, mo_alerts, mo_idle);
            }

            const Trace trace = load_trace(mo_input);
            const auto alerts = run_approach(approach, have_rules ? &rules : nullptr,
                                             have_models ? &models : nullptr, trace, mo_under);
            write_alerts(alerts, mo_alerts);
            std::cout << alerts.size() << " alert(s) -> " << mo_alerts << "\n";
            return 0;
        }

        if (cmd_eval->parsed()) {
            const ScoringConfig scoring{static_cast<std::int64_t>(ev_delta * 1e6),
                                        static_cast<std::int64_t>(ev_grace * 1e6)};
            const auto report =
                evaluate_experiments(ev_experiments, approach_from_string(ev_approach), scoring);
            write_report(report, ev_report);
            std::cout << to_string(report.approach) << ": precision=" << report.metrics.precision
                      << " recall=" << report.metrics.recall << " f1=" << report.metrics.f1
                      << " accuracy=" << report.metrics.accuracy;
            if (report.metrics.mean_latency_us)
                std::cout << " mean_latency_s=" << *report.metrics.mean_latency_us / 1e6;
            std::cout << " -> " << ev_report << "\n";
            return 0;
        }

        if (cmd_sweep->parsed()) {
            PipelineConfig cfg = defaults;
            cfg.eps1 = sw_eps1;
            cfg.eps2 = sw_eps2;
            cfg.grace_s = sw_grace;
            const auto corpus = load_corpus(sw_traces);
            const auto rows = sweep_delta_t(corpus, sw_experiments, sw_values, cfg);
            write_sweep(rows, sw_report);
            for (const auto& row : rows) {
                std::cout << "delta_t=" << row.delta_t_s << "s rules=" << row.rules
                          << " precision=" << row.metrics.precision
                          << " recall=" << row.metrics.recall << " f1=" << row.metrics.f1;
                if (row.metrics.mean_latency_us)
                    std::cout << " mean_latency_s=" << *row.metrics.mean_latency_us / 1e6;
                std::cout << "\n";
            }
            std::cout << "sweep table -> " << sw_report << "\n";
            return 0;
        }
    } catch (const DataError& e) {
        std::cerr << "tracemon: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "tracemon: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
