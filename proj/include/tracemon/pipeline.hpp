#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tracemon/baselines.hpp"
#include "tracemon/evaluator.hpp"
#include "tracemon/monitor.hpp"
#include "tracemon/rules.hpp"
#include "tracemon/workload.hpp"

namespace tracemon {

// Default knobs shared across subcommands.
struct PipelineConfig {
    double delta_t_s = 35.0;
    double eps1 = 0.30;
    double eps2 = 0.30;
    int n = 3;
    int max_order = 3;
    double pm_threshold = 0.01;
    std::uint64_t seed = 1;
    double grace_s = 5.0;

    std::int64_t delta_t_us() const { return static_cast<std::int64_t>(delta_t_s * 1e6); }
    std::int64_t grace_us() const { return static_cast<std::int64_t>(grace_s * 1e6); }
};

enum class Approach { Mr, Un, Pm, RestOnly, Combined };

std::string to_string(Approach a);
Approach approach_from_string(const std::string& s);

// Fault-free training corpus: trace000.jsonl .. traceNNN.jsonl under out_dir.
void simulate_corpus(const WorkloadConfig& cfg, int n_traces,
                     const std::filesystem::path& out_dir);

// Labeled experiment directories exp000/ .. expNNN/ with trace.jsonl,
// experiment.json and truth.debug.json each.
void run_campaign(const WorkloadConfig& cfg, int n_experiments, std::uint64_t campaign_seed,
                  const std::filesystem::path& out_dir);

void write_single_experiment(const WorkloadConfig& cfg, const FaultSpec& fault,
                             const std::filesystem::path& dir);

std::vector<std::filesystem::path> experiment_dirs(const std::filesystem::path& root);

struct BaselineModels {
    NgramModel un;
    VmmModel pm;
    DetectorConfig cfg;
};

BaselineModels train_baselines(const std::vector<Trace>& corpus, const DetectorConfig& cfg);

// One trace through one detector. rules is required for Mr/RestOnly, models
// for Un/Pm. Combined is an evaluation-side merge, not a detector.
std::vector<FailureAlert> run_approach(Approach approach, const RuleSet* rules,
                                       const BaselineModels* models, const Trace& trace,
                                       bool under_count_alerts = false);

// Runs the detector over every experiment dir, writing alerts.<approach>.jsonl.
void monitor_experiments(const std::filesystem::path& root, Approach approach,
                         const RuleSet* rules, const BaselineModels* models,
                         bool under_count_alerts = false);

struct EvalReport {
    Approach approach = Approach::Mr;
    ScoringConfig scoring;
    Metrics metrics;
    std::vector<std::pair<std::string, Outcome>> per_experiment;  // dir name -> outcome
};

EvalReport evaluate_experiments(const std::filesystem::path& root, Approach approach,
                                const ScoringConfig& scoring);

void write_report(const EvalReport& report, const std::filesystem::path& path);

struct SweepRow {
    double delta_t_s = 0.0;
    std::size_t rules = 0;
    Metrics metrics;
};

// Re-mines the corpus and re-monitors the campaign at each window value.
std::vector<SweepRow> sweep_delta_t(const std::vector<Trace>& corpus,
                                    const std::filesystem::path& experiments_root,
                                    const std::vector<double>& values_s,
                                    const PipelineConfig& cfg);

void write_sweep(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

}  // namespace tracemon
