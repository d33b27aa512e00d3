#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tracemon/alerts.hpp"
#include "tracemon/experiment.hpp"

namespace tracemon {

enum class OutcomeLabel { TP, FP, FN, TN };

std::string to_string(OutcomeLabel label);

struct Outcome {
    OutcomeLabel label = OutcomeLabel::TN;
    std::optional<std::int64_t> detection_latency_us;  // TP only: a1.ts - t_start
};

struct ScoringConfig {
    std::int64_t delta_t_us = 35'000'000;
    std::int64_t grace_us = 5'000'000;
};

// First-alert scoring per experiment. A detection is a true positive only when
// it lands inside [t_fail, t_fail + delta_t + grace]; earlier alerts are false
// positives, later ones count as missed first failures.
Outcome score(const std::vector<FailureAlert>& alerts, const ExperimentRecord& truth,
              const ScoringConfig& cfg);

struct Metrics {
    int tp = 0, fp = 0, fn = 0, tn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double accuracy = 0.0;
    std::optional<double> mean_latency_us;
};

Metrics aggregate(const std::vector<Outcome>& outcomes);

}  // namespace tracemon
