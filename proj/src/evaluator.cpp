#include "tracemon/evaluator.hpp"

#include "tracemon/errors.hpp"

namespace tracemon {

std::string to_string(OutcomeLabel label) {
    switch (label) {
        case OutcomeLabel::TP: return "TP";
        case OutcomeLabel::FP: return "FP";
        case OutcomeLabel::FN: return "FN";
        case OutcomeLabel::TN: return "TN";
    }
    return "TN";
}

Outcome score(const std::vector<FailureAlert>& alerts, const ExperimentRecord& truth,
              const ScoringConfig& cfg) {
    if (!sorted_by_ts(alerts)) throw UnsortedAlerts();

    Outcome outcome;
    if (!truth.first_failure_us) {
        outcome.label = alerts.empty() ? OutcomeLabel::TN : OutcomeLabel::FP;
        return outcome;
    }

    const std::int64_t t_fail = *truth.first_failure_us;
    if (alerts.empty()) {
        outcome.label = OutcomeLabel::FN;
        return outcome;
    }
    const FailureAlert& first = alerts.front();
    if (first.ts_us < t_fail) {
        outcome.label = OutcomeLabel::FP;
    } else if (first.ts_us <= t_fail + cfg.delta_t_us + cfg.grace_us) {
        outcome.label = OutcomeLabel::TP;
        outcome.detection_latency_us = first.ts_us - truth.t_start_us;
    } else {
        // Detected only on some later operation: the first failure was missed.
        outcome.label = OutcomeLabel::FN;
    }
    return outcome;
}

Metrics aggregate(const std::vector<Outcome>& outcomes) {
    if (outcomes.empty()) throw EmptyCorpus();

    Metrics m;
    double latency_sum = 0.0;
    for (const auto& o : outcomes) {
        switch (o.label) {
            case OutcomeLabel::TP:
                ++m.tp;
                latency_sum += static_cast<double>(*o.detection_latency_us);
                break;
            case OutcomeLabel::FP: ++m.fp; break;
            case OutcomeLabel::FN: ++m.fn; break;
            case OutcomeLabel::TN: ++m.tn; break;
        }
    }
    m.precision = (m.tp + m.fp) ? static_cast<double>(m.tp) / (m.tp + m.fp) : 0.0;
    m.recall = (m.tp + m.fn) ? static_cast<double>(m.tp) / (m.tp + m.fn) : 0.0;
    m.f1 = (m.precision + m.recall > 0.0)
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    m.accuracy = static_cast<double>(m.tp + m.tn) / static_cast<double>(outcomes.size());
    if (m.tp > 0) m.mean_latency_us = latency_sum / m.tp;
    return m;
}

}  // namespace tracemon
