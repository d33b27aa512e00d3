#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tracemon/alerts.hpp"
#include "tracemon/event.hpp"

namespace tracemon {

// Both baselines are deliberately non-session-aware: they see only the
// interleaved event-type name sequence, never bodies or timestamps.

struct DetectorConfig {
    int n = 3;                  // UN n-gram length
    int max_order = 3;          // PM context depth D
    double epsilon_pm = 0.01;   // PM probability threshold
};

struct NgramModel {
    int n = 3;
    std::set<std::vector<std::string>> dictionary;
};

NgramModel ngram_train(const std::vector<Trace>& traces, int n);

// One alert per unseen window, stamped with the window's last event.
std::vector<FailureAlert> ngram_detect(const NgramModel& model, const Trace& trace);

struct VmmModel {
    int max_order = 3;
    // context (most recent symbol last) -> successor -> count, plus totals.
    std::map<std::vector<std::string>, std::map<std::string, std::int64_t>> transitions;
    std::map<std::vector<std::string>, std::int64_t> totals;
};

VmmModel vmm_train(const std::vector<Trace>& traces, int max_order);

// Longest-suffix back-off without smoothing: the longest stored suffix of the
// context after which `next` was observed decides; unseen everywhere -> 0.
double vmm_prob(const VmmModel& model, const std::vector<std::string>& context,
                const std::string& next);

// Exact counts behind vmm_prob: {count(suffix,next), count(suffix)}, {0,0}
// when next is unseen after every stored suffix.
std::pair<std::int64_t, std::int64_t> vmm_counts(const VmmModel& model,
                                                 const std::vector<std::string>& context,
                                                 const std::string& next);

std::vector<FailureAlert> vmm_detect(const VmmModel& model, const Trace& trace,
                                     double epsilon_pm);

std::vector<std::string> type_sequence(const Trace& trace);

}  // namespace tracemon
