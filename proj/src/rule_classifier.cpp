#include "tracemon/rule_classifier.hpp"

#include <algorithm>

#include "tracemon/errors.hpp"

namespace tracemon {

MonitoringRule classify(const MinedRuleDraft& draft, std::int64_t delta_t_us) {
    if (!draft.emittable()) throw NotEmittable(draft.head_type.canonical());

    // Per-instance occurrence counts restricted to the common support.
    std::map<EventType, int> min_counts, max_counts;
    for (const auto& [etype, n] : draft.common_types) {
        min_counts[etype] = n;
        max_counts[etype] = n;
    }
    for (const auto& instance : draft.instances) {
        const auto counts = instance.type_counts();
        for (auto& [etype, mx] : max_counts) {
            const int n = counts.at(etype);  // common support is present everywhere
            mx = std::max(mx, n);
            min_counts[etype] = std::min(min_counts[etype], n);
        }
    }

    bool varying = false;
    bool repeated = false;
    for (const auto& [etype, mn] : min_counts) {
        if (max_counts.at(etype) != mn) varying = true;
        if (mn > 1) repeated = true;
    }

    MonitoringRule rule;
    rule.id = draft.head_type.canonical();
    rule.head = draft.head_type;
    rule.delta_t_us = delta_t_us;

    if (varying || repeated) {
        rule.kind = RuleKind::Count;
        for (const auto& [etype, mn] : min_counts) {
            if (etype == draft.head_type) continue;  // head occurrences activate, not count
            rule.counts[etype] = CountRange{mn, max_counts.at(etype)};
            rule.body.push_back(etype);
        }
        return rule;
    }

    // All counts are one: the restricted sequences are permutations of the
    // common support with the head first.
    std::vector<EventType> reference;
    bool identical = true;
    for (const auto& instance : draft.instances) {
        std::vector<EventType> restricted;
        for (const auto& etype : instance.type_sequence())
            if (draft.common_types.count(etype)) restricted.push_back(etype);
        if (reference.empty())
            reference = std::move(restricted);
        else if (restricted != reference)
            identical = false;
        if (!identical) break;
    }

    if (identical) {
        rule.kind = RuleKind::Ord;
        rule.body.assign(reference.begin() + 1, reference.end());
    } else {
        rule.kind = RuleKind::Occ;
        for (const auto& [etype, _] : draft.common_types)
            if (!(etype == draft.head_type)) rule.body.push_back(etype);
        // std::map order keeps the OCC body canonical (sorted).
    }
    return rule;
}

}  // namespace tracemon
