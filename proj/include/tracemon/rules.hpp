#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tracemon/event.hpp"

namespace tracemon {

enum class RuleKind { Ord, Occ, Count };

std::string to_string(RuleKind k);
RuleKind rule_kind_from_string(const std::string& s);

struct CountRange {
    int min_count = 1;
    int max_count = 1;
    auto operator<=>(const CountRange&) const = default;
};

// A mined monitoring rule. ORD: body is a fixed follower sequence. OCC: body is
// an unordered follower set (stored sorted). COUNT: body lists the counted
// types and `counts` carries the fault-free [min,max] repetition range per type.
struct MonitoringRule {
    std::string id;
    RuleKind kind = RuleKind::Ord;
    EventType head;
    std::vector<EventType> body;
    std::map<EventType, CountRange> counts;  // COUNT only
    std::int64_t delta_t_us = 0;

    bool operator==(const MonitoringRule&) const = default;
};

struct RuleSet {
    std::int64_t delta_t_us = 35'000'000;
    std::vector<MonitoringRule> rules;

    bool operator==(const RuleSet&) const = default;
};

// Throws InvalidConfig when a rule violates its structural invariants.
void validate(const MonitoringRule& rule);

}  // namespace tracemon
