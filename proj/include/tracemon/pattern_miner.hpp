#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tracemon/event.hpp"
#include "tracemon/rules.hpp"

namespace tracemon {

struct MiningConfig {
    std::int64_t delta_t_us = 35'000'000;
    std::set<std::string> fields_of_interest;
};

// A windowed, field-correlated group of RPC events from one trace. The head
// is the earliest member; all members lie within delta_t of the head.
struct Chain {
    const Trace* trace = nullptr;
    std::vector<std::size_t> members;    // indices into trace->events, ascending
    std::vector<std::string> witnesses;  // value that admitted members[i]; "" for the head

    const Event& head() const { return trace->events[members.front()]; }
    EventType head_type() const { return head().etype; }
    std::vector<EventType> type_sequence() const;
    std::map<EventType, int> type_counts() const;
};

// Candidate rule for one head type: all chain instances across the corpus and
// the multiset intersection of their event types.
struct MinedRuleDraft {
    EventType head_type;
    std::vector<Chain> instances;
    std::map<EventType, int> common_types;  // type -> min occurrence count
    bool head_in_every_trace = false;
    bool head_always_first = false;  // the type never occurs mid-chain anywhere

    int common_size() const;
    // Emittable when the head recurs in every trace, reliably starts its
    // pattern (a type that also occurs mid-chain cannot activate correctly),
    // the common pattern has at least two events, and something checkable
    // follows the head.
    bool emittable() const;
};

// Greedy deterministic chaining: the earliest unassigned RPC event becomes a
// head, then the chain absorbs (in timestamp order, to transitive closure)
// every unassigned RPC event within the window that shares a field-of-interest
// value with a current member. RPC events are partitioned; REST events are
// never chain members.
std::vector<Chain> correlate_chains(const Trace& trace, const MiningConfig& cfg);

std::map<EventType, MinedRuleDraft> group_by_head(
    const std::vector<std::vector<Chain>>& chains_per_trace);

// Full pipeline over a corpus with pre-selected fields of interest.
RuleSet mine_rules(const std::vector<Trace>& traces, const MiningConfig& cfg);

}  // namespace tracemon
