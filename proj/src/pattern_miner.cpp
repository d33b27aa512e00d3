#include "tracemon/pattern_miner.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "tracemon/errors.hpp"
#include "tracemon/rule_classifier.hpp"

namespace tracemon {

std::vector<EventType> Chain::type_sequence() const {
    std::vector<EventType> seq;
    seq.reserve(members.size());
    for (auto idx : members) seq.push_back(trace->events[idx].etype);
    return seq;
}

std::map<EventType, int> Chain::type_counts() const {
    std::map<EventType, int> counts;
    for (auto idx : members) ++counts[trace->events[idx].etype];
    return counts;
}

int MinedRuleDraft::common_size() const {
    int total = 0;
    for (const auto& [_, n] : common_types) total += n;
    return total;
}

bool MinedRuleDraft::emittable() const {
    if (!head_in_every_trace || !head_always_first || common_size() < 2) return false;
    for (const auto& [etype, _] : common_types)
        if (!(etype == head_type)) return true;
    return false;  // only head repetitions in common, nothing checkable follows
}

std::vector<Chain> correlate_chains(const Trace& trace, const MiningConfig& cfg) {
    if (cfg.delta_t_us <= 0) throw InvalidConfig("delta_t_us must be positive");

    const auto& events = trace.events;
    // Per-event sorted field-of-interest values and a value -> carriers index.
    std::vector<std::vector<std::string>> foi_values(events.size());
    std::unordered_map<std::string, std::vector<std::size_t>> carriers;
    std::vector<std::size_t> rpc_order;
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (events[i].kind != EventKind::Rpc) continue;
        rpc_order.push_back(i);
        for (const auto& [field, value] : events[i].body) {
            if (!cfg.fields_of_interest.count(field)) continue;
            foi_values[i].push_back(value);
        }
        std::sort(foi_values[i].begin(), foi_values[i].end());
        foi_values[i].erase(std::unique(foi_values[i].begin(), foi_values[i].end()),
                            foi_values[i].end());
        for (const auto& v : foi_values[i]) carriers[v].push_back(i);
    }

    std::vector<bool> assigned(events.size(), false);
    std::vector<Chain> chains;

    for (std::size_t head : rpc_order) {
        if (assigned[head]) continue;
        const std::int64_t window_end = events[head].ts_us + cfg.delta_t_us;

        Chain chain;
        chain.trace = &trace;
        assigned[head] = true;
        std::vector<std::pair<std::size_t, std::string>> found{{head, ""}};
        std::deque<std::size_t> frontier{head};
        while (!frontier.empty()) {
            const std::size_t cur = frontier.front();
            frontier.pop_front();
            for (const auto& value : foi_values[cur]) {
                for (std::size_t other : carriers.at(value)) {
                    if (assigned[other] || events[other].ts_us > window_end) continue;
                    assigned[other] = true;
                    found.emplace_back(other, value);
                    frontier.push_back(other);
                }
            }
        }
        std::sort(found.begin(), found.end());
        for (const auto& [idx, witness] : found) {
            chain.members.push_back(idx);
            chain.witnesses.push_back(witness);
        }
        chains.push_back(std::move(chain));
    }
    return chains;
}

std::map<EventType, MinedRuleDraft> group_by_head(
    const std::vector<std::vector<Chain>>& chains_per_trace) {
    std::map<EventType, MinedRuleDraft> drafts;
    std::map<EventType, std::size_t> traces_heading;  // # traces where the type heads a chain
    std::set<EventType> seen_mid_chain;

    for (const auto& trace_chains : chains_per_trace) {
        std::set<EventType> heads_here;
        for (const auto& chain : trace_chains) {
            const EventType head = chain.head_type();
            auto& draft = drafts[head];
            draft.head_type = head;
            draft.instances.push_back(chain);
            heads_here.insert(head);
            for (std::size_t m = 1; m < chain.members.size(); ++m)
                seen_mid_chain.insert(chain.trace->events[chain.members[m]].etype);
        }
        for (const auto& h : heads_here) ++traces_heading[h];
    }

    for (auto& [head, draft] : drafts) {
        draft.head_in_every_trace = traces_heading[head] == chains_per_trace.size();
        draft.head_always_first = !seen_mid_chain.count(head);
        bool first = true;
        for (const auto& instance : draft.instances) {
            const auto counts = instance.type_counts();
            if (first) {
                draft.common_types = counts;
                first = false;
                continue;
            }
            for (auto it = draft.common_types.begin(); it != draft.common_types.end();) {
                auto found = counts.find(it->first);
                if (found == counts.end()) {
                    it = draft.common_types.erase(it);
                } else {
                    it->second = std::min(it->second, found->second);
                    ++it;
                }
            }
        }
    }
    return drafts;
}

RuleSet mine_rules(const std::vector<Trace>& traces, const MiningConfig& cfg) {
    if (traces.empty()) throw EmptyCorpus();

    std::vector<std::vector<Chain>> chains_per_trace;
    chains_per_trace.reserve(traces.size());
    for (const auto& trace : traces) chains_per_trace.push_back(correlate_chains(trace, cfg));

    RuleSet rules;
    rules.delta_t_us = cfg.delta_t_us;
    for (const auto& [head, draft] : group_by_head(chains_per_trace)) {
        (void)head;
        if (!draft.emittable()) continue;
        rules.rules.push_back(classify(draft, cfg.delta_t_us));
    }
    // std::map iteration already yields heads in canonical order; ids follow.
    return rules;
}

}  // namespace tracemon
