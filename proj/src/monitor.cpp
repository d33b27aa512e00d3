#include "tracemon/monitor.hpp"

#include <algorithm>
#include <limits>

#include "tracemon/errors.hpp"

namespace tracemon {

Monitor::Monitor(RuleSet rules, MonitorConfig cfg)
    : rules_(std::move(rules)), cfg_(cfg), clock_(std::numeric_limits<std::int64_t>::min()) {
    std::set<std::string> ids;
    compiled_.reserve(rules_.rules.size());
    for (const auto& rule : rules_.rules) {
        validate(rule);
        if (!ids.insert(rule.id).second) throw DuplicateRuleId(rule.id);
        Compiled cr;
        cr.rule_idx = compiled_.size();
        for (const auto& b : rule.body) cr.body.push_back(b.canonical());
        if (rule.kind == RuleKind::Count) {
            for (const auto& [etype, range] : rule.counts) {
                cr.max_counts[etype.canonical()] = range.max_count;
                cr.min_counts[etype.canonical()] = range.min_count;
            }
        }
        const std::size_t idx = cr.rule_idx;
        by_head_[rule.head.canonical()].push_back(idx);
        for (const auto& b : cr.body) {
            auto& vec = by_body_[b];
            if (vec.empty() || vec.back() != idx) vec.push_back(idx);
        }
        compiled_.push_back(std::move(cr));
    }
}

std::size_t Monitor::live_instances() const {
    std::size_t n = 0;
    for (const auto& cr : compiled_) n += cr.live.size();
    return n;
}

void Monitor::expire(std::int64_t now_us, std::vector<FailureAlert>& out) {
    std::vector<FailureAlert> expired;
    for (auto& cr : compiled_) {
        while (!cr.live.empty() && cr.live.front().deadline_us <= now_us) {
            Instance inst = std::move(cr.live.front());
            cr.live.pop_front();
            bool alert = false;
            if (rules_.rules[cr.rule_idx].kind == RuleKind::Count) {
                if (cfg_.under_count_alerts)
                    for (const auto& [etype, min_count] : cr.min_counts)
                        if (inst.tally[etype] < min_count) alert = true;
            } else {
                alert = true;  // live ORD/OCC instances are incomplete by construction
            }
            if (alert)
                expired.push_back(FailureAlert{rules_.rules[cr.rule_idx].id, Violation::Timeout, inst.deadline_us,
                                               inst.occurrence});
        }
    }
    std::sort(expired.begin(), expired.end(), [](const FailureAlert& a, const FailureAlert& b) {
        return std::tie(a.ts_us, a.rule_id, a.occurrence) <
               std::tie(b.ts_us, b.rule_id, b.occurrence);
    });
    out.insert(out.end(), expired.begin(), expired.end());
}

void Monitor::deliver(Compiled& cr, const std::string& etype, std::int64_t now_us,
                      std::vector<FailureAlert>& out) {
    switch (rules_.rules[cr.rule_idx].kind) {
        case RuleKind::Ord: {
            // Oldest instance whose next expectation matches completes first.
            for (auto it = cr.live.begin(); it != cr.live.end(); ++it) {
                if (cr.body[it->next_expected] == etype) {
                    if (++it->next_expected == cr.body.size()) cr.live.erase(it);
                    return;
                }
            }
            // Otherwise: an event for a later expectation while an earlier one
            // is still pending is an ordering violation, reported immediately.
            for (auto it = cr.live.begin(); it != cr.live.end(); ++it) {
                for (std::size_t j = it->next_expected + 1; j < cr.body.size(); ++j) {
                    if (cr.body[j] == etype) {
                        out.push_back(FailureAlert{rules_.rules[cr.rule_idx].id, Violation::OutOfOrder, now_us,
                                                   it->occurrence});
                        cr.live.erase(it);
                        return;
                    }
                }
            }
            return;  // no live instance cares about this event
        }
        case RuleKind::Occ: {
            for (auto it = cr.live.begin(); it != cr.live.end(); ++it) {
                auto found = it->pending.find(etype);
                if (found == it->pending.end()) continue;
                it->pending.erase(found);
                if (it->pending.empty()) cr.live.erase(it);
                return;
            }
            return;
        }
        case RuleKind::Count: {
            // Every live instance counts the event; anomalous repetition is
            // reported as soon as a tally exceeds its fault-free maximum.
            for (auto it = cr.live.begin(); it != cr.live.end();) {
                const int tally = ++it->tally[etype];
                if (tally > cr.max_counts.at(etype)) {
                    out.push_back(
                        FailureAlert{rules_.rules[cr.rule_idx].id, Violation::OverCount, now_us, it->occurrence});
                    it = cr.live.erase(it);
                } else {
                    ++it;
                }
            }
            return;
        }
    }
}

std::vector<FailureAlert> Monitor::feed(const Event& event) {
    if (clock_ != std::numeric_limits<std::int64_t>::min() && event.ts_us < clock_)
        throw TimestampRegression(event.ts_us, clock_);

    std::vector<FailureAlert> out;
    expire(event.ts_us, out);
    clock_ = event.ts_us;

    const std::string etype = event.etype.canonical();
    const std::int64_t occurrence = ++counters_[etype];

    auto heads = by_head_.find(etype);
    if (heads != by_head_.end()) {
        for (std::size_t idx : heads->second) {
            Compiled& cr = compiled_[idx];
            Instance inst;
            inst.occurrence = occurrence;
            inst.opened_at_us = event.ts_us;
            inst.deadline_us = event.ts_us + rules_.rules[cr.rule_idx].delta_t_us;
            if (rules_.rules[cr.rule_idx].kind == RuleKind::Occ)
                inst.pending.insert(cr.body.begin(), cr.body.end());
            cr.live.push_back(std::move(inst));
        }
    }

    auto bodies = by_body_.find(etype);
    if (bodies != by_body_.end())
        for (std::size_t idx : bodies->second) deliver(compiled_[idx], etype, event.ts_us, out);

    const StatusClass sc = status_class(event);
    if (sc == StatusClass::ClientError || sc == StatusClass::ServerError)
        out.push_back(FailureAlert{"rest", Violation::RestError, event.ts_us, occurrence});

    return out;
}

std::vector<FailureAlert> Monitor::tick(std::int64_t now_us) {
    std::vector<FailureAlert> out;
    if (now_us < clock_) return out;
    expire(now_us, out);
    clock_ = now_us;
    return out;
}

std::vector<FailureAlert> run_stream(Monitor& monitor, const Trace& trace) {
    std::vector<FailureAlert> alerts;
    for (const auto& event : trace.events) {
        auto batch = monitor.feed(event);
        alerts.insert(alerts.end(), batch.begin(), batch.end());
    }
    if (!trace.events.empty()) {
        auto batch = monitor.tick(trace.events.back().ts_us + monitor.rule_set().delta_t_us);
        alerts.insert(alerts.end(), batch.begin(), batch.end());
    }
    return alerts;
}

}  // namespace tracemon
