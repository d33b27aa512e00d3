#pragma once

#include <cstdint>
#include <list>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tracemon/alerts.hpp"
#include "tracemon/event.hpp"
#include "tracemon/rules.hpp"

namespace tracemon {

struct MonitorConfig {
    bool under_count_alerts = false;  // opt-in: COUNT tally below min at expiry
};

// Streaming matcher over a timestamp-ordered event flow. Multi-tenancy is
// handled without session ids: every rule keeps a per-head occurrence counter,
// the k-th head occurrence opens instance k, and follower events satisfy the
// oldest live instance still expecting their type (FIFO pairing).
class Monitor {
public:
    explicit Monitor(RuleSet rules, MonitorConfig cfg = {});

    // Feed the next event (ts_us must be >= clock()). Expires overdue
    // instances first, then applies activation, delivery and the REST rule.
    std::vector<FailureAlert> feed(const Event& event);

    // Advance the clock without an event, expiring overdue instances.
    std::vector<FailureAlert> tick(std::int64_t now_us);

    std::int64_t clock() const { return clock_; }
    const RuleSet& rule_set() const { return rules_; }
    std::size_t live_instances() const;

private:
    struct Instance {
        std::int64_t occurrence = 0;
        std::int64_t opened_at_us = 0;
        std::int64_t deadline_us = 0;
        std::size_t next_expected = 0;        // ORD: cursor into the body
        std::multiset<std::string> pending;   // OCC: outstanding follower types
        std::map<std::string, int> tally;     // COUNT: per-type running tally
    };
    struct Compiled {
        std::size_t rule_idx = 0;                 // into rules_.rules
        std::vector<std::string> body;            // canonical names, rule order
        std::map<std::string, int> max_counts;    // COUNT
        std::map<std::string, int> min_counts;    // COUNT
        std::list<Instance> live;                 // oldest first
    };

    void expire(std::int64_t now_us, std::vector<FailureAlert>& out);
    void deliver(Compiled& cr, const std::string& etype, std::int64_t now_us,
                 std::vector<FailureAlert>& out);

    RuleSet rules_;
    MonitorConfig cfg_;
    std::vector<Compiled> compiled_;
    std::map<std::string, std::vector<std::size_t>> by_head_;
    std::map<std::string, std::vector<std::size_t>> by_body_;
    std::map<std::string, std::int64_t> counters_;
    std::int64_t clock_;
};

// Feed a whole trace, then expire everything with a final tick at
// last event ts + delta_t. Alerts come back in detection-time order.
std::vector<FailureAlert> run_stream(Monitor& monitor, const Trace& trace);

}  // namespace tracemon
