#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tracemon {

// timeout/out_of_order/over_count/rest_error come from the runtime monitor;
// unseen and improbable are the UN and PM baseline detections.
enum class Violation { Timeout, OutOfOrder, OverCount, RestError, Unseen, Improbable };

std::string to_string(Violation v);
Violation violation_from_string(const std::string& s);

struct FailureAlert {
    std::string rule_id;  // mined rule id, or "rest" / "un" / "pm"
    Violation violation = Violation::Timeout;
    std::int64_t ts_us = 0;      // detection time
    std::int64_t occurrence = 0; // head-occurrence index (or event position for baselines)

    bool operator==(const FailureAlert&) const = default;
};

bool sorted_by_ts(const std::vector<FailureAlert>& alerts);

}  // namespace tracemon
