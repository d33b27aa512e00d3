#pragma once

#include <cstdint>

#include "tracemon/pattern_miner.hpp"
#include "tracemon/rules.hpp"

namespace tracemon {

// Classify an emittable draft:
//   - any common type whose occurrence count varies across instances -> COUNT
//     with the observed per-type [min,max] ranges (head type excluded);
//   - counts constant but some type repeated -> COUNT with tight [c,c] ranges
//     (a repeated type cannot be expressed as ORD/OCC occurrence expectations);
//   - all counts one: identical follower sequences -> ORD, otherwise OCC.
// Throws NotEmittable when the draft cannot yield a rule.
MonitoringRule classify(const MinedRuleDraft& draft, std::int64_t delta_t_us);

}  // namespace tracemon
