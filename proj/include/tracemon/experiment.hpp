#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace tracemon {

enum class FaultKind { ThrowException, WrongReturn, WrongParam };

std::string to_string(FaultKind k);
FaultKind fault_kind_from_string(const std::string& s);

struct FaultSpec {
    FaultKind kind = FaultKind::ThrowException;
    std::string target_op;
    int target_tenant = 0;
    std::int64_t activation_us = 0;

    bool operator==(const FaultSpec&) const = default;
};

// One labeled run: workload start, the injected fault (if any) and the
// ground-truth first-failure time (null for benign/fault-free runs).
struct ExperimentRecord {
    std::string trace_path = "trace.jsonl";
    std::int64_t t_start_us = 0;
    std::optional<FaultSpec> fault;
    std::optional<std::int64_t> first_failure_us;

    bool operator==(const ExperimentRecord&) const = default;
};

}  // namespace tracemon
