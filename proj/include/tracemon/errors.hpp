#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tracemon {

// Base for all data-level failures. The CLI maps these to exit code 2.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MalformedLine : DataError {
    std::size_t line_no;
    explicit MalformedLine(std::size_t line, const std::string& what)
        : DataError("line " + std::to_string(line) + ": " + what), line_no(line) {}
};

struct SchemaViolation : DataError {
    std::size_t line_no;
    std::string field;
    SchemaViolation(std::size_t line, std::string fld, const std::string& what)
        : DataError("line " + std::to_string(line) + ", field '" + fld + "': " + what),
          line_no(line),
          field(std::move(fld)) {}
};

struct FieldAbsent : DataError {
    explicit FieldAbsent(const std::string& field)
        : DataError("no event in the trace carries field '" + field + "'") {}
};

struct EmptyCorpus : DataError {
    EmptyCorpus() : DataError("at least one trace is required") {}
};

struct TimestampRegression : DataError {
    TimestampRegression(long long event_ts, long long clock)
        : DataError("event at " + std::to_string(event_ts) +
                    " us is older than the monitor clock " + std::to_string(clock) + " us") {}
};

struct DuplicateRuleId : DataError {
    explicit DuplicateRuleId(const std::string& id)
        : DataError("duplicate rule id '" + id + "'") {}
};

struct NotEmittable : DataError {
    explicit NotEmittable(const std::string& head)
        : DataError("draft for head '" + head + "' has fewer than two common events") {}
};

struct UnknownTarget : DataError {
    explicit UnknownTarget(const std::string& what) : DataError(what) {}
};

struct InvalidConfig : DataError {
    explicit InvalidConfig(const std::string& what) : DataError(what) {}
};

struct UnsortedAlerts : DataError {
    UnsortedAlerts() : DataError("alert stream is not sorted by ts_us") {}
};

struct IoError : DataError {
    explicit IoError(const std::string& what) : DataError(what) {}
};

}  // namespace tracemon
