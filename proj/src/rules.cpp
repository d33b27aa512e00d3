#include "tracemon/rules.hpp"

#include "tracemon/alerts.hpp"
#include "tracemon/errors.hpp"
#include "tracemon/experiment.hpp"

namespace tracemon {

std::string to_string(RuleKind k) {
    switch (k) {
        case RuleKind::Ord: return "ORD";
        case RuleKind::Occ: return "OCC";
        case RuleKind::Count: return "COUNT";
    }
    return "ORD";
}

RuleKind rule_kind_from_string(const std::string& s) {
    if (s == "ORD") return RuleKind::Ord;
    if (s == "OCC") return RuleKind::Occ;
    if (s == "COUNT") return RuleKind::Count;
    throw SchemaViolation(1, "kind", "unknown rule kind '" + s + "'");
}

void validate(const MonitoringRule& rule) {
    if (rule.id.empty()) throw InvalidConfig("rule id must be non-empty");
    if (rule.delta_t_us <= 0) throw InvalidConfig("rule delta_t_us must be positive");
    if (rule.kind == RuleKind::Count) {
        if (rule.counts.empty())
            throw InvalidConfig("COUNT rule '" + rule.id + "' has no count ranges");
        for (const auto& [etype, range] : rule.counts)
            if (range.min_count < 1 || range.min_count > range.max_count)
                throw InvalidConfig("COUNT rule '" + rule.id + "' has an invalid range for " +
                                    etype.canonical());
        if (rule.body.size() != rule.counts.size())
            throw InvalidConfig("COUNT rule '" + rule.id + "' body must list the counted types");
        for (const auto& b : rule.body)
            if (!rule.counts.count(b))
                throw InvalidConfig("COUNT rule '" + rule.id + "' body/counts mismatch");
    } else {
        if (rule.body.empty())
            throw InvalidConfig("rule '" + rule.id + "' needs at least one follower event");
        if (!rule.counts.empty())
            throw InvalidConfig("only COUNT rules carry counts");
    }
}

std::string to_string(Violation v) {
    switch (v) {
        case Violation::Timeout: return "timeout";
        case Violation::OutOfOrder: return "out_of_order";
        case Violation::OverCount: return "over_count";
        case Violation::RestError: return "rest_error";
        case Violation::Unseen: return "unseen";
        case Violation::Improbable: return "improbable";
    }
    return "timeout";
}

Violation violation_from_string(const std::string& s) {
    if (s == "timeout") return Violation::Timeout;
    if (s == "out_of_order") return Violation::OutOfOrder;
    if (s == "over_count") return Violation::OverCount;
    if (s == "rest_error") return Violation::RestError;
    if (s == "unseen") return Violation::Unseen;
    if (s == "improbable") return Violation::Improbable;
    throw SchemaViolation(1, "violation", "unknown violation '" + s + "'");
}

bool sorted_by_ts(const std::vector<FailureAlert>& alerts) {
    for (std::size_t i = 1; i < alerts.size(); ++i)
        if (alerts[i].ts_us < alerts[i - 1].ts_us) return false;
    return true;
}

std::string to_string(FaultKind k) {
    switch (k) {
        case FaultKind::ThrowException: return "throw_exception";
        case FaultKind::WrongReturn: return "wrong_return";
        case FaultKind::WrongParam: return "wrong_param";
    }
    return "throw_exception";
}

FaultKind fault_kind_from_string(const std::string& s) {
    if (s == "throw_exception") return FaultKind::ThrowException;
    if (s == "wrong_return") return FaultKind::WrongReturn;
    if (s == "wrong_param") return FaultKind::WrongParam;
    throw SchemaViolation(1, "kind", "unknown fault kind '" + s + "'");
}

}  // namespace tracemon
