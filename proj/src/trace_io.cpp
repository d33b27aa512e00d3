#include "tracemon/trace_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tracemon/errors.hpp"

namespace tracemon {

using ojson = nlohmann::ordered_json;
using njson = nlohmann::json;

namespace {

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("short write to " + path.string());
}

njson parse_line(const std::string& line, std::size_t line_no) {
    njson j = njson::parse(line, nullptr, false);
    if (j.is_discarded()) throw MalformedLine(line_no, "invalid JSON");
    if (!j.is_object()) throw MalformedLine(line_no, "record is not an object");
    return j;
}

const njson& require(const njson& j, const char* key, std::size_t line_no) {
    auto it = j.find(key);
    if (it == j.end()) throw SchemaViolation(line_no, key, "missing");
    return *it;
}

std::string require_string(const njson& j, const char* key, std::size_t line_no) {
    const njson& v = require(j, key, line_no);
    if (!v.is_string()) throw SchemaViolation(line_no, key, "expected a string");
    return v.get<std::string>();
}

std::int64_t require_int(const njson& j, const char* key, std::size_t line_no) {
    const njson& v = require(j, key, line_no);
    if (!v.is_number_integer()) throw SchemaViolation(line_no, key, "expected an integer");
    return v.get<std::int64_t>();
}

void check_name(const std::string& value, const char* key, std::size_t line_no) {
    if (value.empty()) throw SchemaViolation(line_no, key, "must be non-empty");
    if (value.find('\n') != std::string::npos)
        throw SchemaViolation(line_no, key, "must not contain newlines");
}

Event parse_event(const njson& j, std::size_t line_no) {
    static const std::set<std::string> known{"ts_us", "kind", "service", "method", "status", "body"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw SchemaViolation(line_no, it.key(), "unknown field");

    Event e;
    e.ts_us = require_int(j, "ts_us", line_no);
    const std::string kind = require_string(j, "kind", line_no);
    if (kind == "rpc")
        e.kind = EventKind::Rpc;
    else if (kind == "rest")
        e.kind = EventKind::Rest;
    else
        throw SchemaViolation(line_no, "kind", "expected \"rpc\" or \"rest\"");

    e.etype.service = require_string(j, "service", line_no);
    e.etype.method = require_string(j, "method", line_no);
    check_name(e.etype.service, "service", line_no);
    check_name(e.etype.method, "method", line_no);

    const bool has_status = j.contains("status");
    const bool has_body = j.contains("body");
    if (e.kind == EventKind::Rest) {
        if (!has_status) throw SchemaViolation(line_no, "status", "required for rest events");
        if (has_body) throw SchemaViolation(line_no, "body", "not allowed on rest events");
        const std::int64_t s = require_int(j, "status", line_no);
        if (s < 100 || s > 599) throw SchemaViolation(line_no, "status", "outside 100..599");
        e.status = static_cast<int>(s);
    } else {
        if (has_status) throw SchemaViolation(line_no, "status", "not allowed on rpc events");
        if (has_body) {
            const njson& body = j.at("body");
            if (!body.is_object()) throw SchemaViolation(line_no, "body", "expected an object");
            for (auto it = body.begin(); it != body.end(); ++it) {
                if (!it.value().is_string())
                    throw SchemaViolation(line_no, "body", "values must be strings");
                e.body.emplace(it.key(), it.value().get<std::string>());
            }
        }
    }
    return e;
}

}  // namespace

std::string to_line(const Event& event) {
    ojson j;
    j["ts_us"] = event.ts_us;
    j["kind"] = event.kind == EventKind::Rpc ? "rpc" : "rest";
    j["service"] = event.etype.service;
    j["method"] = event.etype.method;
    if (event.kind == EventKind::Rest) j["status"] = *event.status;
    if (event.kind == EventKind::Rpc && !event.body.empty()) {
        ojson body;
        for (const auto& [k, v] : event.body) body[k] = v;  // std::map: sorted keys
        j["body"] = std::move(body);
    }
    return j.dump();
}

Event parse_event_line(const std::string& line, std::size_t line_no) {
    return parse_event(parse_line(line, line_no), line_no);
}

Trace load_trace(const std::filesystem::path& path) {
    Trace trace;
    trace.trace_id = path.stem().string();
    const auto lines = read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        trace.events.push_back(parse_event_line(lines[i], i + 1));
    }
    sort_events(trace);
    return trace;
}

void write_trace(const Trace& trace, const std::filesystem::path& path) {
    std::string out;
    for (const auto& e : trace.events) {
        out += to_line(e);
        out += '\n';
    }
    write_text(path, out);
}

std::vector<Trace> load_trace_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw IoError(dir.string() + " is not a directory");
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::vector<Trace> traces;
    traces.reserve(files.size());
    for (const auto& f : files) traces.push_back(load_trace(f));
    return traces;
}

RuleSet load_ruleset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    njson j = njson::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw MalformedLine(1, "rule set is not a JSON object");

    RuleSet rs;
    rs.delta_t_us = require_int(j, "delta_t_us", 1);
    if (rs.delta_t_us <= 0) throw SchemaViolation(1, "delta_t_us", "must be positive");
    const njson& rules = require(j, "rules", 1);
    if (!rules.is_array()) throw SchemaViolation(1, "rules", "expected an array");

    std::set<std::string> seen_ids;
    for (const auto& r : rules) {
        if (!r.is_object()) throw SchemaViolation(1, "rules", "rule is not an object");
        MonitoringRule rule;
        rule.id = require_string(r, "id", 1);
        rule.kind = rule_kind_from_string(require_string(r, "kind", 1));
        rule.head = EventType::parse(require_string(r, "head", 1));
        const njson& body = require(r, "body", 1);
        if (!body.is_array()) throw SchemaViolation(1, "body", "expected an array");
        for (const auto& b : body) {
            if (!b.is_string()) throw SchemaViolation(1, "body", "expected canonical names");
            rule.body.push_back(EventType::parse(b.get<std::string>()));
        }
        if (rule.kind == RuleKind::Count) {
            const njson& counts = require(r, "counts", 1);
            if (!counts.is_object()) throw SchemaViolation(1, "counts", "expected an object");
            for (auto it = counts.begin(); it != counts.end(); ++it) {
                const njson& range = it.value();
                if (!range.is_array() || range.size() != 2 || !range[0].is_number_integer() ||
                    !range[1].is_number_integer())
                    throw SchemaViolation(1, "counts", "ranges must be [min,max] integer pairs");
                rule.counts[EventType::parse(it.key())] =
                    CountRange{range[0].get<int>(), range[1].get<int>()};
            }
        } else if (r.contains("counts")) {
            throw SchemaViolation(1, "counts", "only COUNT rules carry counts");
        }
        rule.delta_t_us = rs.delta_t_us;
        validate(rule);
        if (!seen_ids.insert(rule.id).second) throw DuplicateRuleId(rule.id);
        rs.rules.push_back(std::move(rule));
    }
    return rs;
}

void write_ruleset(const RuleSet& rules, const std::filesystem::path& path) {
    std::set<std::string> ids;
    for (const auto& r : rules.rules) {
        validate(r);
        if (!ids.insert(r.id).second) throw DuplicateRuleId(r.id);
    }
    ojson j;
    j["delta_t_us"] = rules.delta_t_us;
    j["rules"] = ojson::array();
    for (const auto& r : rules.rules) {
        ojson jr;
        jr["id"] = r.id;
        jr["kind"] = to_string(r.kind);
        jr["head"] = r.head.canonical();
        ojson body = ojson::array();
        for (const auto& b : r.body) body.push_back(b.canonical());
        jr["body"] = std::move(body);
        if (r.kind == RuleKind::Count) {
            ojson counts;
            for (const auto& [etype, range] : r.counts)
                counts[etype.canonical()] = ojson::array({range.min_count, range.max_count});
            jr["counts"] = std::move(counts);
        }
        j["rules"].push_back(std::move(jr));
    }
    write_text(path, j.dump(2) + "\n");
}

std::string to_line(const FailureAlert& alert) {
    ojson j;
    j["rule_id"] = alert.rule_id;
    j["violation"] = to_string(alert.violation);
    j["ts_us"] = alert.ts_us;
    j["occurrence"] = alert.occurrence;
    return j.dump();
}

std::vector<FailureAlert> load_alerts(const std::filesystem::path& path) {
    std::vector<FailureAlert> alerts;
    const auto lines = read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const std::size_t line_no = i + 1;
        njson j = parse_line(lines[i], line_no);
        FailureAlert a;
        a.rule_id = require_string(j, "rule_id", line_no);
        a.violation = violation_from_string(require_string(j, "violation", line_no));
        a.ts_us = require_int(j, "ts_us", line_no);
        a.occurrence = require_int(j, "occurrence", line_no);
        alerts.push_back(std::move(a));
    }
    return alerts;
}

void write_alerts(const std::vector<FailureAlert>& alerts, const std::filesystem::path& path) {
    std::string out;
    for (const auto& a : alerts) {
        out += to_line(a);
        out += '\n';
    }
    write_text(path, out);
}

ExperimentRecord load_experiment(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    njson j = njson::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw MalformedLine(1, "experiment record is not a JSON object");

    ExperimentRecord rec;
    rec.t_start_us = require_int(j, "t_start_us", 1);
    const njson& fault = require(j, "fault", 1);
    if (!fault.is_null()) {
        if (!fault.is_object()) throw SchemaViolation(1, "fault", "expected object or null");
        FaultSpec f;
        f.kind = fault_kind_from_string(require_string(fault, "kind", 1));
        f.target_op = require_string(fault, "target_op", 1);
        f.target_tenant = static_cast<int>(require_int(fault, "target_tenant", 1));
        f.activation_us = require_int(fault, "activation_us", 1);
        rec.fault = f;
    }
    const njson& ff = require(j, "first_failure_us", 1);
    if (!ff.is_null()) {
        if (!ff.is_number_integer())
            throw SchemaViolation(1, "first_failure_us", "expected integer or null");
        rec.first_failure_us = ff.get<std::int64_t>();
        if (!rec.fault)
            throw SchemaViolation(1, "first_failure_us", "present without a fault");
        if (*rec.first_failure_us < rec.t_start_us)
            throw SchemaViolation(1, "first_failure_us", "before t_start_us");
    }
    return rec;
}

void write_experiment(const ExperimentRecord& record, const std::filesystem::path& path) {
    ojson j;
    j["t_start_us"] = record.t_start_us;
    if (record.fault) {
        ojson f;
        f["kind"] = to_string(record.fault->kind);
        f["target_op"] = record.fault->target_op;
        f["target_tenant"] = record.fault->target_tenant;
        f["activation_us"] = record.fault->activation_us;
        j["fault"] = std::move(f);
    } else {
        j["fault"] = nullptr;
    }
    if (record.first_failure_us)
        j["first_failure_us"] = *record.first_failure_us;
    else
        j["first_failure_us"] = nullptr;
    write_text(path, j.dump(2) + "\n");
}

}  // namespace tracemon
