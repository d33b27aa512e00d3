#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tracemon/alerts.hpp"
#include "tracemon/event.hpp"
#include "tracemon/experiment.hpp"
#include "tracemon/rules.hpp"

namespace tracemon {

// Trace files are JSON Lines, one event per line:
//   {"ts_us":..,"kind":"rpc","service":..,"method":..,"body":{..}}
//   {"ts_us":..,"kind":"rest","service":..,"method":..,"status":..}
// Loaders fail fast: any malformed or schema-inconsistent line raises.
Trace load_trace(const std::filesystem::path& path);
void write_trace(const Trace& trace, const std::filesystem::path& path);

// All *.jsonl files in a directory, sorted by filename.
std::vector<Trace> load_trace_dir(const std::filesystem::path& dir);

RuleSet load_ruleset(const std::filesystem::path& path);
void write_ruleset(const RuleSet& rules, const std::filesystem::path& path);

std::vector<FailureAlert> load_alerts(const std::filesystem::path& path);
void write_alerts(const std::vector<FailureAlert>& alerts, const std::filesystem::path& path);

ExperimentRecord load_experiment(const std::filesystem::path& path);
void write_experiment(const ExperimentRecord& record, const std::filesystem::path& path);

// Serialized forms (used by the writers above and by tests asserting
// byte-level round trips).
std::string to_line(const Event& event);
std::string to_line(const FailureAlert& alert);

// Parse one trace record with full schema validation (line_no feeds error
// context). Backs load_trace and the live --follow reader.
Event parse_event_line(const std::string& line, std::size_t line_no);

}  // namespace tracemon
