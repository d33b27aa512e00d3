#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "tracemon/event.hpp"

namespace tracemon {

struct FieldSelectorConfig {
    double epsilon1 = 0.30;  // P1, value propagation
    double epsilon2 = 0.30;  // P2, value diversity
};

struct FieldReport {
    std::string field;
    std::vector<double> per_trace_p1;  // aligned with the input trace order,
    std::vector<double> per_trace_p2;  // NaN where the field is absent
    bool present_in_all = false;
    bool selected = false;
};

struct FieldSelection {
    FieldSelectorConfig config;
    std::set<std::string> fields;       // the fields of interest
    std::vector<FieldReport> reports;   // every field seen anywhere, sorted by name
};

// P1: fraction of the field's occurrences whose value also appears as the
// value of any field in at least one other event of the trace.
// Throws FieldAbsent when no event carries the field.
double propagation_score(const std::string& field, const Trace& trace);

// P2: distinct values / occurrences. Throws FieldAbsent when unseen.
double diversity_score(const std::string& field, const Trace& trace);

// A field is selected when it is present in every trace and both scores meet
// their thresholds in every trace. Throws EmptyCorpus on an empty input.
FieldSelection select_fields(const std::vector<Trace>& traces, const FieldSelectorConfig& cfg);

void write_field_selection(const FieldSelection& sel, const std::filesystem::path& path);
std::set<std::string> load_selected_fields(const std::filesystem::path& path);

}  // namespace tracemon
