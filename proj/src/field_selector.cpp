#include "tracemon/field_selector.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "tracemon/errors.hpp"

namespace tracemon {

namespace {

// value -> (occurrence count, index of the single carrying event if count==1).
// Enough to answer "does this value appear in any *other* event": either the
// value occurs in 2+ events, or it occurs only in events other than this one.
struct ValueIndex {
    // value -> (number of events carrying it, one such event index)
    std::unordered_map<std::string, std::pair<int, std::size_t>> carriers;

    explicit ValueIndex(const Trace& trace) {
        for (std::size_t i = 0; i < trace.events.size(); ++i) {
            std::unordered_set<std::string> seen_here;
            for (const auto& [k, v] : trace.events[i].body) {
                (void)k;
                if (!seen_here.insert(v).second) continue;
                auto [it, inserted] = carriers.try_emplace(v, 1, i);
                if (!inserted) ++it->second.first;
            }
        }
    }

    bool appears_elsewhere(const std::string& value, std::size_t event_idx) const {
        auto it = carriers.find(value);
        if (it == carriers.end()) return false;
        const auto& [count, only_idx] = it->second;
        return count > 1 || only_idx != event_idx;
    }
};

struct TraceFieldStats {
    std::unordered_map<std::string, double> p1;
    std::unordered_map<std::string, double> p2;
};

TraceFieldStats score_trace(const Trace& trace) {
    ValueIndex index(trace);
    std::unordered_map<std::string, std::int64_t> occurrences;
    std::unordered_map<std::string, std::int64_t> propagating;
    std::unordered_map<std::string, std::unordered_set<std::string>> distinct;

    for (std::size_t i = 0; i < trace.events.size(); ++i) {
        for (const auto& [field, value] : trace.events[i].body) {
            ++occurrences[field];
            if (index.appears_elsewhere(value, i)) ++propagating[field];
            distinct[field].insert(value);
        }
    }

    TraceFieldStats stats;
    for (const auto& [field, occ] : occurrences) {
        stats.p1[field] = static_cast<double>(propagating[field]) / static_cast<double>(occ);
        stats.p2[field] =
            static_cast<double>(distinct[field].size()) / static_cast<double>(occ);
    }
    return stats;
}

}  // namespace

double propagation_score(const std::string& field, const Trace& trace) {
    ValueIndex index(trace);
    std::int64_t occ = 0, prop = 0;
    for (std::size_t i = 0; i < trace.events.size(); ++i) {
        auto it = trace.events[i].body.find(field);
        if (it == trace.events[i].body.end()) continue;
        ++occ;
        if (index.appears_elsewhere(it->second, i)) ++prop;
    }
    if (occ == 0) throw FieldAbsent(field);
    return static_cast<double>(prop) / static_cast<double>(occ);
}

double diversity_score(const std::string& field, const Trace& trace) {
    std::unordered_set<std::string> values;
    std::int64_t occ = 0;
    for (const auto& e : trace.events) {
        auto it = e.body.find(field);
        if (it == e.body.end()) continue;
        ++occ;
        values.insert(it->second);
    }
    if (occ == 0) throw FieldAbsent(field);
    return static_cast<double>(values.size()) / static_cast<double>(occ);
}

FieldSelection select_fields(const std::vector<Trace>& traces, const FieldSelectorConfig& cfg) {
    if (traces.empty()) throw EmptyCorpus();
    if (cfg.epsilon1 < 0.0 || cfg.epsilon1 > 1.0 || cfg.epsilon2 < 0.0 || cfg.epsilon2 > 1.0)
        throw InvalidConfig("thresholds must lie in [0,1]");

    std::vector<TraceFieldStats> stats;
    stats.reserve(traces.size());
    std::set<std::string> all_fields;
    for (const auto& t : traces) {
        stats.push_back(score_trace(t));
        for (const auto& [field, _] : stats.back().p1) all_fields.insert(field);
    }

    constexpr double absent = std::numeric_limits<double>::quiet_NaN();
    FieldSelection sel;
    sel.config = cfg;
    for (const auto& field : all_fields) {
        FieldReport report;
        report.field = field;
        report.present_in_all = true;
        bool meets_thresholds = true;
        for (const auto& s : stats) {
            auto it = s.p1.find(field);
            if (it == s.p1.end()) {
                report.present_in_all = false;
                report.per_trace_p1.push_back(absent);
                report.per_trace_p2.push_back(absent);
                continue;
            }
            const double p1 = it->second;
            const double p2 = s.p2.at(field);
            report.per_trace_p1.push_back(p1);
            report.per_trace_p2.push_back(p2);
            if (p1 < cfg.epsilon1 || p2 < cfg.epsilon2) meets_thresholds = false;
        }
        report.selected = report.present_in_all && meets_thresholds;
        if (report.selected) sel.fields.insert(field);
        sel.reports.push_back(std::move(report));
    }
    return sel;
}

void write_field_selection(const FieldSelection& sel, const std::filesystem::path& path) {
    nlohmann::ordered_json j;
    j["epsilon1"] = sel.config.epsilon1;
    j["epsilon2"] = sel.config.epsilon2;
    j["selected"] = sel.fields;
    j["reports"] = nlohmann::ordered_json::array();
    for (const auto& r : sel.reports) {
        nlohmann::ordered_json jr;
        jr["field"] = r.field;
        jr["present_in_all"] = r.present_in_all;
        jr["selected"] = r.selected;
        auto dump_scores = [](const std::vector<double>& scores) {
            nlohmann::ordered_json arr = nlohmann::ordered_json::array();
            for (double s : scores) {
                if (std::isnan(s))
                    arr.push_back(nullptr);
                else
                    arr.push_back(s);
            }
            return arr;
        };
        jr["p1"] = dump_scores(r.per_trace_p1);
        jr["p2"] = dump_scores(r.per_trace_p2);
        j["reports"].push_back(std::move(jr));
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

std::set<std::string> load_selected_fields(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("selected") ||
        !j["selected"].is_array())
        throw SchemaViolation(1, "selected", "missing or malformed field report");
    std::set<std::string> fields;
    for (const auto& f : j["selected"]) {
        if (!f.is_string()) throw SchemaViolation(1, "selected", "expected field names");
        fields.insert(f.get<std::string>());
    }
    return fields;
}

}  // namespace tracemon
