#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tracemon {

enum class EventKind { Rpc, Rest };

// A traced communication endpoint, e.g. ("cinder-scheduler", "create_volume").
// The canonical name joins both with '_' and round-trips through parse().
struct EventType {
    std::string service;
    std::string method;

    std::string canonical() const { return service + "_" + method; }

    // Splits at the first '_' that follows a registered service prefix.
    // Longest registered prefix wins so services may themselves contain '_'.
    static EventType parse(const std::string& canonical, const std::set<std::string>& services);

    // Fallback split at the first '_' (used where no service registry exists,
    // e.g. when loading a rule set file).
    static EventType parse(const std::string& canonical);

    auto operator<=>(const EventType&) const = default;
};

enum class StatusClass { Ok, ClientError, ServerError, NotRest };

struct Event {
    std::int64_t ts_us = 0;
    EventKind kind = EventKind::Rpc;
    EventType etype;
    std::optional<int> status;                 // present iff kind == Rest, 100..599
    std::map<std::string, std::string> body;   // RPC payload fields, may be empty
};

StatusClass status_class(const Event& e);

struct Trace {
    std::string trace_id;
    std::vector<Event> events;  // non-decreasing ts_us, ties keep input order
};

// Stable-sorts events by timestamp in place.
void sort_events(Trace& trace);

// Set of service names observed in a trace (the parse registry).
std::set<std::string> service_registry(const Trace& trace);

}  // namespace tracemon
