#include "tracemon/event.hpp"

#include <algorithm>

#include "tracemon/errors.hpp"

namespace tracemon {

EventType EventType::parse(const std::string& canonical, const std::set<std::string>& services) {
    std::string best_service;
    for (const auto& svc : services) {
        if (canonical.size() > svc.size() + 1 && canonical.compare(0, svc.size(), svc) == 0 &&
            canonical[svc.size()] == '_' && svc.size() > best_service.size()) {
            best_service = svc;
        }
    }
    if (!best_service.empty())
        return EventType{best_service, canonical.substr(best_service.size() + 1)};
    return parse(canonical);
}

EventType EventType::parse(const std::string& canonical) {
    auto pos = canonical.find('_');
    if (pos == std::string::npos || pos == 0 || pos + 1 >= canonical.size())
        throw InvalidConfig("'" + canonical + "' is not a canonical event-type name");
    return EventType{canonical.substr(0, pos), canonical.substr(pos + 1)};
}

StatusClass status_class(const Event& e) {
    if (e.kind != EventKind::Rest) return StatusClass::NotRest;
    const int s = e.status.value_or(0);
    if (s >= 400 && s <= 499) return StatusClass::ClientError;
    if (s >= 500 && s <= 599) return StatusClass::ServerError;
    return StatusClass::Ok;
}

void sort_events(Trace& trace) {
    std::stable_sort(trace.events.begin(), trace.events.end(),
                     [](const Event& a, const Event& b) { return a.ts_us < b.ts_us; });
}

std::set<std::string> service_registry(const Trace& trace) {
    std::set<std::string> services;
    for (const auto& e : trace.events) services.insert(e.etype.service);
    return services;
}

}  // namespace tracemon
