#include "tracemon/workload.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <queue>
#include <random>
#include <set>

#include <json.hpp>

#include "tracemon/errors.hpp"

namespace tracemon {

namespace {

using ojson = nlohmann::ordered_json;
using njson = nlohmann::json;

std::int64_t us(double seconds) { return static_cast<std::int64_t>(std::llround(seconds * 1e6)); }

// Hand-rolled draws on top of mt19937_64: std::*_distribution output is
// implementation-defined, and trace bytes must reproduce across toolchains.
struct Rng {
    std::mt19937_64 engine;
    explicit Rng(std::uint64_t seed) : engine(seed) {}

    double uniform() {  // [0, 1)
        return static_cast<double>(engine() >> 11) * 0x1.0p-53;
    }
    double real(double lo, double hi) { return lo + uniform() * (hi - lo); }
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {  // inclusive
        return lo + static_cast<std::int64_t>(uniform() * static_cast<double>(hi - lo + 1));
    }
    bool chance(double p) { return uniform() < p; }
    int poisson(double mean) {
        const double limit = std::exp(-mean);
        int k = 0;
        double product = 1.0;
        do {
            ++k;
            product *= uniform();
        } while (product > limit);
        return k - 1;
    }
    std::string hex(int digits) {
        static const char* alphabet = "0123456789abcdef";
        std::string s(static_cast<std::size_t>(digits), '0');
        for (auto& c : s) c = alphabet[engine() & 0xf];
        return s;
    }
};

struct ProfileInfo {
    std::vector<std::string> ops;
    double think_min_s;
    double think_max_s;
};

const std::map<std::string, ProfileInfo>& profile_table() {
    static const std::map<std::string, ProfileInfo> table{
        {"volume_only", {{"create_volume", "delete_volume"}, 60.0, 100.0}},
        {"instance_only",
         {{"create_instance", "ping_instance", "reboot_instance", "delete_instance"}, 10.0, 25.0}},
        {"network_only", {{"create_network", "update_security_group"}, 60.0, 100.0}},
        {"instance_before_volume",
         {{"create_instance", "create_volume", "delete_instance", "delete_volume"}, 15.0, 30.0}},
        {"volume_before_instance",
         {{"create_volume", "create_instance", "delete_instance", "delete_volume"}, 15.0, 30.0}},
        {"instance_volume_network",
         {{"create_network", "create_volume", "attach_volume", "create_instance",
           "update_security_group", "attach_volume", "reboot_instance", "delete_instance",
           "attach_volume", "delete_volume"},
          10.0, 22.0}},
    };
    return table;
}

struct EnumField {
    const char* name;
    std::vector<const char*> pool;
};

const std::vector<EnumField>& context_enums() {
    static const std::vector<EnumField> fields{
        {"rpc_version", {"5.1", "5.2", "6.0"}},
        {"api_version", {"v2.1"}},
        {"transport", {"rabbit"}},
        {"serializer", {"json", "msgpack"}},
        {"priority", {"normal", "high", "low"}},
        {"reply_required", {"true", "false"}},
        {"region", {"regionone"}},
        {"domain", {"default"}},
        {"user_role", {"member", "admin", "reader"}},
        {"resource_state", {"active", "building", "pending", "deleted"}},
        {"disk_format", {"qcow2", "raw"}},
        {"vcpus", {"1", "2", "4"}},
        {"az", {"nova"}},
        {"power_state", {"on", "off", "paused"}},
        {"retry_count", {"0", "1", "2"}},
    };
    return fields;
}

const std::vector<const char*>& unique_field_names() {
    static const std::vector<const char*> names{
        "message_id", "span_digest", "payload_sha", "event_nonce",    "client_ts_ns",
        "socket_key", "buffer_ref",  "audit_token", "object_version", "request_ts",
        "payload_size", "idempotency_key",
    };
    return names;
}

void fill_common_body(Event& e, Rng& rng, const std::string& project_id) {
    e.body["project_id"] = project_id;
    for (const auto& f : context_enums())
        e.body[f.name] = f.pool[static_cast<std::size_t>(
            rng.integer(0, static_cast<std::int64_t>(f.pool.size()) - 1))];
    e.body["caller_pid"] = std::to_string(rng.integer(1000, 1039));
    e.body["host"] = "node-0" + std::to_string(rng.integer(1, 8));
    for (const auto* name : unique_field_names()) e.body[name] = "x" + rng.hex(16);
}

void fill_beacon_body(Event& e, Rng& rng, const std::string& project_id) {
    e.body["project_id"] = project_id;
    e.body["agent_id"] = "agent-" + e.etype.service;
    e.body["binary"] = e.etype.service;
    e.body["status"] = "enabled";
    e.body["report_interval"] = "10";
    e.body["host"] = "node-0" + std::to_string(rng.integer(1, 8));
    e.body["seq_no"] = "b" + rng.hex(12);
    e.body["uptime_us"] = "u" + rng.hex(12);
    e.body["heartbeat_token"] = "x" + rng.hex(16);
    e.body["snapshot_ref"] = "x" + rng.hex(16);
    e.body["rpc_version"] = "5.1";
    e.body["transport"] = "rabbit";
    e.body["region"] = "regionone";
    e.body["domain"] = "default";
    e.body["priority"] = "low";
    e.body["reply_required"] = "false";
}

struct Emitted {
    Event event;
    std::string session;
};

// Mandatory (always present) step types of an operation, head excluded;
// probe tails count as mandatory.
std::set<std::string> core_types(const OpTemplate& op) {
    std::set<std::string> types;
    for (std::size_t i = 1; i < op.steps.size(); ++i)
        if (op.steps[i].presence_p >= 1.0)
            types.insert(op.steps[i].service + "_" + op.steps[i].method);
    if (op.has_probes) types.insert(op.probe_service + "_" + op.probe_method);
    return types;
}

struct OpMaterialization {
    std::vector<Emitted> events;  // REST first, then the RPC chain in ts order
    std::int64_t end_us = 0;
};

OpMaterialization materialize_op(const OpTemplate& op, Rng& rng, std::int64_t t0,
                                 const std::string& session_id, const std::string& project_id) {
    OpMaterialization out;

    Event rest;
    rest.ts_us = t0;
    rest.kind = EventKind::Rest;
    rest.etype = {op.rest_service, op.rest_method};
    rest.status = op.rest_status;
    out.events.push_back({rest, session_id});

    const std::string primary = "req-" + rng.hex(12);
    const std::string secondary = "req-" + rng.hex(12);
    const std::int64_t chain_start = t0 + us(rng.real(0.2, 0.8));

    std::vector<Emitted> chain;
    for (const auto& step : op.steps) {
        if (step.presence_p < 1.0 && !rng.chance(step.presence_p)) continue;
        Event e;
        e.ts_us = chain_start + us(rng.real(step.pos_min_s, step.pos_max_s));
        e.kind = EventKind::Rpc;
        e.etype = {step.service, step.method};
        e.body["request_id"] = step.req_group == 0 ? primary : secondary;
        if (step.carries_global) e.body["global_request_id"] = primary;
        if (op.self_global) e.body["global_request_id"] = e.body["request_id"];
        fill_common_body(e, rng, project_id);
        chain.push_back({std::move(e), session_id});
    }
    if (op.has_probes) {
        const int probes =
            op.probe_min + std::min(op.probe_extra_cap, rng.poisson(op.probe_extra_mean));
        for (int i = 0; i < probes; ++i) {
            Event e;
            e.ts_us = chain_start + us(op.probe_start_s + (i + 1) * op.probe_pace_s);
            e.kind = EventKind::Rpc;
            e.etype = {op.probe_service, op.probe_method};
            e.body["global_request_id"] = primary;  // probes chain onto the head request
            fill_common_body(e, rng, project_id);
            chain.push_back({std::move(e), session_id});
        }
    }
    std::stable_sort(chain.begin(), chain.end(), [](const Emitted& a, const Emitted& b) {
        return a.event.ts_us < b.event.ts_us;
    });
    out.end_us = chain.empty() ? t0 : chain.back().event.ts_us;
    for (auto& e : chain) out.events.push_back(std::move(e));
    return out;
}

void validate_config(const WorkloadConfig& cfg) {
    if (cfg.tenants < 0) throw InvalidConfig("tenants must be non-negative");
    if (cfg.tenants > 0 && cfg.duration_us <= 0)
        throw InvalidConfig("duration_us must be positive");
    if (cfg.benign_prob < 0.0 || cfg.benign_prob > 1.0)
        throw InvalidConfig("benign_prob must lie in [0,1]");
    if (!cfg.profile_assignment.empty() &&
        cfg.profile_assignment.size() != static_cast<std::size_t>(cfg.tenants))
        throw InvalidConfig("profile_assignment size must match tenants");
    for (const auto& p : cfg.profile_assignment)
        if (!profile_table().count(p)) throw InvalidConfig("unknown profile '" + p + "'");
    for (const auto& op : cfg.catalog.ops) {
        if (op.steps.empty())
            throw InvalidConfig("op '" + op.name + "' emits no RPC events");
        for (const auto& s : op.steps)
            if (s.pos_min_s < 0 || s.pos_max_s < s.pos_min_s)
                throw InvalidConfig("op '" + op.name + "' has an invalid step position range");
    }
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    // splitmix64 over the combined value
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

const std::vector<std::string>& profile_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [name, _] : profile_table()) v.push_back(name);
        return v;
    }();
    return names;
}

const std::vector<std::string>& profile_ops(const std::string& profile) {
    auto it = profile_table().find(profile);
    if (it == profile_table().end()) throw InvalidConfig("unknown profile '" + profile + "'");
    return it->second.ops;
}

std::vector<std::string> default_profile_assignment(int tenants) {
    static const std::vector<std::string> mix{
        "volume_only",            "volume_only",
        "network_only",           "network_only",
        "instance_before_volume", "instance_before_volume",
        "volume_before_instance", "volume_before_instance",
        "instance_only",          "instance_volume_network",
    };
    std::vector<std::string> assignment;
    for (int t = 0; t < tenants; ++t) assignment.push_back(mix[t % mix.size()]);
    return assignment;
}

const OpTemplate* TemplateCatalog::find(const std::string& name) const {
    for (const auto& op : ops)
        if (op.name == name) return &op;
    return nullptr;
}

TemplateCatalog TemplateCatalog::defaults() {
    TemplateCatalog c;

    auto step = [](std::string service, std::string method, int group, bool global, double lo,
                   double hi, double presence = 1.0) {
        StepTemplate s;
        s.service = std::move(service);
        s.method = std::move(method);
        s.req_group = group;
        s.carries_global = global;
        s.presence_p = presence;
        s.pos_min_s = lo;
        s.pos_max_s = hi;
        return s;
    };

    // Step positions sit in two bands, [5.5, 16.5] and [23, 33.4] seconds after
    // the head, well clear of the 5/20/35/50 s windows the toolkit is swept
    // over; the volume-attach chain is quick end to end.
    {
        OpTemplate op;
        op.name = "create_volume";
        op.subsystem = "cinder";
        op.rest_service = "cinder-api";
        op.rest_method = "POST_volumes";
        op.steps = {
            step("cinder-scheduler", "create_volume", 0, false, 0, 0),
            step("cinder-scheduler", "publish_capacity", 0, false, 5.5, 8.5, 0.7),
            step("cinder-api", "validate_quota", 0, false, 6.0, 9.0, 0.6),
            step("cinder-volume", "create_volume", 1, true, 6.5, 10.0),
            step("cinder-volume", "update_quota", 1, true, 11.0, 15.0, 0.8),
            step("cinder-volume", "notify_usage", 0, false, 23.5, 27.0, 0.8),
            step("cinder-volume", "sync_provider_info", 1, true, 28.0, 33.0, 0.7),
        };
        c.ops.push_back(op);
    }
    {
        OpTemplate op;
        op.name = "create_instance";
        op.subsystem = "nova";
        op.rest_service = "nova-api";
        op.rest_method = "POST_servers";
        op.steps = {
            step("nova-conductor", "schedule_and_build_instances", 0, false, 0, 0),
            step("nova-scheduler", "select_destinations", 0, false, 6.0, 9.5),
            step("nova-conductor", "instance_update", 0, false, 10.0, 14.0, 0.8),
            step("nova-scheduler", "update_resource_usage", 0, false, 11.0, 16.0, 0.7),
            step("nova-compute", "plug_vifs", 1, true, 23.0, 26.0, 0.7),
            step("nova-compute", "get_image_metadata", 1, true, 23.5, 26.5, 0.8),
            step("nova-compute", "build_and_run_instance", 1, true, 26.5, 29.0),
            step("nova-compute", "spawn_instance", 1, true, 29.5, 33.0),
            step("nova-compute", "allocate_network", 1, true, 29.5, 33.4, 0.8),
            step("nova-conductor", "notify_instance_active", 0, false, 30.0, 33.4, 0.6),
        };
        c.ops.push_back(op);
    }
    {
        OpTemplate op;
        op.name = "delete_instance";
        op.subsystem = "nova";
        op.rest_service = "nova-api";
        op.rest_method = "DELETE_servers";
        op.rest_status = 204;
        op.steps = {
            step("nova-compute", "terminate_instance", 0, false, 0, 0),
            step("nova-consoleauth", "delete_tokens", 0, false, 6.5, 10.5),
            step("nova-compute", "shutdown_guest", 0, false, 11.0, 15.5, 0.8),
            step("nova-compute", "cleanup_volumes", 0, false, 23.0, 27.0, 0.7),
            step("nova-compute", "deallocate_network", 1, true, 24.0, 28.0),
            step("nova-conductor", "instance_destroy", 1, true, 28.5, 33.0, 0.8),
            step("nova-compute", "free_claims", 1, true, 29.0, 33.4, 0.6),
        };
        c.ops.push_back(op);
    }
    {
        OpTemplate op;
        op.name = "create_network";
        op.subsystem = "neutron";
        op.rest_service = "neutron-api";
        op.rest_method = "POST_networks";
        op.steps = {
            step("neutron-server", "create_network", 0, false, 0, 0),
            step("neutron-server", "update_quota", 0, false, 5.5, 9.0, 0.7),
            // the two agents answer asynchronously: same window, either order
            step("neutron-dhcp-agent", "setup_dhcp", 1, true, 6.5, 15.5),
            step("neutron-l2-agent", "bind_port", 1, true, 6.5, 15.5),
            step("neutron-metadata", "register_network", 1, true, 23.0, 28.0, 0.7),
            step("neutron-dhcp-agent", "reload_allocations", 0, false, 28.5, 33.0, 0.6),
        };
        c.ops.push_back(op);
    }
    {
        OpTemplate op;
        op.name = "attach_volume";
        op.subsystem = "nova";
        op.rest_service = "nova-api";
        op.rest_method = "POST_volume_attachments";
        op.steps = {
            step("nova-compute", "reserve_block_device", 0, false, 0, 0),
            step("nova-compute", "check_device_path", 0, false, 0.8, 1.2, 0.7),
            step("cinder-volume", "initialize_connection", 1, true, 1.3, 1.9),
            step("nova-compute", "attach_volume", 1, true, 2.0, 2.7),
            step("cinder-volume", "attach_volume", 1, true, 2.8, 3.5),
            step("cinder-volume", "update_attachment", 1, true, 3.6, 4.0, 0.8),
            step("nova-compute", "refresh_conn_info", 0, false, 3.6, 4.1, 0.7),
            step("cinder-volume", "notify_attach", 1, true, 4.1, 4.4, 0.6),
        };
        c.ops.push_back(op);
    }
    {
        OpTemplate op;
        op.name = "update_security_group";
        op.subsystem = "neutron";
        op.rest_service = "neutron-api";
        op.rest_method = "PUT_security_groups";
        op.rest_status = 200;
        // quick round trip, well inside even the smallest sweep window
        op.steps = {
            step("neutron-server", "update_security_group", 0, false, 0, 0),
            step("neutron-server", "validate_policy", 0, false, 0.7, 1.1, 0.6),
            step("neutron-l2-agent", "refresh_firewall", 1, true, 1.2, 1.9),
            step("neutron-l2-agent", "apply_filters", 1, true, 2.0, 2.6, 0.8),
            step("neutron-l2-agent", "reload_rules", 0, false, 2.7, 3.4, 0.7),
        };
        c.ops.push_back(op);
    }
    {
        OpTemplate op;
        op.name = "ping_instance";
        op.subsystem = "neutron";
        op.rest_service = "nova-api";
        op.rest_method = "GET_server_status";
        op.rest_status = 200;
        op.steps = {step("neutron-metadata", "ping_session", 0, false, 0, 0)};
        op.has_probes = true;
        op.probe_service = "neutron-l2-agent";
        op.probe_method = "probe_connectivity";
        c.ops.push_back(op);
    }
    {
        OpTemplate op;
        op.name = "delete_volume";
        op.subsystem = "cinder";
        op.rest_service = "cinder-api";
        op.rest_method = "DELETE_volumes";
        op.rest_status = 204;
        op.self_global = true;
        op.steps = {step("cinder-volume", "delete_volume", 0, false, 0, 0)};
        c.ops.push_back(op);
    }
    {
        OpTemplate op;
        op.name = "reboot_instance";
        op.subsystem = "nova";
        op.rest_service = "nova-api";
        op.rest_method = "POST_server_reboot";
        op.self_global = true;
        op.steps = {step("nova-compute", "reboot_instance", 0, false, 0, 0)};
        c.ops.push_back(op);
    }

    const char* beacon_types[][2] = {
        {"nova-compute", "report_state"},
        {"nova-compute", "sync_power_states"},
        {"nova-scheduler", "report_state"},
        {"nova-conductor", "heartbeat"},
        {"nova-consoleauth", "sync_cache"},
        {"nova-conductor", "purge_deleted"},
        {"cinder-volume", "report_state"},
        {"cinder-volume", "update_stats"},
        {"cinder-scheduler", "report_state"},
        {"cinder-backup", "report_state"},
        {"neutron-l2-agent", "report_state"},
        {"neutron-dhcp-agent", "report_state"},
        {"neutron-l3-agent", "report_state"},
        {"neutron-metadata", "report_state"},
        {"glance-registry", "prefetch_images"},
        {"keystone-token", "cleanup_expired"},
    };
    for (const auto& [svc, method] : beacon_types)
        c.beacons.push_back(BeaconTemplate{svc, method, 8.0, 12.0});

    return c;
}

std::pair<Trace, GroundTruth> generate(const WorkloadConfig& cfg) {
    validate_config(cfg);

    const auto assignment = cfg.profile_assignment.empty()
                                ? default_profile_assignment(cfg.tenants)
                                : cfg.profile_assignment;

    Rng trace_rng(derive_seed(cfg.seed, 1));
    const std::string project_id = "proj-" + trace_rng.hex(8);

    std::vector<Emitted> all;
    struct PendingSession {
        std::string id;
        int tenant;
        std::string op;
        std::string head_type;
        std::int64_t start_us;
        std::int64_t end_us;
        std::size_t first_emitted;
        std::size_t count;
    };
    std::vector<PendingSession> sessions;

    struct TenantState {
        int tenant;
        const ProfileInfo* profile;
        std::size_t op_idx;
        int seq;
        std::int64_t ready_us;
        std::shared_ptr<Rng> rng;
    };
    // Earliest-ready tenant goes next; ties resolve by tenant id.
    auto later = [](const TenantState& a, const TenantState& b) {
        return std::tie(a.ready_us, a.tenant) > std::tie(b.ready_us, b.tenant);
    };
    std::priority_queue<TenantState, std::vector<TenantState>, decltype(later)> queue(later);

    std::map<std::string, int> profile_rank_seen;
    for (int tenant = 0; tenant < cfg.tenants; ++tenant) {
        const std::string& profile = assignment[tenant];
        const ProfileInfo& info = profile_table().at(profile);
        const int rank = profile_rank_seen[profile]++;
        auto rng = std::make_shared<Rng>(derive_seed(cfg.seed, 100 + static_cast<std::uint64_t>(tenant)));
        TenantState st;
        st.tenant = tenant;
        st.profile = &info;
        // Same-profile tenants start mid-cycle to keep twin schedules out of phase.
        st.op_idx = (info.ops.size() / 2) * static_cast<std::size_t>(rank);
        st.seq = 0;
        st.ready_us = us(rng->real(0.0, cfg.start_stagger_max_s));
        st.rng = std::move(rng);
        queue.push(std::move(st));
    }

    // Per-operation admission throttle: concurrent tenants never start the
    // same operation within op_spacing_s of each other.
    std::map<std::string, std::int64_t> last_op_start;
    const std::int64_t spacing = us(cfg.op_spacing_s);

    while (!queue.empty()) {
        TenantState st = queue.top();
        queue.pop();
        if (st.ready_us >= cfg.duration_us) continue;

        const std::string& op_name = st.profile->ops[st.op_idx % st.profile->ops.size()];
        const OpTemplate* op = cfg.catalog.find(op_name);
        if (!op) throw InvalidConfig("profile op '" + op_name + "' missing from catalog");

        std::int64_t start = st.ready_us;
        auto slot = last_op_start.find(op_name);
        if (slot != last_op_start.end() && start < slot->second + spacing)
            start = slot->second + spacing;
        if (start >= cfg.duration_us) {
            // Throttled past the horizon: this tenant is done.
            continue;
        }
        last_op_start[op_name] = start;
        ++st.op_idx;

        char sid[64];
        std::snprintf(sid, sizeof sid, "t%02d-s%03d-%s", st.tenant, st.seq++, op_name.c_str());
        auto mat = materialize_op(*op, *st.rng, start, sid, project_id);

        PendingSession ps;
        ps.id = sid;
        ps.tenant = st.tenant;
        ps.op = op_name;
        ps.head_type = mat.events.size() > 1 ? mat.events[1].event.etype.canonical() : "";
        ps.start_us = start;
        ps.end_us = mat.end_us;
        ps.first_emitted = all.size();
        ps.count = mat.events.size();
        sessions.push_back(std::move(ps));

        for (auto& e : mat.events) all.push_back(std::move(e));
        st.ready_us = mat.end_us + us(st.rng->real(st.profile->think_min_s, st.profile->think_max_s));
        queue.push(std::move(st));
    }

    for (std::size_t b = 0; b < cfg.catalog.beacons.size(); ++b) {
        const auto& beacon = cfg.catalog.beacons[b];
        Rng rng(derive_seed(cfg.seed, 5000 + b));
        std::int64_t t = us(rng.real(0.0, beacon.period_max_s));
        while (t < cfg.duration_us) {
            Event e;
            e.ts_us = t;
            e.kind = EventKind::Rpc;
            e.etype = {beacon.service, beacon.method};
            fill_beacon_body(e, rng, project_id);
            all.push_back({std::move(e), "beacon:" + beacon.service + "_" + beacon.method});
            t += us(rng.real(beacon.period_min_s, beacon.period_max_s));
        }
    }

    // Stable sort keeps the scheduling order on timestamp ties.
    std::vector<std::size_t> order(all.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return all[a].event.ts_us < all[b].event.ts_us;
    });

    Trace trace;
    trace.trace_id = "trace";
    GroundTruth truth;
    truth.t_start_us = 0;
    std::vector<std::size_t> position_of(all.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        position_of[order[i]] = i;
        trace.events.push_back(std::move(all[order[i]].event));
        truth.session_of_event.push_back(std::move(all[order[i]].session));
    }

    for (const auto& ps : sessions) {
        SessionSummary s;
        s.id = ps.id;
        s.tenant = ps.tenant;
        s.op = ps.op;
        s.head_type = ps.head_type;
        s.start_us = ps.start_us;
        s.end_us = ps.end_us;
        s.rest_event = position_of[ps.first_emitted];
        for (std::size_t k = 1; k < ps.count; ++k)
            s.rpc_events.push_back(position_of[ps.first_emitted + k]);
        std::sort(s.rpc_events.begin(), s.rpc_events.end());
        truth.sessions.push_back(std::move(s));
    }
    std::sort(truth.sessions.begin(), truth.sessions.end(),
              [](const SessionSummary& a, const SessionSummary& b) { return a.id < b.id; });

    return {std::move(trace), std::move(truth)};
}

std::pair<Trace, GroundTruth> inject(const WorkloadConfig& cfg, const FaultSpec& fault) {
    auto [trace, truth] = generate(cfg);
    truth.fault = fault;

    FaultEffect effect;

    // Locate the target session by op, tenant and activation time.
    const SessionSummary* target = nullptr;
    for (const auto& s : truth.sessions) {
        if (s.op == fault.target_op && s.tenant == fault.target_tenant &&
            fault.activation_us >= s.start_us && fault.activation_us <= s.end_us) {
            target = &s;
            break;
        }
    }
    if (!target)
        throw UnknownTarget("no scheduled occurrence of '" + fault.target_op + "' for tenant " +
                            std::to_string(fault.target_tenant) + " spans activation " +
                            std::to_string(fault.activation_us));

    effect.session_id = target->id;
    effect.chain_head_type = target->head_type;

    Rng rng(derive_seed(cfg.seed, 77000 + static_cast<std::uint64_t>(fault.activation_us) +
                                      static_cast<std::uint64_t>(fault.target_tenant) * 131));

    if (rng.chance(cfg.benign_prob)) {
        effect.benign = true;
        truth.effect = effect;
        return {std::move(trace), std::move(truth)};
    }

    std::vector<std::size_t> post;  // target session RPC events after the activation point
    for (auto idx : target->rpc_events)
        if (trace.events[idx].ts_us > fault.activation_us) post.push_back(idx);
    effect.head_removed =
        !target->rpc_events.empty() && !post.empty() && post.front() == target->rpc_events.front();

    std::set<std::size_t> to_remove;
    auto truncate = [&] {
        for (auto idx : post) {
            to_remove.insert(idx);
            effect.removed.push_back(
                {trace.events[idx].ts_us, trace.events[idx].etype.canonical()});
        }
    };

    bool swapped = false;
    switch (fault.kind) {
        case FaultKind::ThrowException: {
            truncate();
            Event& rest = trace.events[target->rest_event];
            rest.status = 500;
            rest.ts_us = fault.activation_us +
                         us(rng.real(cfg.rest_error_delay_min_s, cfg.rest_error_delay_max_s));
            effect.rest_error_ts = rest.ts_us;
            break;
        }
        case FaultKind::WrongReturn:
            truncate();
            break;
        case FaultKind::WrongParam: {
            const bool try_swap = rng.chance(0.5);
            if (try_swap) {
                // Corrupted parameters surface on the mandatory calls; swap a
                // pair of distinct core-typed events.
                const OpTemplate* op_t = cfg.catalog.find(fault.target_op);
                const auto cores = op_t ? core_types(*op_t) : std::set<std::string>{};
                std::vector<std::pair<std::size_t, std::size_t>> pairs;
                for (std::size_t a = 0; a < post.size(); ++a)
                    for (std::size_t b = a + 1; b < post.size(); ++b)
                        if (!(trace.events[post[a]].etype == trace.events[post[b]].etype) &&
                            cores.count(trace.events[post[a]].etype.canonical()) &&
                            cores.count(trace.events[post[b]].etype.canonical()))
                            pairs.emplace_back(post[a], post[b]);
                if (!pairs.empty()) {
                    const auto& [ia, ib] = pairs[static_cast<std::size_t>(
                        rng.integer(0, static_cast<std::int64_t>(pairs.size()) - 1))];
                    std::swap(trace.events[ia].ts_us, trace.events[ib].ts_us);
                    // entries carry the post-swap placement, earlier slot first
                    effect.swapped = {{trace.events[ib].ts_us, trace.events[ib].etype.canonical()},
                                      {trace.events[ia].ts_us, trace.events[ia].etype.canonical()}};
                    swapped = true;
                } else {
                    effect.swap_degraded = true;
                }
            }
            if (!swapped) truncate();
            break;
        }
    }

    if (!effect.removed.empty() || swapped || effect.rest_error_ts) {
        std::int64_t first = std::numeric_limits<std::int64_t>::max();
        for (const auto& r : effect.removed) first = std::min(first, r.ts_us);
        if (effect.swapped)
            first = std::min(first,
                             std::min(effect.swapped->first.ts_us, effect.swapped->second.ts_us));
        if (effect.rest_error_ts) first = std::min(first, *effect.rest_error_ts);
        truth.first_failure_us = first;
    } else {
        effect.benign = true;  // nothing observable changed
    }

    // Rebuild the trace: drop removed events, restore timestamp order, and
    // remap the session bookkeeping onto the new indices.
    std::vector<Emitted> kept;
    kept.reserve(trace.events.size());
    for (std::size_t i = 0; i < trace.events.size(); ++i) {
        if (to_remove.count(i)) continue;
        kept.push_back({std::move(trace.events[i]), std::move(truth.session_of_event[i])});
    }
    std::stable_sort(kept.begin(), kept.end(), [](const Emitted& a, const Emitted& b) {
        return a.event.ts_us < b.event.ts_us;
    });

    Trace rebuilt;
    rebuilt.trace_id = trace.trace_id;
    GroundTruth new_truth;
    new_truth.t_start_us = truth.t_start_us;
    new_truth.fault = truth.fault;
    new_truth.first_failure_us = truth.first_failure_us;
    for (auto& e : kept) {
        rebuilt.events.push_back(std::move(e.event));
        new_truth.session_of_event.push_back(std::move(e.session));
    }

    std::map<std::string, SessionSummary> by_id;
    for (const auto& s : truth.sessions) {
        SessionSummary copy;
        copy.id = s.id;
        copy.tenant = s.tenant;
        copy.op = s.op;
        copy.head_type = s.head_type;
        copy.start_us = s.start_us;
        copy.end_us = s.end_us;
        by_id[s.id] = std::move(copy);
    }
    for (std::size_t i = 0; i < rebuilt.events.size(); ++i) {
        auto it = by_id.find(new_truth.session_of_event[i]);
        if (it == by_id.end()) continue;
        if (rebuilt.events[i].kind == EventKind::Rest)
            it->second.rest_event = i;
        else
            it->second.rpc_events.push_back(i);
    }
    for (auto& [_, s] : by_id) new_truth.sessions.push_back(std::move(s));

    new_truth.effect = std::move(effect);
    return {std::move(rebuilt), std::move(new_truth)};
}

FaultSpec sample_fault(const WorkloadConfig& cfg, std::uint64_t campaign_seed, int index) {
    Rng rng(derive_seed(campaign_seed, 31000 + static_cast<std::uint64_t>(index)));

    // Covered operations: everything some assigned tenant actually runs.
    const auto assignment = cfg.profile_assignment.empty()
                                ? default_profile_assignment(cfg.tenants)
                                : cfg.profile_assignment;
    std::set<std::string> covered;
    for (const auto& profile : assignment)
        for (const auto& op : profile_ops(profile)) covered.insert(op);
    if (covered.empty()) throw InvalidConfig("no covered operations to target");

    const std::vector<std::string> ops(covered.begin(), covered.end());
    const FaultKind kinds[] = {FaultKind::ThrowException, FaultKind::WrongReturn,
                               FaultKind::WrongParam};

    FaultSpec fault;
    fault.kind = kinds[rng.integer(0, 2)];
    fault.target_op =
        ops[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(ops.size()) - 1))];

    // Inject mid-trace: every experiment hits a comparable workload phase, so
    // detection-latency comparisons measure the detectors, not fault timing.
    auto [trace, truth] = generate(cfg);
    const SessionSummary* session = nullptr;
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (const auto& s : truth.sessions) {
        if (s.op != fault.target_op || s.rpc_events.empty()) continue;
        const std::int64_t distance = std::llabs(s.start_us - cfg.duration_us / 2);
        if (distance < best) {
            best = distance;
            session = &s;
        }
    }
    if (!session)
        throw UnknownTarget("operation '" + fault.target_op + "' never runs under this config");
    fault.target_tenant = session->tenant;

    // Activation point: occasionally before the head (killing the whole
    // chain), otherwise just before one of the session's mandatory calls so
    // the truncation always hits a core event.
    const OpTemplate* op_t = cfg.catalog.find(fault.target_op);
    const auto cores = op_t ? core_types(*op_t) : std::set<std::string>{};
    std::vector<std::size_t> positions;  // indices into session->rpc_events
    for (std::size_t k = 1; k < session->rpc_events.size(); ++k)
        if (cores.count(trace.events[session->rpc_events[k]].etype.canonical()))
            positions.push_back(k);

    std::size_t cut_before = 0;  // 0 = before the head
    if (!positions.empty() && !rng.chance(0.15))
        cut_before = positions[static_cast<std::size_t>(
            rng.integer(0, static_cast<std::int64_t>(positions.size()) - 1))];
    const std::int64_t before =
        cut_before == 0 ? session->start_us
                        : trace.events[session->rpc_events[cut_before - 1]].ts_us;
    const std::int64_t after = trace.events[session->rpc_events[cut_before]].ts_us;
    fault.activation_us = before + (after - before) / 2;
    return fault;
}

void write_catalog(const TemplateCatalog& catalog, const std::filesystem::path& path) {
    ojson j;
    j["ops"] = ojson::array();
    for (const auto& op : catalog.ops) {
        ojson jo;
        jo["name"] = op.name;
        jo["subsystem"] = op.subsystem;
        jo["rest_service"] = op.rest_service;
        jo["rest_method"] = op.rest_method;
        jo["rest_status"] = op.rest_status;
        jo["self_global"] = op.self_global;
        jo["steps"] = ojson::array();
        for (const auto& s : op.steps) {
            ojson js;
            js["service"] = s.service;
            js["method"] = s.method;
            js["req_group"] = s.req_group;
            js["carries_global"] = s.carries_global;
            js["presence_p"] = s.presence_p;
            js["pos_min_s"] = s.pos_min_s;
            js["pos_max_s"] = s.pos_max_s;
            jo["steps"].push_back(std::move(js));
        }
        if (op.has_probes) {
            ojson jp;
            jp["service"] = op.probe_service;
            jp["method"] = op.probe_method;
            jp["min"] = op.probe_min;
            jp["start_s"] = op.probe_start_s;
            jp["pace_s"] = op.probe_pace_s;
            jp["extra_mean"] = op.probe_extra_mean;
            jp["extra_cap"] = op.probe_extra_cap;
            jo["probes"] = std::move(jp);
        }
        j["ops"].push_back(std::move(jo));
    }
    j["beacons"] = ojson::array();
    for (const auto& b : catalog.beacons) {
        ojson jb;
        jb["service"] = b.service;
        jb["method"] = b.method;
        jb["period_min_s"] = b.period_min_s;
        jb["period_max_s"] = b.period_max_s;
        j["beacons"].push_back(std::move(jb));
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

TemplateCatalog load_catalog(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    njson j = njson::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw MalformedLine(1, "template catalog is not a JSON object");

    TemplateCatalog c;
    for (const auto& jo : j.value("ops", njson::array())) {
        OpTemplate op;
        op.name = jo.at("name").get<std::string>();
        op.subsystem = jo.value("subsystem", "nova");
        op.rest_service = jo.at("rest_service").get<std::string>();
        op.rest_method = jo.at("rest_method").get<std::string>();
        op.rest_status = jo.value("rest_status", 202);
        op.self_global = jo.value("self_global", false);
        for (const auto& js : jo.value("steps", njson::array())) {
            StepTemplate s;
            s.service = js.at("service").get<std::string>();
            s.method = js.at("method").get<std::string>();
            s.req_group = js.value("req_group", 0);
            s.carries_global = js.value("carries_global", false);
            s.presence_p = js.value("presence_p", 1.0);
            s.pos_min_s = js.value("pos_min_s", 0.0);
            s.pos_max_s = js.value("pos_max_s", 0.0);
            op.steps.push_back(std::move(s));
        }
        if (jo.contains("probes")) {
            const auto& jp = jo.at("probes");
            op.has_probes = true;
            op.probe_service = jp.at("service").get<std::string>();
            op.probe_method = jp.at("method").get<std::string>();
            op.probe_min = jp.value("min", 6);
            op.probe_start_s = jp.value("start_s", 5.5);
            op.probe_pace_s = jp.value("pace_s", 1.25);
            op.probe_extra_mean = jp.value("extra_mean", 3.5);
            op.probe_extra_cap = jp.value("extra_cap", 10);
        }
        c.ops.push_back(std::move(op));
    }
    for (const auto& jb : j.value("beacons", njson::array())) {
        BeaconTemplate b;
        b.service = jb.at("service").get<std::string>();
        b.method = jb.at("method").get<std::string>();
        b.period_min_s = jb.value("period_min_s", 8.0);
        b.period_max_s = jb.value("period_max_s", 12.0);
        c.beacons.push_back(std::move(b));
    }
    return c;
}

void write_ground_truth_debug(const GroundTruth& truth, const std::filesystem::path& path) {
    ojson j;
    j["t_start_us"] = truth.t_start_us;
    j["session_of_event"] = truth.session_of_event;
    j["sessions"] = ojson::array();
    for (const auto& s : truth.sessions) {
        ojson js;
        js["id"] = s.id;
        js["tenant"] = s.tenant;
        js["op"] = s.op;
        js["head_type"] = s.head_type;
        js["start_us"] = s.start_us;
        js["end_us"] = s.end_us;
        js["rest_event"] = s.rest_event;
        js["rpc_events"] = s.rpc_events;
        j["sessions"].push_back(std::move(js));
    }
    if (truth.effect) {
        const auto& e = *truth.effect;
        ojson je;
        je["benign"] = e.benign;
        je["head_removed"] = e.head_removed;
        je["swap_degraded"] = e.swap_degraded;
        je["session_id"] = e.session_id;
        je["chain_head_type"] = e.chain_head_type;
        je["removed"] = ojson::array();
        for (const auto& r : e.removed)
            je["removed"].push_back(ojson{{"ts_us", r.ts_us}, {"etype", r.etype}});
        if (e.swapped) {
            je["swapped"] = ojson::array();
            je["swapped"].push_back(
                ojson{{"ts_us", e.swapped->first.ts_us}, {"etype", e.swapped->first.etype}});
            je["swapped"].push_back(
                ojson{{"ts_us", e.swapped->second.ts_us}, {"etype", e.swapped->second.etype}});
        } else {
            je["swapped"] = nullptr;
        }
        if (e.rest_error_ts)
            je["rest_error_ts"] = *e.rest_error_ts;
        else
            je["rest_error_ts"] = nullptr;
        j["effect"] = std::move(je);
    } else {
        j["effect"] = nullptr;
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

GroundTruth load_ground_truth_debug(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    njson j = njson::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw MalformedLine(1, "ground-truth debug file is not a JSON object");

    GroundTruth truth;
    truth.t_start_us = j.value("t_start_us", 0);
    for (const auto& s : j.value("session_of_event", njson::array()))
        truth.session_of_event.push_back(s.get<std::string>());
    for (const auto& js : j.value("sessions", njson::array())) {
        SessionSummary s;
        s.id = js.at("id").get<std::string>();
        s.tenant = js.at("tenant").get<int>();
        s.op = js.at("op").get<std::string>();
        s.head_type = js.at("head_type").get<std::string>();
        s.start_us = js.at("start_us").get<std::int64_t>();
        s.end_us = js.at("end_us").get<std::int64_t>();
        s.rest_event = js.at("rest_event").get<std::size_t>();
        for (const auto& r : js.at("rpc_events")) s.rpc_events.push_back(r.get<std::size_t>());
        truth.sessions.push_back(std::move(s));
    }
    if (j.contains("effect") && !j["effect"].is_null()) {
        const auto& je = j["effect"];
        FaultEffect e;
        e.benign = je.value("benign", false);
        e.head_removed = je.value("head_removed", false);
        e.swap_degraded = je.value("swap_degraded", false);
        e.session_id = je.value("session_id", "");
        e.chain_head_type = je.value("chain_head_type", "");
        for (const auto& r : je.value("removed", njson::array()))
            e.removed.push_back(
                {r.at("ts_us").get<std::int64_t>(), r.at("etype").get<std::string>()});
        if (je.contains("swapped") && !je["swapped"].is_null()) {
            const auto& sw = je["swapped"];
            e.swapped = {
                {sw[0].at("ts_us").get<std::int64_t>(), sw[0].at("etype").get<std::string>()},
                {sw[1].at("ts_us").get<std::int64_t>(), sw[1].at("etype").get<std::string>()}};
        }
        if (je.contains("rest_error_ts") && !je["rest_error_ts"].is_null())
            e.rest_error_ts = je["rest_error_ts"].get<std::int64_t>();
        truth.effect = std::move(e);
    }
    return truth;
}

}  // namespace tracemon
