#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tracemon/event.hpp"
#include "tracemon/experiment.hpp"

namespace tracemon {

// One RPC message template inside an operation. The first step is the chain
// head (position 0); every other step lands at a uniform draw from its
// position range (seconds after the head) and optional steps (presence_p < 1)
// are skipped per session. req_group 0 events share the session's primary
// request id, group 1 events share a secondary id and propagate the primary
// one through global_request_id. Two steps with overlapping position ranges
// arrive in either order (asynchronous agents).
struct StepTemplate {
    std::string service;
    std::string method;
    int req_group = 0;
    bool carries_global = false;
    double presence_p = 1.0;
    double pos_min_s = 0.0;  // offset range from the chain head
    double pos_max_s = 0.0;
};

struct OpTemplate {
    std::string name;
    std::string subsystem;  // nova | cinder | neutron
    std::string rest_service;
    std::string rest_method;
    int rest_status = 202;
    std::vector<StepTemplate> steps;   // steps[0] is the head
    bool self_global = false;  // single-event ops: global_request_id = request_id

    // Repeated probe tail (COUNT-style operations such as the SSH ping),
    // fixed-paced so window truncation depends only on the repetition count.
    bool has_probes = false;
    std::string probe_service;
    std::string probe_method;
    int probe_min = 6;
    double probe_start_s = 5.5;
    double probe_pace_s = 1.25;
    double probe_extra_mean = 3.5;  // probes = min + min(Poisson(mean), extra_cap)
    int probe_extra_cap = 10;
};

struct BeaconTemplate {
    std::string service;
    std::string method;
    double period_min_s = 8.0;
    double period_max_s = 12.0;
};

struct TemplateCatalog {
    std::vector<OpTemplate> ops;
    std::vector<BeaconTemplate> beacons;

    static TemplateCatalog defaults();
    const OpTemplate* find(const std::string& name) const;
};

void write_catalog(const TemplateCatalog& catalog, const std::filesystem::path& path);
TemplateCatalog load_catalog(const std::filesystem::path& path);

struct WorkloadConfig {
    int tenants = 10;
    std::vector<std::string> profile_assignment;  // empty -> the reference ten-tenant mix
    std::int64_t duration_us = 960'000'000;
    std::uint64_t seed = 1;
    TemplateCatalog catalog = TemplateCatalog::defaults();
    double benign_prob = 0.2;
    double rest_error_delay_min_s = 20.0;  // THROW: backend retries before the 5xx surfaces
    double rest_error_delay_max_s = 60.0;
    double start_stagger_max_s = 15.0;
    double op_spacing_s = 36.0;  // per-operation admission throttle across tenants
};

// Default tenant -> profile mix: six tenant profiles with Volume Only,
// Network Only, Instance before Volume and Volume before Instance doubled.
std::vector<std::string> default_profile_assignment(int tenants);
const std::vector<std::string>& profile_names();
const std::vector<std::string>& profile_ops(const std::string& profile);

struct SessionSummary {
    std::string id;
    int tenant = 0;
    std::string op;
    std::string head_type;                // canonical type of the chain head
    std::vector<std::size_t> rpc_events;  // indices into the trace, ascending ts
    std::size_t rest_event = 0;
    std::int64_t start_us = 0;  // REST call time
    std::int64_t end_us = 0;    // last RPC event time
};

struct RemovedEvent {
    std::int64_t ts_us = 0;
    std::string etype;
};

// What the injection actually did to the schedule (ground truth for tests).
struct FaultEffect {
    bool benign = false;
    bool head_removed = false;
    bool swap_degraded = false;
    std::string session_id;
    std::string chain_head_type;
    std::vector<RemovedEvent> removed;
    std::optional<std::pair<RemovedEvent, RemovedEvent>> swapped;
    std::optional<std::int64_t> rest_error_ts;
};

struct GroundTruth {
    std::int64_t t_start_us = 0;
    std::optional<FaultSpec> fault;
    std::optional<std::int64_t> first_failure_us;
    std::vector<std::string> session_of_event;  // aligned with the trace, hidden id(.)
    std::vector<SessionSummary> sessions;
    std::optional<FaultEffect> effect;
};

// Deterministic fault-free generation for a fixed config/seed.
std::pair<Trace, GroundTruth> generate(const WorkloadConfig& cfg);

// Generate, then apply the fault as a pure transformation of the fault-free
// schedule (removing the fault reproduces the fault-free trace bit for bit).
std::pair<Trace, GroundTruth> inject(const WorkloadConfig& cfg, const FaultSpec& fault);

// Sample a fault uniformly over kinds x covered operations for experiment
// `index` of a campaign (deterministic per campaign seed).
FaultSpec sample_fault(const WorkloadConfig& cfg, std::uint64_t campaign_seed, int index);

void write_ground_truth_debug(const GroundTruth& truth, const std::filesystem::path& path);
GroundTruth load_ground_truth_debug(const std::filesystem::path& path);

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace tracemon
