// Exercises the installed binary: exit codes, the single-experiment injector
// and the --follow tail mode with its wall-clock-mapped timers.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "tracemon/trace_io.hpp"
#include "tracemon/workload.hpp"

using namespace tracemon;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(TRACEMON_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("tracemon_cli_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("usage and data errors map to exit codes 1 and 2") {
    TempDir dir;
    CHECK(run_cli("no-such-subcommand") == 1);
    CHECK(run_cli("mine") == 1);  // missing required --traces
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("mine --traces " + (dir.path / "missing").string()) == 2);
}

TEST_CASE("single-experiment injection writes the full layout") {
    TempDir dir;
    // aim at a concrete occurrence from the deterministic schedule
    WorkloadConfig cfg;
    cfg.duration_us = 240'000'000;
    cfg.seed = 1;
    const FaultSpec fault = sample_fault(cfg, 5, 0);

    const std::string exp = (dir.path / "exp").string();
    const int code = run_cli("inject --out " + exp + " --duration-s 240 --seed 1 --kind " +
                             to_string(fault.kind) + " --target-op " + fault.target_op +
                             " --target-tenant " + std::to_string(fault.target_tenant) +
                             " --activation-s " +
                             std::to_string(fault.activation_us / 1e6));
    CHECK(code == 0);
    CHECK(fs::exists(fs::path(exp) / "trace.jsonl"));
    CHECK(fs::exists(fs::path(exp) / "experiment.json"));
    const auto rec = load_experiment(fs::path(exp) / "experiment.json");
    REQUIRE(rec.fault.has_value());
    CHECK(rec.fault->target_op == fault.target_op);
}

TEST_CASE("follow mode expires timers from wall-clock-mapped trace time") {
    TempDir dir;

    // one rule with a 1-second window so the timeout fires quickly
    RuleSet rs;
    rs.delta_t_us = 1'000'000;
    MonitoringRule rule;
    rule.id = "svc_head";
    rule.kind = RuleKind::Ord;
    rule.head = {"svc", "head"};
    rule.body = {{"svc", "follow"}};
    rule.delta_t_us = rs.delta_t_us;
    rs.rules = {rule};
    const auto rules_path = dir.path / "rules.json";
    write_ruleset(rs, rules_path);

    Trace t;
    Event head;
    head.ts_us = 0;
    head.kind = EventKind::Rpc;
    head.etype = {"svc", "head"};
    t.events = {head};  // the follower never arrives
    const auto trace_path = dir.path / "live.jsonl";
    write_trace(t, trace_path);

    const auto alerts_path = dir.path / "alerts.jsonl";
    const int code = run_cli("monitor --approach mr --rules " + rules_path.string() +
                             " --input " + trace_path.string() + " --alerts " +
                             alerts_path.string() + " --follow --idle-timeout-s 2.5");
    CHECK(code == 0);
    const auto alerts = load_alerts(alerts_path);
    REQUIRE(alerts.size() == 1);
    CHECK(alerts[0].rule_id == "svc_head");
    CHECK(alerts[0].violation == Violation::Timeout);
    CHECK(alerts[0].ts_us == 1'000'000);
}
