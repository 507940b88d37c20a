#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "doctest.h"
#include "experiment.hpp"

using namespace adaptnet;
using namespace adaptnet::cli;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("adaptnet_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string write(const std::string& name, const Json& j) const {
    std::ofstream(path / name) << j.dump(2);
    return (path / name).string();
  }
};

Json tiny() {
  return Json::parse(R"({
    "name": "tiny", "seed": 3,
    "topology": {"kind": "complete", "n": 2},
    "model": {"kind": "identity", "M": 2, "noise": {"profile": "values", "values": [0.01, 0.02]}},
    "policy": {"rule": "metropolis"},
    "strategy": "atc",
    "step_size": {"mu": 0.01},
    "sim": {"trials": 2, "iters": 10}
  })");
}

Json canonical_single() {
  return Json::parse(R"({
    "topology": {"kind": "ring", "n": 1},
    "model": {"kind": "identity", "M": 10, "w_star": [1,1,1,1,1,1,1,1,1,1],
              "noise": {"profile": "values", "values": [0.1]}},
    "policy": {"rule": "metropolis"},
    "step_size": {"mu": 0.001}
  })");
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("presets round-trip") {
    for (const auto& name : preset_names()) {
      const ExperimentConfig c = preset(name);
      const Json j = to_json(c);
      CHECK(to_json(config_from_json(j)) == j);
      TempDir d;
      std::ostringstream err;
      const auto out = (d.path / (name + ".json")).string();
      CHECK(cmd_preset(name, out, err) == kExitOk);
      CHECK(to_json(load_config(out)) == j);
    }
  }

  TEST_CASE("preset contents") {
    const auto f = preset("fig4");
    CHECK(f.topology.n == 30);
    CHECK(f.model.m == 10);
    CHECK(f.step.mu == 5e-4);
    CHECK(f.policy.rule == "hastings_optimal");
    CHECK(f.strategy == StrategyKind::kAtc);
    CHECK(f.sim.trials == 200);

    const auto e = build_experiment(preset("partial_obs"));
    CHECK(e.model.agents() == 2);
    for (std::size_t k = 0; k < 2; ++k) CHECK(min_symmetric_eigenvalue(e.model.agent(k).r_u) == 0.0);
    CHECK(check_network_observability(e.model, e.perron.p).ok);

    const auto ti = preset("topology_invariance");
    REQUIRE(ti.compare_topologies.size() == 1);
    const auto a = build_experiment(ti);
    const auto b = build_experiment(ti, ti.compare_topologies[0]);
    CHECK(a.topology.size() == b.topology.size());
    CHECK_FALSE(a.topology == b.topology);
    CHECK((a.perron.theta - b.perron.theta).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(a.theory.msd_first_order - b.theory.msd_first_order) <= 1e-12 * a.theory.msd_first_order);
  }

  TEST_CASE("missing config exits 3") {
    std::ostringstream out, err;
    CHECK(cmd_run("/nonexistent/config.json", "/tmp", {}, out, err) == kExitConfig);
    CHECK(err.str().find("cannot open") != std::string::npos);
    CHECK(cmd_theory("/nonexistent/config.json", out, err) == kExitConfig);
  }

  TEST_CASE("malformed config exits 3") {
    TempDir d;
    Json j = tiny();
    j["policy"]["rule"] = "random";
    std::ostringstream out, err;
    CHECK(cmd_theory(d.write("bad.json", j), out, err) == kExitConfig);
    j = tiny();
    j.erase("topology");
    CHECK(cmd_theory(d.write("bad2.json", j), out, err) == kExitConfig);
    std::ofstream(d.path / "junk.json") << "{ not json";
    CHECK(cmd_theory((d.path / "junk.json").string(), out, err) == kExitConfig);
  }

  TEST_CASE("tiny run writes three files and matches cmd_theory") {
    TempDir d;
    const auto cfg = d.write("tiny.json", tiny());
    std::ostringstream out, err;
    const auto dir = (d.path / "out").string();
    REQUIRE(cmd_run(cfg, dir, {}, out, err) == kExitOk);
    for (const char* f : {"curves.csv", "report.json", "theory.json"}) CHECK(fs::exists(d.path / "out" / f));

    std::ostringstream theory_out;
    REQUIRE(cmd_theory(cfg, theory_out, err) == kExitOk);
    const Json printed = Json::parse(theory_out.str());
    Json report;
    std::ifstream(d.path / "out" / "report.json") >> report;
    CHECK(printed == report["theory"]);
    CHECK(printed.dump() == report["theory"].dump());
    CHECK(report["summary"]["agents"].size() == 2);
    CHECK(report["config"]["sim"]["iters"] == 10);
  }

  TEST_CASE("overrides") {
    TempDir d;
    const auto cfg = d.write("tiny.json", tiny());
    std::ostringstream out, err;
    RunOverrides o;
    o.trials = 3;
    o.iters = 20;
    o.seed = 99;
    o.strategy = "consensus";
    REQUIRE(cmd_run(cfg, d.path.string(), o, out, err) == kExitOk);
    Json report;
    std::ifstream(d.path / "report.json") >> report;
    CHECK(report["summary"]["trials"] == 3);
    CHECK(report["summary"]["iters"] == 20);
    CHECK(report["summary"]["seed"] == 99);
    CHECK(report["theory"]["strategy"] == "consensus");
    o.strategy = "gossip";
    CHECK(cmd_run(cfg, d.path.string(), o, out, err) == kExitConfig);
  }

  TEST_CASE("canonical single agent theory") {
    TempDir d;
    std::ostringstream out, err;
    REQUIRE(cmd_theory(d.write("one.json", canonical_single()), out, err) == kExitOk);
    const Json j = Json::parse(out.str());
    CHECK(j["msd_first_order"].get<double>() == Approx(1e-3).epsilon(1e-13));
  }

  TEST_CASE("doubly stochastic policy reports uniform p") {
    TempDir d;
    Json j = tiny();
    j["topology"] = {{"kind", "ring"}, {"n", 6}};
    j["model"]["noise"] = {{"profile", "log_uniform"}, {"min", 1e-3}, {"max", 1e-1}};
    std::ostringstream out, err;
    REQUIRE(cmd_theory(d.write("ring.json", j), out, err) == kExitOk);
    for (const auto& p : Json::parse(out.str())["p"]) CHECK(p.get<double>() == Approx(1.0 / 6.0).epsilon(1e-12));
  }

  TEST_CASE("unstable step size exits 2 with the bound") {
    TempDir d;
    Json j = tiny();
    j["step_size"]["mu"] = 0.5;
    const auto cfg = d.write("fast.json", j);
    std::ostringstream out, err;
    CHECK(cmd_theory(cfg, out, err) == kExitUnstable);
    CHECK(err.str().find("stable step bound") != std::string::npos);
    std::ostringstream out2, err2;
    CHECK(cmd_run(cfg, (d.path / "o").string(), {}, out2, err2) == kExitUnstable);
    CHECK_FALSE(fs::exists(d.path / "o" / "report.json"));
  }

  TEST_CASE("divergence exits 2") {
    TempDir d;
    Json j = tiny();
    j["step_size"]["mu"] = 3.0;
    j["allow_unstable"] = true;
    j["sim"]["iters"] = 500;
    std::ostringstream out, err;
    CHECK(cmd_run(d.write("div.json", j), d.path.string(), {}, out, err) == kExitUnstable);
    CHECK(err.str().find("trial") != std::string::npos);
  }

  TEST_CASE("fig4 pipeline") {
    TempDir d;
    std::ostringstream out, err;
    const auto cfg = (d.path / "fig4.json").string();
    REQUIRE(cmd_preset("fig4", cfg, err) == kExitOk);
    RunOverrides o;
    o.trials = 4;
    REQUIRE(cmd_run(cfg, d.path.string(), o, out, err) == kExitOk);
    Json report;
    std::ifstream(d.path / "report.json") >> report;
    const auto& agents = report["summary"]["agents"];
    REQUIRE(agents.size() == 30);
    for (const auto& a : agents) {
      CHECK(a.contains("delta_theory_db"));
      CHECK(std::abs(a["delta_theory_db"].get<double>()) < 3.0);
    }
  }

  TEST_CASE("topology comparison block") {
    TempDir d;
    ExperimentConfig c = preset("topology_invariance");
    c.sim.trials = 4;
    const auto cfg = d.write("ti.json", to_json(c));
    std::ostringstream out, err;
    REQUIRE(cmd_run(cfg, d.path.string(), {}, out, err) == kExitOk);
    Json report;
    std::ifstream(d.path / "report.json") >> report;
    REQUIRE(report["topology_comparison"].size() == 2);
    const double a = report["topology_comparison"][0]["msd_theory"].get<double>();
    const double b = report["topology_comparison"][1]["msd_theory"].get<double>();
    CHECK(std::abs(a - b) <= 1e-12 * a);
  }
}
