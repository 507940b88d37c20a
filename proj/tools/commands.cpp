#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "adaptnet/error.hpp"

namespace adaptnet::cli {
namespace {

namespace fs = std::filesystem;

bool unstable(const Experiment& e) { return !(e.theory.mu_max < e.theory.mu_bound); }

void report_unstable(const Experiment& e, std::ostream& err) {
  err << "error: mu_max = " << std::setprecision(6) << e.theory.mu_max
      << " is not below the stable step bound " << e.theory.mu_bound
      << " (set allow_unstable to run anyway)\n";
}

void write_json(const fs::path& path, const Json& j) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::kConfig, "cannot write '" + path.string() + "'");
  os << j.dump(2) << '\n';
}

LearningCurves simulate(const Experiment& e) {
  RunInputs inputs{e.policy, e.perron, e.model, std::nullopt, e.theory.mu_bound};
  return run(inputs, e.sim);
}

double mean_steady_msd(const LearningCurves& curves) {
  double s = 0.0;
  for (const auto& st : curves.steady_msd) s += st.mean;
  return s / static_cast<double>(curves.steady_msd.size());
}

Json decomposition_json(const DecompositionReport& d) {
  Json agents = Json::array();
  for (std::size_t k = 0; k < d.agents.size(); ++k) {
    const auto& a = d.agents[k];
    agents.push_back({{"agent", k}, {"offset", a.offset}, {"msd", a.msd}, {"ratio", a.ratio}});
  }
  return {{"agents", agents}};
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUnstable;
  } catch (const StabilityError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUnstable;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace

void apply_overrides(ExperimentConfig& c, const RunOverrides& o) {
  if (o.trials) c.sim.trials = *o.trials;
  if (o.iters) c.sim.iters = *o.iters;
  if (o.seed) {
    c.seed = *o.seed;
    c.sim.seed = *o.seed;
  }
  if (o.strategy) {
    c.strategy = strategy_from_string(*o.strategy);
    if (c.strategy == StrategyKind::kCustom) {
      throw Error(ErrorKind::kConfig, "strategy must be consensus, atc or cta");
    }
  }
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const RunOverrides& overrides, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ExperimentConfig c = load_config(config_path);
    apply_overrides(c, overrides);
    Experiment e = build_experiment(c);
    if (unstable(e) && !c.allow_unstable) {
      report_unstable(e, err);
      return kExitUnstable;
    }
    e.sim.validate();

    const LearningCurves curves = simulate(e);
    const fs::path dir(out_dir);
    fs::create_directories(dir);

    Json resolved = to_json(c);
    resolved["sim"]["iters"] = e.sim.iters;
    Json report;
    report["config"] = resolved;
    report["theory"] = theory_json(e);
    report["summary"] = summary_json(curves, &e.theory);
    report["decomposition"] = decomposition_json(decomposition_diagnostics(curves));

    if (!c.compare_topologies.empty()) {
      Json cmp = Json::array();
      cmp.push_back({{"topology", to_json(e.topology)},
                     {"msd_theory", e.theory.msd_first_order},
                     {"msd_theory_db", to_db(e.theory.msd_first_order)},
                     {"msd_empirical_db", to_db(mean_steady_msd(curves))}});
      for (const auto& spec : c.compare_topologies) {
        Experiment other = build_experiment(c, spec);
        other.sim = e.sim;
        const LearningCurves oc = simulate(other);
        cmp.push_back({{"topology", to_json(other.topology)},
                       {"msd_theory", other.theory.msd_first_order},
                       {"msd_theory_db", to_db(other.theory.msd_first_order)},
                       {"msd_empirical_db", to_db(mean_steady_msd(oc))}});
      }
      report["topology_comparison"] = cmp;
    }

    {
      std::ofstream csv(dir / c.outputs.curves);
      if (!csv) throw Error(ErrorKind::kConfig, "cannot write curves to '" + out_dir + "'");
      write_curves_csv(csv, curves);
    }
    write_json(dir / c.outputs.report, report);
    write_json(dir / c.outputs.theory, theory_json(e));

    for (const auto& w : curves.warnings) err << "warning: " << w << '\n';
    out << std::fixed << std::setprecision(2);
    out << c.name << ": " << e.topology.size() << " agents, " << to_string(e.policy.kind) << ", "
        << curves.trials << " trials x " << e.sim.iters << " iterations\n";
    out << "  theory MSD      " << to_db(e.theory.msd_first_order) << " dB\n";
    out << "  centralized MSD " << to_db(curves.steady_centralized.mean) << " dB\n";
    for (std::size_t k = 0; k < curves.agents; ++k) {
      out << "  agent " << std::setw(3) << k << "       " << to_db(curves.steady_msd[k].mean)
          << " dB\n";
    }
    out << "wrote " << (dir / c.outputs.curves).string() << ", "
        << (dir / c.outputs.report).string() << ", " << (dir / c.outputs.theory).string() << '\n';
    return kExitOk;
  });
}

int cmd_theory(const std::string& config_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig c = load_config(config_path);
    const Experiment e = build_experiment(c);
    out << theory_json(e).dump(2) << '\n';
    if (unstable(e) && !c.allow_unstable) {
      report_unstable(e, err);
      return kExitUnstable;
    }
    return kExitOk;
  });
}

int cmd_preset(const std::string& name, const std::string& out_path, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig c = preset(name);
    const fs::path path(out_path);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_json(path, to_json(c));
    return kExitOk;
  });
}

}  // namespace adaptnet::cli
