#include "adaptnet/serialization.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "adaptnet/error.hpp"

namespace adaptnet {
namespace {

template <typename F>
auto parse(const char* what, F&& f) {
  try {
    return f();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorKind::kConfig, std::string("malformed ") + what + ": " + e.what());
  }
}

}  // namespace

double to_db(double linear) {
  return linear > 0.0 ? 10.0 * std::log10(linear) : -std::numeric_limits<double>::infinity();
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  return parse("matrix", [&] {
    if (!j.is_array() || j.empty()) throw Error(ErrorKind::kConfig, "matrix must be a non-empty array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j.at(0).size());
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const Json& row = j.at(static_cast<std::size_t>(r));
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
        throw Error(ErrorKind::kConfig, "matrix rows must have equal length");
      }
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
    }
    return m;
  });
}

Json vector_to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Vector vector_from_json(const Json& j) {
  return parse("vector", [&] {
    if (!j.is_array()) throw Error(ErrorKind::kConfig, "vector must be an array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j.at(i).get<double>();
    return v;
  });
}

Json to_json(const Topology& t) {
  Json edges = Json::array();
  for (const auto& [i, j] : t.edges()) edges.push_back({i, j});
  return {{"n", t.size()}, {"edges", edges}};
}

Topology topology_from_json(const Json& j) {
  return parse("topology", [&] {
    const auto n = j.at("n").get<std::size_t>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw Error(ErrorKind::kConfig, "edge must be [i, j]");
      edges.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
    }
    try {
      return Topology::from_edges(n, edges);
    } catch (const Error& err) {
      throw Error(ErrorKind::kConfig, err.what());
    }
  });
}

Json to_json(const CombinationPolicy& policy, const PerronData& perron) {
  Json j = {{"kind", std::string(to_string(policy.kind))},
            {"A", matrix_to_json(policy.a)},
            {"theta", vector_to_json(perron.theta)},
            {"p", vector_to_json(perron.p)}};
  if (policy.kind == StrategyKind::kCustom) {
    j["A1"] = matrix_to_json(policy.a1);
    j["A0"] = matrix_to_json(policy.a0);
    j["A2"] = matrix_to_json(policy.a2);
  }
  return j;
}

Json to_json(const LinearModel& model) {
  Json agents = Json::array();
  for (const auto& a : model.agent_data()) {
    agents.push_back({{"R_u", matrix_to_json(a.r_u)}, {"sigma_n2", a.sigma_n2}});
  }
  return {{"M", model.dim()}, {"w_star", vector_to_json(model.w_star())}, {"agents", agents}};
}

LinearModel model_from_json(const Json& j) {
  return parse("model", [&] {
    const auto m = j.at("M").get<std::size_t>();
    Vector w = vector_from_json(j.at("w_star"));
    if (static_cast<std::size_t>(w.size()) != m) throw Error(ErrorKind::kConfig, "w_star length differs from M");
    std::vector<LmsAgent> agents;
    for (const auto& a : j.at("agents")) {
      agents.push_back({matrix_from_json(a.at("R_u")), a.at("sigma_n2").get<double>()});
    }
    try {
      return LinearModel(std::move(w), std::move(agents));
    } catch (const Error& err) {
      throw Error(ErrorKind::kConfig, err.what());
    }
  });
}

Json to_json(const TheoryReport& r) {
  Json j = {
      {"mu_max", r.mu_max},
      {"msd_first_order", r.msd_first_order},
      {"msd_first_order_db", to_db(r.msd_first_order)},
      {"weighted_mse_half_hc", r.weighted_mse_half_hc},
      {"weighted_mse_half_hc_db", to_db(r.weighted_mse_half_hc)},
      {"centralized_msd", r.centralized_msd},
      {"centralized_msd_db", to_db(r.centralized_msd)},
      {"rate", r.rate},
      {"rate_db_per_iter", to_db(r.rate)},
      {"mu_bound", r.mu_bound},
      {"lambda2", r.lambda2},
      {"theta", vector_to_json(r.theta)},
      {"p", vector_to_json(r.p)},
      {"H_c", matrix_to_json(r.hc)},
      {"X", matrix_to_json(r.x)},
      {"constants",
       {{"lambda_l", r.constants.lambda_l},
        {"lambda_u", r.constants.lambda_u},
        {"alpha", r.constants.alpha},
        {"sigma_v2", r.constants.sigma_v2}}},
      {"omitted", r.omitted},
  };
  if (r.theta_opt) j["theta_opt"] = vector_to_json(*r.theta_opt);
  if (r.msd_opt) {
    j["msd_opt"] = *r.msd_opt;
    j["msd_opt_db"] = to_db(*r.msd_opt);
  }
  return j;
}

void write_curves_csv(std::ostream& os, const LearningCurves& c) {
  os << "iter,agent,msd,msd_db,centralized_msd,reference_err,centroid_offset\n";
  const auto old_prec = os.precision(17);
  for (std::size_t j = 0; j < c.points(); ++j) {
    for (std::size_t k = 0; k < c.agents; ++k) {
      os << c.iteration[j] << ',' << k << ',' << c.msd[k][j] << ',' << to_db(c.msd[k][j]) << ','
         << c.centralized_msd[j] << ',' << c.reference_err[j] << ',' << c.centroid_offset[k][j]
         << '\n';
    }
  }
  os.precision(old_prec);
}

Json summary_json(const LearningCurves& c, const TheoryReport* theory) {
  Json agents = Json::array();
  for (std::size_t k = 0; k < c.agents; ++k) {
    const auto& s = c.steady_msd[k];
    Json a = {{"agent", k},
              {"msd", s.mean},
              {"msd_stderr", s.stderr_mean},
              {"msd_db", to_db(s.mean)},
              {"centroid_offset", c.steady_offset[k].mean}};
    if (theory) {
      a["theory_msd_db"] = to_db(theory->msd_first_order);
      a["delta_theory_db"] = to_db(s.mean) - to_db(theory->msd_first_order);
    }
    a["delta_centralized_db"] = to_db(s.mean) - to_db(c.steady_centralized.mean);
    agents.push_back(std::move(a));
  }
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& s : c.steady_msd) {
    lo = std::min(lo, to_db(s.mean));
    hi = std::max(hi, to_db(s.mean));
  }
  Json j = {{"trials", c.trials},
            {"iters", c.config.iters},
            {"seed", c.config.seed},
            {"steady_window", c.config.steady_window},
            {"record_stride", c.config.record_stride},
            {"paired_streams", c.config.paired_streams},
            {"agents", agents},
            {"centralized", {{"msd", c.steady_centralized.mean},
                             {"msd_stderr", c.steady_centralized.stderr_mean},
                             {"msd_db", to_db(c.steady_centralized.mean)}}},
            {"spread_db", hi - lo},
            {"warnings", c.warnings}};
  return j;
}

}  // namespace adaptnet
