#pragma once

#include <iosfwd>

#include <nlohmann/json.hpp>

#include "adaptnet/model.hpp"
#include "adaptnet/policy.hpp"
#include "adaptnet/sim.hpp"
#include "adaptnet/theory.hpp"
#include "adaptnet/topology.hpp"

namespace adaptnet {

using Json = nlohmann::json;

/// Row-major nested arrays.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j);

/// {"n": int, "edges": [[i, j], ...]}; self-loops are implicit.
Json to_json(const Topology& t);
Topology topology_from_json(const Json& j);

/// {"kind", "A", "theta", "p"}; custom policies also carry "A1", "A0", "A2".
Json to_json(const CombinationPolicy& policy, const PerronData& perron);

/// {"M", "w_star", "agents": [{"R_u", "sigma_n2"}, ...]}
Json to_json(const LinearModel& model);
LinearModel model_from_json(const Json& j);

/// Linear values plus *_db = 10 log10 fields.
Json to_json(const TheoryReport& r);

double to_db(double linear);

/// Columns: iter, agent, msd, msd_db, centralized_msd, reference_err,
/// centroid_offset. One row per (recorded iteration, agent).
void write_curves_csv(std::ostream& os, const LearningCurves& c);

/// Steady-state table for the run; with `theory`, per-agent deltas against
/// the first-order prediction in dB.
Json summary_json(const LearningCurves& c, const TheoryReport* theory = nullptr);

}  // namespace adaptnet
