#include "adaptnet/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "adaptnet/error.hpp"
#include "adaptnet/rng.hpp"

namespace adaptnet {
namespace {

std::size_t window_count(std::size_t n, double window) {
  const double raw = window * static_cast<double>(n) - 1e-9;
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(raw)), 1, n);
}

SteadyState mean_stderr(std::span<const double> v) {
  SteadyState s;
  if (v.empty()) return s;
  const double n = static_cast<double>(v.size());
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.stderr_mean = std::sqrt(ss / (n - 1.0) / n);
  }
  return s;
}

// Sums for one lane, time-major: entry [point * width + j].
struct LaneAccumulator {
  std::vector<double> msd;       // width n
  std::vector<double> offset;    // width n
  std::vector<double> central;   // width 1
  std::vector<double> mean_err;  // width n*m
  std::size_t trials = 0;
};

struct TrialSteady {
  std::vector<double> msd;
  std::vector<double> offset;
  double central = 0.0;
};

class Runner {
 public:
  Runner(const RunInputs& in, const SimConfig& cfg) : in_(in), cfg_(cfg) {
    n_ = in.model.agents();
    m_ = in.model.dim();
    points_ = cfg.iters / cfg.record_stride;
    window_ = window_count(points_, cfg.steady_window);
    w_limit_ = limit_point(in.model, in.perron.p);
    initial_ = in.initial ? *in.initial : NetworkState::zeros(n_, m_);
    if (initial_.agents != n_ || initial_.dim != m_) {
      throw Error(ErrorKind::kContract, "initial state shape differs from model");
    }
    theta_.assign(in.perron.theta.data(), in.perron.theta.data() + n_);
    lanes_ = std::min(cfg.trials, kMaxLanes);
  }

  LearningCurves execute() {
    std::vector<LaneAccumulator> lanes(lanes_);
    std::vector<TrialSteady> steady(cfg_.trials);
    std::vector<std::exception_ptr> lane_errors(lanes_);
    std::vector<std::size_t> lane_error_trial(lanes_, cfg_.trials);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t l = next++; l < lanes_; l = next++) {
        LaneAccumulator& acc = lanes[l];
        acc.msd.assign(points_ * n_, 0.0);
        acc.offset.assign(points_ * n_, 0.0);
        acc.central.assign(points_, 0.0);
        acc.mean_err.assign(points_ * n_ * m_, 0.0);
        for (std::size_t t = l; t < cfg_.trials; t += lanes_) {
          try {
            run_trial(t, acc, steady[t]);
          } catch (...) {
            lane_errors[l] = std::current_exception();
            lane_error_trial[l] = t;
            break;
          }
          ++acc.trials;
        }
      }
    };
    unsigned workers = cfg_.workers ? cfg_.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, lanes_));
    if (workers <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
    // Report the failure from the lowest trial index so the error is
    // independent of scheduling.
    std::size_t first = cfg_.trials;
    std::exception_ptr err;
    for (std::size_t l = 0; l < lanes_; ++l) {
      if (lane_errors[l] && lane_error_trial[l] < first) {
        first = lane_error_trial[l];
        err = lane_errors[l];
      }
    }
    if (err) std::rethrow_exception(err);
    return collect(lanes, steady);
  }

 private:
  void run_trial(std::size_t t, LaneAccumulator& acc, TrialSteady& steady) const {
    DistributedEngine dist(in_.policy, in_.perron, in_.model);
    CentralizedEngine cent(in_.perron, in_.model);
    Rng dist_rng(stream_seed(cfg_.seed, t, 0));
    Rng cent_rng(stream_seed(cfg_.seed, t, 1));
    NetworkState s = initial_;
    CentralState c{reference_init(initial_, in_.perron.theta).w, 0};

    steady.msd.assign(n_, 0.0);
    steady.offset.assign(n_, 0.0);
    steady.central = 0.0;
    std::vector<double> centroid(m_);
    std::vector<double> sq(n_);
    const double* wl = w_limit_.data();
    const std::size_t window_start = points_ - window_;

    for (std::size_t i = 1; i <= cfg_.iters; ++i) {
      if (cfg_.paired_streams) {
        Rng shared = dist_rng;
        dist.step(s, dist_rng);
        cent.step(c, shared);
      } else {
        dist.step(s, dist_rng);
        cent.step(c, cent_rng);
      }
      bool bad = false;
      for (std::size_t k = 0; k < n_; ++k) {
        const double* w = s.w.data() + k * m_;
        double e2 = 0.0, n2 = 0.0;
        for (std::size_t j = 0; j < m_; ++j) {
          const double e = wl[j] - w[j];
          e2 += e * e;
          n2 += w[j] * w[j];
        }
        sq[k] = e2;
        bad = bad || !std::isfinite(e2) || n2 > kDivergenceNorm * kDivergenceNorm;
      }
      const double cn2 = c.w.squaredNorm();
      bad = bad || !std::isfinite(cn2) || cn2 > kDivergenceNorm * kDivergenceNorm;
      if (bad) {
        std::ostringstream os;
        os << "iterates diverged in trial " << t << " at iteration " << i
           << " (step size too large?)";
        throw DivergenceError(os.str(), t, i);
      }
      if (i % cfg_.record_stride != 0) continue;
      const std::size_t pt = i / cfg_.record_stride - 1;
      if (pt >= points_) continue;

      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (std::size_t k = 0; k < n_; ++k) {
        const double* w = s.w.data() + k * m_;
        for (std::size_t j = 0; j < m_; ++j) centroid[j] += theta_[k] * w[j];
      }
      const double ce2 = (w_limit_ - c.w).squaredNorm();
      acc.central[pt] += ce2;
      const bool in_window = pt >= window_start;
      if (in_window) steady.central += ce2;
      for (std::size_t k = 0; k < n_; ++k) {
        const double* w = s.w.data() + k * m_;
        double off = 0.0;
        double* me = acc.mean_err.data() + (pt * n_ + k) * m_;
        for (std::size_t j = 0; j < m_; ++j) {
          const double d = w[j] - centroid[j];
          off += d * d;
          me[j] += wl[j] - w[j];
        }
        acc.msd[pt * n_ + k] += sq[k];
        acc.offset[pt * n_ + k] += off;
        if (in_window) {
          steady.msd[k] += sq[k];
          steady.offset[k] += off;
        }
      }
    }
    const double inv = 1.0 / static_cast<double>(window_);
    for (auto& v : steady.msd) v *= inv;
    for (auto& v : steady.offset) v *= inv;
    steady.central *= inv;
  }

  LearningCurves collect(const std::vector<LaneAccumulator>& lanes,
                         const std::vector<TrialSteady>& steady) const {
    LearningCurves out;
    out.agents = n_;
    out.dim = m_;
    out.trials = cfg_.trials;
    out.config = cfg_;
    out.w_limit = w_limit_;
    out.iteration.resize(points_);
    for (std::size_t j = 0; j < points_; ++j) out.iteration[j] = (j + 1) * cfg_.record_stride;

    const double inv_trials = 1.0 / static_cast<double>(cfg_.trials);
    out.msd.assign(n_, std::vector<double>(points_, 0.0));
    out.centroid_offset.assign(n_, std::vector<double>(points_, 0.0));
    out.mean_error_sq.assign(n_, std::vector<double>(points_, 0.0));
    out.centralized_msd.assign(points_, 0.0);
    std::vector<double> mean_err(points_ * n_ * m_, 0.0);
    for (const auto& lane : lanes) {
      for (std::size_t j = 0; j < points_; ++j) {
        out.centralized_msd[j] += lane.central[j];
        for (std::size_t k = 0; k < n_; ++k) {
          out.msd[k][j] += lane.msd[j * n_ + k];
          out.centroid_offset[k][j] += lane.offset[j * n_ + k];
        }
      }
      for (std::size_t q = 0; q < mean_err.size(); ++q) mean_err[q] += lane.mean_err[q];
    }
    for (std::size_t j = 0; j < points_; ++j) {
      out.centralized_msd[j] *= inv_trials;
      for (std::size_t k = 0; k < n_; ++k) {
        out.msd[k][j] *= inv_trials;
        out.centroid_offset[k][j] *= inv_trials;
        double e2 = 0.0;
        for (std::size_t q = 0; q < m_; ++q) {
          const double e = mean_err[(j * n_ + k) * m_ + q] * inv_trials;
          e2 += e * e;
        }
        out.mean_error_sq[k][j] = e2;
      }
    }

    out.lane_msd.resize(lanes.size());
    out.lane_centralized_msd.resize(lanes.size());
    for (std::size_t l = 0; l < lanes.size(); ++l) {
      const double inv = 1.0 / static_cast<double>(lanes[l].trials);
      out.lane_trials.push_back(lanes[l].trials);
      out.lane_msd[l].assign(n_, std::vector<double>(points_));
      out.lane_centralized_msd[l].resize(points_);
      for (std::size_t j = 0; j < points_; ++j) {
        out.lane_centralized_msd[l][j] = lanes[l].central[j] * inv;
        for (std::size_t k = 0; k < n_; ++k) out.lane_msd[l][k][j] = lanes[l].msd[j * n_ + k] * inv;
      }
    }

    // Reference recursion is deterministic; evaluate it once.
    out.reference_err.resize(points_);
    ReferenceState ref = reference_init(initial_, in_.perron.theta);
    for (std::size_t i = 1; i <= cfg_.iters; ++i) {
      ref = step_reference(ref, in_.perron, in_.model);
      if (i % cfg_.record_stride == 0 && i / cfg_.record_stride <= points_) {
        out.reference_err[i / cfg_.record_stride - 1] = (w_limit_ - ref.w).squaredNorm();
      }
    }

    std::vector<double> col(cfg_.trials);
    for (std::size_t k = 0; k < n_; ++k) {
      for (std::size_t t = 0; t < cfg_.trials; ++t) col[t] = steady[t].msd[k];
      out.steady_msd.push_back(mean_stderr(col));
      for (std::size_t t = 0; t < cfg_.trials; ++t) col[t] = steady[t].offset[k];
      out.steady_offset.push_back(mean_stderr(col));
    }
    for (std::size_t t = 0; t < cfg_.trials; ++t) col[t] = steady[t].central;
    out.steady_centralized = mean_stderr(col);

    if (in_.step_bound) {
      const double mu = in_.perron.mu_max, bound = *in_.step_bound;
      std::ostringstream os;
      if (mu >= bound) {
        os << "mu_max = " << mu << " exceeds the stability bound " << bound;
        out.warnings.push_back(os.str());
      } else if (mu > 0.9 * bound) {
        os << "mu_max = " << mu << " is within 10% of the stability bound " << bound;
        out.warnings.push_back(os.str());
      }
    }
    return out;
  }

  const RunInputs& in_;
  const SimConfig& cfg_;
  std::size_t n_ = 0, m_ = 0, points_ = 0, window_ = 0, lanes_ = 0;
  Vector w_limit_;
  NetworkState initial_;
  std::vector<double> theta_;
};

}  // namespace

void SimConfig::validate() const {
  if (trials < 1) throw Error(ErrorKind::kInvalidArgument, "trials must be >= 1");
  if (iters < 10) throw Error(ErrorKind::kInvalidArgument, "iters must be >= 10");
  if (!(steady_window > 0.0 && steady_window <= 0.5)) {
    throw Error(ErrorKind::kInvalidArgument, "steady_window must lie in (0, 0.5]");
  }
  if (record_stride < 1 || record_stride > iters) {
    throw Error(ErrorKind::kInvalidArgument, "record_stride must lie in [1, iters]");
  }
}

LearningCurves run(const RunInputs& inputs, const SimConfig& config) {
  config.validate();
  if (inputs.model.agents() != static_cast<std::size_t>(inputs.perron.p.size())) {
    throw Error(ErrorKind::kContract, "model and policy agent counts differ");
  }
  Runner runner(inputs, config);
  return runner.execute();
}

SteadyState steady_state_estimate(std::span<const double> curve, double window) {
  if (curve.empty()) throw Error(ErrorKind::kInvalidArgument, "empty curve");
  if (!(window > 0.0 && window <= 1.0)) throw Error(ErrorKind::kInvalidArgument, "window must lie in (0, 1]");
  const std::size_t c = window_count(curve.size(), window);
  return mean_stderr(curve.subspan(curve.size() - c));
}

namespace {

SteadyState lane_estimate(const std::vector<double>& total,
                          const std::vector<const std::vector<double>*>& lanes, double window) {
  SteadyState s = steady_state_estimate(total, window);
  if (lanes.size() > 1) {
    std::vector<double> means;
    for (const auto* l : lanes) means.push_back(steady_state_estimate(*l, window).mean);
    s.stderr_mean = mean_stderr(means).stderr_mean;
  }
  return s;
}

}  // namespace

SteadyState steady_state_estimate(const LearningCurves& curves, std::size_t agent, double window) {
  if (agent >= curves.agents) throw Error(ErrorKind::kInvalidArgument, "agent index out of range");
  std::vector<const std::vector<double>*> lanes;
  for (const auto& l : curves.lane_msd) lanes.push_back(&l[agent]);
  return lane_estimate(curves.msd[agent], lanes, window);
}

SteadyState steady_state_centralized(const LearningCurves& curves, double window) {
  std::vector<const std::vector<double>*> lanes;
  for (const auto& l : curves.lane_centralized_msd) lanes.push_back(&l);
  return lane_estimate(curves.centralized_msd, lanes, window);
}

double fit_geometric_rate(std::span<const double> series, std::size_t i_start, std::size_t i_end) {
  if (i_end > series.size() || i_end < i_start + 2) {
    throw Error(ErrorKind::kInvalidArgument, "fit range needs at least two points inside the series");
  }
  const double n = static_cast<double>(i_end - i_start);
  double sx = 0, sy = 0;
  std::vector<double> y;
  y.reserve(i_end - i_start);
  for (std::size_t i = i_start; i < i_end; ++i) {
    if (!(series[i] > 0.0) || !std::isfinite(series[i])) {
      std::ostringstream os;
      os << "series[" << i << "] = " << series[i] << " is not positive";
      throw Error(ErrorKind::kDomain, os.str());
    }
    y.push_back(std::log(series[i]));
    sx += static_cast<double>(i - i_start);
    sy += y.back();
  }
  const double mx = sx / n, my = sy / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = i_start; i < i_end; ++i) {
    const double dx = static_cast<double>(i - i_start) - mx;
    sxy += dx * (y[i - i_start] - my);
    sxx += dx * dx;
  }
  return std::exp(sxy / sxx);
}

DecompositionReport decomposition_diagnostics(const LearningCurves& curves,
                                              const LearningCurves* half_mu) {
  if (half_mu && half_mu->agents != curves.agents) {
    throw Error(ErrorKind::kContract, "half-step run has a different agent count");
  }
  DecompositionReport rep;
  double response_sum = 0.0;
  std::size_t response_n = 0;
  for (std::size_t k = 0; k < curves.agents; ++k) {
    AgentDecomposition d;
    d.offset = curves.steady_offset[k].mean;
    d.msd = curves.steady_msd[k].mean;
    d.ratio = d.msd > 0.0 ? d.offset / d.msd : 0.0;
    if (half_mu) {
      const double off = half_mu->steady_offset[k].mean;
      const double msd = half_mu->steady_msd[k].mean;
      d.ratio_half_mu = msd > 0.0 ? off / msd : 0.0;
      if (d.ratio > 0.0) {
        d.response = *d.ratio_half_mu / d.ratio;
        response_sum += *d.response;
        ++response_n;
      }
    }
    rep.agents.push_back(d);
  }
  if (response_n > 0) rep.mean_response = response_sum / static_cast<double>(response_n);
  return rep;
}

}  // namespace adaptnet
