#include "adaptnet/strategy.hpp"

#include <algorithm>
#include <sstream>

#include "adaptnet/error.hpp"

namespace adaptnet {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::kContract, what);
}

}  // namespace

NetworkState NetworkState::uniform(std::size_t agents, const Vector& w0) {
  NetworkState s;
  s.agents = agents;
  s.dim = static_cast<std::size_t>(w0.size());
  s.w.resize(agents * s.dim);
  for (std::size_t k = 0; k < agents; ++k) {
    std::copy(w0.data(), w0.data() + w0.size(), s.w.begin() + static_cast<std::ptrdiff_t>(k * s.dim));
  }
  return s;
}

NetworkState NetworkState::zeros(std::size_t agents, std::size_t dim) {
  return uniform(agents, Vector::Zero(static_cast<Eigen::Index>(dim)));
}

Vector NetworkState::agent_vector(std::size_t k) const {
  const auto a = agent(k);
  return Eigen::Map<const Vector>(a.data(), static_cast<Eigen::Index>(a.size()));
}

DistributedEngine::Combiner DistributedEngine::make_combiner(const Matrix& a) {
  Combiner c;
  c.identity = a.isIdentity(0.0);
  if (c.identity) return c;
  c.cols.resize(static_cast<std::size_t>(a.cols()));
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    for (Eigen::Index l = 0; l < a.rows(); ++l) {
      if (a(l, k) != 0.0) c.cols[static_cast<std::size_t>(k)].emplace_back(static_cast<std::size_t>(l), a(l, k));
    }
  }
  return c;
}

DistributedEngine::DistributedEngine(const CombinationPolicy& policy, const PerronData& perron,
                                     const GradientModel& model)
    : model_(&model), n_(model.agents()), m_(model.dim()) {
  const auto n = static_cast<Eigen::Index>(n_);
  require(policy.a1.rows() == n && policy.a0.rows() == n && policy.a2.rows() == n,
          "policy size differs from model agent count");
  require(perron.mus.size() == n, "step-size vector length differs from agent count");
  mus_.assign(perron.mus.data(), perron.mus.data() + n);
  c1_ = make_combiner(policy.a1);
  c0_ = make_combiner(policy.a0);
  c2_ = make_combiner(policy.a2);
  phi_.resize(n_ * m_);
  psi_.resize(n_ * m_);
  tmp_.resize(n_ * m_);
  grad_.resize(m_);
}

void DistributedEngine::combine(const Combiner& c, const std::vector<double>& in,
                                std::vector<double>& out) const {
  if (c.identity) {
    out = in;
    return;
  }
  for (std::size_t k = 0; k < n_; ++k) {
    double* dst = out.data() + k * m_;
    std::fill(dst, dst + m_, 0.0);
    for (const auto& [l, a] : c.cols[k]) {
      const double* src = in.data() + l * m_;
      for (std::size_t j = 0; j < m_; ++j) dst[j] += a * src[j];
    }
  }
}

void DistributedEngine::step(NetworkState& state, Rng& rng) {
  require(state.agents == n_ && state.dim == m_ && state.w.size() == n_ * m_,
          "state shape differs from engine");
  combine(c1_, state.w, phi_);
  combine(c0_, phi_, psi_);
  for (std::size_t k = 0; k < n_; ++k) {
    model_->sample_gradient(k, std::span<const double>(phi_.data() + k * m_, m_), rng, grad_);
    double* dst = psi_.data() + k * m_;
    for (std::size_t j = 0; j < m_; ++j) dst[j] -= mus_[k] * grad_[j];
  }
  combine(c2_, psi_, tmp_);
  state.w.swap(tmp_);
  ++state.iter;
}

CentralizedEngine::CentralizedEngine(const PerronData& perron, const GradientModel& model)
    : model_(&model), mu_max_(perron.mu_max) {
  require(static_cast<std::size_t>(perron.p.size()) == model.agents(),
          "p length differs from agent count");
  p_.assign(perron.p.data(), perron.p.data() + perron.p.size());
  grad_.resize(model.dim());
  acc_.resize(model.dim());
}

void CentralizedEngine::step(CentralState& state, Rng& rng) {
  const std::size_t m = model_->dim();
  require(static_cast<std::size_t>(state.w.size()) == m, "central state dimension mismatch");
  std::fill(acc_.begin(), acc_.end(), 0.0);
  const std::span<const double> w(state.w.data(), m);
  for (std::size_t k = 0; k < p_.size(); ++k) {
    model_->sample_gradient(k, w, rng, grad_);
    for (std::size_t j = 0; j < m; ++j) acc_[j] += p_[k] * grad_[j];
  }
  for (std::size_t j = 0; j < m; ++j) state.w(static_cast<Eigen::Index>(j)) -= mu_max_ * acc_[j];
  ++state.iter;
}

NetworkState step_distributed(const NetworkState& state, const CombinationPolicy& policy,
                              const PerronData& perron, const GradientModel& model, Rng& rng) {
  DistributedEngine engine(policy, perron, model);
  NetworkState next = state;
  engine.step(next, rng);
  return next;
}

CentralState step_centralized(const CentralState& state, const PerronData& perron,
                              const GradientModel& model, Rng& rng) {
  CentralizedEngine engine(perron, model);
  CentralState next = state;
  engine.step(next, rng);
  return next;
}

ReferenceState step_reference(const ReferenceState& state, const PerronData& perron,
                              const GradientModel& model) {
  require(static_cast<std::size_t>(state.w.size()) == model.dim(), "reference state dimension mismatch");
  require(static_cast<std::size_t>(perron.p.size()) == model.agents(), "p length differs from agent count");
  Vector g = Vector::Zero(state.w.size());
  for (std::size_t k = 0; k < model.agents(); ++k) {
    g += perron.p(static_cast<Eigen::Index>(k)) * model.true_gradient(k, state.w);
  }
  return {state.w - perron.mu_max * g, state.iter + 1};
}

ReferenceState reference_init(const NetworkState& initial, const Vector& theta) {
  require(static_cast<std::size_t>(theta.size()) == initial.agents, "theta length differs from agent count");
  Vector w = Vector::Zero(static_cast<Eigen::Index>(initial.dim));
  for (std::size_t k = 0; k < initial.agents; ++k) w += theta(static_cast<Eigen::Index>(k)) * initial.agent_vector(k);
  return {w, initial.iter};
}

}  // namespace adaptnet
