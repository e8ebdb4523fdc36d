#include "incompat/qkd.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "incompat/error.hpp"
#include "incompat/search.hpp"

namespace incompat {

namespace {

constexpr std::uint64_t kBlock = 10000;

void check(const Ensemble& s, const EveStrategy& eve) {
  if (eve.passthrough) return;
  if (eve.povm.dim() != s.dim()) fail(ErrorKind::DimensionMismatch, "strategy and ensemble differ in dimension");
  if (eve.reconstruction.size() != eve.povm.size())
    fail(ErrorKind::MissingReconstruction, "every POVM outcome needs a reconstruction state");
  for (const auto& r : eve.reconstruction)
    if (r.dim() != s.dim()) fail(ErrorKind::DimensionMismatch, "reconstruction state has the wrong dimension");
}

// Eve's outcome distribution and Bob's success probability per outcome, for one signal.
void outcome_table(const PureState& psi, const EveStrategy& eve, std::vector<double>& p_k,
                   std::vector<double>& success_k) {
  const std::size_t n = eve.povm.size();
  p_k.resize(n);
  success_k.resize(n);
  const CVector& v = psi.amplitudes();
  for (std::size_t k = 0; k < n; ++k) {
    p_k[k] = eve.povm.weights()[k] * eve.povm.directions()[k].overlap(psi);
    success_k[k] = std::clamp((v.adjoint() * eve.reconstruction[k].matrix() * v)(0, 0).real(), 0.0, 1.0);
  }
}

}  // namespace

EveStrategy EveStrategy::measure_resend(const RankOnePovm& povm) {
  EveStrategy e;
  e.povm = povm;
  for (const auto& chi : povm.directions()) e.reconstruction.push_back(DensityMatrix::pure(chi));
  return e;
}

EveStrategy EveStrategy::best_response(const Ensemble& s, const RankOnePovm& povm) {
  if (povm.dim() != s.dim()) fail(ErrorKind::DimensionMismatch, "strategy and ensemble differ in dimension");
  EveStrategy e;
  e.povm = povm;
  for (const auto& chi : povm.directions()) {
    CMatrix post = CMatrix::Zero(s.dim(), s.dim());
    for (const auto& st : s.states()) post += chi.overlap(st) * st.projector();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(post);
    e.reconstruction.push_back(DensityMatrix::pure(PureState::normalized(es.eigenvectors().col(s.dim() - 1))));
  }
  return e;
}

EveStrategy EveStrategy::none() {
  EveStrategy e;
  e.passthrough = true;
  return e;
}

double analytic_error_rate(const Ensemble& s, const EveStrategy& eve) {
  check(s, eve);
  if (eve.passthrough) return 0.0;
  std::vector<double> p, succ;
  double total = 0.0;
  for (const auto& psi : s.states()) {
    outcome_table(psi, eve, p, succ);
    for (std::size_t k = 0; k < p.size(); ++k) total += p[k] * succ[k];
  }
  return 1.0 - s.weight() * total;
}

SimResult simulate_error_rate(const Ensemble& s, const EveStrategy& eve, std::uint64_t trials, std::uint64_t seed) {
  if (trials < 1) fail(ErrorKind::InvalidArgument, "need at least one trial");
  check(s, eve);
  SimResult r;
  r.trials = trials;
  r.analytic_error = analytic_error_rate(s, eve);
  if (!eve.passthrough) {
    // Per-signal cumulative tables for inverse-CDF sampling.
    std::vector<std::vector<double>> cdf(s.size()), succ(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      std::vector<double> p;
      outcome_table(s.states()[i], eve, p, succ[i]);
      cdf[i].resize(p.size());
      double acc = 0.0;
      for (std::size_t k = 0; k < p.size(); ++k) cdf[i][k] = (acc += p[k]);
    }
    const std::uint64_t blocks = (trials + kBlock - 1) / kBlock;
    for (std::uint64_t b = 0; b < blocks; ++b) {
      std::mt19937_64 rng(restart_seed(seed, b));
      std::uniform_int_distribution<std::size_t> pick(0, s.size() - 1);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      const std::uint64_t n = std::min(kBlock, trials - b * kBlock);
      for (std::uint64_t t = 0; t < n; ++t) {
        const std::size_t i = pick(rng);
        const auto& c = cdf[i];
        const double u = unit(rng) * c.back();
        const auto k = static_cast<std::size_t>(std::upper_bound(c.begin(), c.end(), u) - c.begin());
        const std::size_t kk = std::min(k, c.size() - 1);
        if (unit(rng) >= succ[i][kk]) ++r.errors;
      }
    }
  }
  r.empirical_error = static_cast<double>(r.errors) / static_cast<double>(trials);
  r.std_error = std::sqrt(r.empirical_error * (1.0 - r.empirical_error) / static_cast<double>(trials));
  return r;
}

EveStrategy optimal_strategy(const Ensemble& s, const SearchConfig& cfg) {
  return EveStrategy::best_response(s, fmax_ascent(s, cfg).povm);
}

}  // namespace incompat
