#include "incompat/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "incompat/error.hpp"
#include "incompat/families.hpp"

namespace incompat {

namespace {

constexpr double kAscentResidual = 1e-6;

struct Elements {
  std::vector<double> m;
  std::vector<CVector> chi;
};

// Ensemble states as columns, with the per-state weight d/|S| folded in.
struct EnsembleView {
  CMatrix states;
  double scale;
  int dim;

  explicit EnsembleView(const Ensemble& s)
      : states(s.dim(), static_cast<Eigen::Index>(s.size())),
        scale(static_cast<double>(s.dim()) * s.weight()),
        dim(s.dim()) {
    for (std::size_t i = 0; i < s.size(); ++i) states.col(static_cast<Eigen::Index>(i)) = s.states()[i].amplitudes();
  }

  // (d/|S|) sum_s |<s|chi>|^2 |s><s|
  CMatrix map(const CVector& chi) const {
    const RVector c = scale * (states.adjoint() * chi).cwiseAbs2();
    return states * c.cast<cplx>().asDiagonal() * states.adjoint();
  }
};

struct Top {
  double value;
  CVector vector;
};

Top top_eigen(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const Eigen::Index last = h.rows() - 1;
  return {es.eigenvalues()(last), es.eigenvectors().col(last)};
}

double objective(const EnsembleView& e, const Elements& el) {
  double f = 0.0;
  for (std::size_t k = 0; k < el.m.size(); ++k) f += el.m[k] * top_eigen(e.map(el.chi[k])).value;
  return f / e.dim;
}

// Inverse square root of a positive definite Hermitian matrix; false when
// the matrix is numerically singular.
bool inv_sqrt(const CMatrix& s, CMatrix& out) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(s);
  const RVector ev = es.eigenvalues();
  if (!(ev(0) > 1e-12 * std::max(ev(ev.size() - 1), 1e-300))) return false;
  out = es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  return true;
}

// Rescales vectors v_k with weights m_k so that the elements sum to identity.
bool complete(const std::vector<double>& m, const std::vector<CVector>& v, int d, Elements& out) {
  CMatrix s = CMatrix::Zero(d, d);
  for (std::size_t k = 0; k < m.size(); ++k) s += m[k] * v[k] * v[k].adjoint();
  CMatrix t;
  if (!inv_sqrt(s, t)) return false;
  out.m.clear();
  out.chi.clear();
  for (std::size_t k = 0; k < m.size(); ++k) {
    const CVector u = t * v[k];
    const double n2 = u.squaredNorm();
    if (!(n2 > 0.0)) continue;
    out.m.push_back(m[k] * n2);
    out.chi.push_back(u / std::sqrt(n2));
  }
  return true;
}

double residual(const Elements& el, int d) {
  CMatrix s = -CMatrix::Identity(d, d);
  for (std::size_t k = 0; k < el.m.size(); ++k) s += el.m[k] * el.chi[k] * el.chi[k].adjoint();
  return s.cwiseAbs().maxCoeff();
}

// One damped see-saw step: pull each direction toward the operator that its
// own best guess induces, renormalize, and halve the damping until the
// objective improves. Returns false when no improvement is found.
bool seesaw_step(const EnsembleView& e, Elements& el, double& f) {
  const std::size_t k_count = el.m.size();
  std::vector<CVector> pulled(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    const Top top = top_eigen(e.map(el.chi[k]));
    pulled[k] = e.map(top.vector) * el.chi[k];
  }
  std::vector<CVector> v(k_count);
  Elements cand;
  double t = 1.0;
  for (int attempt = 0; attempt < 30; ++attempt, t *= 0.5) {
    for (std::size_t k = 0; k < k_count; ++k) v[k] = (1.0 - t) * el.chi[k] + t * pulled[k];
    if (!complete(el.m, v, e.dim, cand)) continue;
    const double fc = objective(e, cand);
    if (fc > f) {
      el = std::move(cand);
      f = fc;
      return true;
    }
  }
  return false;
}

// Real coordinates of |chi><chi| in the d^2-dimensional space of Hermitian matrices.
RVector hermitian_coords(const CVector& chi) {
  const Eigen::Index d = chi.size();
  RVector x(d * d);
  Eigen::Index n = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    x(n++) = std::norm(chi(i));
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const cplx z = chi(i) * std::conj(chi(j));
      x(n++) = z.real();
      x(n++) = z.imag();
    }
  }
  return x;
}

// Caratheodory reduction to at most d^2 elements. Weights move along a null
// direction of the element map chosen so the objective does not decrease.
void reduce(const EnsembleView& e, Elements& el) {
  const Eigen::Index dd = static_cast<Eigen::Index>(e.dim) * e.dim;
  while (static_cast<Eigen::Index>(el.m.size()) > dd) {
    const auto k_count = static_cast<Eigen::Index>(el.m.size());
    RMatrix x(dd, k_count);
    RVector f(k_count);
    for (Eigen::Index k = 0; k < k_count; ++k) {
      x.col(k) = hermitian_coords(el.chi[static_cast<std::size_t>(k)]);
      f(k) = top_eigen(e.map(el.chi[static_cast<std::size_t>(k)])).value;
    }
    Eigen::JacobiSVD<RMatrix> svd(x, Eigen::ComputeFullV);
    RVector z = svd.matrixV().col(k_count - 1);
    if (f.dot(z) < 0.0) z = -z;
    double theta = std::numeric_limits<double>::infinity();
    Eigen::Index drop = -1;
    for (Eigen::Index k = 0; k < k_count; ++k)
      if (z(k) < 0.0) {
        const double r = el.m[static_cast<std::size_t>(k)] / -z(k);
        if (r < theta) {
          theta = r;
          drop = k;
        }
      }
    if (drop < 0) break;
    Elements next;
    for (Eigen::Index k = 0; k < k_count; ++k) {
      const double mk = el.m[static_cast<std::size_t>(k)] + theta * z(k);
      if (k == drop || mk <= 0.0) continue;
      next.m.push_back(mk);
      next.chi.push_back(el.chi[static_cast<std::size_t>(k)]);
    }
    el = std::move(next);
  }
}

std::vector<Elements> initial_points(const Ensemble& s, const EnsembleView& e, const SearchConfig& cfg) {
  const int d = s.dim();
  const auto n = static_cast<Eigen::Index>(s.size());
  std::vector<Elements> starts;

  // Each consecutive orthonormal block of d states as a projective measurement.
  if (n % d == 0) {
    for (Eigen::Index b = 0; b < n / d; ++b) {
      const CMatrix block = e.states.middleCols(b * d, d);
      if ((block.adjoint() * block - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-8) continue;
      Elements el;
      for (int j = 0; j < d; ++j) {
        el.m.push_back(1.0);
        el.chi.push_back(block.col(j));
      }
      starts.push_back(std::move(el));
    }
  }

  // Pretty-good measurement.
  {
    std::vector<double> m(static_cast<std::size_t>(n), 1.0);
    std::vector<CVector> v;
    for (Eigen::Index i = 0; i < n; ++i) v.push_back(e.states.col(i));
    Elements el;
    if (complete(m, v, d, el)) starts.push_back(std::move(el));
  }

  for (int r = 0; r < cfg.restarts; ++r) {
    auto rng = restart_rng(cfg, static_cast<std::uint64_t>(r));
    std::vector<double> m(static_cast<std::size_t>(d) * d, 1.0);
    std::vector<CVector> v;
    for (int k = 0; k < d * d; ++k) v.push_back(random_state(d, rng).amplitudes());
    Elements el;
    if (complete(m, v, d, el)) starts.push_back(std::move(el));
  }
  return starts;
}

RankOnePovm to_povm(const Elements& el) {
  std::vector<PureState> dirs;
  dirs.reserve(el.chi.size());
  for (const auto& c : el.chi) dirs.push_back(PureState::normalized(c));
  return RankOnePovm::from(el.m, std::move(dirs), kAscentResidual);
}

}  // namespace

RankOnePovm RankOnePovm::from(std::vector<double> weights, std::vector<PureState> directions, double tol) {
  if (weights.empty() || weights.size() != directions.size())
    fail(ErrorKind::InvalidPovm, "weights and directions must be nonempty and of equal length");
  const int d = directions.front().dim();
  for (const auto& v : directions)
    if (v.dim() != d) fail(ErrorKind::DimensionMismatch, "POVM directions differ in dimension");
  for (double w : weights)
    if (!(w > 0.0) || !std::isfinite(w)) fail(ErrorKind::InvalidPovm, "POVM weights must be positive");
  RankOnePovm p(std::move(weights), std::move(directions));
  if (p.completeness_residual() > tol) fail(ErrorKind::InvalidPovm, "POVM elements do not sum to identity");
  return p;
}

RankOnePovm RankOnePovm::from_basis(const Observable& a) {
  std::vector<PureState> dirs;
  for (int j = 0; j < a.dim(); ++j) dirs.push_back(a.eigenvector(j));
  return from(std::vector<double>(static_cast<std::size_t>(a.dim()), 1.0), std::move(dirs));
}

double RankOnePovm::completeness_residual() const {
  const int d = dim();
  CMatrix s = -CMatrix::Identity(d, d);
  for (std::size_t k = 0; k < size(); ++k) s += weights_[k] * directions_[k].projector();
  return s.cwiseAbs().maxCoeff();
}

double avg_fidelity_element(const Ensemble& s, const PureState& chi) {
  if (chi.dim() != s.dim()) fail(ErrorKind::DimensionMismatch, "POVM element and ensemble differ in dimension");
  return top_eigen(EnsembleView(s).map(chi.amplitudes())).value;
}

double povm_fidelity(const Ensemble& s, const RankOnePovm& m) {
  if (m.dim() != s.dim()) fail(ErrorKind::DimensionMismatch, "POVM and ensemble differ in dimension");
  const EnsembleView e(s);
  double f = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) f += m.weights()[k] * top_eigen(e.map(m.directions()[k].amplitudes())).value;
  return f / s.dim();
}

FidelityResult fmax_ascent(const Ensemble& s, const SearchConfig& cfg) {
  validate(cfg);
  const EnsembleView e(s);
  Elements best;
  double best_f = -1.0;
  std::vector<double> best_trace;
  for (auto& el : initial_points(s, e, cfg)) {
    double f = objective(e, el);
    std::vector<double> trace{f};
    for (int it = 0; it < cfg.max_iters; ++it) {
      const double before = f;
      if (!seesaw_step(e, el, f)) break;
      trace.push_back(f);
      if (f - before < cfg.tol) break;
    }
    if (f > best_f) {
      best_f = f;
      best = std::move(el);
      best_trace = std::move(trace);
    }
  }
  if (best.m.empty()) fail(ErrorKind::AscentDiverged, "no feasible starting measurement");
  reduce(e, best);
  if (residual(best, s.dim()) > 1e-12) {
    Elements fixed;
    if (complete(best.m, best.chi, s.dim(), fixed)) best = std::move(fixed);
  }
  if (residual(best, s.dim()) > kAscentResidual)
    fail(ErrorKind::AscentDiverged, "completeness residual exceeds tolerance");

  FidelityResult r;
  r.povm = to_povm(best);
  r.fmax_lower = povm_fidelity(s, r.povm);
  r.q_upper = 1.0 - r.fmax_lower;
  r.method = Method::ascent;
  r.trace = std::move(best_trace);
  return r;
}

std::pair<double, RankOnePovm> q_qubit_closed(const BlochVector& a, const BlochVector& b) {
  const double c = a.dot(b);
  const double sign = c >= 0.0 ? 1.0 : -1.0;
  std::array<double, 3> n{};
  for (int i = 0; i < 3; ++i) n[static_cast<std::size_t>(i)] = a[i] + sign * b[i];
  const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  for (auto& x : n) x /= len;
  return {0.25 * (1.0 - std::abs(c)), RankOnePovm::from_basis(qubit_observable(BlochVector::from(n)))};
}

double q_mub_closed(int n, int d) {
  return (1.0 - 1.0 / static_cast<double>(n)) * (1.0 - 1.0 / static_cast<double>(d));
}

double q_subspace_closed(int d, int dc) {
  if (d < 1 || dc < 0 || dc > d - 1) fail(ErrorKind::InvalidSubspaceDim, "need 0 <= d_c <= d-1");
  return 0.5 * (1.0 - static_cast<double>(dc + 1) / static_cast<double>(d));
}

double fmax_direct_sum(double f1, std::size_t n1, double f2, std::size_t n2) {
  const auto a = static_cast<double>(n1);
  const auto b = static_cast<double>(n2);
  return (a * f1 + b * f2) / (a + b);
}

ConstantCheck constant_povm_check(const Ensemble& s, const RankOnePovm& m, double tol) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& chi : m.directions()) {
    const double v = avg_fidelity_element(s, chi);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {hi - lo <= tol, hi - lo};
}

FidelityResult q_measure(std::span<const Observable> observables, const SearchConfig& cfg) {
  require_same_dim(observables);
  const Ensemble s = eigenstate_ensemble(observables);
  const Family fam = classify(observables);
  if (!cfg.allow_closed_form || fam.kind == Family::Kind::none) {
    if (observables.size() > 1) return fmax_ascent(s, cfg);
  }
  FidelityResult r;
  r.method = Method::closed_form;
  switch (fam.kind) {
    case Family::Kind::qubit_pair: {
      auto [q, povm] = q_qubit_closed(bloch_of(observables[0]), bloch_of(observables[1]));
      r.q_upper = q;
      r.povm = std::move(povm);
      break;
    }
    case Family::Kind::mub:
      r.q_upper = q_mub_closed(fam.count, fam.dim);
      r.povm = RankOnePovm::from_basis(observables[0]);
      break;
    case Family::Kind::subspace:
      r.q_upper = q_subspace_closed(fam.dim, fam.dc);
      r.povm = RankOnePovm::from_basis(observables[0]);
      break;
    case Family::Kind::commuting:
    case Family::Kind::none:
      // A single observable, or commuting ones, are read out perfectly.
      r.q_upper = 0.0;
      r.povm = RankOnePovm::from_basis(observables[0]);
      break;
  }
  r.fmax_lower = 1.0 - r.q_upper;
  r.trace = {r.fmax_lower};
  return r;
}

}  // namespace incompat
