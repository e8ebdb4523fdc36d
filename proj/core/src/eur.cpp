#include "incompat/eur.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "incompat/error.hpp"
#include "incompat/families.hpp"

namespace incompat {

namespace {

// Outcome probabilities of every observable: column i holds p^{(i)}.
RMatrix outcome_probs(std::span<const Observable> obs, const CVector& phi) {
  RMatrix p(phi.size(), static_cast<Eigen::Index>(obs.size()));
  for (std::size_t i = 0; i < obs.size(); ++i)
    p.col(static_cast<Eigen::Index>(i)) = (obs[i].basis().adjoint() * phi).cwiseAbs2();
  return p;
}

RVector collision_sums(std::span<const Observable> obs, const CVector& phi) {
  return outcome_probs(obs, phi).colwise().squaredNorm().transpose();
}

double spread_of(const RVector& entropies) { return entropies.maxCoeff() - entropies.minCoeff(); }

// sum_i w_i sum_j p_ij |a^i_j><a^i_j|
CMatrix weighted_projector_sum(std::span<const Observable> obs, const RMatrix& p, const RVector& w) {
  const Eigen::Index d = p.rows();
  CMatrix g = CMatrix::Zero(d, d);
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const CMatrix& v = obs[i].basis();
    g += v * (w(ii) * p.col(ii)).cast<cplx>().asDiagonal() * v.adjoint();
  }
  return g;
}

CVector top_eigenvector(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  return es.eigenvectors().col(h.rows() - 1);
}

// Maximizes `score` over unit vectors from warm starts at every eigenvector
// plus cfg.restarts random states; `step` proposes the next iterate.
CVector multistart(std::span<const Observable> obs, const SearchConfig& cfg,
                   const std::function<double(const CVector&)>& score,
                   const std::function<CVector(const CVector&, double)>& step) {
  const int d = obs.front().dim();
  std::vector<CVector> starts;
  for (const auto& o : obs)
    for (int j = 0; j < d; ++j) starts.push_back(o.basis().col(j));
  for (int r = 0; r < cfg.restarts; ++r) {
    auto rng = restart_rng(cfg, static_cast<std::uint64_t>(r));
    starts.push_back(random_state(d, rng).amplitudes());
  }
  CVector best;
  double best_score = -std::numeric_limits<double>::infinity();
  for (const auto& s : starts) {
    CVector phi = s;
    double f = score(phi);
    for (int it = 0; it < cfg.max_iters; ++it) {
      CVector next = step(phi, f);
      const double fn = score(next);
      if (!(fn > f)) break;
      const bool done = fn - f < cfg.tol;
      phi = std::move(next);
      f = fn;
      if (done) break;
    }
    if (f > best_score) {
      best_score = f;
      best = phi;
    }
  }
  return best;
}

EurResult finish(std::span<const Observable> obs, const CVector& phi, Method method, bool collision) {
  EurResult r;
  r.minimizer = PureState::normalized(phi);
  const RVector s = collision_sums(obs, r.minimizer.amplitudes());
  const RVector ent = collision ? RVector(-s.array().log2()) : RVector(1.0 - s.array());
  r.value = ent.mean();
  r.method = method;
  r.spread = spread_of(ent);
  return r;
}

// Closed-form minimizer of both averaged entropies for families where it is known.
bool closed_minimizer(std::span<const Observable> obs, bool collision, CVector& phi) {
  if (obs.size() == 1) {
    phi = obs[0].basis().col(0);
    return true;
  }
  const Family fam = classify(obs);
  switch (fam.kind) {
    case Family::Kind::qubit_pair: {
      // Bisector of the nearest eigenvector pair on the Bloch sphere.
      const RMatrix o = overlap_matrix(obs[0], obs[1]).entries();
      Eigen::Index j = 0;
      o.row(0).maxCoeff(&j);
      const CVector a = obs[0].basis().col(0);
      const CVector b = obs[1].basis().col(j);
      const cplx ab = a.dot(b);
      const double mag = std::abs(ab);
      phi = a + (mag > 0.0 ? b * (std::conj(ab) / mag) : b);
      return true;
    }
    case Family::Kind::commuting:
      phi = obs[0].basis().col(0);
      return true;
    case Family::Kind::subspace: {
      const RMatrix o = overlap_matrix(obs[0], obs[1]).entries();
      for (Eigen::Index i = 0; i < o.rows(); ++i)
        if (o.row(i).maxCoeff() >= 0.5) {
          phi = obs[0].basis().col(i);
          return true;
        }
      return false;
    }
    case Family::Kind::mub:
      // Each basis state is optimal for the linear entropy only.
      if (collision) return false;
      phi = obs[0].basis().col(0);
      return true;
    case Family::Kind::none:
      return false;
  }
  return false;
}

}  // namespace

double average_t2(std::span<const Observable> observables, const PureState& phi) {
  require_same_dim(observables);
  return (1.0 - collision_sums(observables, phi.amplitudes()).array()).mean();
}

double average_h2(std::span<const Observable> observables, const PureState& phi) {
  require_same_dim(observables);
  return (-collision_sums(observables, phi.amplitudes()).array().log2()).mean();
}

EurResult t2_standard(std::span<const Observable> observables, const SearchConfig& cfg) {
  require_same_dim(observables);
  validate(cfg);
  CVector phi;
  if (cfg.allow_closed_form && closed_minimizer(observables, false, phi))
    return finish(observables, phi, Method::closed_form, false);

  // sum_ij p_ij^2 is convex in |phi><phi|, so moving to the top eigenvector of
  // its linearization never decreases it.
  const RVector ones = RVector::Ones(static_cast<Eigen::Index>(observables.size()));
  auto score = [&](const CVector& v) { return collision_sums(observables, v).sum(); };
  auto step = [&](const CVector& v, double) {
    return top_eigenvector(weighted_projector_sum(observables, outcome_probs(observables, v), ones));
  };
  phi = multistart(observables, cfg, score, step);
  return finish(observables, phi, Method::restart_search, false);
}

EurResult h2_standard(std::span<const Observable> observables, const SearchConfig& cfg) {
  require_same_dim(observables);
  validate(cfg);
  CVector phi;
  if (cfg.allow_closed_form && closed_minimizer(observables, true, phi))
    return finish(observables, phi, Method::closed_form, true);

  // Ascent on sum_i ln S_i along the gradient G phi with backtracking.
  auto score = [&](const CVector& v) { return collision_sums(observables, v).array().log().sum(); };
  auto step = [&](const CVector& v, double f) -> CVector {
    const RMatrix p = outcome_probs(observables, v);
    const RVector w = p.colwise().squaredNorm().transpose().cwiseInverse();
    const CMatrix g = weighted_projector_sum(observables, p, w);
    const CVector gv = g * v;
    const CVector tangent = gv - v * v.dot(gv);
    double t = 1.0 / std::max(g.norm(), 1e-12);
    for (int k = 0; k < 40; ++k, t *= 0.5) {
      CVector cand = (v + t * 4.0 * tangent).normalized();
      if (score(cand) > f) return cand;
    }
    return v;
  };
  phi = multistart(observables, cfg, score, step);
  return finish(observables, phi, Method::restart_search, true);
}

namespace {

// Explicit loops keep the summation order identical for O and its transpose.
double min_row_defect(const RMatrix& o) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < o.rows(); ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < o.cols(); ++j) s += o(i, j) * o(i, j);
    best = std::min(best, 1.0 - s);
  }
  return best;
}

double min_col_defect(const RMatrix& o) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < o.cols(); ++j) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < o.rows(); ++i) s += o(i, j) * o(i, j);
    best = std::min(best, 1.0 - s);
  }
  return best;
}

}  // namespace

double t2_successive(const Observable& a, const Observable& b) {
  return 0.5 * min_row_defect(overlap_matrix(a, b).entries());
}

double t2_succ_avg(const Observable& a, const Observable& b) {
  const RMatrix o = overlap_matrix(a, b).entries();
  const double forward = 0.5 * min_row_defect(o);
  const double backward = 0.5 * min_col_defect(o);
  return 0.5 * (forward + backward);
}

double h2_q_bound(std::span<const Observable> observables, const SearchConfig& cfg) {
  return 1.0 - std::exp2(-h2_standard(observables, cfg).value);
}

}  // namespace incompat
