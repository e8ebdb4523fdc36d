#include "incompat/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "incompat/error.hpp"
#include "incompat/families.hpp"

namespace incompat {

namespace {

constexpr double kSmooth = 1e-12;

struct PairView {
  const CMatrix& va;
  const CMatrix& vb;
  RMatrix o;

  PairView(const Observable& a, const Observable& b)
      : va(a.basis()), vb(b.basis()), o(overlap_matrix(a, b).entries()) {}

  void stats(const CMatrix& rho, RVector& p, RVector& q) const {
    const Eigen::Index d = rho.rows();
    RVector pa(d);
    p.resize(d);
    for (Eigen::Index j = 0; j < d; ++j) {
      p(j) = std::max(0.0, (vb.col(j).adjoint() * rho * vb.col(j))(0, 0).real());
      pa(j) = std::max(0.0, (va.col(j).adjoint() * rho * va.col(j))(0, 0).real());
    }
    q = o.transpose() * pa;
  }
};

double raw_distance(const RVector& p, const RVector& q, Alpha alpha) {
  switch (alpha) {
    case Alpha::one: return 0.5 * (q - p).cwiseAbs().sum();
    case Alpha::infinity: return (q - p).cwiseAbs().maxCoeff();
    case Alpha::fidelity: {
      const double f = (p.array() * q.array()).sqrt().sum();
      return 1.0 - f * f;
    }
  }
  return 0.0;
}

// Smoothed objective and its partial derivatives in p and q.
double smoothed(const RVector& p, const RVector& q, Alpha alpha, RVector& gp, RVector& gq) {
  const Eigen::Index d = p.size();
  gp = RVector::Zero(d);
  gq = RVector::Zero(d);
  switch (alpha) {
    case Alpha::one: {
      for (Eigen::Index j = 0; j < d; ++j) {
        const double s = q(j) > p(j) ? 0.5 : (q(j) < p(j) ? -0.5 : 0.0);
        gq(j) = s;
        gp(j) = -s;
      }
      return raw_distance(p, q, alpha);
    }
    case Alpha::infinity: {
      Eigen::Index j = 0;
      (q - p).cwiseAbs().maxCoeff(&j);
      const double s = q(j) >= p(j) ? 1.0 : -1.0;
      gq(j) = s;
      gp(j) = -s;
      return raw_distance(p, q, alpha);
    }
    case Alpha::fidelity: {
      const RVector r = (p.array() * q.array() + kSmooth).sqrt();
      const double f = r.sum();
      gp = -f * (q.array() / r.array()).matrix();
      gq = -f * (p.array() / r.array()).matrix();
      return 1.0 - f * f;
    }
  }
  return 0.0;
}

CMatrix density_of(const CMatrix& l) {
  const CMatrix m = l * l.adjoint();
  return m / m.trace().real();
}

struct Evaluated {
  double smooth;
  double exact;
  CMatrix grad;
};

Evaluated evaluate(const PairView& v, const CMatrix& l, Alpha alpha) {
  const CMatrix rho = density_of(l);
  RVector p, q, gp, gq;
  v.stats(rho, p, q);
  Evaluated e;
  e.smooth = smoothed(p, q, alpha, gp, gq);
  e.exact = raw_distance(p, q, alpha);
  const RVector ga = v.o * gq;
  const CMatrix g = v.vb * gp.cast<cplx>().asDiagonal() * v.vb.adjoint() +
                    v.va * ga.cast<cplx>().asDiagonal() * v.va.adjoint();
  const cplx mean = (g * rho).trace();
  const Eigen::Index d = l.rows();
  e.grad = (g - mean.real() * CMatrix::Identity(d, d)) * l;
  return e;
}

CMatrix pure_factor(const CVector& v) {
  const Eigen::Index d = v.size();
  CMatrix l = CMatrix::Zero(d, d);
  l.col(0) = v;
  return l;
}

// Backtracking ascent on L; returns the best exact value seen and its density matrix.
std::pair<double, CMatrix> ascend(const PairView& v, CMatrix l, Alpha alpha, const SearchConfig& cfg) {
  l /= std::sqrt((l * l.adjoint()).trace().real());
  Evaluated cur = evaluate(v, l, alpha);
  double best = cur.exact;
  CMatrix best_l = l;
  double eta = 0.1;
  for (int it = 0; it < cfg.max_iters; ++it) {
    const double gnorm = cur.grad.norm();
    if (!(gnorm > 1e-14)) break;
    const CMatrix dir = cur.grad / gnorm;
    bool moved = false;
    for (int k = 0; k < 40; ++k, eta *= 0.5) {
      CMatrix cand = l + eta * dir;
      cand /= std::sqrt((cand * cand.adjoint()).trace().real());
      Evaluated next = evaluate(v, cand, alpha);
      if (next.smooth > cur.smooth) {
        const double gain = next.smooth - cur.smooth;
        l = std::move(cand);
        cur = std::move(next);
        if (cur.exact > best) {
          best = cur.exact;
          best_l = l;
        }
        moved = gain >= cfg.tol;
        eta = std::min(1.0, 2.0 * eta);
        break;
      }
    }
    if (!moved) break;
  }
  return {best, density_of(best_l)};
}

DirectionalResult make_result(const Observable& a, const Observable& b, Alpha alpha, const CMatrix& rho,
                              Method method) {
  DirectionalResult r;
  const CMatrix h = 0.5 * (rho + rho.adjoint());
  r.maximizer = DensityMatrix::from_matrix(h / h.trace().real());
  r.value = disturbance(a, b, r.maximizer, alpha);
  r.alpha = alpha;
  r.method = method;
  r.rank_one = r.maximizer.is_rank_one();
  return r;
}

// Closed-form maximizer, when the pair belongs to a family with a known optimum.
bool closed_maximizer(const Observable& a, const Observable& b, Alpha alpha, CMatrix& rho) {
  const std::array<Observable, 2> pair{a, b};
  const Family fam = classify(pair);
  if (fam.kind == Family::Kind::commuting) {
    rho = a.projector(0);
    return true;
  }
  if (alpha != Alpha::fidelity) return false;
  switch (fam.kind) {
    case Family::Kind::qubit_pair:
    case Family::Kind::mub:
      rho = b.projector(0);
      return true;
    case Family::Kind::subspace: {
      // Any B eigenvector inside the unbiased block.
      const RMatrix o = overlap_matrix(a, b).entries();
      for (Eigen::Index j = 0; j < o.cols(); ++j)
        if (o.col(j).maxCoeff() < 0.5) {
          rho = b.projector(static_cast<int>(j));
          return true;
        }
      return false;
    }
    default:
      return false;
  }
}

}  // namespace

std::string_view to_string(Alpha a) noexcept {
  switch (a) {
    case Alpha::one: return "one";
    case Alpha::fidelity: return "fidelity";
    case Alpha::infinity: return "infinity";
  }
  return "unknown";
}

double disturbance(const Observable& a, const Observable& b, const DensityMatrix& rho, Alpha alpha) {
  const ProbDist p = measure_dist(b, rho);
  const ProbDist q = successive_dist(a, b, rho);
  switch (alpha) {
    case Alpha::one: return l1_distance(q, p);
    case Alpha::infinity: return linf_distance(q, p);
    case Alpha::fidelity: {
      const double f = fidelity_classical(p, q);
      return 1.0 - f * f;
    }
  }
  return 0.0;
}

DirectionalResult q_alpha_directional(const Observable& a, const Observable& b, Alpha alpha,
                                      const SearchConfig& cfg) {
  if (a.dim() != b.dim()) fail(ErrorKind::DimensionMismatch, "observables differ in dimension");
  validate(cfg);
  CMatrix rho;
  if (cfg.allow_closed_form && closed_maximizer(a, b, alpha, rho))
    return make_result(a, b, alpha, rho, Method::closed_form);

  const PairView view(a, b);
  const int d = a.dim();
  std::vector<CMatrix> starts;
  for (int j = 0; j < d; ++j) {
    starts.push_back(pure_factor(a.basis().col(j)));
    starts.push_back(pure_factor(b.basis().col(j)));
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int r = 0; r < cfg.restarts; ++r) {
    auto rng = restart_rng(cfg, static_cast<std::uint64_t>(r));
    if (r % 2 == 0) {
      starts.push_back(pure_factor(random_state(d, rng).amplitudes()));
    } else {
      CMatrix l(d, d);
      for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) l(i, k) = cplx(normal(rng), normal(rng));
      starts.push_back(std::move(l));
    }
  }
  // Candidates are ranked by the unsmoothed evaluation, start points included:
  // near a vanishing probability the square root turns roundoff in the
  // ascended iterate into a visible loss.
  double best = -std::numeric_limits<double>::infinity();
  CMatrix best_rho;
  auto consider = [&](const CMatrix& rho) {
    const double v = disturbance(a, b, DensityMatrix::from_matrix(rho), alpha);
    if (v > best) {
      best = v;
      best_rho = rho;
    }
  };
  for (const auto& l : starts) {
    consider(density_of(l));
    consider(ascend(view, l, alpha, cfg).second);
  }
  return make_result(a, b, alpha, best_rho, Method::restart_search);
}

double q_alpha_pair(const Observable& a, const Observable& b, Alpha alpha, const SearchConfig& cfg) {
  return 0.25 * (q_alpha_directional(a, b, alpha, cfg).value + q_alpha_directional(b, a, alpha, cfg).value);
}

double q_alpha_set(std::span<const Observable> observables, Alpha alpha, const SearchConfig& cfg) {
  require_same_dim(observables);
  if (observables.size() < 2) fail(ErrorKind::DimensionMismatch, "need at least two observables");
  double total = 0.0;
  for (std::size_t i = 0; i < observables.size(); ++i)
    for (std::size_t j = 0; j < observables.size(); ++j)
      if (i != j) total += q_alpha_directional(observables[i], observables[j], alpha, cfg).value;
  const auto n = static_cast<double>(observables.size());
  return total / (n * n);
}

double qf_qubit_closed(const BlochVector& a, const BlochVector& b) {
  const double c = a.dot(b);
  return 0.25 * (1.0 - c * c);
}

double qf_subspace_closed(int d, int dc) {
  if (d < 1 || dc < 0 || dc > d - 1) fail(ErrorKind::InvalidSubspaceDim, "need 0 <= d_c <= d-1");
  return 0.5 * (1.0 - 1.0 / static_cast<double>(d - dc));
}

}  // namespace incompat
