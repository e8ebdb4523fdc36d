#include "incompat/convex_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "incompat/error.hpp"

namespace incompat {

std::string_view to_string(BoundTarget t) noexcept {
  return t == BoundTarget::Q ? "Q" : "Q_F_directional";
}

std::string_view to_string(BoundDirection d) noexcept {
  return d == BoundDirection::lower_bound_on_target ? "lower_bound_on_target" : "upper_bound_on_fmax";
}

std::string_view to_string(QpVariant v) noexcept {
  switch (v) {
    case QpVariant::none: return "none";
    case QpVariant::as_stated: return "as_stated";
    case QpVariant::with_factor2: return "with_factor2";
    case QpVariant::derivation_matrix: return "derivation_matrix";
  }
  return "unknown";
}

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::consistent: return "consistent";
    case Verdict::violated: return "violated";
    case Verdict::untested: return "untested";
  }
  return "unknown";
}

std::string_view to_string(OracleKind k) noexcept {
  return k == OracleKind::closed_form ? "closed_form" : "brute_force";
}

// ---------------------------------------------------------------------------
// SDP: min Tr Lambda  s.t.  I (x) Lambda - A >= 0

namespace {

constexpr int kMaxNewton = 3000;
constexpr double kMuStart = 1.0;
constexpr double kMuFactor = 0.2;
constexpr double kMuStop = 1e-9;

struct Barrier {
  const CMatrix& a;
  int d;

  CMatrix slack(const CMatrix& lam) const {
    CMatrix s = -a;
    for (int blk = 0; blk < d; ++blk) s.block(blk * d, blk * d, d, d) += lam;
    return s;
  }

  // Tr Lambda - mu log det S, or +inf outside the cone.
  double value(const CMatrix& lam, double mu) const {
    Eigen::LLT<CMatrix> llt(slack(lam));
    if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    const auto diag = llt.matrixLLT().diagonal().real();
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
      if (!(diag(i) > 0.0)) return std::numeric_limits<double>::infinity();
      logdet += 2.0 * std::log(diag(i));
    }
    return lam.trace().real() - mu * logdet;
  }
};

struct Inverse {
  CMatrix w;
  double min_eig;
};

Inverse inverse_of(const CMatrix& s) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(s);
  const RVector ev = es.eigenvalues();
  return {es.eigenvectors() * ev.cwiseInverse().cast<cplx>().asDiagonal() * es.eigenvectors().adjoint(), ev(0)};
}

CMatrix partial_trace_first(const CMatrix& w, int d) {
  CMatrix t = CMatrix::Zero(d, d);
  for (int blk = 0; blk < d; ++blk) t += w.block(blk * d, blk * d, d, d);
  return t;
}

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

BoundReport sdp_q_lower(const Ensemble& s) {
  const int d = s.dim();
  const int dd = d * d;
  if (dd > 1024) fail(ErrorKind::ProblemTooLarge, "d^2 exceeds 1024");

  CMatrix a = CMatrix::Zero(dd, dd);
  for (const auto& st : s.states()) {
    CVector t(dd);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) t(i * d + j) = st[i] * st[j];
    a += s.weight() * t * t.adjoint();
  }
  a = hermitian_part(a);

  const Barrier barrier{a, d};
  Eigen::SelfAdjointEigenSolver<CMatrix> es_a(a, Eigen::EigenvaluesOnly);
  CMatrix lam = (es_a.eigenvalues().maxCoeff() + 0.1) * CMatrix::Identity(d, d);
  const CMatrix eye = CMatrix::Identity(d, d);

  int steps = 0;
  double mu = kMuStart;
  for (;;) {
    for (;;) {
      const Inverse inv = inverse_of(barrier.slack(lam));
      const CMatrix g = eye - mu * partial_trace_first(inv.w, d);
      // Hessian of the barrier on vec(Delta): mu sum_{a,b} W_ba^T (x) W_ab.
      CMatrix h = CMatrix::Zero(dd, dd);
      for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) {
          const CMatrix wpq = inv.w.block(p * d, q * d, d, d);
          const CMatrix wqp_t = inv.w.block(q * d, p * d, d, d).transpose();
          for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) h.block(r * d, c * d, d, d) += mu * wqp_t(r, c) * wpq;
        }
      const CVector rhs = -Eigen::Map<const CVector>(g.data(), dd);
      const CVector x = h.ldlt().solve(rhs);
      const CMatrix delta = hermitian_part(Eigen::Map<const CMatrix>(x.data(), d, d));
      const double decrement = -(g * delta).trace().real();
      if (!(decrement > 1e-14 * std::max(1.0, std::abs(lam.trace().real())))) break;
      const double f0 = barrier.value(lam, mu);
      double t = 1.0;
      bool accepted = false;
      for (int k = 0; k < 60; ++k, t *= 0.5) {
        const CMatrix cand = lam + t * delta;
        if (barrier.value(cand, mu) <= f0 - 0.25 * t * decrement) {
          lam = hermitian_part(cand);
          accepted = true;
          break;
        }
      }
      if (++steps > kMaxNewton) fail(ErrorKind::SolverStalled, "barrier method exceeded its Newton step budget");
      if (!accepted) break;
    }
    if (mu * kMuFactor < kMuStop) break;
    mu *= kMuFactor;
  }

  const Inverse inv = inverse_of(barrier.slack(lam));
  BoundReport r;
  r.target = BoundTarget::Q;
  r.direction = BoundDirection::upper_bound_on_fmax;
  r.variant = QpVariant::none;
  r.program_value = lam.trace().real();
  r.bound = r.program_value;
  r.certificate.feas_margin = inv.min_eig;
  r.certificate.stationarity = (eye - mu * partial_trace_first(inv.w, d)).norm();
  r.dual_value = (a * (mu * inv.w)).trace().real();
  r.newton_steps = steps;
  r.lambda = lam;
  if (r.certificate.feas_margin < -1e-8)
    fail(ErrorKind::SolverStalled, "final iterate is infeasible");
  return r;
}

// ---------------------------------------------------------------------------
// QP: min v'Mv over the probability simplex

namespace {

constexpr int kGridResolution = 60;
constexpr int kGridMaxDim = 6;

RVector project_simplex(const RVector& y) {
  std::vector<double> u(y.data(), y.data() + y.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cum += u[k];
    const double t = (cum - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) theta = t;
  }
  return (y.array() - theta).max(0.0).matrix();
}

double quad(const RMatrix& m, const RVector& v) { return v.dot(m * v); }

RVector projected_gradient(const RMatrix& m, RVector v) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(m, Eigen::EigenvaluesOnly);
  const double lip = 2.0 * std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-12);
  const double step = 1.0 / lip;
  for (int it = 0; it < 20000; ++it) {
    const RVector next = project_simplex(v - step * 2.0 * (m * v));
    const double moved = (next - v).cwiseAbs().maxCoeff();
    v = next;
    if (moved < 1e-15) break;
  }
  return v;
}

void grid_search(const RMatrix& m, RVector& best, double& best_val) {
  const auto d = static_cast<int>(m.rows());
  std::vector<int> counts(static_cast<std::size_t>(d), 0);
  RVector v(d);
  std::function<void(int, int)> rec = [&](int idx, int remaining) {
    if (idx == d - 1) {
      counts[static_cast<std::size_t>(idx)] = remaining;
      for (int i = 0; i < d; ++i) v(i) = counts[static_cast<std::size_t>(i)] / static_cast<double>(kGridResolution);
      const double f = quad(m, v);
      if (f < best_val) {
        best_val = f;
        best = v;
      }
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      counts[static_cast<std::size_t>(idx)] = c;
      rec(idx + 1, remaining - c);
    }
  };
  rec(0, kGridResolution);
}

// Solves the equality-constrained problem on the support of v and shrinks
// the support while the solution leaves the simplex.
RVector polish(const RMatrix& m, const RVector& v) {
  const Eigen::Index d = v.size();
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < d; ++i)
    if (v(i) > 1e-9) support.push_back(i);
  RVector best = v;
  double best_val = quad(m, v);
  while (!support.empty()) {
    const auto k = static_cast<Eigen::Index>(support.size());
    RMatrix kkt = RMatrix::Zero(k + 1, k + 1);
    RVector rhs = RVector::Zero(k + 1);
    for (Eigen::Index i = 0; i < k; ++i) {
      for (Eigen::Index j = 0; j < k; ++j) kkt(i, j) = 2.0 * m(support[i], support[j]);
      kkt(i, k) = -1.0;
      kkt(k, i) = 1.0;
    }
    rhs(k) = 1.0;
    Eigen::FullPivLU<RMatrix> lu(kkt);
    if (!lu.isInvertible()) break;
    const RVector sol = lu.solve(rhs);
    Eigen::Index worst = -1;
    double worst_val = 0.0;
    for (Eigen::Index i = 0; i < k; ++i)
      if (sol(i) < worst_val) {
        worst_val = sol(i);
        worst = i;
      }
    if (worst < 0) {
      RVector cand = RVector::Zero(d);
      for (Eigen::Index i = 0; i < k; ++i) cand(support[i]) = sol(i);
      cand /= cand.sum();
      const double f = quad(m, cand);
      if (f <= best_val + 1e-14) {
        best = cand;
        best_val = f;
      }
      break;
    }
    support.erase(support.begin() + worst);
  }
  return best;
}

double kkt_residual(const RMatrix& m, const RVector& v) {
  const RVector g = 2.0 * (m * v);
  double lam = 0.0;
  int active = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v(i) > 1e-9) {
      lam += g(i);
      ++active;
    }
  lam /= std::max(active, 1);
  double res = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    res = std::max(res, v(i) > 1e-9 ? std::abs(g(i) - lam) : std::max(0.0, lam - g(i)));
  return res;
}

double tangent_min_eigenvalue(const RMatrix& m) {
  const Eigen::Index d = m.rows();
  if (d < 2) return 0.0;
  // Orthonormal basis of {x : sum x = 0} from the QR of [1, I].
  RMatrix basis_in(d, d);
  basis_in.col(0) = RVector::Ones(d);
  basis_in.rightCols(d - 1) = RMatrix::Identity(d, d).leftCols(d - 1);
  Eigen::HouseholderQR<RMatrix> qr(basis_in);
  const RMatrix q = (qr.householderQ() * RMatrix::Identity(d, d)).rightCols(d - 1);
  Eigen::SelfAdjointEigenSolver<RMatrix> es(q.transpose() * m * q, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace

BoundReport qp_qf_lower(const Observable& a, const Observable& b, QpVariant variant) {
  if (a.dim() != b.dim()) fail(ErrorKind::DimensionMismatch, "observables differ in dimension");
  if (variant == QpVariant::none) fail(ErrorKind::InvalidArgument, "a program variant is required");
  const RMatrix o = overlap_matrix(a, b).entries();
  const RMatrix raw = variant == QpVariant::derivation_matrix ? RMatrix(o * o.transpose()) : o;
  const RMatrix m = 0.5 * (raw + raw.transpose());
  const Eigen::Index d = m.rows();

  RVector best = RVector::Constant(d, 1.0 / static_cast<double>(d));
  double best_val = quad(m, best);
  std::vector<RVector> starts;
  for (Eigen::Index i = 0; i < d; ++i) starts.push_back(RVector::Unit(d, i));
  starts.push_back(best);
  for (const auto& s : starts) {
    const RVector v = projected_gradient(m, s);
    const double f = quad(m, v);
    if (f < best_val) {
      best_val = f;
      best = v;
    }
  }
  if (d <= kGridMaxDim) grid_search(m, best, best_val);
  best = polish(m, best);
  best_val = quad(m, best);

  BoundReport r;
  r.target = BoundTarget::Q_F_directional;
  r.direction = BoundDirection::lower_bound_on_target;
  r.variant = variant;
  r.program_value = best_val;
  r.bound = variant == QpVariant::with_factor2 ? 1.0 - 2.0 * best_val : 1.0 - best_val;
  r.minimizer = best;
  r.certificate.feas_margin = best.minCoeff();
  r.certificate.stationarity = kkt_residual(m, best);
  r.tangent_min_eig = tangent_min_eigenvalue(m);
  return r;
}

BoundReport audit_bound(BoundReport report, double oracle_value, OracleKind kind) {
  const double slack = kind == OracleKind::closed_form ? 1e-6 : 5e-3;
  const bool violated = report.direction == BoundDirection::lower_bound_on_target
                            ? report.bound > oracle_value + slack
                            : report.bound < oracle_value - slack;
  report.verdict = violated ? Verdict::violated : Verdict::consistent;
  report.oracle = oracle_value;
  report.oracle_kind = kind;
  return report;
}

}  // namespace incompat
