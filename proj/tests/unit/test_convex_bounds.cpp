#include <chrono>

#include <doctest.h>

#include <incompat/convex_bounds.hpp>
#include <incompat/distance.hpp>
#include <incompat/error.hpp>
#include <incompat/fidelity.hpp>

#include "fixtures.hpp"

using namespace incompat;

namespace {

void check_sdp_certificate(const BoundReport& r) {
  CHECK(r.direction == BoundDirection::upper_bound_on_fmax);
  CHECK(r.certificate.feas_margin >= -1e-8);
  CHECK((r.lambda - r.lambda.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(r.lambda);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
  CHECK(r.bound == doctest::Approx(r.lambda.trace().real()).epsilon(1e-12));
}

RMatrix program_matrix(const Observable& a, const Observable& b, QpVariant v) {
  const RMatrix o = overlap_matrix(a, b).entries();
  if (v == QpVariant::derivation_matrix) return o * o.transpose();
  return 0.5 * (o + o.transpose());
}

void check_kkt(const Observable& a, const Observable& b, QpVariant v) {
  const BoundReport r = qp_qf_lower(a, b, v);
  const RVector& x = r.minimizer;
  CHECK(x.minCoeff() >= -1e-10);
  CHECK(x.sum() == doctest::Approx(1.0).epsilon(1e-10));
  const RVector g = 2.0 * program_matrix(a, b, v) * x;
  double active = std::numeric_limits<double>::quiet_NaN();
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x(i) > 1e-9) {
      if (std::isnan(active)) active = g(i);
      CHECK(g(i) == doctest::Approx(active).epsilon(1e-6));
    }
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x(i) <= 1e-9) CHECK(g(i) >= active - 1e-6);
  CHECK(r.program_value == doctest::Approx(x.dot(program_matrix(a, b, v) * x)).epsilon(1e-12));
}

}  // namespace

TEST_CASE("SDP values match an independent conic solver") {
  // Reference optima from cvxpy/SCS (tests/oracle/derive_oracles.py).
  struct Case {
    int d, n;
    double ref;
  };
  for (const Case c : {Case{2, 2, 0.9999999990527861}, Case{2, 3, 0.6666666667260093}, Case{3, 2, 0.7886751346022246},
                       Case{5, 2, 0.7236067977500469}}) {
    const BoundReport r = sdp_q_lower(eigenstate_ensemble(mub_bases(c.d, c.n)));
    CHECK(r.bound == doctest::Approx(c.ref).epsilon(1e-6));
    check_sdp_certificate(r);
  }
}

TEST_CASE("SDP sandwich against the ascent") {
  std::vector<Ensemble> cases;
  cases.push_back(eigenstate_ensemble(mub_bases(3, 1)));
  cases.push_back(eigenstate_ensemble(mub_bases(2, 2)));
  cases.push_back(eigenstate_ensemble(mub_bases(3, 2)));
  const std::array<Observable, 2> fixed{fixtures::fixed_a(), fixtures::fixed_b()};
  cases.push_back(eigenstate_ensemble(fixed));
  std::mt19937_64 rng(6);
  std::vector<PureState> random;
  for (int i = 0; i < 6; ++i) random.push_back(random_state(3, rng));
  cases.emplace_back(random);
  for (const auto& s : cases) {
    const BoundReport r = sdp_q_lower(s);
    check_sdp_certificate(r);
    CHECK(fmax_ascent(s, fixtures::quick(4)).fmax_lower <= r.bound + 1e-6);
  }
  // A single orthonormal basis: S* >= 1, hence 1 - S* <= Q = 0.
  CHECK(sdp_q_lower(cases[0]).bound >= 1.0 - 1e-6);
}

TEST_CASE("SDP completes quickly at d = 4") {
  std::mt19937_64 rng(10);
  const std::array<Observable, 2> obs{random_observable(4, rng), random_observable(4, rng)};
  const auto start = std::chrono::steady_clock::now();
  const BoundReport r = sdp_q_lower(eigenstate_ensemble(obs));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  check_sdp_certificate(r);
  CHECK(secs < 10.0);
}

TEST_CASE("QP on MUB pairs is tight in the as-stated reading") {
  for (int d : {2, 3, 5}) {
    const auto m = mub_bases(d, 2);
    const BoundReport r = qp_qf_lower(m[0], m[1], QpVariant::as_stated);
    CHECK(std::abs(r.bound - (1.0 - 1.0 / d)) <= 1e-9);
    CHECK(r.target == BoundTarget::Q_F_directional);
    CHECK(r.direction == BoundDirection::lower_bound_on_target);
    const DirectionalResult qf = q_alpha_directional(m[0], m[1], Alpha::fidelity);
    CHECK(audit_bound(r, qf.value, OracleKind::closed_form).verdict == Verdict::consistent);
    CHECK(std::abs(r.tangent_min_eig) < 1e-12);
  }
}

TEST_CASE("QP counterexamples on commuting pairs") {
  const auto q2 = subspace_pair(2, 1);
  const BoundReport as2 = qp_qf_lower(q2.first, q2.second, QpVariant::as_stated);
  CHECK(as2.program_value == doctest::Approx(0.5));
  CHECK(as2.bound == doctest::Approx(0.5));
  CHECK(audit_bound(as2, 0.0, OracleKind::closed_form).verdict == Verdict::violated);

  const auto q3 = subspace_pair(3, 2);
  const BoundReport f3 = qp_qf_lower(q3.first, q3.second, QpVariant::with_factor2);
  CHECK(f3.bound == doctest::Approx(1.0 / 3.0));
  const double oracle = q_alpha_directional(q3.first, q3.second, Alpha::fidelity, fixtures::searched()).value;
  CHECK(oracle < 1e-6);
  CHECK(audit_bound(f3, oracle, OracleKind::brute_force).verdict == Verdict::violated);
}

TEST_CASE("QP on the fixed pair matches exact face enumeration") {
  // Minima from enumerating every face of the simplex (tests/oracle).
  const Observable a = fixtures::fixed_a();
  const Observable b = fixtures::fixed_b();
  const double as_min = 0.06812516893664404;
  CHECK(qp_qf_lower(a, b, QpVariant::as_stated).program_value == doctest::Approx(as_min).epsilon(1e-9));
  CHECK(qp_qf_lower(a, b, QpVariant::as_stated).bound == doctest::Approx(1.0 - as_min).epsilon(1e-9));
  CHECK(qp_qf_lower(a, b, QpVariant::with_factor2).bound == doctest::Approx(1.0 - 2.0 * as_min).epsilon(1e-9));
  CHECK(qp_qf_lower(a, b, QpVariant::derivation_matrix).bound == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  // The overlap matrix here is not positive on the simplex tangent space.
  CHECK(qp_qf_lower(a, b, QpVariant::as_stated).tangent_min_eig < 0.0);
}

TEST_CASE("QP minimizers satisfy KKT conditions") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 12; ++trial) {
    const int d = 2 + trial % 4;
    const Observable a = random_observable(d, rng);
    const Observable b = random_observable(d, rng);
    for (QpVariant v : {QpVariant::as_stated, QpVariant::with_factor2, QpVariant::derivation_matrix}) check_kkt(a, b, v);
  }
  check_kkt(fixtures::fixed_a(), fixtures::fixed_b(), QpVariant::as_stated);
}

TEST_CASE("QP argument checks") {
  const auto m = mub_bases(2, 2);
  CHECK_THROWS_AS(qp_qf_lower(m[0], fixtures::fixed_a(), QpVariant::as_stated), Error);
  CHECK_THROWS_AS(qp_qf_lower(m[0], m[1], QpVariant::none), Error);
}

TEST_CASE("audit_bound slack rule") {
  BoundReport r;
  r.bound = 0.45;
  CHECK(audit_bound(r, 0.45, OracleKind::closed_form).verdict == Verdict::consistent);
  r.bound = 0.5;
  CHECK(audit_bound(r, 0.0, OracleKind::closed_form).verdict == Verdict::violated);
  r.bound = 0.30;
  CHECK(audit_bound(r, 0.299, OracleKind::brute_force).verdict == Verdict::consistent);
  CHECK(audit_bound(r, 0.299, OracleKind::closed_form).verdict == Verdict::violated);

  BoundReport up;
  up.direction = BoundDirection::upper_bound_on_fmax;
  up.bound = 0.7;
  CHECK(audit_bound(up, 0.75, OracleKind::closed_form).verdict == Verdict::violated);
  CHECK(audit_bound(up, 0.69, OracleKind::closed_form).verdict == Verdict::consistent);
  CHECK(audit_bound(up, 0.69, OracleKind::closed_form).oracle.value() == 0.69);
}
