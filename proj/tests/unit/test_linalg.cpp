#include <doctest.h>

#include <incompat/error.hpp>
#include <incompat/linalg.hpp>

#include "fixtures.hpp"

using namespace incompat;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an incompat::Error");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("eigensystem of Pauli Z is the computational basis") {
  const auto z = pauli_matrices()[2];
  const Observable a = eigensystem(z);
  CHECK(a.eigenvalues()(0) == doctest::Approx(-1.0));
  CHECK(a.eigenvalues()(1) == doctest::Approx(1.0));
  CHECK(std::abs(a.basis()(1, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(a.basis()(0, 1)) == doctest::Approx(1.0));
}

TEST_CASE("eigensystem of Pauli X") {
  const Observable a = eigensystem(pauli_matrices()[0]);
  const double s = 1.0 / std::sqrt(2.0);
  // Ascending order puts (1,-1)/sqrt2 first; canonical phase makes the first entry positive.
  CHECK(a.basis()(0, 0).real() == doctest::Approx(s));
  CHECK(a.basis()(1, 0).real() == doctest::Approx(-s));
  CHECK(a.basis()(0, 1).real() == doctest::Approx(s));
  CHECK(a.basis()(1, 1).real() == doctest::Approx(s));
}

TEST_CASE("eigensystem rejects degenerate and non-Hermitian input") {
  CHECK(kind_of([] { eigensystem(CMatrix::Identity(2, 2)); }) == ErrorKind::DegenerateSpectrum);
  CMatrix m(2, 2);
  m << 0.0, 1.0, 0.0, 1.0;
  CHECK(kind_of([&] { eigensystem(m); }) == ErrorKind::NotHermitian);
}

TEST_CASE("states carry a canonical global phase") {
  CVector v(2);
  v << cplx(0.0, 3.0), cplx(4.0, 0.0);
  const PureState s = PureState::normalized(v);
  CHECK(s[0].real() == doctest::Approx(0.6));
  CHECK(s[0].imag() == doctest::Approx(0.0));
  CHECK(s.amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(kind_of([] { PureState::normalized(CVector::Zero(3)); }) == ErrorKind::NotNormalized);
}

TEST_CASE("qubit observables from Bloch vectors") {
  const Observable z = fixtures::qubit(0.0, 0.0, 1.0);
  CHECK(overlap_matrix(z, eigensystem(pauli_matrices()[2])).entries().isIdentity(1e-12));

  const Observable x = fixtures::qubit(1.0, 0.0, 0.0);
  CHECK(overlap_matrix(x, eigensystem(pauli_matrices()[0])).entries().isIdentity(1e-12));

  // Derived: |<a+|z+>|^2 = (1 + 1/sqrt3)/2 for a = (1,1,1)/sqrt3.
  const double r = 1.0 / std::sqrt(3.0);
  const Observable a = fixtures::qubit(r, r, r);
  CHECK(overlap_matrix(a, z)(1, 1) == doctest::Approx(0.7886751345948129).epsilon(1e-12));

  CHECK(kind_of([] { BlochVector::from(1.0, 1.0, 0.0); }) == ErrorKind::NonUnitBloch);
}

TEST_CASE("overlap matrix examples") {
  const Observable z = fixtures::qubit(0.0, 0.0, 1.0);
  CHECK(overlap_matrix(z, z).entries().isIdentity(1e-12));

  // Derived: entries cos^2(delta/2) and sin^2(delta/2).
  const double c = 0.3;
  const auto p = fixtures::qubit_pair(c);
  const RMatrix o = overlap_matrix(p[0], p[1]).entries();
  CHECK(o(1, 1) == doctest::Approx((1.0 + c) / 2.0));
  CHECK(o(0, 1) == doctest::Approx((1.0 - c) / 2.0));

  const auto m = mub_bases(3, 2);
  const RMatrix om = overlap_matrix(m[0], m[1]).entries();
  CHECK((om.array() - 1.0 / 3.0).abs().maxCoeff() < 1e-12);

  CHECK(kind_of([&] { overlap_matrix(z, m[0]); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("overlap of the fixed pair matches the reference") {
  RMatrix ref(3, 3);
  ref << 0.07369146943230521, 0.8536242066306984, 0.07268432393699664, 0.8773752817604609, 0.06812899173050523,
      0.05449572650903291, 0.04893324880723292, 0.07824680163879666, 0.8728199495539704;
  const RMatrix o = overlap_matrix(fixtures::fixed_a(), fixtures::fixed_b()).entries();
  CHECK((o - ref).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("overlap matrices are doubly stochastic and transpose under swap") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 4;
    const Observable a = random_observable(d, rng);
    const Observable b = random_observable(d, rng);
    const RMatrix ab = overlap_matrix(a, b).entries();
    const RMatrix ba = overlap_matrix(b, a).entries();
    CHECK(ab == ba.transpose());
    CHECK((ab.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-10);
    CHECK((ab.colwise().sum().array() - 1.0).abs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("reconstruction reproduces the spectrum") {
  std::mt19937_64 rng(5);
  for (int d : {2, 3, 4, 6}) {
    const Observable a = random_observable(d, rng);
    const CMatrix h = a.reconstruct();
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    const Observable back = eigensystem(h);
    CHECK((back.eigenvalues() - a.eigenvalues()).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("mub_bases") {
  SUBCASE("qubit bases are Z, X, Y") {
    const auto m = mub_bases(2, 3);
    const auto s = pauli_matrices();
    for (int k = 0; k < 3; ++k) {
      const RMatrix o = overlap_matrix(m[static_cast<std::size_t>(k)], eigensystem(s[(k + 2) % 3])).entries();
      CHECK(((o.array() - 0.5).abs() > 0.49).all());
    }
  }
  SUBCASE("cross overlaps are 1/d for every admissible count") {
    for (int d : {2, 3, 5, 7}) {
      for (int n = 1; n <= d + 1; ++n) {
        const auto m = mub_bases(d, n);
        REQUIRE(m.size() == static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j) {
            const RMatrix o = overlap_matrix(m[static_cast<std::size_t>(i)], m[static_cast<std::size_t>(j)]).entries();
            CHECK((o.array() - 1.0 / d).abs().maxCoeff() < 1e-10);
          }
      }
    }
  }
  SUBCASE("errors") {
    CHECK(kind_of([] { mub_bases(4, 2); }) == ErrorKind::NonPrimeDimension);
    CHECK(kind_of([] { mub_bases(3, 5); }) == ErrorKind::TooManyBases);
  }
}

TEST_CASE("subspace_pair overlap pattern") {
  const auto [a, b] = subspace_pair(3, 1);
  RMatrix expected = RMatrix::Zero(3, 3);
  expected(0, 0) = 1.0;
  expected.bottomRightCorner(2, 2).setConstant(0.5);
  CHECK((overlap_matrix(a, b).entries() - expected).cwiseAbs().maxCoeff() < 1e-12);

  for (int d : {2, 3, 5}) {
    const auto [c, e] = subspace_pair(d, d - 1);
    CHECK(overlap_matrix(c, e).entries().isIdentity(1e-12));
    CHECK(commutator_norm(c, e) < 1e-9);
  }

  const auto [f, g] = subspace_pair(20, 0);
  CHECK((overlap_matrix(f, g).entries().array() - 0.05).abs().maxCoeff() < 1e-10);

  CHECK(kind_of([] { subspace_pair(3, 3); }) == ErrorKind::InvalidSubspaceDim);
  CHECK(kind_of([] { subspace_pair(3, -1); }) == ErrorKind::InvalidSubspaceDim);
}

TEST_CASE("eigenstate and direct-sum ensembles") {
  const auto one = mub_bases(2, 1);
  CHECK(eigenstate_ensemble(one).size() == 2);
  CHECK(eigenstate_ensemble(one).weight() == doctest::Approx(0.5));
  CHECK(eigenstate_ensemble(mub_bases(2, 2)).size() == 4);
  CHECK(eigenstate_ensemble(mub_bases(3, 3)).size() == 9);

  const std::array<Observable, 2> mixed{fixtures::qubit(0, 0, 1), mub_bases(3, 1)[0]};
  CHECK(kind_of([&] { eigenstate_ensemble(mixed); }) == ErrorKind::DimensionMismatch);

  const Ensemble s1 = eigenstate_ensemble(one);
  const Ensemble s2 = eigenstate_ensemble(mub_bases(2, 2));
  const Ensemble sum = direct_sum_ensemble(s1, s2);
  CHECK(sum.size() == 6);
  CHECK(sum.dim() == 4);
  CHECK(sum.weight() * 6.0 == doctest::Approx(1.0));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(sum.states()[i].overlap(sum.states()[2 + j]) == doctest::Approx(0.0));
      CHECK(sum.states()[2 + j].overlap(sum.states()[2 + (j + 1) % 4]) ==
            doctest::Approx(s2.states()[j].overlap(s2.states()[(j + 1) % 4])));
    }
}

TEST_CASE("density matrices are validated") {
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(3);
  CHECK(mixed.matrix().trace().real() == doctest::Approx(1.0));
  CHECK_FALSE(mixed.is_rank_one());
  CHECK(DensityMatrix::from_bloch({0.0, 0.0, 1.0}).is_rank_one());
  CHECK(kind_of([] { DensityMatrix::from_matrix(2.0 * CMatrix::Identity(2, 2)); }) ==
        ErrorKind::InvalidDensityMatrix);
  CMatrix neg = CMatrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK(kind_of([&] { DensityMatrix::from_matrix(neg); }) == ErrorKind::InvalidDensityMatrix);
}
