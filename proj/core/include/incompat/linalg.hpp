#pragma once

// Canonical state, observable and ensemble types plus the constructors for
// the observable families used throughout the library (qubit Bloch
// observables, mutually unbiased bases, pairs commuting on a subspace).

#include <array>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace incompat {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

namespace tolerance {
inline constexpr double kUnitNorm = 1e-12;
inline constexpr double kHermitian = 1e-10;
inline constexpr double kSpectralGap = 1e-9;
inline constexpr double kGram = 1e-10;
inline constexpr double kBloch = 1e-9;
inline constexpr double kDensity = 1e-12;
inline constexpr double kStochastic = 1e-10;
}  // namespace tolerance

/// Unit vector in C^d with the global phase fixed so that the first
/// non-negligible amplitude is real and positive.
class PureState {
 public:
  /// Normalizes `amplitudes`; throws NotNormalized for a zero vector.
  static PureState normalized(const CVector& amplitudes);
  static PureState basis(int dim, int index);

  int dim() const noexcept { return static_cast<int>(amps_.size()); }
  const CVector& amplitudes() const noexcept { return amps_; }
  cplx operator[](int i) const { return amps_(i); }

  CMatrix projector() const { return amps_ * amps_.adjoint(); }
  /// <this|other>
  cplx inner(const PureState& other) const;
  /// |<this|other>|^2
  double overlap(const PureState& other) const { return std::norm(inner(other)); }

 private:
  explicit PureState(CVector amps) : amps_(std::move(amps)) {}
  CVector amps_;
};

class DensityMatrix {
 public:
  /// Validates Hermiticity, unit trace and positivity (eigenvalues >= -1e-12).
  static DensityMatrix from_matrix(const CMatrix& m);
  static DensityMatrix pure(const PureState& psi);
  static DensityMatrix maximally_mixed(int dim);
  /// rho = (I + r.sigma)/2 for |r| <= 1.
  static DensityMatrix from_bloch(const std::array<double, 3>& r);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const noexcept { return m_; }
  RVector eigenvalues() const;
  bool is_rank_one(double tol = 1e-6) const;

 private:
  explicit DensityMatrix(CMatrix m) : m_(std::move(m)) {}
  CMatrix m_;
};

class BlochVector {
 public:
  /// Renormalizes when the norm is within 1e-9 of one, throws NonUnitBloch otherwise.
  static BlochVector from(double x, double y, double z);
  static BlochVector from(const std::array<double, 3>& v) { return from(v[0], v[1], v[2]); }

  const std::array<double, 3>& components() const noexcept { return v_; }
  double operator[](int i) const { return v_[static_cast<std::size_t>(i)]; }
  double dot(const BlochVector& other) const;

 private:
  explicit BlochVector(std::array<double, 3> v) : v_(v) {}
  std::array<double, 3> v_;
};

/// Non-degenerate observable: real spectrum plus orthonormal eigenbasis,
/// eigenvector i stored as column i of basis().
class Observable {
 public:
  static Observable from_eigensystem(const RVector& eigenvalues, const CMatrix& eigenvectors);

  int dim() const noexcept { return static_cast<int>(values_.size()); }
  const RVector& eigenvalues() const noexcept { return values_; }
  const CMatrix& basis() const noexcept { return basis_; }
  PureState eigenvector(int i) const;
  CMatrix projector(int i) const { return basis_.col(i) * basis_.col(i).adjoint(); }
  /// sum_i lambda_i |a_i><a_i|
  CMatrix reconstruct() const;

 private:
  Observable(RVector values, CMatrix basis) : values_(std::move(values)), basis_(std::move(basis)) {}
  RVector values_;
  CMatrix basis_;
};

/// Uniformly weighted list of pure states of equal dimension.
class Ensemble {
 public:
  explicit Ensemble(std::vector<PureState> states);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return states_.size(); }
  double weight() const noexcept { return 1.0 / static_cast<double>(states_.size()); }
  const std::vector<PureState>& states() const noexcept { return states_; }

 private:
  std::vector<PureState> states_;
  int dim_;
};

/// entries(i, j) = |<a_i|b_j>|^2, doubly stochastic.
class OverlapMatrix {
 public:
  static OverlapMatrix from_entries(const RMatrix& entries);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const RMatrix& entries() const noexcept { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  explicit OverlapMatrix(RMatrix m) : m_(std::move(m)) {}
  RMatrix m_;
};

std::array<CMatrix, 3> pauli_matrices();

/// Diagonalizes a Hermitian matrix; eigenvalues ascending.
Observable eigensystem(const CMatrix& hermitian);
Observable qubit_observable(const BlochVector& a);
OverlapMatrix overlap_matrix(const Observable& a, const Observable& b);

bool is_prime(int n) noexcept;
/// First `count` bases of the standard prime-dimension MUB family:
/// computational basis followed by the quadratic-phase Fourier bases.
/// For d = 2 these are the Z, X, Y eigenbases.
std::vector<Observable> mub_bases(int dim, int count);
/// Computational basis and a partner that agrees with it on the first `dc`
/// vectors and is a Fourier basis (mutually unbiased) on the remaining block.
std::pair<Observable, Observable> subspace_pair(int dim, int dc);

Ensemble eigenstate_ensemble(std::span<const Observable> observables);
/// Embeds s1 into the first s1.dim() coordinates and s2 into the rest.
Ensemble direct_sum_ensemble(const Ensemble& s1, const Ensemble& s2);

/// max_{i,j} || [P^A_i, P^B_j] ||_F over the spectral projectors.
double commutator_norm(const Observable& a, const Observable& b);

/// Haar-random unitary via QR of a complex Ginibre matrix.
CMatrix random_unitary(int dim, std::mt19937_64& rng);
/// Observable with a Haar-random eigenbasis and eigenvalues 0..d-1.
Observable random_observable(int dim, std::mt19937_64& rng);
PureState random_state(int dim, std::mt19937_64& rng);

void require_same_dim(std::span<const Observable> observables);

}  // namespace incompat
