#include "incompat/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "incompat/error.hpp"

namespace incompat {

namespace {

// Amplitudes below this magnitude are treated as zero when fixing the phase.
constexpr double kPhaseThreshold = 1e-10;

CVector canonical_phase(CVector v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > kPhaseThreshold) {
      v *= std::conj(v(i)) / mag;
      v(i) = cplx(mag, 0.0);
      break;
    }
  }
  return v;
}

double hermitian_defect(const CMatrix& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

}  // namespace

PureState PureState::normalized(const CVector& amplitudes) {
  const double n = amplitudes.norm();
  if (amplitudes.size() == 0 || !(n > 1e-300)) fail(ErrorKind::NotNormalized, "zero state vector");
  return PureState(canonical_phase(amplitudes / n));
}

PureState PureState::basis(int dim, int index) {
  if (index < 0 || index >= dim) fail(ErrorKind::OutOfRange, "basis index out of range");
  CVector v = CVector::Zero(dim);
  v(index) = 1.0;
  return PureState(std::move(v));
}

cplx PureState::inner(const PureState& other) const {
  if (other.dim() != dim()) fail(ErrorKind::DimensionMismatch, "inner product of states of different dimension");
  cplx acc = 0.0;
  for (int k = 0; k < dim(); ++k) acc += std::conj(amps_(k)) * other.amps_(k);
  return acc;
}

DensityMatrix DensityMatrix::from_matrix(const CMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) fail(ErrorKind::InvalidDensityMatrix, "matrix must be square");
  if (hermitian_defect(m) > tolerance::kDensity) fail(ErrorKind::NotHermitian, "density matrix not Hermitian");
  const CMatrix h = 0.5 * (m + m.adjoint());
  if (std::abs(h.trace().real() - 1.0) > tolerance::kDensity)
    fail(ErrorKind::InvalidDensityMatrix, "trace must equal one");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tolerance::kDensity)
    fail(ErrorKind::InvalidDensityMatrix, "negative eigenvalue");
  return DensityMatrix(h);
}

DensityMatrix DensityMatrix::pure(const PureState& psi) { return DensityMatrix(psi.projector()); }

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  if (dim < 1) fail(ErrorKind::InvalidArgument, "dimension must be positive");
  return DensityMatrix(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::from_bloch(const std::array<double, 3>& r) {
  const double n = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
  if (n > 1.0 + tolerance::kBloch) fail(ErrorKind::InvalidDensityMatrix, "Bloch vector outside the unit ball");
  const auto s = pauli_matrices();
  CMatrix m = CMatrix::Identity(2, 2);
  for (int i = 0; i < 3; ++i) m += r[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(i)];
  return DensityMatrix(0.5 * m);
}

RVector DensityMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

bool DensityMatrix::is_rank_one(double tol) const { return eigenvalues().maxCoeff() >= 1.0 - tol; }

BlochVector BlochVector::from(double x, double y, double z) {
  const double n = std::sqrt(x * x + y * y + z * z);
  if (std::abs(n - 1.0) > tolerance::kBloch)
    fail(ErrorKind::NonUnitBloch, "Bloch vector norm " + std::to_string(n) + " is not one");
  return BlochVector({x / n, y / n, z / n});
}

double BlochVector::dot(const BlochVector& other) const {
  return v_[0] * other.v_[0] + v_[1] * other.v_[1] + v_[2] * other.v_[2];
}

Observable Observable::from_eigensystem(const RVector& eigenvalues, const CMatrix& eigenvectors) {
  const Eigen::Index d = eigenvalues.size();
  if (d == 0 || eigenvectors.rows() != d || eigenvectors.cols() != d)
    fail(ErrorKind::DimensionMismatch, "eigenvalue count must match the eigenvector matrix");
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i + 1; j < d; ++j)
      if (std::abs(eigenvalues(i) - eigenvalues(j)) <= tolerance::kSpectralGap)
        fail(ErrorKind::DegenerateSpectrum, "eigenvalues " + std::to_string(i) + " and " + std::to_string(j) +
                                                " are degenerate");
  const CMatrix gram = eigenvectors.adjoint() * eigenvectors;
  if ((gram - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > tolerance::kGram)
    fail(ErrorKind::NotNormalized, "eigenbasis is not orthonormal");
  CMatrix basis(d, d);
  for (Eigen::Index j = 0; j < d; ++j) basis.col(j) = canonical_phase(eigenvectors.col(j).normalized());
  return Observable(eigenvalues, std::move(basis));
}

PureState Observable::eigenvector(int i) const {
  if (i < 0 || i >= dim()) fail(ErrorKind::OutOfRange, "eigenvector index out of range");
  return PureState::normalized(basis_.col(i));
}

CMatrix Observable::reconstruct() const {
  return basis_ * values_.cast<cplx>().asDiagonal() * basis_.adjoint();
}

Ensemble::Ensemble(std::vector<PureState> states) : states_(std::move(states)), dim_(0) {
  if (states_.empty()) fail(ErrorKind::InvalidArgument, "ensemble must contain at least one state");
  dim_ = states_.front().dim();
  for (const auto& s : states_)
    if (s.dim() != dim_) fail(ErrorKind::DimensionMismatch, "ensemble states differ in dimension");
}

OverlapMatrix OverlapMatrix::from_entries(const RMatrix& entries) {
  if (entries.rows() != entries.cols()) fail(ErrorKind::DimensionMismatch, "overlap matrix must be square");
  if (entries.minCoeff() < -tolerance::kStochastic || entries.maxCoeff() > 1.0 + tolerance::kStochastic)
    fail(ErrorKind::InvalidDistribution, "overlap entries outside [0,1]");
  const double row_err = (entries.rowwise().sum().array() - 1.0).abs().maxCoeff();
  const double col_err = (entries.colwise().sum().array() - 1.0).abs().maxCoeff();
  if (row_err > tolerance::kStochastic || col_err > tolerance::kStochastic)
    fail(ErrorKind::InvalidDistribution, "overlap matrix is not doubly stochastic");
  return OverlapMatrix(entries);
}

std::array<CMatrix, 3> pauli_matrices() {
  const cplx i(0.0, 1.0);
  CMatrix x(2, 2), y(2, 2), z(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  y << 0.0, -i, i, 0.0;
  z << 1.0, 0.0, 0.0, -1.0;
  return {x, y, z};
}

Observable eigensystem(const CMatrix& hermitian) {
  if (hermitian.rows() != hermitian.cols() || hermitian.rows() == 0)
    fail(ErrorKind::NotHermitian, "matrix must be square");
  if (hermitian_defect(hermitian) > tolerance::kHermitian) fail(ErrorKind::NotHermitian, "matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (hermitian + hermitian.adjoint()));
  return Observable::from_eigensystem(es.eigenvalues(), es.eigenvectors());
}

Observable qubit_observable(const BlochVector& a) {
  const auto s = pauli_matrices();
  const CMatrix h = a[0] * s[0] + a[1] * s[1] + a[2] * s[2];
  return eigensystem(h);
}

OverlapMatrix overlap_matrix(const Observable& a, const Observable& b) {
  if (a.dim() != b.dim()) fail(ErrorKind::DimensionMismatch, "observables differ in dimension");
  const int d = a.dim();
  const CMatrix& va = a.basis();
  const CMatrix& vb = b.basis();
  // Explicit fixed-order sums: overlap_matrix(b, a) is then bitwise the transpose.
  RMatrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      cplx acc = 0.0;
      for (int k = 0; k < d; ++k) acc += std::conj(va(k, i)) * vb(k, j);
      m(i, j) = std::norm(acc);
    }
  return OverlapMatrix::from_entries(m);
}

bool is_prime(int n) noexcept {
  if (n < 2) return false;
  for (int p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

std::vector<Observable> mub_bases(int dim, int count) {
  if (!is_prime(dim)) fail(ErrorKind::NonPrimeDimension, std::to_string(dim) + " is not prime");
  if (count < 1 || count > dim + 1)
    fail(ErrorKind::TooManyBases, "at most d+1 mutually unbiased bases exist in dimension " + std::to_string(dim));
  std::vector<Observable> out;
  out.reserve(static_cast<std::size_t>(count));
  if (dim == 2) {
    const std::array<std::array<double, 3>, 3> axes{{{0, 0, 1}, {1, 0, 0}, {0, 1, 0}}};
    for (int k = 0; k < count; ++k) out.push_back(qubit_observable(BlochVector::from(axes[static_cast<std::size_t>(k)])));
    return out;
  }
  RVector values(dim);
  for (int j = 0; j < dim; ++j) values(j) = j;
  out.push_back(Observable::from_eigensystem(values, CMatrix::Identity(dim, dim)));
  const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int k = 0; k + 1 < count; ++k) {
    CMatrix v(dim, dim);
    for (int j = 0; j < dim; ++j)
      for (int n = 0; n < dim; ++n) {
        // omega^(k n^2 + j n), exponent reduced mod d before forming the phase
        const long e = (static_cast<long>(k) * n * n + static_cast<long>(j) * n) % dim;
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(e) / dim;
        v(n, j) = norm * cplx(std::cos(angle), std::sin(angle));
      }
    out.push_back(Observable::from_eigensystem(values, v));
  }
  return out;
}

std::pair<Observable, Observable> subspace_pair(int dim, int dc) {
  if (dim < 1 || dc < 0 || dc > dim - 1)
    fail(ErrorKind::InvalidSubspaceDim, "need 0 <= d_c <= d-1, got d=" + std::to_string(dim) + " d_c=" + std::to_string(dc));
  const int m = dim - dc;
  RVector values(dim);
  for (int j = 0; j < dim; ++j) values(j) = j;
  CMatrix vb = CMatrix::Identity(dim, dim);
  const double norm = 1.0 / std::sqrt(static_cast<double>(m));
  for (int j = 0; j < m; ++j)
    for (int n = 0; n < m; ++n) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((j * n) % m) / m;
      vb(dc + n, dc + j) = norm * cplx(std::cos(angle), std::sin(angle));
    }
  return {Observable::from_eigensystem(values, CMatrix::Identity(dim, dim)), Observable::from_eigensystem(values, vb)};
}

void require_same_dim(std::span<const Observable> observables) {
  if (observables.empty()) fail(ErrorKind::InvalidArgument, "need at least one observable");
  const int d = observables.front().dim();
  for (const auto& o : observables)
    if (o.dim() != d) fail(ErrorKind::DimensionMismatch, "observables differ in dimension");
}

Ensemble eigenstate_ensemble(std::span<const Observable> observables) {
  require_same_dim(observables);
  std::vector<PureState> states;
  for (const auto& o : observables)
    for (int j = 0; j < o.dim(); ++j) states.push_back(o.eigenvector(j));
  return Ensemble(std::move(states));
}

Ensemble direct_sum_ensemble(const Ensemble& s1, const Ensemble& s2) {
  const int d1 = s1.dim();
  const int d = d1 + s2.dim();
  std::vector<PureState> states;
  states.reserve(s1.size() + s2.size());
  for (const auto& s : s1.states()) {
    CVector v = CVector::Zero(d);
    v.head(d1) = s.amplitudes();
    states.push_back(PureState::normalized(v));
  }
  for (const auto& s : s2.states()) {
    CVector v = CVector::Zero(d);
    v.tail(s2.dim()) = s.amplitudes();
    states.push_back(PureState::normalized(v));
  }
  return Ensemble(std::move(states));
}

double commutator_norm(const Observable& a, const Observable& b) {
  if (a.dim() != b.dim()) fail(ErrorKind::DimensionMismatch, "observables differ in dimension");
  double worst = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    const CMatrix p = a.projector(i);
    for (int j = 0; j < b.dim(); ++j) {
      const CMatrix q = b.projector(j);
      worst = std::max(worst, (p * q - q * p).norm());
    }
  }
  return worst;
}

CMatrix random_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = cplx(normal(rng), normal(rng));
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(dim, dim);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

Observable random_observable(int dim, std::mt19937_64& rng) {
  RVector values(dim);
  for (int j = 0; j < dim; ++j) values(j) = j;
  return Observable::from_eigensystem(values, random_unitary(dim, rng));
}

PureState random_state(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = cplx(normal(rng), normal(rng));
  return PureState::normalized(v);
}

}  // namespace incompat
