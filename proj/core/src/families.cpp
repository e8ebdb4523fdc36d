#include "incompat/families.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "incompat/error.hpp"

namespace incompat {

namespace {

bool is_permutation(const RMatrix& o, double tol) {
  for (Eigen::Index i = 0; i < o.rows(); ++i)
    if (o.row(i).maxCoeff() < 1.0 - tol) return false;
  return true;
}

bool is_flat(const RMatrix& o, double tol) {
  const double target = 1.0 / static_cast<double>(o.rows());
  return (o.array() - target).abs().maxCoeff() <= tol;
}

// Number of common vectors when the overlap pattern is identity on d_c rows
// and flat 1/(d - d_c) on the rest; -1 otherwise.
int subspace_block(const RMatrix& o, double tol) {
  const Eigen::Index d = o.rows();
  std::vector<Eigen::Index> rows, cols;
  std::vector<bool> col_used(static_cast<std::size_t>(d), false);
  for (Eigen::Index i = 0; i < d; ++i) {
    Eigen::Index j = 0;
    if (o.row(i).maxCoeff(&j) >= 1.0 - tol) {
      col_used[static_cast<std::size_t>(j)] = true;
    } else {
      rows.push_back(i);
    }
  }
  for (Eigen::Index j = 0; j < d; ++j)
    if (!col_used[static_cast<std::size_t>(j)]) cols.push_back(j);
  if (rows.size() != cols.size() || rows.empty()) return -1;
  const double target = 1.0 / static_cast<double>(rows.size());
  for (auto i : rows)
    for (auto j : cols)
      if (std::abs(o(i, j) - target) > tol) return -1;
  return static_cast<int>(d) - static_cast<int>(rows.size());
}

}  // namespace

BlochVector bloch_of(const Observable& a) {
  if (a.dim() != 2) fail(ErrorKind::DimensionMismatch, "Bloch vector requires a qubit observable");
  const CMatrix diff = a.projector(1) - a.projector(0);
  const auto s = pauli_matrices();
  std::array<double, 3> r{};
  for (std::size_t k = 0; k < 3; ++k) r[k] = 0.5 * (s[k] * diff).trace().real();
  return BlochVector::from(r);
}

Family classify(std::span<const Observable> observables, double tol) {
  require_same_dim(observables);
  Family f;
  f.count = static_cast<int>(observables.size());
  f.dim = observables.front().dim();
  if (f.count < 2) return f;

  if (f.count == 2 && f.dim == 2) {
    f.kind = Family::Kind::qubit_pair;
    f.cos_delta = std::clamp(bloch_of(observables[0]).dot(bloch_of(observables[1])), -1.0, 1.0);
    return f;
  }

  bool all_commuting = true;
  bool all_flat = true;
  for (std::size_t i = 0; i < observables.size(); ++i)
    for (std::size_t j = i + 1; j < observables.size(); ++j) {
      const RMatrix o = overlap_matrix(observables[i], observables[j]).entries();
      all_commuting = all_commuting && is_permutation(o, tol);
      all_flat = all_flat && is_flat(o, tol);
    }
  if (all_commuting) {
    f.kind = Family::Kind::commuting;
  } else if (all_flat) {
    f.kind = Family::Kind::mub;
  } else if (f.count == 2) {
    const int dc = subspace_block(overlap_matrix(observables[0], observables[1]).entries(), tol);
    if (dc > 0) {
      f.kind = Family::Kind::subspace;
      f.dc = dc;
    }
  }
  return f;
}

}  // namespace incompat
