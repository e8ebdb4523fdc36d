#pragma once

#include <span>

#include "incompat/linalg.hpp"

namespace incompat {

/// Observable sets that admit closed-form values, recognized from their
/// overlap matrices.
struct Family {
  enum class Kind { none, qubit_pair, commuting, mub, subspace };
  Kind kind = Kind::none;
  int count = 0;
  int dim = 0;
  /// Size of the common block; subspace pairs only.
  int dc = 0;
  /// Bloch-vector inner product; qubit pairs only.
  double cos_delta = 0.0;
};

/// Bloch vector of a qubit observable, oriented along its larger eigenvalue.
BlochVector bloch_of(const Observable& a);

/// Two-observable qubit sets are always qubit_pair, even when they commute or
/// are unbiased, so the qubit formulas take precedence.
Family classify(std::span<const Observable> observables, double tol = 1e-9);

}  // namespace incompat
