#pragma once

#include <array>
#include <cmath>

#include <incompat/linalg.hpp>
#include <incompat/search.hpp>

namespace fixtures {

using namespace incompat;

// Eigenbases of two fixed Hermitian matrices; the reference values for this
// pair come from tests/oracle/derive_oracles.py.
inline Observable fixed_a() {
  CMatrix h(3, 3);
  h << 1.0, cplx(0.3, 0.2), -0.1, cplx(0.3, -0.2), 2.0, cplx(0.0, 0.5), -0.1, cplx(0.0, -0.5), 3.5;
  return eigensystem(h);
}

inline Observable fixed_b() {
  CMatrix h(3, 3);
  h << 0.5, cplx(0.0, -0.4), 0.25, cplx(0.0, 0.4), -1.0, cplx(0.1, 0.3), 0.25, cplx(0.1, -0.3), 1.5;
  return eigensystem(h);
}

inline Observable qubit(double x, double y, double z) { return qubit_observable(BlochVector::from(x, y, z)); }

// Pair with Bloch inner product c, the first along z.
inline std::array<Observable, 2> qubit_pair(double c) {
  return {qubit(0.0, 0.0, 1.0), qubit(std::sqrt(1.0 - c * c), 0.0, c)};
}

inline SearchConfig quick(int restarts = 8) {
  SearchConfig cfg;
  cfg.restarts = restarts;
  cfg.tol = 1e-9;
  return cfg;
}

inline SearchConfig searched(int restarts = 8) {
  SearchConfig cfg = quick(restarts);
  cfg.allow_closed_form = false;
  return cfg;
}

}  // namespace fixtures
