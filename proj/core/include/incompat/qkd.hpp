#pragma once

#include <cstdint>
#include <vector>

#include "incompat/fidelity.hpp"
#include "incompat/linalg.hpp"

namespace incompat {

/// Intercept-resend attack: measure with `povm`, on outcome k forward
/// reconstruction[k]. A passthrough strategy forwards the signal untouched.
struct EveStrategy {
  RankOnePovm povm = RankOnePovm::from_basis(eigensystem(CMatrix::Identity(1, 1)));
  std::vector<DensityMatrix> reconstruction;
  bool passthrough = false;

  static EveStrategy measure_resend(const RankOnePovm& povm);
  /// Keeps the POVM and resends, for each outcome, the state that maximizes
  /// the conditional success probability.
  static EveStrategy best_response(const Ensemble& s, const RankOnePovm& povm);
  static EveStrategy none();
};

struct SimResult {
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
  double empirical_error = 0.0;
  double std_error = 0.0;
  double analytic_error = 0.0;
};

/// 1 - (1/|S|) sum_s sum_k Tr[M_k psi_s] Tr[sigma_k psi_s]
double analytic_error_rate(const Ensemble& s, const EveStrategy& eve);

/// Monte Carlo over blocks of 10^4 trials, block b seeded from (seed, b).
SimResult simulate_error_rate(const Ensemble& s, const EveStrategy& eve, std::uint64_t trials, std::uint64_t seed);

/// best_response applied to the ascent POVM.
EveStrategy optimal_strategy(const Ensemble& s, const SearchConfig& cfg = {});

}  // namespace incompat
