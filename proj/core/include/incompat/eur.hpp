#pragma once

#include <span>

#include "incompat/linalg.hpp"
#include "incompat/search.hpp"

namespace incompat {

struct EurResult {
  double value = 0.0;
  PureState minimizer = PureState::basis(1, 0);
  Method method = Method::closed_form;
  /// max_i - min_i of the per-observable entropy at the minimizer.
  double spread = 0.0;
};

/// Average linear entropy (1/N) sum_i T2(A_i; phi) at a pure state.
double average_t2(std::span<const Observable> observables, const PureState& phi);
/// Average collision entropy (1/N) sum_i H2(A_i; phi) in bits.
double average_h2(std::span<const Observable> observables, const PureState& phi);

/// min over pure states of the average linear entropy.
EurResult t2_standard(std::span<const Observable> observables, const SearchConfig& cfg = {});
/// min over pure states of the average collision entropy.
EurResult h2_standard(std::span<const Observable> observables, const SearchConfig& cfg = {});

/// 1/2 min_i [1 - sum_j |<a_i|b_j>|^4]
double t2_successive(const Observable& a, const Observable& b);
/// Mean of both directions; symmetric in its arguments bit for bit.
double t2_succ_avg(const Observable& a, const Observable& b);

/// 1 - 2^{-c2}; the equal-entropy hypothesis is not checked here, inspect
/// h2_standard(...).spread for that.
double h2_q_bound(std::span<const Observable> observables, const SearchConfig& cfg = {});

}  // namespace incompat
