#pragma once

#include <span>
#include <string_view>

#include "incompat/linalg.hpp"
#include "incompat/prob.hpp"
#include "incompat/search.hpp"

namespace incompat {

enum class Alpha { one, fidelity, infinity };

std::string_view to_string(Alpha a) noexcept;

struct DirectionalResult {
  double value = 0.0;
  DensityMatrix maximizer = DensityMatrix::maximally_mixed(1);
  Alpha alpha = Alpha::fidelity;
  Method method = Method::closed_form;
  bool rank_one = true;
};

/// Distance between the B statistics with and without a prior A measurement:
/// D1, 1 - F^2, or Dinf depending on `alpha`.
double disturbance(const Observable& a, const Observable& b, const DensityMatrix& rho, Alpha alpha);

/// sup over density matrices of disturbance(a, b, rho, alpha).
DirectionalResult q_alpha_directional(const Observable& a, const Observable& b, Alpha alpha,
                                      const SearchConfig& cfg = {});
/// 1/4 [Q(A->B) + Q(B->A)]
double q_alpha_pair(const Observable& a, const Observable& b, Alpha alpha, const SearchConfig& cfg = {});
/// (1/N^2) sum_{i != j} Q(A_i -> A_j)
double q_alpha_set(std::span<const Observable> observables, Alpha alpha, const SearchConfig& cfg = {});

double qf_qubit_closed(const BlochVector& a, const BlochVector& b);
double qf_subspace_closed(int d, int dc);

}  // namespace incompat
