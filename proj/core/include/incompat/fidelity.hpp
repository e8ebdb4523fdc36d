#pragma once

#include <span>
#include <utility>
#include <vector>

#include "incompat/linalg.hpp"
#include "incompat/search.hpp"

namespace incompat {

/// Rank-one POVM {m_k |chi_k><chi_k|} with sum_k m_k |chi_k><chi_k| = I.
class RankOnePovm {
 public:
  /// Throws InvalidPovm unless weights are positive, lengths agree and the
  /// completeness residual is at most `tol`.
  static RankOnePovm from(std::vector<double> weights, std::vector<PureState> directions, double tol = 1e-8);
  /// Projective measurement onto an eigenbasis.
  static RankOnePovm from_basis(const Observable& a);

  int dim() const noexcept { return directions_.front().dim(); }
  std::size_t size() const noexcept { return weights_.size(); }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<PureState>& directions() const noexcept { return directions_; }
  /// ||sum_k m_k |chi_k><chi_k| - I||, largest absolute entry.
  double completeness_residual() const;

 private:
  RankOnePovm(std::vector<double> w, std::vector<PureState> v) : weights_(std::move(w)), directions_(std::move(v)) {}
  std::vector<double> weights_;
  std::vector<PureState> directions_;
};

struct FidelityResult {
  double fmax_lower = 0.0;
  double q_upper = 1.0;
  RankOnePovm povm = RankOnePovm::from_basis(eigensystem(CMatrix::Identity(1, 1)));
  Method method = Method::ascent;
  /// Objective after each accepted step of the winning start.
  std::vector<double> trace;
};

/// lambda_max of (1/N) sum_s |<chi|s>|^2 |s><s|, where N = size/dim is the
/// number of bases for an eigenstate ensemble.
double avg_fidelity_element(const Ensemble& s, const PureState& chi);
/// (1/d) sum_k m_k avg_fidelity_element(S, chi_k)
double povm_fidelity(const Ensemble& s, const RankOnePovm& m);

/// Lower bound on the accessible fidelity by monotone see-saw ascent over
/// rank-one POVMs with at most d^2 elements.
FidelityResult fmax_ascent(const Ensemble& s, const SearchConfig& cfg = {});

/// Q for a qubit pair together with the optimal two-outcome measurement.
std::pair<double, RankOnePovm> q_qubit_closed(const BlochVector& a, const BlochVector& b);
double q_mub_closed(int n, int d);
double q_subspace_closed(int d, int dc);
/// (n1 F1 + n2 F2)/(n1 + n2)
double fmax_direct_sum(double f1, std::size_t n1, double f2, std::size_t n2);

struct ConstantCheck {
  bool constant = false;
  double spread = 0.0;
};
/// Spread of avg_fidelity_element across the POVM elements.
ConstantCheck constant_povm_check(const Ensemble& s, const RankOnePovm& m, double tol = 1e-9);

/// Q of an observable set: closed form for recognized families, otherwise
/// 1 - fmax_ascent (an upper estimate of Q).
FidelityResult q_measure(std::span<const Observable> observables, const SearchConfig& cfg = {});

}  // namespace incompat
