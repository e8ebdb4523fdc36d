#pragma once

#include <vector>

#include "incompat/linalg.hpp"

namespace incompat {

/// Outcome distribution. Entries in [-1e-12, 1e-16) are set to zero and the
/// vector renormalized; more negative entries throw InvalidDistribution.
class ProbDist {
 public:
  static ProbDist from(const RVector& probs);
  static ProbDist from(const std::vector<double>& probs);

  int size() const noexcept { return static_cast<int>(p_.size()); }
  const RVector& probs() const noexcept { return p_; }
  double operator[](int i) const { return p_(i); }

 private:
  explicit ProbDist(RVector p) : p_(std::move(p)) {}
  RVector p_;
};

/// p(j) = <b_j|rho|b_j>
ProbDist measure_dist(const Observable& b, const DensityMatrix& rho);
/// q(j) = sum_i |<a_i|b_j>|^2 <a_i|rho|a_i>
ProbDist successive_dist(const Observable& a, const Observable& b, const DensityMatrix& rho);

/// (sum p^alpha - 1)/(1 - alpha); alpha = 1 gives Shannon entropy in nats.
double tsallis(const ProbDist& p, double alpha);
/// log2(sum p^alpha)/(1 - alpha); alpha = 1 gives Shannon entropy in bits.
double renyi(const ProbDist& p, double alpha);
double shannon_bits(const ProbDist& p);

/// 1/2 sum |p - q|
double l1_distance(const ProbDist& p, const ProbDist& q);
/// sum sqrt(p q)
double fidelity_classical(const ProbDist& p, const ProbDist& q);
/// max |p - q|
double linf_distance(const ProbDist& p, const ProbDist& q);

}  // namespace incompat
