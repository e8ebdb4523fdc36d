#include "incompat/prob.hpp"

#include <cmath>
#include <numbers>

#include "incompat/error.hpp"

namespace incompat {

namespace {

constexpr double kClamp = 1e-12;
// Born probabilities carry absolute roundoff near 1e-16; below this they are
// zero. Matters for sqrt(p q), which would magnify the noise to ~1e-8.
constexpr double kFloor = 1e-16;
constexpr double kSum = 1e-10;

void require_same_length(const ProbDist& p, const ProbDist& q) {
  if (p.size() != q.size()) fail(ErrorKind::LengthMismatch, "distributions differ in length");
}

void require_order(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) fail(ErrorKind::InvalidOrder, "entropy order must be positive");
}

double power_sum(const ProbDist& p, double alpha) {
  double s = 0.0;
  for (int i = 0; i < p.size(); ++i)
    if (p[i] > 0.0) s += std::pow(p[i], alpha);
  return s;
}

}  // namespace

ProbDist ProbDist::from(const RVector& probs) {
  if (probs.size() == 0) fail(ErrorKind::InvalidDistribution, "empty distribution");
  RVector p = probs;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p(i)) || p(i) < -kClamp) fail(ErrorKind::InvalidDistribution, "negative probability");
    if (p(i) < kFloor) p(i) = 0.0;
  }
  const double total = p.sum();
  if (std::abs(total - 1.0) > kSum) fail(ErrorKind::InvalidDistribution, "probabilities do not sum to one");
  return ProbDist(p / total);
}

ProbDist ProbDist::from(const std::vector<double>& probs) {
  return from(RVector(Eigen::Map<const RVector>(probs.data(), static_cast<Eigen::Index>(probs.size()))));
}

ProbDist measure_dist(const Observable& b, const DensityMatrix& rho) {
  if (b.dim() != rho.dim()) fail(ErrorKind::DimensionMismatch, "observable and state differ in dimension");
  RVector p(b.dim());
  for (int j = 0; j < b.dim(); ++j) {
    const auto col = b.basis().col(j);
    p(j) = (col.adjoint() * rho.matrix() * col)(0, 0).real();
  }
  return ProbDist::from(p);
}

ProbDist successive_dist(const Observable& a, const Observable& b, const DensityMatrix& rho) {
  if (a.dim() != b.dim()) fail(ErrorKind::DimensionMismatch, "observables differ in dimension");
  const RVector pa = measure_dist(a, rho).probs();
  const RMatrix o = overlap_matrix(a, b).entries();
  RVector q = RVector::Zero(a.dim());
  for (int j = 0; j < a.dim(); ++j)
    for (int i = 0; i < a.dim(); ++i) q(j) += o(i, j) * pa(i);
  return ProbDist::from(q);
}

double shannon_bits(const ProbDist& p) {
  double h = 0.0;
  for (int i = 0; i < p.size(); ++i)
    if (p[i] > 0.0) h -= p[i] * std::log2(p[i]);
  return h;
}

double tsallis(const ProbDist& p, double alpha) {
  require_order(alpha);
  if (alpha == 1.0) return shannon_bits(p) * std::numbers::ln2;
  return (power_sum(p, alpha) - 1.0) / (1.0 - alpha);
}

double renyi(const ProbDist& p, double alpha) {
  require_order(alpha);
  if (alpha == 1.0) return shannon_bits(p);
  return std::log2(power_sum(p, alpha)) / (1.0 - alpha);
}

double l1_distance(const ProbDist& p, const ProbDist& q) {
  require_same_length(p, q);
  return 0.5 * (p.probs() - q.probs()).cwiseAbs().sum();
}

double fidelity_classical(const ProbDist& p, const ProbDist& q) {
  require_same_length(p, q);
  double f = 0.0;
  for (int i = 0; i < p.size(); ++i) f += std::sqrt(p[i] * q[i]);
  return f;
}

double linf_distance(const ProbDist& p, const ProbDist& q) {
  require_same_length(p, q);
  return (p.probs() - q.probs()).cwiseAbs().maxCoeff();
}

}  // namespace incompat
