#pragma once

#include <optional>
#include <string_view>

#include "incompat/linalg.hpp"

namespace incompat {

enum class BoundTarget { Q, Q_F_directional };
enum class BoundDirection { lower_bound_on_target, upper_bound_on_fmax };
/// Readings of the simplex program: min v'Av with bound 1 - min, the same
/// with 1 - 2 min, and min v'(AA')v with bound 1 - min.
enum class QpVariant { none, as_stated, with_factor2, derivation_matrix };
enum class Verdict { consistent, violated, untested };
enum class OracleKind { closed_form, brute_force };

std::string_view to_string(BoundTarget t) noexcept;
std::string_view to_string(BoundDirection d) noexcept;
std::string_view to_string(QpVariant v) noexcept;
std::string_view to_string(Verdict v) noexcept;
std::string_view to_string(OracleKind k) noexcept;

struct Certificate {
  /// SDP: lambda_min(I (x) Lambda - A). QP: min_i v_i.
  double feas_margin = 0.0;
  /// SDP: ||I - mu Tr_1 (I (x) Lambda - A)^{-1}||. QP: KKT residual.
  double stationarity = 0.0;
};

struct BoundReport {
  BoundTarget target = BoundTarget::Q;
  BoundDirection direction = BoundDirection::lower_bound_on_target;
  QpVariant variant = QpVariant::none;
  double bound = 0.0;
  /// Optimal value of the underlying program (Tr Lambda or min v'Mv).
  double program_value = 0.0;
  Certificate certificate;
  Verdict verdict = Verdict::untested;
  std::optional<double> oracle;
  std::optional<OracleKind> oracle_kind;

  // SDP extras.
  double dual_value = 0.0;
  int newton_steps = 0;
  CMatrix lambda;

  // QP extras.
  RVector minimizer;
  /// Smallest eigenvalue of the symmetrized form on the simplex tangent
  /// space; negative means the program is not convex.
  double tangent_min_eig = 0.0;
};

/// Upper bound S* >= F^max from min Tr Lambda subject to I (x) Lambda >= A,
/// A = (1/|S|) sum_s |s><s| (x) |s><s|, by a log-det barrier method.
/// Direction upper_bound_on_fmax; bound = S*.
BoundReport sdp_q_lower(const Ensemble& s);

/// Simplex quadratic program for the directional fidelity measure.
BoundReport qp_qf_lower(const Observable& a, const Observable& b, QpVariant variant);

/// Sets the verdict against an oracle value, with slack 1e-6 for closed
/// forms and 5e-3 for brute-force estimates.
BoundReport audit_bound(BoundReport report, double oracle_value, OracleKind kind);

}  // namespace incompat
