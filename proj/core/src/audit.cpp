#include "incompat/audit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "incompat/distance.hpp"
#include "incompat/error.hpp"
#include "incompat/eur.hpp"
#include "incompat/families.hpp"
#include "incompat/fidelity.hpp"

namespace incompat {

namespace {

constexpr double kIneqSlack = 1e-9;
constexpr double kSearchSlack = 2e-3;
constexpr double kSdpSlack = 1e-6;

class Recorder {
 public:
  explicit Recorder(std::vector<AuditRow>& rows) : rows_(rows) {}

  // lhs >= rhs - slack
  void ge(const std::string& inst, const char* name, double lhs, double rhs, double slack, bool proved) {
    push(inst, name, lhs, rhs, lhs >= rhs - slack, proved);
  }
  // |lhs - rhs| <= tol
  void eq(const std::string& inst, const char* name, double lhs, double rhs, double tol, bool proved) {
    push(inst, name, lhs, rhs, std::abs(lhs - rhs) <= tol, proved);
  }
  // 0 <= lhs <= 1, rhs carries the upper end
  void unit_range(const std::string& inst, const char* name, double lhs) {
    push(inst, name, lhs, 1.0, lhs >= -kIneqSlack && lhs <= 1.0 + kIneqSlack, true);
  }
  // lhs is the oracle, rhs the claimed lower bound
  void bound(const std::string& inst, const char* name, const BoundReport& r) {
    rows_.push_back({inst, name, r.oracle.value_or(0.0), r.bound, r.verdict, false});
  }

 private:
  void push(const std::string& inst, const char* name, double lhs, double rhs, bool ok, bool proved) {
    rows_.push_back({inst, name, lhs, rhs, ok ? Verdict::consistent : Verdict::violated, proved});
  }
  std::vector<AuditRow>& rows_;
};

std::string label(const char* prefix, int a, int b) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%d_%d", prefix, a, b);
  return buf;
}

bool tight_family(const Family& f) {
  return f.kind == Family::Kind::mub || f.kind == Family::Kind::qubit_pair || f.kind == Family::Kind::commuting;
}

// Rows for any observable set.
void audit_set(std::span<const Observable> obs, const std::string& inst, const SearchConfig& cfg, Recorder& rec) {
  const Family fam = classify(obs);
  const FidelityResult q = q_measure(obs, cfg);
  const double t2 = t2_standard(obs, cfg).value;
  rec.ge(inst, "q_ge_t2", q.q_upper, t2, kIneqSlack, true);
  if (tight_family(fam)) rec.eq(inst, "q_eq_t2", q.q_upper, t2, kIneqSlack, true);
  // The right side comes from a minimum search, hence the search slack.
  rec.ge(inst, "q_ge_h2_bound", q.q_upper, h2_q_bound(obs, cfg), kSearchSlack, false);
  const BoundReport sdp = sdp_q_lower(eigenstate_ensemble(obs));
  rec.ge(inst, "sstar_ge_fmax", sdp.bound, q.fmax_lower, kSdpSlack, false);
}

// Rows specific to pairs: distance measures, successive EUR and the simplex program.
void audit_pair(const Observable& a, const Observable& b, const std::string& inst, const SearchConfig& cfg,
                Recorder& rec) {
  const std::array<Observable, 2> obs{a, b};
  audit_set(obs, inst, cfg, rec);

  const DirectionalResult qf_ab = q_alpha_directional(a, b, Alpha::fidelity, cfg);
  const DirectionalResult qf_ba = q_alpha_directional(b, a, Alpha::fidelity, cfg);
  const double qf_pair = 0.25 * (qf_ab.value + qf_ba.value);
  const double t2s = t2_succ_avg(a, b);
  rec.ge(inst, "qf_ge_t2succ", qf_pair, t2s, kIneqSlack, true);
  const Family fam = classify(obs);
  if (tight_family(fam)) rec.eq(inst, "qf_eq_t2succ", qf_pair, t2s, kSearchSlack, true);

  rec.unit_range(inst, "range_q1", q_alpha_directional(a, b, Alpha::one, cfg).value);
  rec.unit_range(inst, "range_qf", qf_ab.value);
  rec.unit_range(inst, "range_qinf", q_alpha_directional(a, b, Alpha::infinity, cfg).value);

  const OracleKind kind = qf_ab.method == Method::closed_form ? OracleKind::closed_form : OracleKind::brute_force;
  rec.bound(inst, "qp_as_stated", audit_bound(qp_qf_lower(a, b, QpVariant::as_stated), qf_ab.value, kind));
  rec.bound(inst, "qp_with_factor2", audit_bound(qp_qf_lower(a, b, QpVariant::with_factor2), qf_ab.value, kind));
  rec.bound(inst, "qp_derivation_matrix",
            audit_bound(qp_qf_lower(a, b, QpVariant::derivation_matrix), qf_ab.value, kind));
}

void qubit_grid(const AuditOptions& opts, Recorder& rec) {
  for (int k = 0; k <= 10; ++k) {
    const double c = k / 10.0;
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    const Observable a = qubit_observable(BlochVector::from(0.0, 0.0, 1.0));
    const Observable b = qubit_observable(BlochVector::from(s, 0.0, c));
    audit_pair(a, b, label("qubit/cos_tenths_", k, 10), opts.search, rec);
  }
}

void mub_set(const AuditOptions& opts, Recorder& rec) {
  for (int d : {2, 3, 5}) {
    for (int n = 2; n <= d + 1; ++n) {
      const auto bases = mub_bases(d, n);
      const std::string inst = label("mub/d_n_", d, n);
      if (n == 2) {
        audit_pair(bases[0], bases[1], inst, opts.search, rec);
      } else {
        audit_set(bases, inst, opts.search, rec);
      }
    }
  }
}

// Additivity check on a subspace pair: the ensemble splits into the common
// block and a mutually unbiased block of size m = d - dc.
void additivity_row(int d, int dc, const std::string& inst, const SearchConfig& cfg, Recorder& rec) {
  const auto [a, b] = subspace_pair(d, dc);
  const std::array<Observable, 2> obs{a, b};
  const Ensemble full = eigenstate_ensemble(obs);
  const int m = d - dc;
  std::vector<PureState> common;
  for (int j = 0; j < dc; ++j) {
    common.push_back(PureState::basis(dc, j));
    common.push_back(PureState::basis(dc, j));
  }
  const auto [ma, mb] = subspace_pair(m, 0);
  const std::array<Observable, 2> block{ma, mb};
  const Ensemble unbiased = eigenstate_ensemble(block);
  const double f1 = fmax_ascent(Ensemble(common), cfg).fmax_lower;
  const double f2 = fmax_ascent(unbiased, cfg).fmax_lower;
  const double lhs = fmax_ascent(full, cfg).fmax_lower;
  rec.eq(inst, "direct_sum_additivity", lhs, fmax_direct_sum(f1, common.size(), f2, unbiased.size()), kSearchSlack,
         true);
}

void subspace_grid(const AuditOptions& opts, Recorder& rec) {
  for (int d : {3, 4, 5}) {
    for (int dc = 0; dc < d; ++dc) {
      const auto [a, b] = subspace_pair(d, dc);
      const std::string inst = label("subspace/d_dc_", d, dc);
      audit_pair(a, b, inst, opts.search, rec);
      if (dc > 0 && dc < d - 1) additivity_row(d, dc, inst, opts.search, rec);
    }
  }
  for (int dc = 0; dc < 20; ++dc)
    rec.ge(label("subspace/d_dc_", 20, dc), "closed_qf_ge_q", qf_subspace_closed(20, dc), q_subspace_closed(20, dc),
           kIneqSlack, true);
}

void random_pairs(const AuditOptions& opts, Recorder& rec) {
  for (int i = 0; i < opts.count; ++i) {
    auto rng = restart_rng(opts.search, static_cast<std::uint64_t>(1000000 + i));
    const Observable a = random_observable(opts.dim, rng);
    Observable b = random_observable(opts.dim, rng);
    if (opts.commuting_every > 0 && (i + 1) % opts.commuting_every == 0) {
      // Same eigenbasis, cyclically relabeled, with fresh phases.
      CMatrix v(opts.dim, opts.dim);
      std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
      for (int j = 0; j < opts.dim; ++j)
        v.col(j) = a.basis().col((j + 1) % opts.dim) * std::polar(1.0, phase(rng));
      b = Observable::from_eigensystem(a.eigenvalues(), v);
    }
    audit_pair(a, b, label("random/d_i_", opts.dim, i), opts.search, rec);
  }
}

}  // namespace

std::optional<Corpus> parse_corpus(std::string_view name) {
  if (name == "qubit_grid") return Corpus::qubit_grid;
  if (name == "mub_set") return Corpus::mub_set;
  if (name == "subspace_grid") return Corpus::subspace_grid;
  if (name == "random") return Corpus::random;
  return std::nullopt;
}

std::string_view to_string(Corpus c) noexcept {
  switch (c) {
    case Corpus::qubit_grid: return "qubit_grid";
    case Corpus::mub_set: return "mub_set";
    case Corpus::subspace_grid: return "subspace_grid";
    case Corpus::random: return "random";
  }
  return "unknown";
}

std::vector<AuditRow> run_audit(Corpus corpus, const AuditOptions& opts) {
  validate(opts.search);
  if (opts.count < 0 || opts.dim < 2) fail(ErrorKind::InvalidArgument, "random corpus needs count >= 0 and dim >= 2");
  std::vector<AuditRow> rows;
  Recorder rec(rows);
  switch (corpus) {
    case Corpus::qubit_grid: qubit_grid(opts, rec); break;
    case Corpus::mub_set: mub_set(opts, rec); break;
    case Corpus::subspace_grid: subspace_grid(opts, rec); break;
    case Corpus::random: random_pairs(opts, rec); break;
  }
  return rows;
}

bool has_proved_violation(const std::vector<AuditRow>& rows) {
  for (const auto& r : rows)
    if (r.proved && r.verdict == Verdict::violated) return true;
  return false;
}

}  // namespace incompat
