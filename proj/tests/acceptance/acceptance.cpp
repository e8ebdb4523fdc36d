// Prints one PASS/FAIL line per acceptance criterion; exits nonzero on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <incompat/audit.hpp>
#include <incompat/convex_bounds.hpp>
#include <incompat/distance.hpp>
#include <incompat/eur.hpp>
#include <incompat/families.hpp>
#include <incompat/fidelity.hpp>
#include <incompat/qkd.hpp>

#include "commands.hpp"

using namespace incompat;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

SearchConfig searched(int restarts) {
  SearchConfig cfg;
  cfg.restarts = restarts;
  cfg.tol = 1e-9;
  cfg.allow_closed_form = false;
  return cfg;
}

std::array<double, 3> random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::array<double, 3> v{g(rng), g(rng), g(rng)};
  const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  for (auto& x : v) x /= n;
  return v;
}

Check qubit_closed_forms() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(42);
  double worst_qf = 0.0, worst_q = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto u = random_unit(rng);
    const auto w = random_unit(rng);
    const double dot = u[0] * w[0] + u[1] * w[1] + u[2] * w[2];
    const Observable a = qubit_observable(BlochVector::from(u));
    const Observable b = qubit_observable(BlochVector::from(w));
    const double qf = q_alpha_pair(a, b, Alpha::fidelity, searched(8));
    worst_qf = std::max(worst_qf, std::abs(qf - 0.25 * (1.0 - dot * dot)));
    const std::array<Observable, 2> obs{a, b};
    SearchConfig cfg = searched(8);
    const double q = 1.0 - fmax_ascent(eigenstate_ensemble(obs), cfg).fmax_lower;
    worst_q = std::max(worst_q, std::abs(q - 0.25 * (1.0 - std::abs(dot))));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.require(worst_qf <= 2e-3, "Q_F deviation " + fmt(worst_qf));
  c.require(worst_q <= 2e-3, "Q deviation " + fmt(worst_q));
  c.require(secs <= 60.0, "runtime " + fmt(secs) + " s");
  c.detail = c.ok ? "max dev Q_F " + fmt(worst_qf) + ", Q " + fmt(worst_q) + ", " + fmt(secs) + " s" : c.detail;
  return c;
}

Check mub_values() {
  Check c;
  for (auto [n, d] : {std::pair{2, 2}, {3, 2}, {2, 3}, {2, 5}}) {
    const double f = fmax_ascent(eigenstate_ensemble(mub_bases(d, n)), searched(8)).fmax_lower;
    const double dev = std::abs((1.0 - f) - q_mub_closed(n, d));
    c.require(dev <= 1e-3, "N=" + std::to_string(n) + " d=" + std::to_string(d) + " dev " + fmt(dev));
  }
  for (int d : {2, 3, 5}) {
    const auto m = mub_bases(d, 2);
    const double qf = q_alpha_pair(m[0], m[1], Alpha::fidelity, searched(8));
    const double dev = std::abs(qf - 0.5 * (1.0 - 1.0 / d));
    c.require(dev <= 2e-3, "Q_F pair d=" + std::to_string(d) + " dev " + fmt(dev));
  }
  return c;
}

Check subspace_family() {
  Check c;
  for (int dc = 0; dc < 20; ++dc) {
    const double q = q_subspace_closed(20, dc);
    const double qf = qf_subspace_closed(20, dc);
    const bool edge = dc == 0 || dc == 19;
    c.require(qf >= q - 1e-15, "Q_F < Q at dc=" + std::to_string(dc));
    c.require(edge ? std::abs(qf - q) <= 1e-15 : qf > q + 1e-12, "equality pattern at dc=" + std::to_string(dc));
  }
  for (int dc : {1, 2}) {
    const auto [a, b] = subspace_pair(5, dc);
    const std::array<Observable, 2> obs{a, b};
    const double f = fmax_ascent(eigenstate_ensemble(obs), searched(8)).fmax_lower;
    const double qdev = std::abs((1.0 - f) - q_subspace_closed(5, dc));
    c.require(qdev <= 1e-3, "ascent dc=" + std::to_string(dc) + " dev " + fmt(qdev));
    const double qf = q_alpha_pair(a, b, Alpha::fidelity, searched(8));
    const double fdev = std::abs(qf - qf_subspace_closed(5, dc));
    c.require(fdev <= 5e-3, "Q_F dc=" + std::to_string(dc) + " dev " + fmt(fdev));
  }
  return c;
}

Check tightness() {
  Check c;
  auto pair_case = [&](const Observable& a, const Observable& b, double q, const std::string& name) {
    const std::array<Observable, 2> obs{a, b};
    const double t2 = t2_standard(obs).value;
    c.require(std::abs(q - t2) <= 1e-9, name + ": |Q - t2| = " + fmt(std::abs(q - t2)));
    const double qf = q_alpha_pair(a, b, Alpha::fidelity, searched(8));
    const double succ = t2_succ_avg(a, b);
    c.require(std::abs(qf - succ) <= 2e-3, name + ": |Q_F - t2succ| = " + fmt(std::abs(qf - succ)));
  };
  for (int d : {2, 3, 5}) {
    const auto m = mub_bases(d, 2);
    pair_case(m[0], m[1], q_mub_closed(2, d), "MUB d=" + std::to_string(d));
  }
  for (int n = 3; n <= 4; ++n) {
    const auto m = mub_bases(3, n);
    const double t2 = t2_standard(m).value;
    c.require(std::abs(q_mub_closed(n, 3) - t2) <= 1e-9, "MUB d=3 N=" + std::to_string(n));
  }
  for (double cs : {0.0, 0.3, 0.6, -0.8}) {
    const BlochVector za = BlochVector::from(0.0, 0.0, 1.0);
    const BlochVector zb = BlochVector::from(std::sqrt(1.0 - cs * cs), 0.0, cs);
    pair_case(qubit_observable(za), qubit_observable(zb), q_qubit_closed(za, zb).first, "qubit cos=" + fmt(cs));
  }

  AuditOptions opts;
  opts.search.tol = 1e-6;
  opts.count = 50;
  opts.dim = 3;
  int checked = 0;
  for (const AuditRow& r : run_audit(Corpus::random, opts)) {
    // The QP rows are the subject of the QP audit criterion.
    if (r.inequality.rfind("qp_", 0) == 0) continue;
    ++checked;
    c.require(r.verdict != Verdict::violated, r.instance + " " + r.inequality + " violated");
  }
  if (c.ok) c.detail = std::to_string(checked) + " random rows consistent";
  return c;
}

Check additivity() {
  Check c;
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> size(2, 4);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    std::vector<PureState> s1, s2;
    const int n1 = size(rng), n2 = size(rng);
    for (int k = 0; k < n1; ++k) s1.push_back(random_state(2, rng));
    for (int k = 0; k < n2; ++k) s2.push_back(random_state(2, rng));
    const Ensemble e1(s1), e2(s2);
    const double f1 = fmax_ascent(e1, searched(8)).fmax_lower;
    const double f2 = fmax_ascent(e2, searched(8)).fmax_lower;
    const double f = fmax_ascent(direct_sum_ensemble(e1, e2), searched(8)).fmax_lower;
    worst = std::max(worst, std::abs(f - fmax_direct_sum(f1, s1.size(), f2, s2.size())));
  }
  c.require(worst <= 2e-3, "max dev " + fmt(worst));
  if (c.ok) c.detail = "max dev " + fmt(worst);
  return c;
}

Check sdp_sandwich() {
  Check c;
  std::vector<std::pair<std::string, Ensemble>> cases{{"bb84", eigenstate_ensemble(mub_bases(2, 2))},
                                                      {"mub d=3 N=2", eigenstate_ensemble(mub_bases(3, 2))},
                                                      {"mub d=3 N=4", eigenstate_ensemble(mub_bases(3, 4))}};
  std::mt19937_64 rng(42);
  const std::array<Observable, 2> d4{random_observable(4, rng), random_observable(4, rng)};
  cases.emplace_back("random d=4", eigenstate_ensemble(d4));
  for (const auto& [name, s] : cases) {
    const auto start = std::chrono::steady_clock::now();
    const BoundReport r = sdp_q_lower(s);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double f = fmax_ascent(s, searched(8)).fmax_lower;
    c.require(f <= r.bound + 1e-6, name + ": F " + fmt(f) + " > S* " + fmt(r.bound));
    c.require(r.certificate.feas_margin >= -1e-8, name + ": feasibility margin " + fmt(r.certificate.feas_margin));
    c.require(secs <= 10.0, name + ": " + fmt(secs) + " s");
  }
  return c;
}

Check qp_audit() {
  Check c;
  for (int d : {2, 3, 5}) {
    const auto m = mub_bases(d, 2);
    const BoundReport r = qp_qf_lower(m[0], m[1], QpVariant::as_stated);
    c.require(std::abs(r.bound - (1.0 - 1.0 / d)) <= 1e-9, "as_stated not tight at d=" + std::to_string(d));
  }
  const auto p2 = subspace_pair(2, 1);
  const double o2 = q_alpha_directional(p2.first, p2.second, Alpha::fidelity).value;
  const BoundReport r2 = audit_bound(qp_qf_lower(p2.first, p2.second, QpVariant::as_stated), o2, OracleKind::closed_form);
  c.require(r2.verdict == Verdict::violated, "d=2 commuting as_stated not flagged");
  const auto p3 = subspace_pair(3, 2);
  const double o3 = q_alpha_directional(p3.first, p3.second, Alpha::fidelity, searched(8)).value;
  const BoundReport r3 = audit_bound(qp_qf_lower(p3.first, p3.second, QpVariant::with_factor2), o3, OracleKind::brute_force);
  c.require(r3.verdict == Verdict::violated, "d=3 commuting with_factor2 not flagged");
  if (c.ok) c.detail = "MUB tight; commuting counterexamples flagged violated";
  return c;
}

Check qkd() {
  Check c;
  const auto m = mub_bases(2, 2);
  const Ensemble bb84 = eigenstate_ensemble(m);
  const EveStrategy opt = EveStrategy::measure_resend(q_qubit_closed(bloch_of(m[0]), bloch_of(m[1])).second);
  const SimResult sim = simulate_error_rate(bb84, opt, 100000, 42);
  c.require(sim.empirical_error >= 0.24 && sim.empirical_error <= 0.26, "empirical " + fmt(sim.empirical_error));

  std::vector<EveStrategy> tested{opt, optimal_strategy(bb84)};
  for (const Observable& basis : m) tested.push_back(EveStrategy::measure_resend(RankOnePovm::from_basis(basis)));
  std::mt19937_64 rng(42);
  for (int i = 0; i < 50; ++i) {
    const RankOnePovm povm = RankOnePovm::from_basis(random_observable(2, rng));
    tested.push_back(EveStrategy::measure_resend(povm));
    tested.push_back(EveStrategy::best_response(bb84, povm));
  }
  double lowest = 1.0;
  for (const EveStrategy& e : tested) lowest = std::min(lowest, analytic_error_rate(bb84, e));
  c.require(lowest >= 0.25 - 1e-9, "analytic error " + fmt(lowest));
  if (c.ok) c.detail = "empirical " + fmt(sim.empirical_error) + ", lowest analytic " + fmt(lowest);
  return c;
}

std::string run_audit_cli(const std::filesystem::path& out) {
  const std::string path = out.string();
  const char* argv[] = {"incompat", "audit", "--corpus", "random", "--seed", "42", "--out", path.c_str()};
  std::ostringstream sink, err;
  if (cli::run(8, argv, sink, err) != cli::exit_code::ok) return {};
  std::ifstream in(out, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Check determinism() {
  Check c;
  const auto dir = std::filesystem::temp_directory_path();
  const auto a = dir / "incompat_acceptance_a.json";
  const auto b = dir / "incompat_acceptance_b.json";
  const std::string first = run_audit_cli(a);
  const std::string second = run_audit_cli(b);
  std::filesystem::remove(a);
  std::filesystem::remove(b);
  c.require(!first.empty(), "audit run failed");
  c.require(first == second, "outputs differ");
  if (c.ok) c.detail = std::to_string(first.size()) + " identical bytes";
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
      {"qubit closed forms", qubit_closed_forms},
      {"MUB values", mub_values},
      {"subspace family", subspace_family},
      {"EUR tightness and random audit", tightness},
      {"direct-sum additivity", additivity},
      {"SDP sandwich", sdp_sandwich},
      {"QP audit", qp_audit},
      {"QKD error rates", qkd},
      {"audit determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    try {
      c = criteria[i].second();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    if (!c.ok) ++failed;
    std::cout << (c.ok ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first;
    if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
    std::cout << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
