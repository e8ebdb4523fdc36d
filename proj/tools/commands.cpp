#include "commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include <incompat/distance.hpp>
#include <incompat/error.hpp>
#include <incompat/eur.hpp>
#include <incompat/families.hpp>
#include <incompat/fidelity.hpp>
#include <incompat/json_io.hpp>

namespace incompat::cli {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_string()) return csv_escape(v.get<std::string>());
  return csv_escape(v.dump());
}

json matrix_json(const CMatrix& m) {
  json out = json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back({m(r, c).real(), m(r, c).imag()});
  return out;
}

json state_json(const PureState& s) {
  json out = json::array();
  for (Eigen::Index i = 0; i < s.amplitudes().size(); ++i) out.push_back({s[i].real(), s[i].imag()});
  return out;
}

// One-record table from a JSON object, columns in the object's key order.
Table record(const json& obj) {
  Table t;
  t.single = true;
  t.rows.emplace_back();
  for (const auto& [key, value] : obj.items()) {
    t.columns.push_back(key);
    t.rows.back().push_back(value);
  }
  return t;
}

Table make(std::vector<std::string> columns, bool single = false) {
  Table t;
  t.columns = std::move(columns);
  t.single = single;
  return t;
}

Alpha alpha_of(Measure m) {
  switch (m) {
    case Measure::Q_1: return Alpha::one;
    case Measure::Q_inf: return Alpha::infinity;
    default: return Alpha::fidelity;
  }
}

std::string measure_name(Measure m) {
  switch (m) {
    case Measure::Q: return "Q";
    case Measure::Q_1: return "Q_1";
    case Measure::Q_F: return "Q_F";
    case Measure::Q_inf: return "Q_inf";
    case Measure::t2: return "t2";
    case Measure::h2: return "h2";
  }
  return "unknown";
}

std::vector<Observable> read_observables(const std::vector<std::string>& files) {
  std::vector<Observable> obs;
  for (const auto& f : files) obs.push_back(observable_from_json(read_json_file(f)));
  return obs;
}

std::pair<Observable, Observable> qubit_pair(double cos_delta) {
  const double s = std::sqrt(std::max(0.0, 1.0 - cos_delta * cos_delta));
  return {qubit_observable(BlochVector::from(0.0, 0.0, 1.0)), qubit_observable(BlochVector::from(s, 0.0, cos_delta))};
}

}  // namespace

SearchConfig RunConfig::search() const {
  SearchConfig s;
  s.seed = seed;
  s.restarts = restarts;
  s.tol = tol;
  return s;
}

std::string render(const Table& t, Format f) {
  std::ostringstream os;
  if (f == Format::csv) {
    for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << csv_escape(t.columns[c]);
    os << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << csv_cell(row[c]);
      os << '\n';
    }
    return os.str();
  }
  ordered_json out = ordered_json::array();
  for (const auto& row : t.rows) {
    ordered_json obj = ordered_json::object();
    for (std::size_t c = 0; c < row.size(); ++c) obj[t.columns[c]] = ordered_json::parse(row[c].dump());
    out.push_back(std::move(obj));
  }
  if (t.single && out.size() == 1) return out[0].dump(2) + "\n";
  return out.dump(2) + "\n";
}

std::optional<Measure> parse_measure(const std::string& name) {
  for (Measure m : {Measure::Q, Measure::Q_1, Measure::Q_F, Measure::Q_inf, Measure::t2, Measure::h2})
    if (measure_name(m) == name) return m;
  return std::nullopt;
}

Figure parse_figure(const std::string& name) {
  if (name == "fig1") return Figure::fig1;
  if (name == "fig2") return Figure::fig2;
  fail(ErrorKind::UnknownFigure, "expected fig1 or fig2, got \"" + name + "\"");
}

Table cmd_qubit(double cos_delta) {
  if (!(std::abs(cos_delta) <= 1.0)) fail(ErrorKind::OutOfRange, "cos_delta must lie in [-1, 1]");
  const auto [a, b] = qubit_pair(cos_delta);
  const std::array<Observable, 2> obs{a, b};
  const BlochVector ba = bloch_of(a);
  const BlochVector bb = bloch_of(b);
  Table t = make({"cos_delta", "Q", "Q_F", "t2_standard", "t2_succ", "h2_bound"}, true);
  t.rows.push_back({cos_delta, q_qubit_closed(ba, bb).first, qf_qubit_closed(ba, bb), t2_standard(obs).value,
                    t2_succ_avg(a, b), h2_q_bound(obs)});
  return t;
}

Table cmd_mub(int dim, int count, const RunConfig& cfg) {
  const auto bases = mub_bases(dim, count);
  const SearchConfig s = cfg.search();
  Table t = make({"dim", "count", "Q", "Q_F", "t2_standard", "h2_bound"}, true);
  const double qf = count >= 2 ? q_alpha_set(bases, Alpha::fidelity, s) : 0.0;
  t.rows.push_back({dim, count, q_mub_closed(count, dim), qf, t2_standard(bases, s).value,
                    h2_q_bound(bases, s)});
  return t;
}

Table cmd_subspace(int dim, int dc, const RunConfig& cfg) {
  const auto [a, b] = subspace_pair(dim, dc);
  const std::array<Observable, 2> obs{a, b};
  Table t = make({"dim", "dc", "Q", "Q_F", "t2_standard", "t2_succ"}, true);
  t.rows.push_back({dim, dc, q_subspace_closed(dim, dc), qf_subspace_closed(dim, dc),
                    t2_standard(obs, cfg.search()).value, t2_succ_avg(a, b)});
  return t;
}

Table cmd_measure(const std::vector<Observable>& observables, Measure m, const RunConfig& cfg) {
  if (observables.size() < 2) fail(ErrorKind::DimensionMismatch, "need at least two observables");
  require_same_dim(observables);
  const SearchConfig s = cfg.search();
  json out = {{"measure", measure_name(m)}};
  switch (m) {
    case Measure::Q: {
      const FidelityResult r = q_measure(observables, s);
      out["value"] = r.q_upper;
      out["method"] = to_string(r.method);
      out["fmax_lower"] = r.fmax_lower;
      out["povm"] = povm_to_json(r.povm);
      break;
    }
    case Measure::t2:
    case Measure::h2: {
      const EurResult r = m == Measure::t2 ? t2_standard(observables, s) : h2_standard(observables, s);
      out["value"] = r.value;
      out["method"] = to_string(r.method);
      out["spread"] = r.spread;
      out["minimizer"] = state_json(r.minimizer);
      break;
    }
    default: {
      const Alpha alpha = alpha_of(m);
      json dirs = json::array();
      double total = 0.0;
      bool searched = false;
      for (std::size_t i = 0; i < observables.size(); ++i)
        for (std::size_t j = 0; j < observables.size(); ++j) {
          if (i == j) continue;
          const DirectionalResult r = q_alpha_directional(observables[i], observables[j], alpha, s);
          total += r.value;
          searched = searched || r.method != Method::closed_form;
          dirs.push_back({{"from", i},
                          {"to", j},
                          {"value", r.value},
                          {"method", to_string(r.method)},
                          {"rank_one", r.rank_one},
                          {"maximizer", matrix_json(r.maximizer.matrix())}});
        }
      const auto n = static_cast<double>(observables.size());
      out["value"] = total / (n * n);
      out["method"] = to_string(searched ? Method::restart_search : Method::closed_form);
      out["directional"] = dirs;
    }
  }
  // json objects sort their keys; keep measure, value, method first.
  Table t = make({"measure", "value", "method"}, true);
  t.rows.push_back({out["measure"], out["value"], out["method"]});
  for (const auto& [key, value] : out.items()) {
    if (key == "measure" || key == "value" || key == "method") continue;
    t.columns.push_back(key);
    t.rows.back().push_back(value);
  }
  return t;
}

Table cmd_eur(const std::vector<Observable>& observables, const RunConfig& cfg) {
  if (observables.size() < 2) fail(ErrorKind::DimensionMismatch, "need at least two observables");
  require_same_dim(observables);
  const SearchConfig s = cfg.search();
  const EurResult t2 = t2_standard(observables, s);
  const EurResult h2 = h2_standard(observables, s);
  const json succ = observables.size() == 2 ? json(t2_succ_avg(observables[0], observables[1])) : json(nullptr);
  Table t = make({"t2_standard", "t2_method", "h2_standard", "h2_method", "h2_bound", "h2_spread", "t2_succ"}, true);
  t.rows.push_back({t2.value, to_string(t2.method), h2.value, to_string(h2.method), 1.0 - std::exp2(-h2.value),
                    h2.spread, succ});
  return t;
}

Table cmd_bound_sdp(const Ensemble& s, const RunConfig& cfg) {
  const double oracle = fmax_ascent(s, cfg.search()).fmax_lower;
  return record(bound_report_to_json(audit_bound(sdp_q_lower(s), oracle, OracleKind::brute_force)));
}

Table cmd_bound_qp(const Observable& a, const Observable& b, QpVariant variant, const RunConfig& cfg) {
  const DirectionalResult qf = q_alpha_directional(a, b, Alpha::fidelity, cfg.search());
  const OracleKind kind = qf.method == Method::closed_form ? OracleKind::closed_form : OracleKind::brute_force;
  return record(bound_report_to_json(audit_bound(qp_qf_lower(a, b, variant), qf.value, kind)));
}

Table cmd_qkd(const Ensemble& s, const std::optional<EveStrategy>& eve, std::uint64_t trials, const RunConfig& cfg) {
  const EveStrategy e = eve ? *eve : optimal_strategy(s, cfg.search());
  return record(sim_result_to_json(simulate_error_rate(s, e, trials, cfg.seed)));
}

Table cmd_figure(Figure fig, int dim) {
  Table t = make({"x", "Q", "Q_F"});
  if (fig == Figure::fig1) {
    const BlochVector a = BlochVector::from(0.0, 0.0, 1.0);
    for (int k = 0; k <= 100; ++k) {
      const double c = k / 100.0;
      const BlochVector b = BlochVector::from(std::sqrt(1.0 - c * c), 0.0, c);
      t.rows.push_back({c, q_qubit_closed(a, b).first, qf_qubit_closed(a, b)});
    }
    return t;
  }
  if (dim < 1) fail(ErrorKind::InvalidSubspaceDim, "dimension must be positive");
  for (int dc = 0; dc < dim; ++dc) t.rows.push_back({dc, q_subspace_closed(dim, dc), qf_subspace_closed(dim, dc)});
  return t;
}

AuditOutput cmd_audit(Corpus corpus, const RunConfig& cfg, int count, int dim) {
  AuditOptions opts;
  opts.search = cfg.search();
  opts.count = count;
  opts.dim = dim;
  const auto rows = run_audit(corpus, opts);
  AuditOutput out;
  out.table = make({"instance", "inequality", "lhs", "rhs", "verdict", "proved"});
  for (const auto& r : rows) out.table.rows.push_back({r.instance, r.inequality, r.lhs, r.rhs, to_string(r.verdict), r.proved});
  out.proved_violation = has_proved_violation(rows);
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Incompatibility measures for sets of quantum observables"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  std::string format = "json";
  app.add_option("--seed", cfg.seed, "Master seed for all randomized searches")->capture_default_str();
  app.add_option("--restarts", cfg.restarts, "Random restarts per search")->capture_default_str()->check(
      CLI::PositiveNumber);
  app.add_option("--tol", cfg.tol, "Stopping tolerance on objective improvement")->capture_default_str()->check(
      CLI::PositiveNumber);
  app.add_option("--format", format, "Output format")->capture_default_str()->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", cfg.out, "Write output to this file instead of stdout");

  double cos_delta = 0.0;
  auto* qubit = app.add_subcommand("qubit", "Closed-form values for a qubit pair");
  qubit->add_option("--cos", cos_delta, "Inner product of the two Bloch vectors")->required();

  int dim = 2;
  int count = 2;
  auto* mub = app.add_subcommand("mub", "Mutually unbiased bases in prime dimension");
  mub->add_option("--dim", dim, "Prime dimension")->required();
  mub->add_option("--count", count, "Number of bases")->capture_default_str();

  int dc = 0;
  auto* subspace = app.add_subcommand("subspace", "Pair commuting on a subspace");
  subspace->add_option("--dim", dim, "Dimension")->required();
  subspace->add_option("--dc", dc, "Dimension of the common block")->required();

  std::vector<std::string> files;
  std::string measure = "Q";
  auto* meas = app.add_subcommand("measure", "Evaluate a measure on observables read from JSON files");
  meas->add_option("files", files, "Observable JSON files")->required();
  meas->add_option("--measure", measure, "Q, Q_1, Q_F, Q_inf, t2 or h2")->capture_default_str()->check(
      CLI::IsMember({"Q", "Q_1", "Q_F", "Q_inf", "t2", "h2"}));

  auto* eur = app.add_subcommand("eur", "Entropic uncertainty bounds for observables read from JSON files");
  eur->add_option("files", files, "Observable JSON files")->required();

  std::string kind = "sdp";
  std::string ensemble_file;
  std::string variant = "as_stated";
  auto* bound = app.add_subcommand("bound", "Convex-programming bounds with an oracle verdict");
  bound->add_option("--kind", kind, "sdp or qp")->capture_default_str()->check(CLI::IsMember({"sdp", "qp"}));
  bound->add_option("--ensemble", ensemble_file, "Ensemble JSON (sdp)");
  bound->add_option("files", files, "Two observable JSON files (qp)");
  bound->add_option("--variant", variant, "QP reading")->capture_default_str()->check(
      CLI::IsMember({"as_stated", "with_factor2", "derivation_matrix"}));

  std::string strategy = "optimal";
  std::uint64_t trials = 100000;
  auto* qkd = app.add_subcommand("qkd", "Intercept-resend error rate by Monte Carlo");
  qkd->add_option("--ensemble", ensemble_file, "Ensemble JSON")->required();
  qkd->add_option("--strategy", strategy, "Strategy JSON or \"optimal\"")->capture_default_str();
  qkd->add_option("--trials", trials, "Number of trials")->capture_default_str()->check(CLI::PositiveNumber);

  std::string figure;
  int fig_dim = 20;
  auto* fig = app.add_subcommand("figure", "Figure data tables");
  fig->add_option("name", figure, "fig1 or fig2")->required();
  fig->add_option("--dim", fig_dim, "Dimension for fig2")->capture_default_str();

  std::string corpus = "random";
  int audit_count = 50;
  int audit_dim = 3;
  auto* audit = app.add_subcommand("audit", "Check every inequality on a corpus of instances");
  audit->add_option("--corpus", corpus, "qubit_grid, mub_set, subspace_grid or random")->capture_default_str()->check(
      CLI::IsMember({"qubit_grid", "mub_set", "subspace_grid", "random"}));
  audit->add_option("--count", audit_count, "Random corpus size")->capture_default_str();
  audit->add_option("--dim", audit_dim, "Random corpus dimension")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_code::ok : exit_code::parse_error;
  }
  cfg.format = format == "csv" ? Format::csv : Format::json;

  int status = exit_code::ok;
  Table table;
  try {
    if (*qubit) {
      table = cmd_qubit(cos_delta);
    } else if (*mub) {
      table = cmd_mub(dim, count, cfg);
    } else if (*subspace) {
      table = cmd_subspace(dim, dc, cfg);
    } else if (*meas) {
      table = cmd_measure(read_observables(files), *parse_measure(measure), cfg);
    } else if (*eur) {
      table = cmd_eur(read_observables(files), cfg);
    } else if (*bound) {
      if (kind == "sdp") {
        if (ensemble_file.empty()) fail(ErrorKind::InvalidArgument, "--kind sdp needs --ensemble");
        table = cmd_bound_sdp(ensemble_from_json(read_json_file(ensemble_file)), cfg);
      } else {
        const auto obs = read_observables(files);
        if (obs.size() != 2) fail(ErrorKind::DimensionMismatch, "--kind qp needs exactly two observables");
        const QpVariant v = variant == "as_stated"      ? QpVariant::as_stated
                            : variant == "with_factor2" ? QpVariant::with_factor2
                                                        : QpVariant::derivation_matrix;
        table = cmd_bound_qp(obs[0], obs[1], v, cfg);
      }
    } else if (*qkd) {
      const Ensemble s = ensemble_from_json(read_json_file(ensemble_file));
      std::optional<EveStrategy> eve;
      if (strategy != "optimal") eve = strategy_from_json(read_json_file(strategy));
      table = cmd_qkd(s, eve, trials, cfg);
    } else if (*fig) {
      table = cmd_figure(parse_figure(figure), fig_dim);
    } else if (*audit) {
      AuditOutput a = cmd_audit(*parse_corpus(corpus), cfg, audit_count, audit_dim);
      table = std::move(a.table);
      if (a.proved_violation) {
        err << "audit: a proved inequality is violated\n";
        status = exit_code::proved_violation;
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::ParseError: return exit_code::parse_error;
      case ErrorKind::DimensionMismatch: return exit_code::dimension_mismatch;
      default: return exit_code::failure;
    }
  }

  const std::string text = render(table, cfg.format);
  if (cfg.out.empty()) {
    out << text;
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!(f << text)) {
      err << "error: cannot write " << cfg.out << '\n';
      return exit_code::failure;
    }
  }
  return status;
}

}  // namespace incompat::cli
