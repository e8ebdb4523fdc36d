#include "incompat/json_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "incompat/error.hpp"

namespace incompat {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorKind::ParseError, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double number(const json& j) {
  if (!j.is_number()) bad("expected a number");
  return j.get<double>();
}

cplx complex_from(const json& j) {
  if (!j.is_array() || j.size() != 2) bad("complex entries must be [re, im] pairs");
  return {number(j[0]), number(j[1])};
}

json complex_to(cplx z) { return json::array({z.real(), z.imag()}); }

CVector vector_from(const json& j) {
  if (!j.is_array() || j.empty()) bad("expected a nonempty array of complex entries");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from(j[i]);
  return v;
}

CMatrix matrix_from(const json& j, int d) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(d) * static_cast<std::size_t>(d))
    bad("matrix must hold d*d complex entries");
  CMatrix m(d, d);
  for (int c = 0; c < d; ++c)
    for (int r = 0; r < d; ++r) m(r, c) = complex_from(j[static_cast<std::size_t>(c * d + r)]);
  return m;
}

json matrix_to(const CMatrix& m) {
  json out = json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(complex_to(m(r, c)));
  return out;
}

int dimension(const json& j) {
  const json& d = field(j, "dim");
  if (!d.is_number_integer() || d.get<long long>() < 1) bad("\"dim\" must be a positive integer");
  return d.get<int>();
}

}  // namespace

json observable_to_json(const Observable& a) {
  json vals = json::array();
  for (Eigen::Index i = 0; i < a.eigenvalues().size(); ++i) vals.push_back(a.eigenvalues()(i));
  return {{"dim", a.dim()}, {"eigenvalues", vals}, {"eigenvectors", matrix_to(a.basis())}};
}

Observable observable_from_json(const json& j) {
  const int d = dimension(j);
  const json& vals = field(j, "eigenvalues");
  if (!vals.is_array()) bad("\"eigenvalues\" must be an array");
  if (vals.size() != static_cast<std::size_t>(d)) fail(ErrorKind::DimensionMismatch, "eigenvalue count differs from dim");
  RVector ev(d);
  for (int i = 0; i < d; ++i) ev(i) = number(vals[static_cast<std::size_t>(i)]);
  return Observable::from_eigensystem(ev, matrix_from(field(j, "eigenvectors"), d));
}

json povm_to_json(const RankOnePovm& m) {
  json dirs = json::array();
  for (const auto& chi : m.directions())
    for (Eigen::Index i = 0; i < chi.amplitudes().size(); ++i) dirs.push_back(complex_to(chi.amplitudes()(i)));
  return {{"weights", m.weights()}, {"directions", dirs}};
}

RankOnePovm povm_from_json(const json& j) {
  const json& w = field(j, "weights");
  const json& dirs = field(j, "directions");
  if (!w.is_array() || w.empty() || !dirs.is_array()) bad("POVM needs arrays \"weights\" and \"directions\"");
  const std::size_t k = w.size();
  if (dirs.size() % k != 0) bad("direction entries are not a multiple of the weight count");
  const std::size_t d = dirs.size() / k;
  std::vector<double> weights;
  std::vector<PureState> states;
  for (std::size_t e = 0; e < k; ++e) {
    weights.push_back(number(w[e]));
    CVector v(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) v(static_cast<Eigen::Index>(i)) = complex_from(dirs[e * d + i]);
    states.push_back(PureState::normalized(v));
  }
  return RankOnePovm::from(std::move(weights), std::move(states));
}

Ensemble ensemble_from_json(const json& j) {
  if (j.is_object() && j.contains("observables")) {
    const json& list = j.at("observables");
    if (!list.is_array() || list.empty()) bad("\"observables\" must be a nonempty array");
    std::vector<Observable> obs;
    for (const auto& o : list) obs.push_back(observable_from_json(o));
    return eigenstate_ensemble(obs);
  }
  const json& list = field(j, "states");
  if (!list.is_array() || list.empty()) bad("\"states\" must be a nonempty array");
  std::vector<PureState> states;
  for (const auto& s : list) states.push_back(PureState::normalized(vector_from(s)));
  return Ensemble(std::move(states));
}

EveStrategy strategy_from_json(const json& j) {
  const RankOnePovm povm = povm_from_json(j);
  if (!j.contains("reconstruction")) return EveStrategy::measure_resend(povm);
  const json& rec = j.at("reconstruction");
  if (!rec.is_array()) bad("\"reconstruction\" must be an array");
  EveStrategy e;
  e.povm = povm;
  for (const auto& m : rec) e.reconstruction.push_back(DensityMatrix::from_matrix(matrix_from(m, povm.dim())));
  return e;
}

json bound_report_to_json(const BoundReport& r) {
  json out = {{"target", to_string(r.target)},
              {"direction", to_string(r.direction)},
              {"variant", to_string(r.variant)},
              {"bound", r.bound},
              {"program_value", r.program_value},
              {"certificate", {{"feas_margin", r.certificate.feas_margin}, {"stationarity", r.certificate.stationarity}}},
              {"oracle", r.oracle ? json(*r.oracle) : json(nullptr)},
              {"verdict", to_string(r.verdict)}};
  if (r.oracle_kind) out["oracle_kind"] = to_string(*r.oracle_kind);
  if (r.variant == QpVariant::none) {
    out["dual_value"] = r.dual_value;
    out["newton_steps"] = r.newton_steps;
  } else {
    out["minimizer"] = std::vector<double>(r.minimizer.data(), r.minimizer.data() + r.minimizer.size());
    out["tangent_min_eig"] = r.tangent_min_eig;
  }
  return out;
}

json audit_row_to_json(const AuditRow& r) {
  return {{"instance", r.instance},   {"inequality", r.inequality},     {"lhs", r.lhs},
          {"rhs", r.rhs},             {"verdict", to_string(r.verdict)}, {"proved", r.proved}};
}

json sim_result_to_json(const SimResult& r) {
  return {{"trials", r.trials},
          {"errors", r.errors},
          {"empirical_error", r.empirical_error},
          {"std_error", r.std_error},
          {"analytic_error", r.analytic_error}};
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    bad(e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str());
}

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace incompat
