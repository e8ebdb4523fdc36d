#pragma once

// Command implementations behind the `incompat` executable. Each command
// returns a Table; rendering and exit-code policy live in run().

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <incompat/audit.hpp>
#include <incompat/convex_bounds.hpp>
#include <incompat/linalg.hpp>
#include <incompat/qkd.hpp>
#include <incompat/search.hpp>

namespace incompat::cli {

enum class Format { json, csv };

struct RunConfig {
  std::uint64_t seed = 42;
  int restarts = 64;
  double tol = 1e-6;
  Format format = Format::json;
  std::string out;

  SearchConfig search() const;
};

/// Rows of cells keyed by `columns`. A single-record table renders as a
/// JSON object instead of an array.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;
  bool single = false;
};

/// JSON: array of objects (or one object). CSV: header plus one line per row,
/// numbers in shortest round-trip form, nested values as compact JSON.
std::string render(const Table& t, Format f);

enum class Measure { Q, Q_1, Q_F, Q_inf, t2, h2 };
std::optional<Measure> parse_measure(const std::string& name);

enum class Figure { fig1, fig2 };
/// Throws UnknownFigure.
Figure parse_figure(const std::string& name);

Table cmd_qubit(double cos_delta);
Table cmd_mub(int dim, int count, const RunConfig& cfg);
Table cmd_subspace(int dim, int dc, const RunConfig& cfg);
/// Throws DimensionMismatch for fewer than two observables.
Table cmd_measure(const std::vector<Observable>& observables, Measure m, const RunConfig& cfg);
Table cmd_eur(const std::vector<Observable>& observables, const RunConfig& cfg);
Table cmd_bound_sdp(const Ensemble& s, const RunConfig& cfg);
Table cmd_bound_qp(const Observable& a, const Observable& b, QpVariant variant, const RunConfig& cfg);
/// Without a strategy, Eve plays the ascent-optimal measure-resend attack.
Table cmd_qkd(const Ensemble& s, const std::optional<EveStrategy>& eve, std::uint64_t trials, const RunConfig& cfg);
Table cmd_figure(Figure fig, int dim);

struct AuditOutput {
  Table table;
  bool proved_violation = false;
};
AuditOutput cmd_audit(Corpus corpus, const RunConfig& cfg, int count = 50, int dim = 3);

/// Full command line; returns the process exit code. Errors go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int parse_error = 2;
inline constexpr int dimension_mismatch = 3;
inline constexpr int proved_violation = 4;
}  // namespace exit_code

}  // namespace incompat::cli
