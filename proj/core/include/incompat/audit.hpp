#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "incompat/convex_bounds.hpp"
#include "incompat/search.hpp"

namespace incompat {

enum class Corpus { qubit_grid, mub_set, subspace_grid, random };

std::optional<Corpus> parse_corpus(std::string_view name);
std::string_view to_string(Corpus c) noexcept;

/// One inequality checked on one instance. `proved` rows hold for every
/// input; the others record claims that may fail.
struct AuditRow {
  std::string instance;
  std::string inequality;
  double lhs = 0.0;
  double rhs = 0.0;
  Verdict verdict = Verdict::untested;
  bool proved = true;
};

struct AuditOptions {
  SearchConfig search;
  /// Random corpus only.
  int count = 50;
  int dim = 3;
  /// Every `commuting_every`-th random instance is a commuting pair.
  int commuting_every = 10;
};

std::vector<AuditRow> run_audit(Corpus corpus, const AuditOptions& opts);

/// True when any proved row is violated.
bool has_proved_violation(const std::vector<AuditRow>& rows);

}  // namespace incompat
