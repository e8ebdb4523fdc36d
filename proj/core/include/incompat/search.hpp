#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace incompat {

struct SearchConfig {
  int restarts = 64;
  int max_iters = 2000;
  std::uint64_t seed = 42;
  double tol = 1e-10;
  /// When false, closed-form dispatch is skipped and the search always runs.
  bool allow_closed_form = true;
};

enum class Method { closed_form, restart_search, ascent };

std::string_view to_string(Method m) noexcept;

/// Seed for restart `index`, derived from the master seed only, so results do
/// not depend on the order in which restarts execute.
std::uint64_t restart_seed(std::uint64_t master, std::uint64_t index) noexcept;

inline std::mt19937_64 restart_rng(const SearchConfig& cfg, std::uint64_t index) {
  return std::mt19937_64(restart_seed(cfg.seed, index));
}

void validate(const SearchConfig& cfg);

}  // namespace incompat
