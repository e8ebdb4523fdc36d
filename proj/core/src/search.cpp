#include "incompat/search.hpp"

#include "incompat/error.hpp"

namespace incompat {

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::closed_form: return "closed_form";
    case Method::restart_search: return "restart_search";
    case Method::ascent: return "ascent";
  }
  return "unknown";
}

std::uint64_t restart_seed(std::uint64_t master, std::uint64_t index) noexcept {
  // splitmix64 finalizer applied to a golden-ratio stride
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void validate(const SearchConfig& cfg) {
  if (cfg.restarts < 1) fail(ErrorKind::InvalidArgument, "restarts must be at least 1");
  if (cfg.max_iters < 1) fail(ErrorKind::InvalidArgument, "max_iters must be at least 1");
  if (!(cfg.tol > 0.0)) fail(ErrorKind::InvalidArgument, "tol must be positive");
}

}  // namespace incompat
