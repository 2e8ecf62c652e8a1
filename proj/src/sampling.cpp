#include "adasample/sampling.hpp"

#include <algorithm>
#include <unordered_set>

#include "adasample/errors.hpp"

namespace adasample {

void sample_without_replacement(RngStream& rng, Index n, Index m,
                                std::vector<Index>& out) {
  if (m < 1 || m > n) throw ConfigError("sample size must lie in [1, N]");
  out.clear();
  out.reserve(m);
  std::unordered_set<Index> chosen;
  chosen.reserve(static_cast<std::size_t>(m) * 2);
  // Floyd: for j = n-m .. n-1 pick t uniform on [0, j]; insert t unless it is
  // already chosen, in which case insert j (which cannot be yet).
  for (Index j = n - m; j < n; ++j) {
    const Index t = static_cast<Index>(rng.bounded(static_cast<std::uint64_t>(j) + 1));
    if (chosen.insert(t).second) {
      out.push_back(t);
    } else {
      chosen.insert(j);
      out.push_back(j);
    }
  }
  std::sort(out.begin(), out.end());
}

}  // namespace adasample
