#include "smaug/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "smaug/errors.hpp"

namespace smaug {

double dtw(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw EmptySequence();
  // Rows run over the longer sequence so the buffers hold min(n, m) + 1.
  if (b.size() > a.size()) std::swap(a, b);

  constexpr double inf = std::numeric_limits<double>::infinity();
  const std::size_t m = b.size();
  std::vector<double> prev(m + 1, inf);
  std::vector<double> curr(m + 1, inf);
  prev[0] = 0.0;

  for (std::size_t i = 1; i <= a.size(); ++i) {
    curr[0] = inf;
    const double ai = a[i - 1];
    for (std::size_t j = 1; j <= m; ++j) {
      const double best = std::min({prev[j], curr[j - 1], prev[j - 1]});
      curr[j] = std::abs(ai - b[j - 1]) + best;
    }
    std::swap(prev, curr);
  }
  return prev[m];
}

}  // namespace smaug
