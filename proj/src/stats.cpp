#include "setopt/stats.hpp"

#include "setopt/types.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

namespace setopt {

Summary summarize(std::span<const double> values, bool integer_mode) {
  detail::require(!values.empty(), "summarize: empty sample");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();

  Summary s;
  s.min = v.front();
  s.max = v.back();
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / double(n);
  s.median = n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);

  std::map<double, std::size_t> counts;
  for (double x : v) ++counts[integer_mode ? std::round(x) : x];
  std::size_t best = 0;
  for (const auto& [value, count] : counts) {
    if (count > best) {  // map order makes ties resolve to the smallest
      best = count;
      s.mode = value;
    }
  }

  double ss = 0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.sd = std::sqrt(ss / double(n));
  return s;
}

}  // namespace setopt
