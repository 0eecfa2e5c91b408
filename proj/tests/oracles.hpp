// Independent reference computations shared by the unit and acceptance tests.
#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <vector>

namespace oracle {

/// Cyclic cutting sequence of the line y = (p/q) x + eps on the unit lattice over one period:
/// 'a' at each vertical line, 'b' at each horizontal line.
inline std::string cutting_word(std::int64_t p, std::int64_t q) {
  if (q == 0) return "b";
  if (p == 0) return "a";
  std::string w;
  std::int64_t i = 1, j = 1;
  while (i <= q || j <= p) {
    // vertical x = i versus horizontal crossing at x = (j - eps) q / p
    if (j > p || (i <= q && i * p < j * q)) {
      w += 'a';
      ++i;
    } else {
      w += 'b';
      ++j;
    }
  }
  return w;
}

inline std::set<std::string> cyclic_factors(const std::string& w, int n) {
  std::set<std::string> out;
  for (std::size_t s = 0; s < w.size(); ++s) {
    std::string f;
    for (int k = 0; k < n; ++k) f += w[(s + k) % w.size()];
    out.insert(f);
  }
  return out;
}

inline std::set<std::string> linear_factors(const std::string& w, int n) {
  std::set<std::string> out;
  for (std::size_t s = 0; s + n <= w.size(); ++s) out.insert(w.substr(s, n));
  return out;
}

inline std::int64_t isqrt(std::int64_t x) {
  std::int64_t r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(x)));
  while (r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

/// Prefix of the lower mechanical word of density (3 - sqrt 5)/2 with exact integer floors.
inline std::string golden_density_prefix(int length) {
  auto fl = [](std::int64_t n) {  // floor(n (3 - sqrt 5) / 2)
    std::int64_t m = isqrt(5 * n * n);
    std::int64_t t = 3 * n - m - 1;
    return n == 0 ? 0 : (t >= 0 ? t / 2 : -((-t + 1) / 2));
  };
  std::string w;
  for (std::int64_t n = 0; n < length; ++n) w += fl(n + 1) - fl(n) == 1 ? 'b' : 'a';
  return w;
}

inline std::size_t farey_count(int Q) {
  std::vector<int> phi(Q + 1);
  std::iota(phi.begin(), phi.end(), 0);
  for (int i = 2; i <= Q; ++i)
    if (phi[i] == i)
      for (int j = i; j <= Q; j += i) phi[j] -= phi[j] / i;
  std::size_t total = 1;
  for (int q = 1; q <= Q; ++q) total += phi[q];
  return total;
}

}  // namespace oracle
