#include "ttlam/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "ttlam/parallel.hpp"

namespace ttlam {

CombDistance d_theta(const Lamination& lhs, const Lamination& rhs, int r_max) {
  if (r_max < 1) throw ContractViolation("r_max must be >= 1");
  if (lhs.track_ptr() != rhs.track_ptr() && !(lhs.track() == rhs.track()))
    throw ContractViolation("laminations live on different tracks");
  CombDistance out;
  if (&lhs.backend() == &rhs.backend() || provably_equal(lhs, rhs)) {
    out.divergence_depth = r_max;
    return out;
  }
  for (int r = 1; r <= r_max; ++r) {
    if (equal_up_to_depth(lhs, rhs, r)) continue;
    auto a = realized_paths(lhs, r);
    auto b = realized_paths(rhs, r);
    std::vector<EdgePath> only_a, only_b;
    std::set_difference(a.paths.begin(), a.paths.end(), b.paths.begin(), b.paths.end(), std::back_inserter(only_a));
    std::set_difference(b.paths.begin(), b.paths.end(), a.paths.begin(), a.paths.end(), std::back_inserter(only_b));
    out.value = Rational(1, r);
    out.divergence_depth = r - 1;
    if (!only_a.empty() && (only_b.empty() || only_a.front() < only_b.front())) {
      out.witness = only_a.front();
      out.witness_side = 0;
    } else {
      out.witness = only_b.front();
      out.witness_side = 1;
    }
    return out;
  }
  out.divergence_depth = r_max;
  out.capped = true;
  return out;
}

double d_log_transform(double d) {
  if (!(d >= 0)) throw ContractViolation("d_log_transform needs a nonnegative distance");
  if (d == 0) return 0;
  return 1.0 / std::fabs(std::log(std::min(d, 0.25)));
}

double model_hausdorff_from(const CombDistance& d, double b) {
  if (!(b > 0)) throw ContractViolation("model constant b must be positive");
  if (d.value == Rational(0)) return 0;
  return std::exp(-b / boost::rational_cast<double>(d.value));
}

double model_hausdorff(const Lamination& lhs, const Lamination& rhs, double b, int r_max) {
  return model_hausdorff_from(d_theta(lhs, rhs, r_max), b);
}

LipschitzBounds lipschitz_bounds(double b) {
  if (!(b > 0)) throw ContractViolation("model constant b must be positive");
  return {1.0 / std::max(b, std::log(4.0)), 1.0 / b};
}

UltrametricReport check_ultrametric(const std::vector<Lamination>& points, int r_max, int jobs) {
  const int n = static_cast<int>(points.size());
  if (n < 3) throw ContractViolation("ultrametric check needs at least 3 points");
  std::vector<CombDistance> dist(static_cast<std::size_t>(n) * n);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  parallel_for(static_cast<int>(pairs.size()), jobs, [&](int k) {
    auto [i, j] = pairs[k];
    dist[i * n + j] = d_theta(points[i], points[j], r_max);
  });
  for (auto [i, j] : pairs) dist[j * n + i] = dist[i * n + j];

  UltrametricReport rep;
  rep.points = n;
  bool first = true;
  for (const auto& d : dist) rep.any_capped = rep.any_capped || d.capped;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        ++rep.triples;
        const Rational& dij = dist[i * n + j].value;
        const Rational& djk = dist[j * n + k].value;
        const Rational& dik = dist[i * n + k].value;
        Rational margin = dik - std::max(dij, djk);
        if (first || margin > rep.worst_margin) rep.worst_margin = margin;
        first = false;
        if (margin > Rational(0)) rep.violations.push_back({i, j, k, dij, djk, dik, dist[i * n + k].witness});
      }
    }
  }
  return rep;
}

double dlog_profile(double u) {
  if (!(u >= 0) || u >= 1) throw ContractViolation("f(u) = -1/ln u is used on [0, 1)");
  if (u == 0) return 0;
  return -1.0 / std::log(u);
}

double dlog_margin(double u, double v) { return dlog_profile(u) + dlog_profile(v) - dlog_profile(u + v); }

TriangleReport check_triangle_dlog(const std::vector<TriangleSample>& samples, double tol) {
  TriangleReport rep;
  bool first = true;
  for (const auto& s : samples) {
    double h = dlog_margin(s.u, s.v);
    ++rep.samples;
    if (h < -tol) ++rep.below_tolerance;
    if (first || h < rep.min_margin) {
      rep.min_margin = h;
      rep.argmin_u = s.u;
      rep.argmin_v = s.v;
      first = false;
    }
  }
  double c = std::pow(2.0, -2.0 - std::sqrt(2.0));
  rep.critical_value = dlog_margin(c, c);
  return rep;
}

std::vector<TriangleSample> dlog_grid(int steps) {
  if (steps < 1) throw ContractViolation("grid needs at least one step");
  std::vector<TriangleSample> out;
  out.reserve(static_cast<std::size_t>(steps + 1) * (steps + 1));
  const double den = 4.0 * steps;
  for (int i = 0; i <= steps; ++i)
    for (int j = 0; j <= steps; ++j) out.push_back({i / den, j / den});
  return out;
}

}  // namespace ttlam
