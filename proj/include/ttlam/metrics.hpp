#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ttlam/lamination.hpp"

namespace ttlam {

/// Combinatorial distance 1/(r*+1), r* the last length with equal realized sets.
struct CombDistance {
  Rational value{0};
  int divergence_depth = 0;       // r*
  std::optional<EdgePath> witness;  // length r*+1, realized by exactly one side
  int witness_side = -1;          // 0: only the left lamination realizes it; 1: only the right
  bool capped = false;            // 0 concluded at r_max without an equality certificate
};

/// Propagates DepthLimitError from either backend.
CombDistance d_theta(const Lamination& lhs, const Lamination& rhs, int r_max);

/// 0 for d = 0, else 1/|ln(min(d, 1/4))|. Throws ContractViolation for d < 0 or NaN.
double d_log_transform(double d);

/// Model of the Hausdorff distance: exp(-b / d_theta), 0 when d_theta = 0.
double model_hausdorff_from(const CombDistance& d, double b);
double model_hausdorff(const Lamination& lhs, const Lamination& rhs, double b, int r_max);

/// Bounds [1/max(b, ln 4), 1/b] on d_log(model_hausdorff) / d_theta for d_theta > 0.
struct LipschitzBounds {
  double lower, upper;
};
LipschitzBounds lipschitz_bounds(double b);

struct UltrametricViolation {
  int i, j, k;  // d(i,k) > max(d(i,j), d(j,k))
  Rational dij, djk, dik;
  std::optional<EdgePath> witness_ik;
};

struct UltrametricReport {
  std::size_t points = 0;
  std::size_t triples = 0;  // ordered (i, j, k) with distinct indices
  std::vector<UltrametricViolation> violations;
  Rational worst_margin{0};  // max over triples of d(i,k) - max(d(i,j), d(j,k)); <= 0 when passing
  bool any_capped = false;
  [[nodiscard]] bool passed() const { return violations.empty(); }
};

/// Exact check over all triples; pairwise distances are computed once (in parallel).
UltrametricReport check_ultrametric(const std::vector<Lamination>& points, int r_max, int jobs = 1);

/// f(u) = -1/ln u on (0, 1), f(0) = 0; h(u, v) = f(u) + f(v) - f(u + v).
double dlog_profile(double u);
double dlog_margin(double u, double v);

struct TriangleSample {
  double u, v;
};

struct TriangleReport {
  std::size_t samples = 0;
  double min_margin = 0;
  double argmin_u = 0, argmin_v = 0;
  double critical_value = 0;  // h at u = v = 2^(-2-sqrt 2)
  std::size_t below_tolerance = 0;
  [[nodiscard]] bool passed(double tol = 1e-12) const { return min_margin >= -tol; }
};

TriangleReport check_triangle_dlog(const std::vector<TriangleSample>& samples, double tol = 1e-12);

/// Samples u, v in {k / (4 * steps) : 0 <= k <= steps}.
std::vector<TriangleSample> dlog_grid(int steps);

}  // namespace ttlam
