#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ttlam/lamination.hpp"

namespace ttlam {

enum class ScheduleMode : std::uint8_t { exponential, reciprocal };

const char* to_string(ScheduleMode m);
/// "exp" / "exponential" / "recip" / "reciprocal".
ScheduleMode parse_schedule_mode(const std::string& s);

/// eps_r = a e^{-b r} or a / r.
struct ScaleSchedule {
  ScheduleMode mode = ScheduleMode::reciprocal;
  double a = 1;
  double b = 1;
  std::vector<int> radii;  // strictly increasing, >= 1

  [[nodiscard]] double eps(int r) const;
};

/// Throws ContractViolation unless a, b > 0 and radii strictly increase from >= 1.
ScaleSchedule make_schedule(ScheduleMode mode, std::vector<int> radii, double a = 1, double b = 1);
std::vector<int> radius_range(int lo, int hi);

struct CoverCount {
  int r = 0;
  double eps = 0;
  std::uint64_t n = 0;
  /// log N / log(1/eps)
  [[nodiscard]] double running_estimate() const;
};

/// N_r = number of distinct realized families of length 2r+1 over the sample.
std::vector<CoverCount> cover_counts(const std::vector<Lamination>& sample, const ScaleSchedule& schedule, int jobs = 1);

struct DimensionEstimate {
  double slope = 0;
  double intercept = 0;
  double residual = 0;  // RMS of the fit residuals
  int r_lo = 0;
  int r_hi = 0;
  int scales = 0;
  std::string source = "census";
};

/// Least-squares slope of log N against log(1/eps) over the top `keep` fraction of scales.
DimensionEstimate estimate_dimension(const std::vector<CoverCount>& counts, double keep = 0.5,
                                     const std::string& source = "census");

/// Same fit restricted to r in [r_lo, r_hi].
DimensionEstimate estimate_dimension_window(const std::vector<CoverCount>& counts, int r_lo, int r_hi,
                                            const std::string& source = "census");

/// Slope of log N against log r over r in [r_lo, r_hi].
DimensionEstimate growth_exponent(const std::vector<CoverCount>& counts, int r_lo, int r_hi);

/// Farey sample on the torus large enough that every family at radius <= r_max is met.
int saturating_farey_order(int r_max);

struct BoundRow {
  int r = 0;
  std::uint64_t census = 0;
  std::optional<std::uint64_t> zippers;  // #Z_r when enumeration completed
  double coarse_bound = 0;
  std::optional<double> better_bound;  // c r^{9|chi|-1}, c fitted at r = 1
};

struct BoundReport {
  std::vector<BoundRow> rows;
  int exponent_ceiling = 0;
  std::optional<DimensionEstimate> census_growth;
  [[nodiscard]] bool passed() const;
};

/// Census lower bounds next to enumerated #Z_r and both counting bounds.
BoundReport bound_report(const TrainTrack& track, const std::vector<Lamination>& sample, const std::vector<int>& radii,
                         int zipper_r_max = 6, std::uint64_t cap = 10'000'000, int jobs = 1);

}  // namespace ttlam
