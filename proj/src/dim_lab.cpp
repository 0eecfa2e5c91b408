#include "ttlam/dim_lab.hpp"

#include <algorithm>
#include <cmath>

#include "ttlam/zippers.hpp"

namespace ttlam {

const char* to_string(ScheduleMode m) { return m == ScheduleMode::exponential ? "exp" : "recip"; }

ScheduleMode parse_schedule_mode(const std::string& s) {
  if (s == "exp" || s == "exponential") return ScheduleMode::exponential;
  if (s == "recip" || s == "reciprocal") return ScheduleMode::reciprocal;
  throw ParseError("unknown schedule '" + s + "' (expected exp or recip)");
}

double ScaleSchedule::eps(int r) const {
  return mode == ScheduleMode::exponential ? a * std::exp(-b * r) : a / r;
}

ScaleSchedule make_schedule(ScheduleMode mode, std::vector<int> radii, double a, double b) {
  if (!(a > 0) || !(b > 0)) throw ContractViolation("schedule constants must be positive");
  if (radii.empty()) throw ContractViolation("schedule needs at least one radius");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] < 1) throw ContractViolation("schedule radii must be >= 1");
    if (i > 0 && radii[i] <= radii[i - 1]) throw ContractViolation("schedule radii must strictly increase");
  }
  return {mode, a, b, std::move(radii)};
}

std::vector<int> radius_range(int lo, int hi) {
  std::vector<int> out;
  for (int r = lo; r <= hi; ++r) out.push_back(r);
  return out;
}

double CoverCount::running_estimate() const {
  double den = std::log(1.0 / eps);
  if (den <= 0) return std::nan("");
  return std::log(static_cast<double>(n)) / den;
}

std::vector<CoverCount> cover_counts(const std::vector<Lamination>& sample, const ScaleSchedule& schedule, int jobs) {
  std::vector<CoverCount> out;
  for (int r : schedule.radii) {
    auto c = census_realized_families(sample, r, jobs);
    out.push_back({r, schedule.eps(r), c.size});
  }
  return out;
}

namespace {

DimensionEstimate fit(const std::vector<CoverCount>& pts, const std::string& source, bool log_r) {
  if (pts.size() < 4) throw ContractViolation("dimension fit needs at least 4 scales");
  const double n = static_cast<double>(pts.size());
  std::vector<double> xs, ys;
  for (const auto& c : pts) {
    if (c.n == 0) throw ContractViolation("cover counts must be positive");
    if (!(c.eps > 0)) throw ContractViolation("scales must be positive");
    xs.push_back(log_r ? std::log(static_cast<double>(c.r)) : std::log(1.0 / c.eps));
    ys.push_back(std::log(static_cast<double>(c.n)));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 1e-300)) throw ContractViolation("degenerate schedule: scales do not vary");
  DimensionEstimate d;
  d.slope = sxy / sxx;
  d.intercept = my - d.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double e = ys[i] - (d.intercept + d.slope * xs[i]);
    ss += e * e;
  }
  d.residual = std::sqrt(ss / n);
  d.r_lo = pts.front().r;
  d.r_hi = pts.back().r;
  d.scales = static_cast<int>(pts.size());
  d.source = source;
  return d;
}

std::vector<CoverCount> window(const std::vector<CoverCount>& counts, int lo, int hi) {
  std::vector<CoverCount> out;
  for (const auto& c : counts)
    if (c.r >= lo && c.r <= hi) out.push_back(c);
  return out;
}

}  // namespace

DimensionEstimate estimate_dimension(const std::vector<CoverCount>& counts, double keep, const std::string& source) {
  if (!(keep > 0) || keep > 1) throw ContractViolation("fit window fraction must lie in (0, 1]");
  std::size_t k = static_cast<std::size_t>(std::ceil(keep * static_cast<double>(counts.size())));
  k = std::min(k, counts.size());
  std::vector<CoverCount> top(counts.end() - static_cast<std::ptrdiff_t>(k), counts.end());
  return fit(top, source, false);
}

DimensionEstimate estimate_dimension_window(const std::vector<CoverCount>& counts, int r_lo, int r_hi,
                                            const std::string& source) {
  return fit(window(counts, r_lo, r_hi), source, false);
}

DimensionEstimate growth_exponent(const std::vector<CoverCount>& counts, int r_lo, int r_hi) {
  return fit(window(counts, r_lo, r_hi), "census", true);
}

int saturating_farey_order(int r_max) { return 2 * (2 * r_max + 1); }

bool BoundReport::passed() const {
  for (const auto& row : rows) {
    if (row.zippers) {
      if (row.census > *row.zippers) return false;
      if (static_cast<double>(*row.zippers) > row.coarse_bound) return false;
      if (row.better_bound && static_cast<double>(*row.zippers) > *row.better_bound) return false;
    }
  }
  return !census_growth || census_growth->slope <= exponent_ceiling;
}

BoundReport bound_report(const TrainTrack& track, const std::vector<Lamination>& sample, const std::vector<int>& radii,
                         int zipper_r_max, std::uint64_t cap, int jobs) {
  BoundReport rep;
  rep.exponent_ceiling = zipper_bounds(track, 1).better_exponent;
  std::optional<double> c;
  try {
    c = static_cast<double>(count_zipper_families(track, 1, cap, jobs));
  } catch (const EnumerationLimitError&) {
  }
  bool stop = false;
  std::vector<CoverCount> counts;
  for (int r : radii) {
    BoundRow row;
    row.r = r;
    row.census = census_realized_families(sample, r, jobs).size;
    row.coarse_bound = zipper_bounds(track, r).coarse;
    if (c) row.better_bound = *c * std::pow(static_cast<double>(r), rep.exponent_ceiling);
    if (!stop && r <= zipper_r_max) {
      try {
        row.zippers = count_zipper_families(track, r, cap, jobs);
      } catch (const EnumerationLimitError&) {
        stop = true;
      }
    }
    counts.push_back({r, 1.0 / r, row.census});
    rep.rows.push_back(row);
  }
  std::vector<CoverCount> positive;
  for (const auto& cc : counts)
    if (cc.n > 0) positive.push_back(cc);
  if (positive.size() >= 4) rep.census_growth = growth_exponent(positive, positive.front().r, positive.back().r);
  return rep;
}

}  // namespace ttlam
