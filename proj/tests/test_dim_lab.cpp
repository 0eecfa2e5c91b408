#include <cmath>

#include "doctest.h"
#include "ttlam/dim_lab.hpp"
#include "ttlam/torus_model.hpp"
#include "ttlam/track_io.hpp"
#include "ttlam/zippers.hpp"

using namespace ttlam;

namespace {

std::shared_ptr<const TrainTrack> torus() {
  static auto t = std::make_shared<const TrainTrack>(bundled_track("torus"));
  return t;
}

std::vector<Lamination> farey_sample(int Q, bool positive_only = false) {
  std::vector<Lamination> out;
  for (const auto& s : farey_slopes(Q))
    if (!positive_only || s.num() > 0) out.push_back(slope_to_lamination(s, torus()));
  return out;
}

std::vector<CoverCount> power_law(const ScaleSchedule& s, double c, int k) {
  std::vector<CoverCount> out;
  for (int r : s.radii)
    out.push_back({r, s.eps(r), static_cast<std::uint64_t>(std::llround(c * std::pow(r, k)))});
  return out;
}

}  // namespace

TEST_CASE("schedules") {
  auto e = make_schedule(ScheduleMode::exponential, radius_range(1, 50), 1, 1);
  auto r = make_schedule(ScheduleMode::reciprocal, radius_range(1, 50), 2, 1);
  for (int i = 1; i < 50; ++i) {
    CHECK(e.eps(i + 1) < e.eps(i));
    CHECK(r.eps(i + 1) < r.eps(i));
  }
  CHECK(e.eps(3) == doctest::Approx(std::exp(-3.0)));
  CHECK(r.eps(4) == doctest::Approx(0.5));
  CHECK_THROWS_AS(make_schedule(ScheduleMode::exponential, {1, 2}, 0, 1), ContractViolation);
  CHECK_THROWS_AS(make_schedule(ScheduleMode::exponential, {1, 2}, 1, -1), ContractViolation);
  CHECK_THROWS_AS(make_schedule(ScheduleMode::reciprocal, {2, 2, 3}, 1, 1), ContractViolation);
  CHECK_THROWS_AS(make_schedule(ScheduleMode::reciprocal, {0, 1}, 1, 1), ContractViolation);
  CHECK(parse_schedule_mode("exp") == ScheduleMode::exponential);
  CHECK(parse_schedule_mode("recip") == ScheduleMode::reciprocal);
  CHECK_THROWS_AS(parse_schedule_mode("linear"), ParseError);
}

TEST_CASE("fits on exact power laws") {
  auto e = make_schedule(ScheduleMode::exponential, radius_range(1, 200));
  auto counts = power_law(e, 1, 2);
  CHECK(counts.back().running_estimate() <= 0.06);
  CHECK(counts.back().running_estimate() == doctest::Approx(std::log(40000.0) / 200));
  // later windows give smaller estimates
  double prev = 1e9;
  for (int hi : {25, 50, 100, 200}) {
    double s = estimate_dimension_window(counts, hi / 2, hi).slope;
    CHECK(s < prev);
    prev = s;
  }
  CHECK(prev < 0.03);

  auto rec = make_schedule(ScheduleMode::reciprocal, radius_range(1, 200));
  auto d = estimate_dimension(power_law(rec, 1, 2), 0.5);
  CHECK(d.slope == doctest::Approx(2).epsilon(1e-12));
  CHECK(d.residual < 1e-9);
  CHECK(d.scales == 100);
  CHECK(d.r_lo == 101);
  CHECK(d.r_hi == 200);
  CHECK(growth_exponent(power_law(rec, 3, 3), 10, 100).slope == doctest::Approx(3).epsilon(1e-6));

  // changing b rescales the exponential estimate by 1/b
  auto e2 = make_schedule(ScheduleMode::exponential, radius_range(1, 200), 1, 2);
  auto c1 = power_law(e, 1, 2);
  auto c2 = power_law(e2, 1, 2);
  CHECK(estimate_dimension(c2).slope == doctest::Approx(estimate_dimension(c1).slope / 2).epsilon(1e-12));
}

TEST_CASE("fit preconditions") {
  std::vector<CoverCount> flat;
  for (int r = 1; r <= 6; ++r) flat.push_back({r, 0.5, static_cast<std::uint64_t>(r)});
  CHECK_THROWS_AS(estimate_dimension(flat, 1.0), ContractViolation);
  auto rec = make_schedule(ScheduleMode::reciprocal, radius_range(1, 6));
  CHECK_THROWS_AS(estimate_dimension(power_law(rec, 1, 2), 0.5), ContractViolation);  // 3 scales
  auto zero = power_law(rec, 1, 2);
  zero[5].n = 0;
  CHECK_THROWS_AS(estimate_dimension(zero, 1.0), ContractViolation);
}

TEST_CASE("cover counts") {
  auto rec = make_schedule(ScheduleMode::reciprocal, radius_range(1, 30));
  std::vector<Lamination> one{slope_to_lamination(Slope::parse("cf:[0;periodic:1]"), torus())};
  for (const auto& c : cover_counts(one, rec)) CHECK(c.n == 1);

  auto sample = farey_sample(50);
  auto counts = cover_counts(sample, rec, 4);
  for (std::size_t i = 1; i < counts.size(); ++i) CHECK(counts[i].n >= counts[i - 1].n);
  CHECK(counts.back().n > counts.front().n);
  for (const auto& c : counts) CHECK(static_cast<double>(c.n) <= zipper_bounds(*torus(), c.r).coarse);

  // more laminations never lower the count
  auto smaller = cover_counts(farey_sample(20), rec);
  for (std::size_t i = 0; i < counts.size(); ++i) CHECK(smaller[i].n <= counts[i].n);
}

TEST_CASE("saturation and growth exponent") {
  const int r_max = 60;
  auto rec = make_schedule(ScheduleMode::reciprocal, radius_range(1, r_max));
  auto sat = cover_counts(farey_sample(saturating_farey_order(r_max)), rec);
  auto more = cover_counts(farey_sample(saturating_farey_order(r_max) + 25), rec);
  for (std::size_t i = 0; i < sat.size(); ++i) CHECK(sat[i].n == more[i].n);
  auto g = growth_exponent(sat, 20, r_max);
  CHECK(g.slope >= 1.6);
  CHECK(g.slope <= 2.4);
}

TEST_CASE("bound report") {
  auto rep = bound_report(*torus(), farey_sample(30, true), radius_range(1, 12), 6);
  CHECK(rep.exponent_ceiling == 8);
  CHECK(rep.passed());
  int enumerated = 0;
  for (const auto& row : rep.rows) {
    if (row.zippers) {
      ++enumerated;
      CHECK(row.census <= *row.zippers);
    }
  }
  CHECK(enumerated == 6);
  REQUIRE(rep.census_growth);
  CHECK(rep.census_growth->slope <= 8);

  auto s4 = std::make_shared<const TrainTrack>(bundled_track("sphere4"));
  std::vector<Lamination> s4_sample{from_multicurve(s4, {1, 1, 1, 1}), from_multicurve(s4, {2, 1, 3, 2})};
  auto rep4 = bound_report(*s4, s4_sample, radius_range(1, 5), 4);
  CHECK(rep4.exponent_ceiling == 17);
  CHECK(rep4.passed());
}
