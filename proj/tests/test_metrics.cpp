#include <atomic>
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "ttlam/metrics.hpp"
#include "ttlam/torus_model.hpp"
#include "ttlam/track_io.hpp"

using namespace ttlam;

namespace {

std::shared_ptr<const TrainTrack> torus() {
  static auto t = std::make_shared<const TrainTrack>(bundled_track("torus"));
  return t;
}

Lamination slope(const std::string& s) { return slope_to_lamination(Slope::parse(s), torus()); }

// Answers truthfully for the first `honest_calls` requests, then drops a path.
class FlakyBackend : public LanguageBackend {
 public:
  FlakyBackend(Lamination base, int honest_calls) : base_(std::move(base)), honest_(honest_calls) {}
  [[nodiscard]] std::string tag() const override { return "explicit-language"; }
  [[nodiscard]] std::vector<EdgePath> paths(int r) const override {
    auto p = realized_paths(base_, r).paths;
    if (calls_++ >= honest_ && p.size() > 1) p.pop_back();
    return p;
  }

 private:
  Lamination base_;
  int honest_;
  mutable std::atomic<int> calls_{0};
};

}  // namespace

TEST_CASE("d_theta basics") {
  auto a = slope("0/1");
  auto b = slope("1/1");
  auto same = d_theta(a, a, 20);
  CHECK(same.value == Rational(0));
  CHECK_FALSE(same.capped);

  auto d = d_theta(a, b, 20);
  CHECK(d.value == Rational(1));
  CHECK(d.divergence_depth == 0);
  REQUIRE(d.witness);
  CHECK(d.witness->size() == 1);

  // 1/2 versus 1/3: oracle divergence from cutting-sequence factor sets.
  int r = 1;
  while (oracle::cyclic_factors(oracle::cutting_word(1, 2), r) == oracle::cyclic_factors(oracle::cutting_word(1, 3), r))
    ++r;
  auto h = d_theta(slope("1/2"), slope("1/3"), 64);
  CHECK(h.value == Rational(1, r));
  CHECK(h.divergence_depth == r - 1);
  REQUIRE(h.witness);
  CHECK(static_cast<int>(h.witness->size()) == r);
  auto lhs = realized_paths(slope("1/2"), r);
  auto rhs = realized_paths(slope("1/3"), r);
  CHECK(lhs.contains(*h.witness) != rhs.contains(*h.witness));
  CHECK((h.witness_side == 0) == lhs.contains(*h.witness));

  // Symmetry.
  auto h2 = d_theta(slope("1/3"), slope("1/2"), 64);
  CHECK(h2.value == h.value);
  CHECK(h2.witness.has_value());
}

TEST_CASE("d_theta cap flag and provable equality") {
  auto a = slope("1/2");
  auto b = slope("2/4");
  auto eq = d_theta(a, b, 10);
  CHECK(eq.value == Rational(0));
  CHECK_FALSE(eq.capped);

  // Same language, no certificate: slope model versus multicurve.
  auto multi = from_multicurve(torus(), {2, 1});
  auto capped = d_theta(a, multi, 10);
  CHECK(capped.value == Rational(0));
  CHECK(capped.capped);

  // Close but distinct slopes hit the cap.
  auto c = d_theta(slope("8/13"), slope("13/21"), 5);
  CHECK(c.capped);
  CHECK(c.value == Rational(0));

  // Depth errors propagate.
  auto finite = slope("cf:[0;1,1,1]");  // density denominators 2, 3, 5: depth 4
  CHECK_THROWS_AS(d_theta(finite, slope("cf:[0;periodic:1]"), 30), DepthLimitError);
  CHECK(d_theta(finite, slope("0/1"), 30).value == Rational(1));
}

TEST_CASE("d_log transform") {
  CHECK(d_log_transform(0) == 0);
  CHECK(d_log_transform(0.25) == doctest::Approx(0.72134752).epsilon(1e-8));
  CHECK(d_log_transform(3.0) == doctest::Approx(1.0 / std::log(4.0)).epsilon(1e-15));
  CHECK(d_log_transform(std::exp(-10.0)) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK_THROWS_AS(d_log_transform(-1e-9), ContractViolation);
  double prev = 0;
  for (int k = 1; k <= 1000; ++k) {
    double v = d_log_transform(k / 2000.0);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(d_log_transform(1e-300) < 1e-2);
}

TEST_CASE("model hausdorff") {
  CombDistance one;
  one.value = Rational(1);
  CHECK(model_hausdorff_from(one, 2.0) == doctest::Approx(std::exp(-2.0)));
  CHECK(model_hausdorff_from(CombDistance{}, 2.0) == 0);
  CHECK_THROWS_AS(model_hausdorff_from(one, 0), ContractViolation);

  // Monotone over a Farey sweep, and the Lipschitz bounds hold.
  auto f = farey_slopes(9);
  auto base = slope_to_lamination(Slope::parse("cf:[0;periodic:2]"), torus());
  for (double b : {0.5, 1.0, 1.3862943611198906, 3.0}) {
    auto bounds = lipschitz_bounds(b);
    std::vector<std::pair<Rational, double>> pts;
    for (auto& s : f) {
      auto lam = slope_to_lamination(s, torus());
      auto d = d_theta(lam, base, 200);
      REQUIRE(d.value > Rational(0));
      double mh = model_hausdorff_from(d, b);
      pts.emplace_back(d.value, mh);
      double ratio = d_log_transform(mh) / boost::rational_cast<double>(d.value);
      CHECK(ratio >= bounds.lower - 1e-12);
      CHECK(ratio <= bounds.upper + 1e-12);
    }
    for (auto& [d1, m1] : pts)
      for (auto& [d2, m2] : pts)
        if (d1 < d2) CHECK(m1 < m2);
  }
}

TEST_CASE("ultrametric check over farey slopes") {
  std::vector<Lamination> pts;
  for (auto& s : farey_slopes(8)) pts.push_back(slope_to_lamination(s, torus()));
  auto rep = check_ultrametric(pts, 200, 4);
  CHECK(rep.passed());
  CHECK(rep.triples == pts.size() * (pts.size() - 1) * (pts.size() - 2));
  CHECK(rep.worst_margin <= Rational(0));
  CHECK_FALSE(rep.any_capped);

  std::vector<Lamination> triple(3, slope("1/3"));
  CHECK(check_ultrametric(triple, 20).passed());
  CHECK_THROWS_AS(check_ultrametric({slope("1/3"), slope("1/2")}, 20), ContractViolation);
}

TEST_CASE("ultrametric check reports a broken backend") {
  // x is honest while compared with y, then corrupts its answers when compared with z.
  const int r_max = 6;
  auto y = slope("1/2");
  auto z = slope("2/4");
  Lamination x(torus(), std::make_shared<FlakyBackend>(slope("1/2"), r_max));
  auto rep = check_ultrametric({x, y, z}, r_max, 1);
  CHECK_FALSE(rep.passed());
  REQUIRE(!rep.violations.empty());
  CHECK(rep.worst_margin > Rational(0));
}

TEST_CASE("d_log triangle margins") {
  double c = std::pow(2.0, -2.0 - std::sqrt(2.0));
  CHECK(std::fabs(dlog_margin(c, c) - (3 - 2 * std::sqrt(2.0)) / std::log(2.0)) < 1e-9);
  CHECK(dlog_margin(0, 0.1) == 0);
  CHECK(dlog_margin(0.2, 0) == 0);
  auto grid = dlog_grid(1000);
  CHECK(grid.size() == 1001u * 1001u);
  auto rep = check_triangle_dlog(grid);
  CHECK(rep.min_margin >= -1e-12);
  CHECK(rep.passed());
  CHECK(std::fabs(rep.critical_value - (3 - 2 * std::sqrt(2.0)) / std::log(2.0)) < 1e-9);
}
