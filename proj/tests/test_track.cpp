#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "ttlam/track.hpp"
#include "ttlam/track_io.hpp"

using namespace ttlam;

namespace {

TrainTrack make(const std::string& text) { return parse_track(text, "fixture"); }

bool has_condition(const std::vector<Diagnostic>& ds, const std::string& needle) {
  return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) { return d.message.find(needle) != std::string::npos; });
}

// Brute force: every word over the directed-edge alphabet, legality checked on raw slots.
std::uint64_t brute_force_count(const TrainTrack& t, int length) {
  const int n = 2 * t.num_edges();
  std::uint64_t total = 0;
  std::vector<int> w(length, 0);
  for (;;) {
    bool ok = true;
    for (int i = 0; i + 1 < length && ok; ++i) {
      DirectedEdge x = TrainTrack::from_dindex(w[i]);
      DirectedEdge y = TrainTrack::from_dindex(w[i + 1]);
      const Edge& ex = t.edges()[x.edge];
      const Edge& ey = t.edges()[y.edge];
      Slot in = x.forward ? ex.end : ex.start;
      Slot out = y.forward ? ey.start : ey.end;
      ok = in.sw == out.sw && in.side != out.side;
    }
    if (ok) ++total;
    int k = 0;
    while (k < length && ++w[k] == n) w[k++] = 0;
    if (k == length) break;
  }
  return total;
}

WeightSystem random_weights(const TrainTrack& t, std::mt19937_64& rng, int bound) {
  std::uniform_int_distribution<int> dist(0, bound);
  for (;;) {
    WeightSystem w(t.num_edges());
    bool nonzero = false;
    for (auto& x : w) {
      x = dist(rng);
      nonzero = nonzero || x != Rational(0);
    }
    if (nonzero && satisfies_switch_relations(t, w)) return w;
  }
}

const char* kTrigonMonogon =
    "switch s\nswitch t\n"
    "edge e1 s,A,0 s,A,1\nedge e2 s,B,0 t,A,0\nedge e3 s,B,1 t,B,1\nedge e4 t,A,1 t,B,0\n";

}  // namespace

TEST_CASE("bundled assets parse, validate and round-trip") {
  for (const auto& name : bundled_track_names()) {
    CAPTURE(name);
    TrainTrack t = bundled_track(name);
    CHECK(validate(t).empty());
    std::string text = serialize_track(t);
    TrainTrack again = parse_track(text, name);
    CHECK(again == t);
    CHECK(serialize_track(again) == text);
  }
  CHECK(bundled_track_names() == std::vector<std::string>{"genus2", "sphere4", "torus"});
}

TEST_CASE("torus regions, euler characteristic, successors") {
  TrainTrack t = bundled_track("torus");
  auto regions = complementary_regions(t);
  REQUIRE(regions.size() == 1);
  CHECK(regions[0].spike_count == 2);
  CHECK(regions[0].kind == RegionKind::peripheral);
  CHECK(regions[0].boundary.size() == 4);
  CHECK(euler_characteristic(t) == -1);
  CHECK(t.cusps().size() == 2);

  auto succ = legal_successors(t, {0, true});
  CHECK(succ == std::vector<DirectedEdge>{{0, true}, {1, true}});
  std::set<DirectedEdge> s(succ.begin(), succ.end());
  CHECK(s == std::set<DirectedEdge>{{0, true}, {1, true}});
  CHECK(weight_space_dimension(t) == 2);
}

TEST_CASE("other assets: regions and euler characteristic") {
  TrainTrack s4 = bundled_track("sphere4");
  auto r4 = complementary_regions(s4);
  REQUIRE(r4.size() == 4);
  for (auto& r : r4) CHECK(r.spike_count == 1);
  CHECK(euler_characteristic(s4) == -2);
  CHECK(weight_space_dimension(s4) == 2);

  TrainTrack g2 = bundled_track("genus2");
  auto rg = complementary_regions(g2);
  REQUIRE(rg.size() == 1);
  CHECK(rg[0].spike_count == 6);
  CHECK(rg[0].kind == RegionKind::disc);
  CHECK(euler_characteristic(g2) == -2);
  CHECK(weight_space_dimension(g2) == 4);
}

TEST_CASE("invariants across assets") {
  for (const auto& name : bundled_track_names()) {
    CAPTURE(name);
    TrainTrack t = bundled_track(name);
    int chi = euler_characteristic(t);
    CHECK(weight_space_dimension(t) <= 3 * std::abs(chi));
    CHECK(static_cast<int>(t.cusps().size()) <= 6 * std::abs(chi));
    // Spike total equals cusp count from side orders.
    int spikes = 0;
    std::set<std::pair<int, int>> sides;
    for (auto& r : complementary_regions(t)) {
      spikes += r.spike_count;
      for (auto d : r.boundary) sides.insert({d.edge, d.forward});
    }
    int expected = 0;
    for (auto& sw : t.switches()) expected += std::max<int>(0, sw.side_a.size() - 1) + std::max<int>(0, sw.side_b.size() - 1);
    CHECK(spikes == expected);
    CHECK(static_cast<int>(sides.size()) == 2 * t.num_edges());
    // Reversal symmetry of turns.
    for (int i = 0; i < 2 * t.num_edges(); ++i) {
      DirectedEdge e = TrainTrack::from_dindex(i);
      for (auto f : legal_successors(t, e)) {
        auto back = legal_successors(t, f.reversed());
        CHECK(std::find(back.begin(), back.end(), e.reversed()) != back.end());
      }
    }
  }
}

TEST_CASE("forbidden regions are rejected") {
  SUBCASE("nullgon") {
    auto t = make("switch s\nedge e s,B,0 s,A,0\n");
    auto regions = complementary_regions(t);
    REQUIRE(regions.size() == 2);
    CHECK(regions[0].spike_count == 0);
    CHECK(has_condition(validate(t), "disc with 0 spikes"));
  }
  SUBCASE("monogon") {
    auto t = make(kTrigonMonogon);
    auto regions = complementary_regions(t);
    std::multiset<int> spikes;
    for (auto& r : regions) spikes.insert(r.spike_count);
    CHECK(spikes == std::multiset<int>{1, 3});
    CHECK(has_condition(validate(t), "disc with 1 spikes"));
  }
  SUBCASE("bigon") {
    auto t = make("switch s\nedge a s,B,0 s,A,1\nedge b s,B,1 s,A,0\n");
    CHECK(has_condition(validate(t), "disc with 2 spikes"));
  }
  SUBCASE("two parallel edges between two switches") {
    auto t = make("switch s\nswitch t\nedge x s,B,0 t,A,0\nedge y s,B,1 t,A,1\nedge u t,B,0 s,A,0\n");
    CHECK(has_condition(validate(t), "disc with"));
  }
  SUBCASE("annulus without spikes") {
    auto t = make("switch s\nedge e s,B,0 s,A,0\nregion 0 annular\nregion 0 annular\n");
    CHECK(has_condition(validate(t), "annulus with no spike"));
  }
}

TEST_CASE("trigon with a labelled peripheral monogon is valid") {
  auto t = make(std::string(kTrigonMonogon) + "region 1 peripheral\nregion 3 disc\n");
  CHECK(validate(t).empty());
  CHECK(euler_characteristic(t) == -1);
  int trigons = 0;
  for (auto& r : complementary_regions(t)) trigons += r.spike_count == 3;
  CHECK(trigons == 1);
}

TEST_CASE("condition (2) and label mismatch") {
  auto t = make("switch s\nedge e s,A,0 s,A,1\n");
  CHECK(has_condition(validate(t), "condition (2) violated"));
  CHECK(legal_successors(t, {0, true}).empty());
  CHECK(weight_space_dimension(t) == 0);
  CHECK(weight_space_dimension(make("switch s\nedge e s,B,0 s,A,0\n")) == 1);

  auto m = make("switch s\nedge a s,B,0 s,A,1\nedge b s,B,1 s,A,0\nregion 3 peripheral\n");
  auto ds = validate(m);
  CHECK(std::any_of(ds.begin(), ds.end(), [](const Diagnostic& d) { return d.condition == "region labels"; }));
}

TEST_CASE("structural and parse errors") {
  CHECK_THROWS_AS(make("switch s\nedge e s,A,0 q,B,0\n"), StructuralError);
  CHECK_THROWS_AS(make("switch s\nedge e s,A,0 s,A,0\n"), StructuralError);
  CHECK_THROWS_AS(make("switch s\nedge e s,A,1 s,B,0\n"), StructuralError);
  CHECK_THROWS_AS(make("switch s\nswitch s\n"), StructuralError);
  CHECK_THROWS_AS(make("switch s\nedge e s,C,0 s,B,0\n"), ParseError);
  CHECK_THROWS_AS(make("knot s\n"), ParseError);
  CHECK_THROWS_AS(make("switch s\nedge e s,A,0 s,B,0\nregion 2 hexagon\n"), ParseError);
  CHECK_THROWS_AS(bundled_track("klein"), ParseError);
}

TEST_CASE("comments and whitespace do not affect structure") {
  auto a = make("switch s # the only switch\n\n  edge a   s,B,0 s,A,1\nedge b s,B,1 s,A,0\n# done\n");
  auto b = make("switch s\nedge a s,B,0 s,A,1\nedge b s,B,1 s,A,0\n");
  CHECK(a == b);
}

TEST_CASE("enumerate_paths") {
  TrainTrack t = bundled_track("torus");
  auto p1 = enumerate_paths(t, 1);
  CHECK(p1.size() == 4);
  std::uint64_t succ_total = 0;
  for (int i = 0; i < 4; ++i) succ_total += legal_successors(t, TrainTrack::from_dindex(i)).size();
  CHECK(enumerate_paths(t, 2).size() == succ_total);
  CHECK(enumerate_paths(t, 5).size() == brute_force_count(t, 5));
  CHECK(brute_force_count(t, 5) == 64);

  for (const auto& name : bundled_track_names()) {
    TrainTrack u = bundled_track(name);
    for (int len = 1; len <= 4; ++len) {
      auto paths = enumerate_paths(u, len);
      CHECK(paths.size() == brute_force_count(u, len));
      CHECK(count_paths(u, len) == paths.size());
      CHECK(std::is_sorted(paths.begin(), paths.end()));
      for (auto& p : paths) {
        CHECK(is_legal(u, p));
        CHECK(is_legal(u, reverse_path(p)));
      }
      CHECK(enumerate_paths(u, len, 10'000'000, 4) == paths);
    }
  }
  CHECK_THROWS_AS(enumerate_paths(t, 10, 100), EnumerationLimitError);
  try {
    (void)enumerate_paths(t, 10, 100);
  } catch (const EnumerationLimitError& e) {
    CHECK(e.partial_count() >= 100);
  }
  CHECK_THROWS_AS(enumerate_paths(t, 0), ContractViolation);
}

TEST_CASE("path tokens") {
  TrainTrack t = bundled_track("torus");
  EdgePath p = t.parse_path("a+ b- a-");
  CHECK(t.format_path(p) == "a+ b- a-");
  CHECK(t.parse_path("b\xE2\x88\x92") == EdgePath{{1, false}});
  CHECK(canonical_path(p) == std::min(p, reverse_path(p)));
  CHECK_THROWS_AS((void)t.parse_path("c+"), ParseError);
  CHECK_THROWS_AS((void)t.parse_path("a"), ParseError);
}

TEST_CASE("multicurve from weights") {
  TrainTrack t = bundled_track("torus");
  auto id = [&](const std::string& s) { return canonical_loop(t.parse_path(s)); };
  CHECK(multicurve_from_weights(t, {1, 0}) == std::vector<EdgePath>{id("a+")});
  CHECK(multicurve_from_weights(t, {1, 1}) == std::vector<EdgePath>{id("a+ b+")});
  CHECK(multicurve_from_weights(t, {2, 0}) == std::vector<EdgePath>{id("a+"), id("a+")});
  CHECK(multicurve_from_weights(t, {2, 1}) == std::vector<EdgePath>{id("a+ a+ b+")});
  // w(a)=q, w(b)=p with gcd 1 is a single loop.
  auto l = multicurve_from_weights(t, {5, 3});
  REQUIRE(l.size() == 1);
  CHECK(l[0].size() == 8);

  CHECK_THROWS_AS(multicurve_from_weights(t, {Rational(1, 2), 0}), ContractViolation);
  CHECK_THROWS_AS(multicurve_from_weights(t, {-1, 1}), ContractViolation);
  TrainTrack s4 = bundled_track("sphere4");
  CHECK_THROWS_AS(multicurve_from_weights(s4, {1, 1, 0, 1}), ContractViolation);
}

TEST_CASE("multicurve round trip on random weight systems") {
  std::mt19937_64 rng(20240917);
  for (const auto& name : bundled_track_names()) {
    CAPTURE(name);
    TrainTrack t = bundled_track(name);
    for (int k = 0; k < 100; ++k) {
      WeightSystem w = random_weights(t, rng, 6);
      auto loops = multicurve_from_weights(t, w);
      auto m = measure_loops(t, loops);
      for (int e = 0; e < t.num_edges(); ++e) CHECK(Rational(m[e]) == w[e]);
      for (auto& loop : loops) {
        EdgePath twice = loop;
        twice.insert(twice.end(), loop.begin(), loop.end());
        CHECK(is_legal(t, twice));
      }
    }
  }
}
