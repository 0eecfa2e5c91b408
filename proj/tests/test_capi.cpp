#include <cstring>
#include <string>

#include "doctest.h"
#include "ttlam/ttlam.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  ttl_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("load, query and validate") {
  ttl_track* t = nullptr;
  REQUIRE(ttl_track_load("torus", &t) == TTL_OK);
  int chi = 0, n = 0, valid = 0;
  CHECK(ttl_track_euler(t, &chi) == TTL_OK);
  CHECK(chi == -1);
  CHECK(ttl_track_num_edges(t, &n) == TTL_OK);
  CHECK(n == 2);
  char* report = nullptr;
  CHECK(ttl_track_validate(t, &valid, &report) == TTL_OK);
  CHECK(valid == 1);
  CHECK(take(report).empty());
  char* names = nullptr;
  CHECK(ttl_bundled_tracks(&names) == TTL_OK);
  CHECK(take(names) == "genus2\nsphere4\ntorus\n");
  ttl_track_free(t);
}

TEST_CASE("errors carry codes") {
  ttl_track* t = nullptr;
  CHECK(ttl_track_parse("switch s\nedge e s,B,0 q,A,0\n", "bad", &t) != TTL_OK);
  CHECK(t == nullptr);
  CHECK(std::strlen(ttl_last_error()) > 0);

  CHECK(ttl_track_parse("switch s\nedge e s,B,0 s,A,0\n", "nullgon", &t) == TTL_OK);
  int valid = 1;
  char* report = nullptr;
  CHECK(ttl_track_validate(t, &valid, &report) == TTL_OK);
  CHECK(valid == 0);
  CHECK(take(report).find("disc with 0 spikes") != std::string::npos);
  ttl_lamination* l = nullptr;
  CHECK(ttl_lamination_parse(t, "1/2", &l) == TTL_ERR_INVALID_TRACK);
  ttl_track_free(t);

  CHECK(ttl_track_load("torus", &t) == TTL_OK);
  CHECK(ttl_lamination_parse(t, "1/x", &l) == TTL_ERR_PARSE);
  CHECK(std::string(ttl_last_error_code()) == "parse");
  CHECK(ttl_track_euler(nullptr, nullptr) == TTL_ERR_INVALID_ARGUMENT);

  ttl_zipper_options opt{4, 10, 1, nullptr, 0};
  char* out = nullptr;
  CHECK(ttl_zipper_report(t, &opt, &out) == TTL_ERR_ENUMERATION_LIMIT);
  CHECK(ttl_last_partial_count() == 11);
  std::string csv = take(out);
  CHECK(csv.find("1,6,") != std::string::npos);
  CHECK(csv.find("2,>=11") != std::string::npos);
  ttl_track_free(t);
}

TEST_CASE("laminations, distances, round trip") {
  ttl_track* t = nullptr;
  REQUIRE(ttl_track_load("torus", &t) == TTL_OK);
  ttl_lamination *a = nullptr, *b = nullptr, *w = nullptr;
  REQUIRE(ttl_lamination_parse(t, "0/1", &a) == TTL_OK);
  REQUIRE(ttl_lamination_parse(t, "1/1", &b) == TTL_OK);
  REQUIRE(ttl_lamination_parse(t, "w:2,1", &w) == TTL_OK);
  ttl_dtheta_result r{};
  CHECK(ttl_dtheta(a, b, 20, &r) == TTL_OK);
  CHECK(r.num == 1);
  CHECK(r.den == 1);
  ttl_string_free(r.witness);
  char* paths = nullptr;
  CHECK(ttl_realized_paths(w, 1, &paths) == TTL_OK);
  CHECK(!take(paths).empty());
  CHECK(ttl_dlog_transform(0) == 0);

  ttl_track* s4 = nullptr;
  REQUIRE(ttl_track_load("sphere4", &s4) == TTL_OK);
  const int64_t weights[] = {2, 1, 3, 2};
  int same = 0;
  size_t loops = 0;
  CHECK(ttl_multicurve_roundtrip(s4, weights, 4, &same, &loops) == TTL_OK);
  CHECK(same == 1);
  CHECK(loops >= 1);
  const int64_t bad[] = {1, 1, 0, 1};
  CHECK(ttl_multicurve_roundtrip(s4, bad, 4, &same, &loops) == TTL_ERR_CONTRACT);
  ttl_track_free(s4);
  ttl_lamination_free(a);
  ttl_lamination_free(b);
  ttl_lamination_free(w);
  ttl_track_free(t);
}
