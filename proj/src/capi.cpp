#include "ttlam/ttlam.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "ttlam/dim_lab.hpp"
#include "ttlam/metrics.hpp"
#include "ttlam/torus_model.hpp"
#include "ttlam/track_io.hpp"
#include "ttlam/zippers.hpp"

#ifndef TTLAM_VERSION
#define TTLAM_VERSION "0.0.0"
#endif

struct ttl_track {
  std::shared_ptr<const ttlam::TrainTrack> track;
  bool valid = false;
};

struct ttl_lamination {
  ttlam::Lamination lam;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_code;
thread_local std::uint64_t g_partial = 0;

ttl_status fail(ttl_status s, const std::string& code, const std::string& msg) {
  g_error = msg;
  g_code = code;
  return s;
}

ttl_status from_error(const ttlam::Error& e) {
  const std::string& c = e.code();
  ttl_status s = TTL_ERR_INTERNAL;
  if (c == "parse") s = TTL_ERR_PARSE;
  else if (c == "structural") s = TTL_ERR_STRUCTURAL;
  else if (c == "contract") s = TTL_ERR_CONTRACT;
  else if (c == "depth_limit") s = TTL_ERR_DEPTH_LIMIT;
  else if (c == "enumeration_limit") s = TTL_ERR_ENUMERATION_LIMIT;
  if (auto* lim = dynamic_cast<const ttlam::EnumerationLimitError*>(&e)) g_partial = lim->partial_count();
  return fail(s, c, e.what());
}

template <class Fn>
ttl_status guard(Fn&& fn) {
  try {
    g_error.clear();
    g_code.clear();
    return fn();
  } catch (const ttlam::Error& e) {
    return from_error(e);
  } catch (const std::bad_alloc&) {
    return fail(TTL_ERR_INTERNAL, "internal", "out of memory");
  } catch (const std::exception& e) {
    return fail(TTL_ERR_INTERNAL, "internal", e.what());
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

#define TTL_REQUIRE(cond, what) \
  if (!(cond)) return fail(TTL_ERR_INVALID_ARGUMENT, "invalid_argument", what)

#define TTL_REQUIRE_VALID(t) \
  if (!(t)->valid) return fail(TTL_ERR_INVALID_TRACK, "invalid_track", "track '" + (t)->track->name() + "' fails validation")

std::string fmt12(double x) {
  if (std::isnan(x)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string rational_text(const ttlam::Rational& q) {
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

ttlam::WeightSystem weights_of(const int64_t* w, size_t n) {
  ttlam::WeightSystem out;
  for (size_t i = 0; i < n; ++i) out.emplace_back(w[i]);
  return out;
}

std::vector<ttlam::Lamination> farey_sample(const std::shared_ptr<const ttlam::TrainTrack>& t, int q) {
  std::vector<ttlam::Lamination> out;
  for (const auto& s : ttlam::farey_slopes(q)) out.push_back(ttlam::slope_to_lamination(s, t));
  return out;
}

}  // namespace

extern "C" {

const char* ttl_version(void) { return TTLAM_VERSION; }
const char* ttl_last_error(void) { return g_error.c_str(); }
const char* ttl_last_error_code(void) { return g_code.c_str(); }
uint64_t ttl_last_partial_count(void) { return g_partial; }
void ttl_string_free(char* s) { std::free(s); }

ttl_status ttl_track_load(const char* name_or_path, ttl_track** out) {
  TTL_REQUIRE(name_or_path && out, "null argument");
  return guard([&] {
    auto t = std::make_shared<const ttlam::TrainTrack>(ttlam::resolve_track(name_or_path));
    bool ok = ttlam::validate(*t).empty();
    *out = new ttl_track{std::move(t), ok};
    return TTL_OK;
  });
}

ttl_status ttl_track_parse(const char* text, const char* name, ttl_track** out) {
  TTL_REQUIRE(text && out, "null argument");
  return guard([&] {
    auto t = std::make_shared<const ttlam::TrainTrack>(ttlam::parse_track(text, name ? name : "track"));
    bool ok = ttlam::validate(*t).empty();
    *out = new ttl_track{std::move(t), ok};
    return TTL_OK;
  });
}

void ttl_track_free(ttl_track* t) { delete t; }

ttl_status ttl_bundled_tracks(char** out) {
  TTL_REQUIRE(out, "null argument");
  return guard([&] {
    std::string s;
    for (const auto& n : ttlam::bundled_track_names()) s += n + "\n";
    *out = dup(s);
    return TTL_OK;
  });
}

ttl_status ttl_track_name(const ttl_track* t, char** out) {
  TTL_REQUIRE(t && out, "null argument");
  return guard([&] {
    *out = dup(t->track->name());
    return TTL_OK;
  });
}

ttl_status ttl_track_serialize(const ttl_track* t, char** out) {
  TTL_REQUIRE(t && out, "null argument");
  return guard([&] {
    *out = dup(ttlam::serialize_track(*t->track));
    return TTL_OK;
  });
}

ttl_status ttl_track_euler(const ttl_track* t, int* chi) {
  TTL_REQUIRE(t && chi, "null argument");
  return guard([&] {
    *chi = ttlam::euler_characteristic(*t->track);
    return TTL_OK;
  });
}

ttl_status ttl_track_num_edges(const ttl_track* t, int* n) {
  TTL_REQUIRE(t && n, "null argument");
  *n = t->track->num_edges();
  return TTL_OK;
}

ttl_status ttl_track_num_cusps(const ttl_track* t, int* n) {
  TTL_REQUIRE(t && n, "null argument");
  *n = static_cast<int>(t->track->cusps().size());
  return TTL_OK;
}

ttl_status ttl_track_weight_dimension(const ttl_track* t, int* dim) {
  TTL_REQUIRE(t && dim, "null argument");
  return guard([&] {
    *dim = ttlam::weight_space_dimension(*t->track);
    return TTL_OK;
  });
}

ttl_status ttl_track_validate(const ttl_track* t, int* valid, char** report) {
  TTL_REQUIRE(t && valid && report, "null argument");
  return guard([&] {
    auto diags = ttlam::validate(*t->track);
    std::string s;
    for (const auto& d : diags) s += d.condition + ": " + d.subject + ": " + d.message + "\n";
    *valid = diags.empty() ? 1 : 0;
    *report = dup(s);
    return TTL_OK;
  });
}

ttl_status ttl_multicurve_roundtrip(const ttl_track* t, const int64_t* w, size_t n, int* same, size_t* loops) {
  TTL_REQUIRE(t && (w || n == 0) && same, "null argument");
  TTL_REQUIRE_VALID(t);
  return guard([&] {
    auto ws = weights_of(w, n);
    auto ls = ttlam::multicurve_from_weights(*t->track, ws);
    auto back = ttlam::measure_loops(*t->track, ls);
    bool eq = back.size() == n;
    for (size_t i = 0; eq && i < n; ++i) eq = back[i] == w[i];
    *same = eq ? 1 : 0;
    if (loops) *loops = ls.size();
    return TTL_OK;
  });
}

ttl_status ttl_lamination_from_slope(const ttl_track* t, const char* slope, ttl_lamination** out) {
  TTL_REQUIRE(t && slope && out, "null argument");
  TTL_REQUIRE_VALID(t);
  return guard([&] {
    *out = new ttl_lamination{ttlam::slope_to_lamination(ttlam::Slope::parse(slope), t->track)};
    return TTL_OK;
  });
}

ttl_status ttl_lamination_from_weights(const ttl_track* t, const int64_t* w, size_t n, ttl_lamination** out) {
  TTL_REQUIRE(t && (w || n == 0) && out, "null argument");
  TTL_REQUIRE_VALID(t);
  return guard([&] {
    *out = new ttl_lamination{ttlam::from_multicurve(t->track, weights_of(w, n))};
    return TTL_OK;
  });
}

ttl_status ttl_lamination_parse(const ttl_track* t, const char* spec, ttl_lamination** out) {
  TTL_REQUIRE(t && spec && out, "null argument");
  TTL_REQUIRE_VALID(t);
  std::string s(spec);
  if (s.rfind("w:", 0) != 0) return ttl_lamination_from_slope(t, spec, out);
  return guard([&] {
    std::vector<int64_t> w;
    std::stringstream ss(s.substr(2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        long long v = std::stoll(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
        w.push_back(v);
      } catch (const std::logic_error&) {
        throw ttlam::ParseError("bad weight '" + item + "' in '" + s + "'");
      }
    }
    *out = new ttl_lamination{ttlam::from_multicurve(t->track, weights_of(w.data(), w.size()))};
    return TTL_OK;
  });
}

void ttl_lamination_free(ttl_lamination* l) { delete l; }

ttl_status ttl_realized_paths(const ttl_lamination* l, int r, char** out) {
  TTL_REQUIRE(l && out, "null argument");
  return guard([&] {
    *out = dup(ttlam::format_path_set(l->lam.track(), ttlam::realized_paths(l->lam, r)));
    return TTL_OK;
  });
}

ttl_status ttl_dtheta(const ttl_lamination* lhs, const ttl_lamination* rhs, int rmax, ttl_dtheta_result* out) {
  TTL_REQUIRE(lhs && rhs && out, "null argument");
  return guard([&] {
    auto d = ttlam::d_theta(lhs->lam, rhs->lam, rmax);
    out->num = d.value.numerator();
    out->den = d.value.denominator();
    out->divergence_depth = d.divergence_depth;
    out->capped = d.capped ? 1 : 0;
    out->witness_side = d.witness ? d.witness_side : -1;
    out->witness = d.witness ? dup(lhs->lam.track().format_path(*d.witness)) : nullptr;
    return TTL_OK;
  });
}

double ttl_dlog_transform(double d) {
  try {
    return ttlam::d_log_transform(d);
  } catch (const ttlam::Error& e) {
    from_error(e);
    return std::nan("");
  }
}

ttl_status ttl_zipper_report(const ttl_track* t, const ttl_zipper_options* opt, char** out) {
  TTL_REQUIRE(t && opt && out, "null argument");
  TTL_REQUIRE_VALID(t);
  TTL_REQUIRE(opt->r_max >= 1, "r_max must be >= 1");
  TTL_REQUIRE(opt->census || opt->census_count == 0, "null census");
  return guard([&] {
    const auto& track = *t->track;
    std::vector<ttlam::Lamination> sample;
    for (size_t i = 0; i < opt->census_count; ++i) sample.push_back(opt->census[i]->lam);
    std::ostringstream os;
    os << "r,zipper_families,bound_Z_rBounded,bound_Z_rBetter,census_size\n";
    const int jobs = std::max(1, opt->jobs);
    const int expo = ttlam::zipper_bounds(track, 1).better_exponent;
    double c = 0;
    ttl_status status = TTL_OK;
    for (int r = 1; r <= opt->r_max; ++r) {
      std::string census = opt->census ? std::to_string(ttlam::census_realized_families(sample, r, jobs).size) : "NA";
      std::string coarse = fmt12(ttlam::zipper_bounds(track, r).coarse);
      try {
        std::uint64_t n = ttlam::count_zipper_families(track, r, opt->cap, jobs);
        if (r == 1) c = static_cast<double>(n);
        os << r << ',' << n << ',' << coarse << ',' << fmt12(c * std::pow(r, expo)) << ',' << census << '\n';
      } catch (const ttlam::EnumerationLimitError& e) {
        os << r << ",>=" << e.partial_count() << ',' << coarse << ',' << (r == 1 ? "NA" : fmt12(c * std::pow(r, expo)))
           << ',' << census << '\n';
        status = from_error(e);
        break;
      }
    }
    *out = dup(os.str());
    return status;
  });
}

ttl_status ttl_dimension_report(const ttl_track* t, const ttl_dimension_options* opt, char** out) {
  TTL_REQUIRE(t && opt && out, "null argument");
  TTL_REQUIRE_VALID(t);
  TTL_REQUIRE(opt->r_max >= 1 && opt->r_min >= 1 && opt->r_min <= opt->r_max, "bad radius range");
  return guard([&] {
    int q = opt->farey_order > 0 ? opt->farey_order : ttlam::saturating_farey_order(opt->r_max);
    auto mode = opt->schedule == TTL_SCHEDULE_EXP ? ttlam::ScheduleMode::exponential : ttlam::ScheduleMode::reciprocal;
    auto sched = ttlam::make_schedule(mode, ttlam::radius_range(opt->r_min, opt->r_max), opt->a, opt->b);
    auto sample = farey_sample(t->track, q);
    auto counts = ttlam::cover_counts(sample, sched, std::max(1, opt->jobs));
    auto est = opt->fit_lo > 0 ? ttlam::estimate_dimension_window(counts, opt->fit_lo,
                                                                  opt->fit_hi > 0 ? opt->fit_hi : opt->r_max)
                               : ttlam::estimate_dimension(counts, 0.5);
    std::ostringstream os;
    os << "# farey_order " << q << " sample_size " << sample.size() << "\n";
    os << "# r,eps,N,running_estimate\n";
    for (const auto& c : counts)
      os << c.r << ',' << fmt12(c.eps) << ',' << c.n << ',' << fmt12(c.running_estimate()) << '\n';
    os << "\n\n# slope,intercept,residual,r_lo,r_hi,scales,source\n";
    os << fmt12(est.slope) << ',' << fmt12(est.intercept) << ',' << fmt12(est.residual) << ',' << est.r_lo << ','
       << est.r_hi << ',' << est.scales << ',' << est.source << '\n';
    os << "# gnuplot: set datafile separator ','; plot 'FILE' index 0 using (log(1/$2)):(log($3)) with points\n";
    *out = dup(os.str());
    return TTL_OK;
  });
}

ttl_status ttl_metriccheck_report(const ttl_track* t, const ttl_metric_options* opt, int* passed, char** out) {
  TTL_REQUIRE(t && opt && passed && out, "null argument");
  TTL_REQUIRE_VALID(t);
  TTL_REQUIRE(opt->farey_order >= 1 && opt->r_max >= 1 && opt->grid_steps >= 1, "bad metric options");
  return guard([&] {
    auto sample = farey_sample(t->track, opt->farey_order);
    auto ultra = ttlam::check_ultrametric(sample, opt->r_max, std::max(1, opt->jobs));
    auto tri = ttlam::check_triangle_dlog(ttlam::dlog_grid(opt->grid_steps));
    const double crit = (3 - 2 * std::sqrt(2.0)) / std::log(2.0);
    bool crit_ok = std::fabs(tri.critical_value - crit) < 1e-9;
    std::ostringstream os;
    os << "check,items,violations,worst_margin,passed\n";
    os << "ultrametric," << ultra.triples << ',' << ultra.violations.size() << ',' << rational_text(ultra.worst_margin)
       << ',' << (ultra.passed() ? "true" : "false") << '\n';
    os << "ultrametric_capped_pairs," << (ultra.any_capped ? 1 : 0) << ",0,NA,true\n";
    os << "dlog_triangle," << tri.samples << ',' << tri.below_tolerance << ',' << fmt12(tri.min_margin) << ','
       << (tri.passed() ? "true" : "false") << '\n';
    os << "dlog_critical_value,1," << (crit_ok ? 0 : 1) << ',' << fmt12(tri.critical_value) << ','
       << (crit_ok ? "true" : "false") << '\n';
    *passed = ultra.passed() && tri.passed() && crit_ok ? 1 : 0;
    *out = dup(os.str());
    return TTL_OK;
  });
}

}  // extern "C"
