// ttlam command-line tool. Talks to the library only through the C interface.
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ttlam/ttlam.h"

namespace {

struct Global {
  int jobs = 1;
  std::uint64_t cap = 10'000'000;
  std::string out;
  std::uint64_t seed = 0;
};

struct Failure {
  int exit_code;
  std::string code;
  std::string message;
};

int exit_for(ttl_status s) {
  switch (s) {
    case TTL_ERR_PARSE:
    case TTL_ERR_STRUCTURAL:
    case TTL_ERR_INVALID_TRACK:
      return 2;
    case TTL_ERR_ENUMERATION_LIMIT:
      return 3;
    default:
      return 1;
  }
}

void check(ttl_status s) {
  if (s != TTL_OK) throw Failure{exit_for(s), ttl_last_error_code(), ttl_last_error()};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  ttl_string_free(s);
  return out;
}

std::string fmt12(double x) {
  if (std::isnan(x)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

using TrackPtr = std::unique_ptr<ttl_track, decltype(&ttl_track_free)>;
using LamPtr = std::unique_ptr<ttl_lamination, decltype(&ttl_lamination_free)>;

TrackPtr load(const std::string& name, bool require_valid) {
  ttl_track* t = nullptr;
  check(ttl_track_load(name.c_str(), &t));
  TrackPtr p(t, ttl_track_free);
  if (require_valid) {
    int valid = 0;
    char* report = nullptr;
    check(ttl_track_validate(p.get(), &valid, &report));
    std::string text = take(report);
    if (!valid) {
      std::cerr << text;
      throw Failure{2, "invalid_track", "track '" + name + "' fails validation"};
    }
  }
  return p;
}

LamPtr lamination(const ttl_track* t, const std::string& spec) {
  ttl_lamination* l = nullptr;
  check(ttl_lamination_parse(t, spec.c_str(), &l));
  return LamPtr(l, ttl_lamination_free);
}

std::string header(const std::string& config, const Global& g) {
  std::ostringstream os;
  os << "# ttlam " << ttl_version() << "\n";
  os << "# config: " << config << " cap=" << g.cap << "\n";
  os << "# seed: " << g.seed << "\n";
  return os.str();
}

void emit(const Global& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw Failure{1, "io", "cannot write '" + g.out + "'"};
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Train-track lamination toolkit"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::Range(1, 1024));
  app.add_option("--cap", g.cap, "Enumeration cap");
  app.add_option("--out", g.out, "Write the artifact to this file instead of stdout");
  app.add_option("--seed", g.seed, "Seed recorded in the header");
  app.set_version_flag("--version", std::string(ttl_version()));

  std::string track = "torus";

  auto* validate = app.add_subcommand("validate", "Check a track asset");
  std::string asset;
  validate->add_option("asset", asset, "Bundled name or .track path")->required();

  auto* paths = app.add_subcommand("paths", "Realized paths of one length");
  std::string lam_spec;
  int r = 1;
  paths->add_option("--track", track);
  paths->add_option("--lam", lam_spec, "Slope p/q, cf:[...], or w:w1,w2,...")->required();
  paths->add_option("--r", r)->required();

  auto* dtheta = app.add_subcommand("dtheta", "Combinatorial distance between two laminations");
  std::string lhs, rhs;
  int rmax = 64;
  dtheta->add_option("--track", track);
  dtheta->add_option("--lhs", lhs)->required();
  dtheta->add_option("--rhs", rhs)->required();
  dtheta->add_option("--rmax", rmax);

  auto* zippers = app.add_subcommand("zippers", "Zipper family counts and bounds");
  int zr = 3;
  std::string census_file;
  zippers->add_option("--track", track);
  zippers->add_option("--r", zr)->required();
  zippers->add_option("--census", census_file, "File with one lamination per line");

  auto* dimension = app.add_subcommand("dimension", "Box-counting dimension estimate on the torus");
  int slopes = 0, dim_rmax = 50, rmin = 1, fit_lo = 0, fit_hi = 0;
  std::string schedule = "recip";
  double a = 1, b = 1;
  dimension->add_option("--track", track);
  dimension->add_option("--slopes", slopes, "Farey order of the sample (default: saturating)");
  dimension->add_option("--rmin", rmin);
  dimension->add_option("--rmax", dim_rmax);
  dimension->add_option("--schedule", schedule)->check(CLI::IsMember({"exp", "recip"}));
  dimension->add_option("--a", a);
  dimension->add_option("--b", b);
  dimension->add_option("--fit-lo", fit_lo, "Fit window start (default: top half)");
  dimension->add_option("--fit-hi", fit_hi);

  auto* metric = app.add_subcommand("metriccheck", "Ultrametric and d_log triangle checks");
  int m_slopes = 12, m_rmax = 200, grid = 1000;
  metric->add_option("--track", track);
  metric->add_option("--slopes", m_slopes);
  metric->add_option("--rmax", m_rmax);
  metric->add_option("--grid", grid);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << "\n";
    return 1;
  }

  try {
    std::ostringstream os;
    int code = 0;
    if (*validate) {
      TrackPtr t = load(asset, false);
      int valid = 0, chi = 0, edges = 0, cusps = 0, dim = 0;
      char* report = nullptr;
      check(ttl_track_validate(t.get(), &valid, &report));
      std::string diags = take(report);
      os << header("validate asset=" + asset, g);
      os << (valid ? "valid" : "invalid") << "\n";
      char* name = nullptr;
      check(ttl_track_name(t.get(), &name));
      os << "name: " << take(name) << "\n";
      check(ttl_track_num_edges(t.get(), &edges));
      check(ttl_track_num_cusps(t.get(), &cusps));
      os << "edges: " << edges << "\ncusps: " << cusps << "\n";
      if (valid) {
        check(ttl_track_euler(t.get(), &chi));
        check(ttl_track_weight_dimension(t.get(), &dim));
        os << "euler_characteristic: " << chi << "\nweight_space_dimension: " << dim << "\n";
      }
      os << diags;
      emit(g, os.str());
      if (!valid) throw Failure{2, "invalid_track", "track '" + asset + "' fails validation"};
    } else if (*paths) {
      TrackPtr t = load(track, true);
      LamPtr l = lamination(t.get(), lam_spec);
      char* text = nullptr;
      check(ttl_realized_paths(l.get(), r, &text));
      os << header("paths track=" + track + " lam=" + lam_spec + " r=" + std::to_string(r), g) << take(text);
      emit(g, os.str());
    } else if (*dtheta) {
      TrackPtr t = load(track, true);
      LamPtr x = lamination(t.get(), lhs);
      LamPtr y = lamination(t.get(), rhs);
      ttl_dtheta_result res{};
      check(ttl_dtheta(x.get(), y.get(), rmax, &res));
      std::string witness = take(res.witness);
      double value = static_cast<double>(res.num) / static_cast<double>(res.den);
      os << header("dtheta track=" + track + " lhs=" + lhs + " rhs=" + rhs + " rmax=" + std::to_string(rmax), g);
      os << "value: " << res.num << "/" << res.den << "\n";
      os << "divergence_depth: " << res.divergence_depth << "\n";
      os << "witness: " << (witness.empty() ? "none" : witness) << "\n";
      os << "witness_side: " << (res.witness_side == 0 ? "lhs" : res.witness_side == 1 ? "rhs" : "none") << "\n";
      os << "capped: " << (res.capped ? "true" : "false") << "\n";
      os << "d_log: " << fmt12(ttl_dlog_transform(value)) << "\n";
      emit(g, os.str());
    } else if (*zippers) {
      TrackPtr t = load(track, true);
      std::vector<LamPtr> owned;
      std::vector<const ttl_lamination*> census;
      if (!census_file.empty()) {
        std::ifstream in(census_file);
        if (!in) throw Failure{2, "io", "cannot read '" + census_file + "'"};
        std::string line;
        while (std::getline(in, line)) {
          auto hash = line.find('#');
          if (hash != std::string::npos) line.erase(hash);
          auto first = line.find_first_not_of(" \t\r");
          if (first == std::string::npos) continue;
          auto last = line.find_last_not_of(" \t\r");
          owned.push_back(lamination(t.get(), line.substr(first, last - first + 1)));
          census.push_back(owned.back().get());
        }
      }
      ttl_zipper_options opt{zr, g.cap, g.jobs, census_file.empty() ? nullptr : census.data(), census.size()};
      char* text = nullptr;
      ttl_status s = ttl_zipper_report(t.get(), &opt, &text);
      std::string config = "zippers track=" + track + " r=" + std::to_string(zr);
      if (!census_file.empty()) config += " census=" + census_file + " census_count=" + std::to_string(census.size());
      os << header(config, g) << take(text);
      if (s == TTL_ERR_ENUMERATION_LIMIT) {
        os << "# partial: enumeration cap exceeded\n";
        emit(g, os.str());
        check(s);
      }
      check(s);
      emit(g, os.str());
    } else if (*dimension) {
      TrackPtr t = load(track, true);
      ttl_dimension_options opt{slopes, rmin, dim_rmax,
                                schedule == "exp" ? TTL_SCHEDULE_EXP : TTL_SCHEDULE_RECIP,
                                a, b, fit_lo, fit_hi, g.jobs};
      char* text = nullptr;
      check(ttl_dimension_report(t.get(), &opt, &text));
      std::ostringstream config;
      config << "dimension track=" << track << " slopes=" << slopes << " rmin=" << rmin << " rmax=" << dim_rmax
             << " schedule=" << schedule << " a=" << fmt12(a) << " b=" << fmt12(b) << " fit_lo=" << fit_lo
             << " fit_hi=" << fit_hi;
      os << header(config.str(), g) << take(text);
      emit(g, os.str());
    } else if (*metric) {
      TrackPtr t = load(track, true);
      ttl_metric_options opt{m_slopes, m_rmax, grid, g.jobs};
      int passed = 0;
      char* text = nullptr;
      check(ttl_metriccheck_report(t.get(), &opt, &passed, &text));
      std::ostringstream config;
      config << "metriccheck track=" << track << " slopes=" << m_slopes << " rmax=" << m_rmax << " grid=" << grid;
      os << header(config.str(), g) << take(text);
      emit(g, os.str());
      if (!passed) throw Failure{1, "check_failed", "metric checks failed"};
    }
    return code;
  } catch (const Failure& f) {
    std::cerr << "error: " << f.code << ": " << f.message << "\n";
    return f.exit_code;
  }
}
