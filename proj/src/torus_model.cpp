#include "ttlam/torus_model.hpp"

#include <algorithm>
#include <climits>
#include <numeric>
#include <regex>
#include <set>
#include <sstream>

namespace ttlam {

namespace {

using i128 = __int128;

std::int64_t checked(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw ContractViolation("continued fraction convergent overflows 64 bits");
  return static_cast<std::int64_t>(v);
}

std::vector<std::int64_t> parse_terms(const std::string& list) {
  std::vector<std::int64_t> out;
  if (list.empty()) return out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty() || item.size() > 18 || item.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError("bad continued-fraction term '" + item + "'");
    out.push_back(std::stoll(item));
  }
  return out;
}

}  // namespace

Slope Slope::fraction(std::int64_t p, std::int64_t q) {
  if (p < 0 || q < 0 || (p == 0 && q == 0)) throw ContractViolation("slope must lie in [0, inf]");
  std::int64_t g = std::gcd(p, q);
  Slope s;
  s.rational_ = true;
  s.p_ = p / g;
  s.q_ = q / g;
  s.max_depth_ = INT_MAX;
  return s;
}

Slope Slope::continued_fraction(std::vector<std::int64_t> head, std::vector<std::int64_t> period) {
  if (head.empty()) throw ContractViolation("continued fraction needs an integer part");
  for (std::size_t i = 0; i < head.size(); ++i)
    if (head[i] < (i == 0 ? 0 : 1)) throw ContractViolation("continued-fraction terms after a0 must be >= 1");
  for (auto t : period)
    if (t < 1) throw ContractViolation("continued-fraction terms after a0 must be >= 1");
  if (head.size() < 2 && period.empty() && head[0] == 0)
    throw ContractViolation("continued fraction [0] has no terms to stream");
  Slope s;
  s.rational_ = false;
  s.head_ = std::move(head);
  s.period_ = std::move(period);
  // Density terms: a0 >= 1 gives [0; 1, a0, a1, ...]; a0 = 0 gives [0; a1 + 1, a2, ...].
  auto alpha = [&](std::size_t k) -> std::int64_t {
    if (k < s.head_.size()) return s.head_[k];
    if (s.period_.empty()) return 0;
    return s.period_[(k - s.head_.size()) % s.period_.size()];
  };
  if (s.head_[0] >= 1) {
    s.dens_head_ = {1};
    for (auto t : s.head_) s.dens_head_.push_back(t);
  } else {
    s.dens_head_ = {alpha(1) + 1};
    for (std::size_t k = 2; k < s.head_.size(); ++k) s.dens_head_.push_back(s.head_[k]);
    if (s.head_.size() < 2) {
      // a1 came from the period; rotate it so the tail continues after a1.
      std::vector<std::int64_t> rot;
      for (std::size_t k = 1; k <= s.period_.size(); ++k) rot.push_back(s.period_[k % s.period_.size()]);
      s.dens_period_ = rot;
    }
  }
  if (s.dens_period_.empty()) s.dens_period_ = s.period_;
  if (s.period_.empty()) {
    i128 q_prev = 0, q = 1;
    for (std::size_t k = 1;; ++k) {
      std::int64_t b = s.density_term(k);
      if (b == 0) break;
      i128 nq = b * q + q_prev;
      q_prev = q;
      q = nq;
      if (q > INT_MAX) break;
    }
    s.max_depth_ = q > INT_MAX ? INT_MAX : static_cast<int>(q) - 1;
  } else {
    s.max_depth_ = INT_MAX;
  }
  return s;
}

Slope Slope::parse(const std::string& text) {
  static const std::regex frac(R"(^\s*([0-9]{1,18})\s*/\s*([0-9]{1,18})\s*$)");
  static const std::regex cf(R"(^\s*cf:\[\s*([0-9]{1,18})\s*(?:;\s*([0-9,\s]*?)\s*(?:,?\s*periodic:\s*([0-9,\s]+))?)?\s*\]\s*$)");
  std::smatch m;
  try {
    if (std::regex_match(text, m, frac)) return fraction(std::stoll(m[1]), std::stoll(m[2]));
    if (std::regex_match(text, m, cf)) {
      auto strip = [](std::string s) {
        s.erase(std::remove_if(s.begin(), s.end(), ::isspace), s.end());
        if (!s.empty() && s.back() == ',') s.pop_back();
        return s;
      };
      std::vector<std::int64_t> head{std::stoll(m[1])};
      for (auto t : parse_terms(strip(m[2]))) head.push_back(t);
      auto period = parse_terms(strip(m[3]));
      if (m[3].matched && period.empty()) throw ParseError("empty periodic tail in '" + text + "'");
      return continued_fraction(std::move(head), std::move(period));
    }
  } catch (const ContractViolation& e) {
    throw ParseError("bad slope '" + text + "': " + e.what());
  }
  throw ParseError("bad slope '" + text + "' (expected p/q or cf:[a0;a1,...])");
}

std::string Slope::str() const {
  if (rational_) return std::to_string(p_) + "/" + std::to_string(q_);
  std::string s = "cf:[" + std::to_string(head_[0]);
  bool first = true;
  auto sep = [&] {
    std::string r = first ? ";" : ",";
    first = false;
    return r;
  };
  for (std::size_t i = 1; i < head_.size(); ++i) s += sep() + std::to_string(head_[i]);
  if (!period_.empty()) {
    s += sep() + "periodic:";
    for (std::size_t i = 0; i < period_.size(); ++i) s += (i ? "," : "") + std::to_string(period_[i]);
  }
  return s + "]";
}

std::int64_t Slope::density_term(std::size_t k) const {
  if (rational_ || k == 0) throw ContractViolation("density_term is defined for k >= 1 on irrational slopes");
  if (k - 1 < dens_head_.size()) return dens_head_[k - 1];
  if (dens_period_.empty()) return 0;
  return dens_period_[(k - 1 - dens_head_.size()) % dens_period_.size()];
}

int Slope::max_depth() const { return max_depth_; }

std::string christoffel_word(std::int64_t P, std::int64_t D) {
  if (D < 1 || P < 0 || P > D) throw ContractViolation("density must lie in [0, 1]");
  std::string w(static_cast<std::size_t>(D), 'a');
  for (std::int64_t n = 0; n < D; ++n)
    if ((static_cast<i128>(n + 1) * P) / D - (static_cast<i128>(n) * P) / D == 1) w[n] = 'b';
  return w;
}

std::pair<std::int64_t, std::int64_t> density_approximant(const Slope& s, int n) {
  if (s.is_rational()) {
    if (s.den() == 0) return {1, 1};
    return {s.num(), s.num() + s.den()};
  }
  if (n > s.max_depth()) throw DepthLimitError(n, s.max_depth());
  i128 p_prev = 1, p = 0, q_prev = 0, q = 1;
  for (std::size_t k = 1;; ++k) {
    std::int64_t b = s.density_term(k);
    if (b == 0) throw DepthLimitError(n, s.max_depth());
    i128 np = b * p + p_prev, nq = b * q + q_prev;
    p_prev = p;
    q_prev = q;
    p = np;
    q = nq;
    if (q >= n + 1) return {checked(p), checked(q)};
  }
}

std::vector<std::string> slope_factors(const Slope& s, int n) {
  if (n < 1) throw ContractViolation("factor length must be >= 1");
  auto [P, D] = density_approximant(s, n);
  std::string w = christoffel_word(P, D);
  std::set<std::string> out;
  std::string f(n, 'a');
  for (std::int64_t st = 0; st < D; ++st) {
    for (int k = 0; k < n; ++k) f[k] = w[(st + k) % D];
    out.insert(f);
  }
  return {out.begin(), out.end()};
}

std::pair<std::int64_t, std::int64_t> farey_left_neighbour(std::int64_t P, std::int64_t D, std::int64_t n) {
  if (D <= n) throw ContractViolation("farey_left_neighbour needs a denominator above the order");
  // Batched Stern-Brocot descent between l = lp/lq and r = rp/rq.
  i128 lp = 0, lq = 1, rp = 1, rq = 1;
  for (;;) {
    if (lq + rq > n) break;
    i128 A = static_cast<i128>(P) * lq - static_cast<i128>(D) * lp;  // > 0: l < target
    i128 B = static_cast<i128>(D) * rp - static_cast<i128>(P) * rq;  // > 0: r > target
    i128 mp = lp + rp, mq = lq + rq;
    if (static_cast<i128>(P) * mq < static_cast<i128>(D) * mp) {
      i128 k = std::min<i128>((B - 1) / A, (n - rq) / lq);
      rp += k * lp;
      rq += k * lq;
    } else {
      i128 k = std::min<i128>((A - 1) / B, (n - lq) / rq);
      lp += k * rp;
      lq += k * rq;
    }
  }
  return {static_cast<std::int64_t>(lp), static_cast<std::int64_t>(lq)};
}

std::string slope_family_key(const Slope& s, int n) {
  if (n < 1) throw ContractViolation("factor length must be >= 1");
  auto [P, D] = density_approximant(s, n);
  if (D <= n) return "pt:" + std::to_string(P) + "/" + std::to_string(D);
  auto [a, b] = farey_left_neighbour(P, D, n);
  return "iv:" + std::to_string(a) + "/" + std::to_string(b);
}

namespace {

class SlopeBackend : public LanguageBackend {
 public:
  SlopeBackend(Slope s, int edge_a, int edge_b) : slope_(std::move(s)), ea_(edge_a), eb_(edge_b) {}
  [[nodiscard]] std::string tag() const override { return "slope-model"; }
  [[nodiscard]] int max_depth() const override { return slope_.max_depth(); }
  [[nodiscard]] std::vector<EdgePath> paths(int r) const override {
    std::vector<EdgePath> out;
    for (const auto& f : slope_factors(slope_, r)) {
      EdgePath p(r);
      for (int k = 0; k < r; ++k) p[k] = {f[k] == 'a' ? ea_ : eb_, true};
      out.push_back(canonical_path(p));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  [[nodiscard]] std::optional<std::string> identity_key() const override { return "slope:" + slope_.str(); }
  [[nodiscard]] std::optional<std::string> family_key(int length) const override {
    return slope_family_key(slope_, length);
  }
  [[nodiscard]] std::string key_family() const override {
    return "slope-model:" + std::to_string(ea_) + "," + std::to_string(eb_);
  }

 private:
  Slope slope_;
  int ea_, eb_;
};

}  // namespace

Lamination slope_to_lamination(const Slope& s, std::shared_ptr<const TrainTrack> torus) {
  int ea = torus->edge_index("a");
  int eb = torus->edge_index("b");
  if (ea < 0 || eb < 0) throw ContractViolation("slope model needs a track with edges 'a' and 'b'");
  for (int x : {ea, eb}) {
    auto succ = legal_successors(*torus, {x, true});
    std::set<DirectedEdge> got(succ.begin(), succ.end());
    if (got != std::set<DirectedEdge>{{ea, true}, {eb, true}})
      throw ContractViolation("track '" + torus->name() + "' is not the standard torus track");
  }
  return Lamination(std::move(torus), std::make_shared<SlopeBackend>(s, ea, eb));
}

std::vector<Slope> farey_slopes(int Q) {
  if (Q < 1) throw ContractViolation("Farey order must be >= 1");
  std::vector<Slope> out;
  std::int64_t a = 0, b = 1, c = 1, d = Q;
  out.push_back(Slope::fraction(0, 1));
  while (c <= d) {
    out.push_back(Slope::fraction(c, d));
    std::int64_t k = (Q + b) / d;
    std::int64_t nc = k * c - a, nd = k * d - b;
    a = c;
    b = d;
    c = nc;
    d = nd;
  }
  return out;
}

Divergence divergence_depth(const Slope& a, const Slope& b, int r_max) {
  if (r_max < 1) throw ContractViolation("r_max must be >= 1");
  if (a == b) return {r_max, true};
  for (int r = 1; r <= r_max; ++r)
    if (slope_factors(a, r) != slope_factors(b, r)) return {r - 1, false};
  return {r_max, true};
}

}  // namespace ttlam
