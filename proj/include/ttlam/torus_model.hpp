#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ttlam/lamination.hpp"

namespace ttlam {

/// Slope alpha in [0, inf] of a lamination on the standard torus track.
/// Either an exact fraction p/q (1/0 is infinity) or an irrational given by
/// a continued fraction [a0; a1, a2, ...] that is eventually periodic or an
/// explicitly streamed finite prefix.
class Slope {
 public:
  static Slope fraction(std::int64_t p, std::int64_t q);
  /// alpha = [head; period period ...]; an empty period means the stream ends after head.
  static Slope continued_fraction(std::vector<std::int64_t> head, std::vector<std::int64_t> period = {});
  /// `p/q`, `cf:[a0;a1,...]`, `cf:[a0;a1,...,periodic:b1,b2,...]`.
  static Slope parse(const std::string& text);

  [[nodiscard]] bool is_rational() const { return rational_; }
  [[nodiscard]] std::int64_t num() const { return p_; }
  [[nodiscard]] std::int64_t den() const { return q_; }
  [[nodiscard]] const std::vector<std::int64_t>& cf_head() const { return head_; }
  [[nodiscard]] const std::vector<std::int64_t>& cf_period() const { return period_; }
  [[nodiscard]] std::string str() const;

  /// Partial quotient k >= 1 of the b-density beta = alpha / (1 + alpha) = [0; b1, b2, ...];
  /// 0 once a finite stream is exhausted. Irrational slopes only.
  [[nodiscard]] std::int64_t density_term(std::size_t k) const;
  /// Largest length whose factors are determined exactly.
  [[nodiscard]] int max_depth() const;

  friend bool operator==(const Slope& a, const Slope& b) { return a.str() == b.str(); }

 private:
  bool rational_ = true;
  std::int64_t p_ = 0, q_ = 1;
  std::vector<std::int64_t> head_, period_;
  std::vector<std::int64_t> dens_head_, dens_period_;
  int max_depth_ = 0;
};

/// Periodic word of density P/D: letter n is 'b' iff floor((n+1)P/D) - floor(nP/D) = 1.
std::string christoffel_word(std::int64_t P, std::int64_t D);

/// Rational density P/D whose cyclic word has the same length-n factors as the slope:
/// the density itself when rational, otherwise the first convergent with denominator >= n+1.
/// Throws DepthLimitError when the stream is too short.
std::pair<std::int64_t, std::int64_t> density_approximant(const Slope& s, int n);

/// Sorted oriented length-n factors over {a, b}.
std::vector<std::string> slope_factors(const Slope& s, int n);

/// Key with equal keys iff equal length-n factor sets: "pt:P/D" when the
/// density has denominator <= n, otherwise "iv:" and the left neighbour of the
/// density in the Farey sequence of order n.
std::string slope_family_key(const Slope& s, int n);

/// Left neighbour of P/D in the Farey sequence of order n, for D > n.
std::pair<std::int64_t, std::int64_t> farey_left_neighbour(std::int64_t P, std::int64_t D, std::int64_t n);

/// Throws ContractViolation unless the track has edges `a` and `b` joined as in the torus asset.
Lamination slope_to_lamination(const Slope& s, std::shared_ptr<const TrainTrack> torus);

/// Farey sequence of order Q in [0, 1], ascending.
std::vector<Slope> farey_slopes(int Q);

struct Divergence {
  int depth = 0;                   // last length with equal factor sets
  bool indistinguishable = false;  // equal through r_max
};

Divergence divergence_depth(const Slope& a, const Slope& b, int r_max);

}  // namespace ttlam
