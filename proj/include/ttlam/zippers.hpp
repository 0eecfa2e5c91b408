#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ttlam/lamination.hpp"

namespace ttlam {

/// Point on a switch tie. Ties are listed top to bottom; all side-A cusp marks
/// sit above all side-B cusp marks. A piece end id is piece*2 + (0 at the
/// edge's start, 1 at its end).
struct TiePoint {
  int cusp = -1;
  std::array<int, 2> end{-1, -1};  // indexed by Side
  bool blocked_below = false;      // zero-length connection occupies the gap below

  friend bool operator==(const TiePoint&, const TiePoint&) = default;
};

struct ZipperPiece {
  int arc = -1;
  int edge = -1;
  bool forward = true;
};

struct ZipperArc {
  int root = -1;         // cusp index
  int end_cusp = -1;     // other end of a switch connection
  bool connection = false;
  std::vector<int> pieces;  // in order from the root
};

struct ZipperFamily {
  int r = 0;
  std::vector<ZipperPiece> pieces;
  std::vector<ZipperArc> arcs;      // ordered by root
  std::vector<int> arc_of_cusp;
  std::vector<std::vector<TiePoint>> ties;  // per switch

  [[nodiscard]] std::vector<int> crossings(const TrainTrack& track) const;  // n_e
  [[nodiscard]] EdgePath arc_path(int arc) const;
  /// Left-to-right stack index of each piece of the arc within its edge.
  [[nodiscard]] std::vector<int> arc_gaps(const TrainTrack& track, int arc) const;
  /// Tie orders plus crossing counts; equal strings iff equal families.
  [[nodiscard]] std::string normal_form(const TrainTrack& track) const;
};

/// Index of the tie point holding a piece end, or -1.
int tie_position(const TrainTrack& track, const ZipperFamily& z, int piece_end);

/// Whole-family consistency: segment membership, stack orders, arc lengths, blocked gaps.
/// Returns an empty string when valid, otherwise the first problem found.
std::string check_zipper_family(const TrainTrack& track, const ZipperFamily& z);

/// All r-zipper families, sorted by normal form. Throws EnumerationLimitError past `cap`.
std::vector<ZipperFamily> enumerate_zipper_families(const TrainTrack& track, int r, std::uint64_t cap = 10'000'000,
                                                    int jobs = 1);

/// #Z_r without materializing the families.
std::uint64_t count_zipper_families(const TrainTrack& track, int r, std::uint64_t cap = 10'000'000, int jobs = 1);

/// Zipper family of a multicurve with all weights positive.
/// Throws ContractViolation when some weight is zero or the curve is not carried with
/// every side-A cusp above every side-B cusp.
ZipperFamily zippers_from_multicurve(const TrainTrack& track, const WeightSystem& w, int r);

struct ZipperPathSet {
  int r = 0;
  RealizedPathSet paths;                  // length 2r+1
  std::vector<std::pair<int, int>> flagged;  // (edge, gap) with no unique extension
};

/// The map c: one path of length 2r+1 per gap of e - z, for every edge e.
ZipperPathSet pathset_from_zippers(const TrainTrack& track, const ZipperFamily& z, int r);

struct PathFamilyCensus {
  int r = 0;
  std::size_t size = 0;
  std::string provenance = "lamination-sample";
};

/// Distinct realized families of length 2r+1 over the sample.
PathFamilyCensus census_realized_families(const std::vector<Lamination>& sample, int r, int jobs = 1);

struct ZipperBounds {
  int p = 0;
  int q = 0;
  int chi = 0;
  double coarse = 0;  // 2^p p^{p+q} r^{p+q}
  int better_exponent = 0;  // 9|chi| - 1
};

ZipperBounds zipper_bounds(const TrainTrack& track, int r);

}  // namespace ttlam
