#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ttlam/types.hpp"

namespace ttlam {

enum class RegionKind : std::uint8_t { disc, annular, peripheral };

const char* to_string(RegionKind k);
std::optional<RegionKind> region_kind_from_string(const std::string& s);

struct Switch {
  std::string id;
  // Edge-end references in top-to-bottom order; an end reference is edge*2 + (0 start, 1 end).
  std::vector<int> side_a;
  std::vector<int> side_b;

  [[nodiscard]] const std::vector<int>& side(Side s) const { return s == Side::A ? side_a : side_b; }
};

struct Edge {
  std::string id;
  Slot start;
  Slot end;
};

/// Declared region type from an asset file.
struct RegionLabel {
  int spikes = 0;
  RegionKind kind = RegionKind::disc;
};

/// A cusp sits between two consecutive edge ends on one side of a switch.
struct Cusp {
  int sw = -1;
  Side side = Side::A;
  int gap = -1;  // between positions gap and gap+1

  friend bool operator==(const Cusp&, const Cusp&) = default;
};

/// One complementary region, found by walking the boundary of the ribbon
/// surface with the region on the left.
struct ComplementaryRegion {
  std::vector<DirectedEdge> boundary;
  std::vector<Cusp> cusps;  // cusps met along the walk, in order
  int spike_count = 0;
  RegionKind kind = RegionKind::disc;
  bool labelled = false;

  [[nodiscard]] bool is_annular_or_peripheral() const { return kind != RegionKind::disc; }
};

struct Diagnostic {
  std::string condition;  // "condition (2)", "condition (3)", "region labels"
  std::string subject;    // offending switch or region
  std::string message;
};

/// Combinatorial train track: switches with two ordered sides and edges whose
/// ends attach to (switch, side, position) slots. Immutable after build().
class TrainTrack {
 public:
  /// Throws StructuralError when references do not resolve or slot positions
  /// are not a permutation of 0..k-1 on each side.
  static TrainTrack build(std::string name, std::vector<std::string> switch_ids, std::vector<Edge> edges,
                          std::vector<RegionLabel> labels = {});

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] const std::vector<Switch>& switches() const { return switches_; }
  [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }
  [[nodiscard]] const std::vector<RegionLabel>& labels() const { return labels_; }
  [[nodiscard]] int num_switches() const { return static_cast<int>(switches_.size()); }
  [[nodiscard]] int num_edges() const { return static_cast<int>(edges_.size()); }

  [[nodiscard]] int edge_index(const std::string& id) const;  // -1 if absent
  [[nodiscard]] int switch_index(const std::string& id) const;

  [[nodiscard]] const Slot& slot_of_end(int end_ref) const {
    const Edge& e = edges_[end_ref / 2];
    return end_ref % 2 == 0 ? e.start : e.end;
  }
  [[nodiscard]] int end_at(const Slot& s) const { return switches_[s.sw].side(s.side)[s.pos]; }
  [[nodiscard]] int side_size(int sw, Side side) const {
    return static_cast<int>(switches_[sw].side(side).size());
  }

  /// Slot where the directed edge leaves from / arrives at.
  [[nodiscard]] const Slot& departure(DirectedEdge d) const {
    return d.forward ? edges_[d.edge].start : edges_[d.edge].end;
  }
  [[nodiscard]] const Slot& arrival(DirectedEdge d) const {
    return d.forward ? edges_[d.edge].end : edges_[d.edge].start;
  }
  /// The directed edge that leaves through the given slot.
  [[nodiscard]] DirectedEdge departing(const Slot& s) const {
    int ref = end_at(s);
    return {ref / 2, ref % 2 == 0};
  }

  /// Dense index for directed edges: 2*edge + (forward ? 0 : 1).
  [[nodiscard]] static int dindex(DirectedEdge d) { return 2 * d.edge + (d.forward ? 0 : 1); }
  [[nodiscard]] static DirectedEdge from_dindex(int i) { return {i / 2, i % 2 == 0}; }

  [[nodiscard]] std::string token(DirectedEdge d) const { return edges_[d.edge].id + (d.forward ? "+" : "-"); }
  [[nodiscard]] std::string format_path(const EdgePath& p) const;
  /// Parses space-separated `id+`/`id-` tokens.
  [[nodiscard]] EdgePath parse_path(const std::string& text) const;

  /// Cusps in canonical order: by switch, side A before side B, then gap.
  [[nodiscard]] const std::vector<Cusp>& cusps() const { return cusps_; }
  [[nodiscard]] int cusp_index(const Cusp& c) const;

  friend bool operator==(const TrainTrack& a, const TrainTrack& b);

 private:
  std::string name_;
  std::vector<Switch> switches_;
  std::vector<Edge> edges_;
  std::vector<RegionLabel> labels_;
  std::vector<Cusp> cusps_;
};

/// Empty iff the switch condition, the region condition and any region labels all hold.
std::vector<Diagnostic> validate(const TrainTrack& track);

std::vector<ComplementaryRegion> complementary_regions(const TrainTrack& track);

/// V - E + (number of disc regions).
int euler_characteristic(const TrainTrack& track);

std::vector<DirectedEdge> legal_successors(const TrainTrack& track, DirectedEdge e);

bool is_legal(const TrainTrack& track, const EdgePath& path);

/// All legal oriented paths of exactly `length` edges, in lexicographic order.
/// Throws EnumerationLimitError past `cap` paths.
std::vector<EdgePath> enumerate_paths(const TrainTrack& track, int length, std::uint64_t cap = 10'000'000,
                                      int jobs = 1);

/// Number of legal oriented paths of the given length (transfer-matrix count, no cap).
std::uint64_t count_paths(const TrainTrack& track, int length);

/// Dimension of the rational solution space of the switch relations.
int weight_space_dimension(const TrainTrack& track);

using WeightSystem = std::vector<Rational>;  // indexed by edge

bool satisfies_switch_relations(const TrainTrack& track, const WeightSystem& w);

/// Closed loops of the carried multicurve, each in canonical cyclic form, sorted.
/// Throws ContractViolation for negative, non-integral or relation-violating weights.
std::vector<EdgePath> multicurve_from_weights(const TrainTrack& track, const WeightSystem& w);

/// Canonical representative of a cyclic path up to rotation and reversal.
EdgePath canonical_loop(const EdgePath& loop);

/// Strand count per edge of a set of closed loops.
std::vector<std::int64_t> measure_loops(const TrainTrack& track, const std::vector<EdgePath>& loops);

}  // namespace ttlam
