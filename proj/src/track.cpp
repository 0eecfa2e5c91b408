#include "ttlam/track.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "ttlam/parallel.hpp"

namespace ttlam {

EdgePath reverse_path(const EdgePath& p) {
  EdgePath out;
  out.reserve(p.size());
  for (auto it = p.rbegin(); it != p.rend(); ++it) out.push_back(it->reversed());
  return out;
}

EdgePath canonical_path(const EdgePath& p) {
  EdgePath r = reverse_path(p);
  return std::min(p, r);
}

const char* to_string(RegionKind k) {
  switch (k) {
    case RegionKind::disc:
      return "disc";
    case RegionKind::annular:
      return "annular";
    case RegionKind::peripheral:
      return "peripheral";
  }
  return "?";
}

std::optional<RegionKind> region_kind_from_string(const std::string& s) {
  if (s == "disc") return RegionKind::disc;
  if (s == "annular") return RegionKind::annular;
  if (s == "peripheral") return RegionKind::peripheral;
  return std::nullopt;
}

TrainTrack TrainTrack::build(std::string name, std::vector<std::string> switch_ids, std::vector<Edge> edges,
                             std::vector<RegionLabel> labels) {
  TrainTrack t;
  t.name_ = std::move(name);
  t.labels_ = std::move(labels);
  std::set<std::string> seen_sw;
  for (auto& id : switch_ids) {
    if (!seen_sw.insert(id).second) throw StructuralError("duplicate switch id '" + id + "'");
    t.switches_.push_back(Switch{std::move(id), {}, {}});
  }
  std::set<std::string> seen_edge;
  // Collect ends per side keyed by position, then check positions are 0..k-1.
  std::vector<std::map<int, int>> side_a(t.switches_.size()), side_b(t.switches_.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    if (!seen_edge.insert(e.id).second) throw StructuralError("duplicate edge id '" + e.id + "'");
    for (int k = 0; k < 2; ++k) {
      const Slot& s = k == 0 ? e.start : e.end;
      if (s.sw < 0 || s.sw >= static_cast<int>(t.switches_.size()))
        throw StructuralError("edge '" + e.id + "' references an unknown switch");
      if (s.pos < 0) throw StructuralError("edge '" + e.id + "' has a negative slot position");
      auto& side = s.side == Side::A ? side_a[s.sw] : side_b[s.sw];
      if (!side.emplace(s.pos, static_cast<int>(2 * i + k)).second)
        throw StructuralError("slot " + t.switches_[s.sw].id + "," + side_char(s.side) + "," +
                              std::to_string(s.pos) + " is used by two edge ends");
    }
  }
  for (std::size_t sw = 0; sw < t.switches_.size(); ++sw) {
    for (int k = 0; k < 2; ++k) {
      auto& m = k == 0 ? side_a[sw] : side_b[sw];
      auto& out = k == 0 ? t.switches_[sw].side_a : t.switches_[sw].side_b;
      int expect = 0;
      for (auto& [pos, ref] : m) {
        if (pos != expect)
          throw StructuralError("switch '" + t.switches_[sw].id + "' side " + (k == 0 ? "A" : "B") +
                                " is missing position " + std::to_string(expect));
        out.push_back(ref);
        ++expect;
      }
    }
  }
  t.edges_ = std::move(edges);
  for (int sw = 0; sw < t.num_switches(); ++sw) {
    for (Side side : {Side::A, Side::B}) {
      for (int g = 0; g + 1 < t.side_size(sw, side); ++g) t.cusps_.push_back(Cusp{sw, side, g});
    }
  }
  return t;
}

int TrainTrack::edge_index(const std::string& id) const {
  for (int i = 0; i < num_edges(); ++i)
    if (edges_[i].id == id) return i;
  return -1;
}

int TrainTrack::switch_index(const std::string& id) const {
  for (int i = 0; i < num_switches(); ++i)
    if (switches_[i].id == id) return i;
  return -1;
}

int TrainTrack::cusp_index(const Cusp& c) const {
  for (int i = 0; i < static_cast<int>(cusps_.size()); ++i)
    if (cusps_[i] == c) return i;
  return -1;
}

std::string TrainTrack::format_path(const EdgePath& p) const {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ' ';
    out += token(p[i]);
  }
  return out;
}

EdgePath TrainTrack::parse_path(const std::string& text) const {
  std::istringstream in(text);
  std::string tok;
  EdgePath p;
  while (in >> tok) {
    bool fwd;
    std::string id;
    if (tok.size() >= 2 && tok.back() == '+') {
      fwd = true;
      id = tok.substr(0, tok.size() - 1);
    } else if (tok.size() >= 2 && tok.back() == '-') {
      fwd = false;
      id = tok.substr(0, tok.size() - 1);
    } else if (tok.size() >= 4 && tok.compare(tok.size() - 3, 3, "\xE2\x88\x92") == 0) {  // U+2212
      fwd = false;
      id = tok.substr(0, tok.size() - 3);
    } else {
      throw ParseError("bad path token '" + tok + "'");
    }
    int e = edge_index(id);
    if (e < 0) throw ParseError("unknown edge '" + id + "' in path");
    p.push_back({e, fwd});
  }
  return p;
}

bool operator==(const TrainTrack& a, const TrainTrack& b) {
  if (a.name_ != b.name_ || a.switches_.size() != b.switches_.size() || a.edges_.size() != b.edges_.size() ||
      a.labels_.size() != b.labels_.size())
    return false;
  for (std::size_t i = 0; i < a.switches_.size(); ++i) {
    const auto& x = a.switches_[i];
    const auto& y = b.switches_[i];
    if (x.id != y.id || x.side_a != y.side_a || x.side_b != y.side_b) return false;
  }
  for (std::size_t i = 0; i < a.edges_.size(); ++i) {
    const auto& x = a.edges_[i];
    const auto& y = b.edges_[i];
    if (x.id != y.id || x.start != y.start || x.end != y.end) return false;
  }
  for (std::size_t i = 0; i < a.labels_.size(); ++i)
    if (a.labels_[i].spikes != b.labels_[i].spikes || a.labels_[i].kind != b.labels_[i].kind) return false;
  return true;
}

namespace {

// Boundary step: the directed edge that follows `d` along the region on its
// left, and whether the step turns around a cusp.
std::pair<DirectedEdge, std::optional<Cusp>> boundary_step(const TrainTrack& t, DirectedEdge d) {
  const Slot& s = t.arrival(d);
  int na = t.side_size(s.sw, Side::A);
  int nb = t.side_size(s.sw, Side::B);
  if (s.side == Side::A) {
    if (s.pos > 0) return {t.departing({s.sw, Side::A, s.pos - 1}), Cusp{s.sw, Side::A, s.pos - 1}};
    if (nb > 0) return {t.departing({s.sw, Side::B, 0}), std::nullopt};
    return {t.departing({s.sw, Side::A, na - 1}), std::nullopt};
  }
  if (s.pos + 1 < nb) return {t.departing({s.sw, Side::B, s.pos + 1}), Cusp{s.sw, Side::B, s.pos}};
  if (na > 0) return {t.departing({s.sw, Side::A, na - 1}), std::nullopt};
  return {t.departing({s.sw, Side::B, 0}), std::nullopt};
}

}  // namespace

std::vector<ComplementaryRegion> complementary_regions(const TrainTrack& track) {
  std::vector<ComplementaryRegion> regions;
  std::vector<char> seen(2 * track.num_edges(), 0);
  for (int i = 0; i < 2 * track.num_edges(); ++i) {
    if (seen[i]) continue;
    ComplementaryRegion reg;
    DirectedEdge d = TrainTrack::from_dindex(i);
    while (!seen[TrainTrack::dindex(d)]) {
      seen[TrainTrack::dindex(d)] = 1;
      reg.boundary.push_back(d);
      auto [next, cusp] = boundary_step(track, d);
      if (cusp) reg.cusps.push_back(*cusp);
      d = next;
    }
    reg.spike_count = static_cast<int>(reg.cusps.size());
    regions.push_back(std::move(reg));
  }
  const auto& labels = track.labels();
  if (!labels.empty()) {
    std::vector<char> used(labels.size(), 0);
    for (auto& reg : regions) {
      for (std::size_t k = 0; k < labels.size(); ++k) {
        if (!used[k] && labels[k].spikes == reg.spike_count) {
          used[k] = 1;
          reg.kind = labels[k].kind;
          reg.labelled = true;
          break;
        }
      }
    }
  }
  return regions;
}

std::vector<Diagnostic> validate(const TrainTrack& track) {
  std::vector<Diagnostic> out;
  for (const auto& sw : track.switches()) {
    for (Side side : {Side::A, Side::B}) {
      if (sw.side(side).empty())
        out.push_back({"condition (2)", "switch " + sw.id,
                       std::string("condition (2) violated: side ") + side_char(side) + " has no edge end"});
    }
  }
  auto regions = complementary_regions(track);
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const auto& reg = regions[i];
    std::string subject = "region " + std::to_string(i) + " (" + track.format_path(reg.boundary) + ")";
    if (reg.kind == RegionKind::disc && reg.spike_count <= 2) {
      out.push_back({"condition (3)", subject,
                     "condition (3) violated: disc with " + std::to_string(reg.spike_count) + " spikes"});
    } else if (reg.kind == RegionKind::annular && reg.spike_count == 0) {
      out.push_back({"condition (3)", subject, "condition (3) violated: annulus with no spike"});
    }
  }
  const auto& labels = track.labels();
  if (!labels.empty()) {
    std::multiset<int> declared, computed;
    for (const auto& l : labels) declared.insert(l.spikes);
    for (const auto& r : regions) computed.insert(r.spike_count);
    if (declared != computed) {
      std::ostringstream msg;
      msg << "region lines do not match computed regions: computed spikes {";
      bool first = true;
      for (int s : computed) {
        msg << (first ? "" : ",") << s;
        first = false;
      }
      msg << "}";
      out.push_back({"region labels", "track " + track.name(), msg.str()});
    }
  }
  return out;
}

int euler_characteristic(const TrainTrack& track) {
  int discs = 0;
  for (const auto& r : complementary_regions(track))
    if (r.kind == RegionKind::disc) ++discs;
  return track.num_switches() - track.num_edges() + discs;
}

std::vector<DirectedEdge> legal_successors(const TrainTrack& track, DirectedEdge e) {
  const Slot& s = track.arrival(e);
  Side out_side = opposite(s.side);
  std::vector<DirectedEdge> out;
  for (int pos = 0; pos < track.side_size(s.sw, out_side); ++pos) out.push_back(track.departing({s.sw, out_side, pos}));
  return out;
}

bool is_legal(const TrainTrack& track, const EdgePath& path) {
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const Slot& in = track.arrival(path[i]);
    const Slot& out = track.departure(path[i + 1]);
    if (in.sw != out.sw || in.side == out.side) return false;
  }
  return true;
}

namespace {

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;
  return s < a ? UINT64_MAX : s;
}

void dfs_paths(const TrainTrack& t, const std::vector<std::vector<DirectedEdge>>& succ, EdgePath& cur, int length,
               std::vector<EdgePath>& out) {
  if (static_cast<int>(cur.size()) == length) {
    out.push_back(cur);
    return;
  }
  for (DirectedEdge n : succ[TrainTrack::dindex(cur.back())]) {
    cur.push_back(n);
    dfs_paths(t, succ, cur, length, out);
    cur.pop_back();
  }
}

}  // namespace

std::uint64_t count_paths(const TrainTrack& track, int length) {
  if (length <= 0) return 0;
  int n = 2 * track.num_edges();
  std::vector<std::uint64_t> cnt(n, 1), next(n);
  for (int step = 1; step < length; ++step) {
    std::fill(next.begin(), next.end(), 0);
    for (int i = 0; i < n; ++i)
      for (DirectedEdge s : legal_successors(track, TrainTrack::from_dindex(i)))
        next[TrainTrack::dindex(s)] = sat_add(next[TrainTrack::dindex(s)], cnt[i]);
    cnt.swap(next);
  }
  std::uint64_t total = 0;
  for (auto c : cnt) total = sat_add(total, c);
  return total;
}

std::vector<EdgePath> enumerate_paths(const TrainTrack& track, int length, std::uint64_t cap, int jobs) {
  if (length < 1) throw ContractViolation("enumerate_paths requires length >= 1");
  std::uint64_t total = count_paths(track, length);
  if (total > cap) throw EnumerationLimitError(cap, total);
  int n = 2 * track.num_edges();
  std::vector<std::vector<DirectedEdge>> succ(n);
  for (int i = 0; i < n; ++i) {
    succ[i] = legal_successors(track, TrainTrack::from_dindex(i));
    std::sort(succ[i].begin(), succ[i].end());
  }
  std::vector<std::vector<EdgePath>> parts(n);
  parallel_for(n, jobs, [&](int i) {
    EdgePath cur{TrainTrack::from_dindex(i)};
    dfs_paths(track, succ, cur, length, parts[i]);
  });
  std::vector<EdgePath> out;
  out.reserve(total);
  for (auto& p : parts) std::move(p.begin(), p.end(), std::back_inserter(out));
  return out;
}

namespace {

// Coefficient matrix of the switch relations: sum over side A minus sum over side B.
std::vector<std::vector<Rational>> relation_matrix(const TrainTrack& t) {
  std::vector<std::vector<Rational>> m(t.num_switches(), std::vector<Rational>(t.num_edges(), 0));
  for (int sw = 0; sw < t.num_switches(); ++sw) {
    for (int ref : t.switches()[sw].side_a) m[sw][ref / 2] += 1;
    for (int ref : t.switches()[sw].side_b) m[sw][ref / 2] -= 1;
  }
  return m;
}

int rank(std::vector<std::vector<Rational>> m) {
  int rows = static_cast<int>(m.size());
  int cols = rows ? static_cast<int>(m[0].size()) : 0;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (m[i][c] != Rational(0)) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[r], m[piv]);
    for (int i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == Rational(0)) continue;
      Rational f = m[i][c] / m[r][c];
      for (int k = c; k < cols; ++k) m[i][k] -= f * m[r][k];
    }
    ++r;
  }
  return r;
}

}  // namespace

int weight_space_dimension(const TrainTrack& track) { return track.num_edges() - rank(relation_matrix(track)); }

bool satisfies_switch_relations(const TrainTrack& track, const WeightSystem& w) {
  if (static_cast<int>(w.size()) != track.num_edges()) return false;
  for (const auto& row : relation_matrix(track)) {
    Rational s = 0;
    for (int e = 0; e < track.num_edges(); ++e) s += row[e] * w[e];
    if (s != Rational(0)) return false;
  }
  return true;
}

namespace {

// Whether the top of the tie at this end of edge e is on the left of e traversed forward.
bool top_is_left(bool at_start, Side side) { return at_start ? side == Side::B : side == Side::A; }

}  // namespace

std::vector<EdgePath> multicurve_from_weights(const TrainTrack& track, const WeightSystem& w) {
  const int ne = track.num_edges();
  if (static_cast<int>(w.size()) != ne) throw ContractViolation("weight system has the wrong number of entries");
  std::vector<std::int64_t> iw(ne);
  for (int e = 0; e < ne; ++e) {
    if (w[e] < Rational(0)) throw ContractViolation("negative weight on edge " + track.edges()[e].id);
    if (w[e].denominator() != 1) throw ContractViolation("non-integral weight on edge " + track.edges()[e].id);
    iw[e] = w[e].numerator();
  }
  if (!satisfies_switch_relations(track, w)) throw ContractViolation("weights violate the switch relations");

  // offset[sw][side][pos]: strands above this slot on its side of the tie.
  std::vector<std::array<std::vector<std::int64_t>, 2>> offset(track.num_switches());
  for (int sw = 0; sw < track.num_switches(); ++sw) {
    for (Side side : {Side::A, Side::B}) {
      auto& o = offset[sw][static_cast<int>(side)];
      std::int64_t acc = 0;
      for (int ref : track.switches()[sw].side(side)) {
        o.push_back(acc);
        acc += iw[ref / 2];
      }
    }
  }
  std::vector<std::int64_t> base(ne + 1, 0);
  for (int e = 0; e < ne; ++e) base[e + 1] = base[e] + iw[e];
  std::vector<char> used(static_cast<std::size_t>(base[ne]), 0);

  auto arrive = [&](int e, std::int64_t idx, bool fwd) {
    // Returns (next edge, next idx, next direction) after crossing the switch at the far end.
    const Edge& ed = track.edges()[e];
    const Slot& s = fwd ? ed.end : ed.start;
    bool tl = top_is_left(!fwd, s.side);
    // Stack index counts from the left of e traversed forward.
    std::int64_t local = tl ? idx : iw[e] - 1 - idx;
    std::int64_t rank = offset[s.sw][static_cast<int>(s.side)][s.pos] + local;
    Side os = opposite(s.side);
    const auto& o = offset[s.sw][static_cast<int>(os)];
    int pos = static_cast<int>(std::upper_bound(o.begin(), o.end(), rank) - o.begin()) - 1;
    // Skip zero-weight slots that share the same offset.
    while (pos + 1 < static_cast<int>(o.size()) && o[pos + 1] <= rank) ++pos;
    while (pos > 0 && iw[track.end_at({s.sw, os, pos}) / 2] == 0) --pos;
    Slot ns{s.sw, os, pos};
    int ref = track.end_at(ns);
    int ne2 = ref / 2;
    bool at_start = ref % 2 == 0;
    std::int64_t l2 = rank - o[pos];
    bool tl2 = top_is_left(at_start, os);
    std::int64_t idx2 = tl2 ? l2 : iw[ne2] - 1 - l2;
    return std::tuple<int, std::int64_t, bool>(ne2, idx2, at_start);
  };

  std::vector<EdgePath> loops;
  for (int e = 0; e < ne; ++e) {
    for (std::int64_t i = 0; i < iw[e]; ++i) {
      if (used[base[e] + i]) continue;
      EdgePath loop;
      int ce = e;
      std::int64_t ci = i;
      bool cf = true;
      do {
        used[base[ce] + ci] = 1;
        loop.push_back({ce, cf});
        std::tie(ce, ci, cf) = arrive(ce, ci, cf);
      } while (!(ce == e && ci == i && cf));
      loops.push_back(canonical_loop(loop));
    }
  }
  std::sort(loops.begin(), loops.end());
  return loops;
}

EdgePath canonical_loop(const EdgePath& loop) {
  EdgePath best = loop;
  EdgePath rev = reverse_path(loop);
  const std::size_t n = loop.size();
  for (const EdgePath* src : {&loop, static_cast<const EdgePath*>(&rev)}) {
    for (std::size_t k = 0; k < n; ++k) {
      EdgePath cand(n);
      for (std::size_t j = 0; j < n; ++j) cand[j] = (*src)[(k + j) % n];
      if (cand < best) best = std::move(cand);
    }
  }
  return best;
}

std::vector<std::int64_t> measure_loops(const TrainTrack& track, const std::vector<EdgePath>& loops) {
  std::vector<std::int64_t> w(track.num_edges(), 0);
  for (const auto& l : loops)
    for (DirectedEdge d : l) ++w[d.edge];
  return w;
}

}  // namespace ttlam
