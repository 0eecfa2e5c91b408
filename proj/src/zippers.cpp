#include "ttlam/zippers.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <set>
#include <optional>
#include <sstream>
#include <tuple>
#include <unordered_set>

#include "ttlam/parallel.hpp"

namespace ttlam {

namespace {

bool top_is_left(int k, Side side) { return k == 0 ? side == Side::B : side == Side::A; }

int side_idx(Side s) { return static_cast<int>(s); }

/// mark[sw][side][gap] = cusp index.
using MarkTable = std::vector<std::array<std::vector<int>, 2>>;

MarkTable mark_table(const TrainTrack& t) {
  MarkTable m(t.num_switches());
  for (int sw = 0; sw < t.num_switches(); ++sw)
    for (Side s : {Side::A, Side::B}) m[sw][side_idx(s)].assign(std::max(0, t.side_size(sw, s) - 1), -1);
  const auto& cs = t.cusps();
  for (int c = 0; c < static_cast<int>(cs.size()); ++c) m[cs[c].sw][side_idx(cs[c].side)][cs[c].gap] = c;
  return m;
}

std::vector<std::vector<TiePoint>> initial_ties(const TrainTrack& t, const MarkTable& m) {
  std::vector<std::vector<TiePoint>> ties(t.num_switches());
  for (int sw = 0; sw < t.num_switches(); ++sw)
    for (Side s : {Side::A, Side::B})
      for (int c : m[sw][side_idx(s)]) {
        TiePoint tp;
        tp.cusp = c;
        ties[sw].push_back(tp);
      }
  return ties;
}

Slot piece_end_slot(const TrainTrack& t, const ZipperFamily& z, int end_id) {
  const auto& pc = z.pieces[end_id / 2];
  return t.slot_of_end(pc.edge * 2 + end_id % 2);
}

int find_cusp(const std::vector<TiePoint>& tie, int c) {
  for (int i = 0; i < static_cast<int>(tie.size()); ++i)
    if (tie[i].cusp == c) return i;
  return -1;
}

int find_end(const std::vector<TiePoint>& tie, Side side, int id) {
  for (int i = 0; i < static_cast<int>(tie.size()); ++i)
    if (tie[i].end[side_idx(side)] == id) return i;
  return -1;
}

int marks_above(const TrainTrack& t, const std::vector<TiePoint>& tie, Side side, int idx) {
  int n = 0;
  for (int i = 0; i < idx; ++i)
    if (tie[i].cusp >= 0 && t.cusps()[tie[i].cusp].side == side) ++n;
  return n;
}

/// Exclusive tie-index bounds of a slot's segment.
std::pair<int, int> segment(const TrainTrack& t, const MarkTable& m, const std::vector<TiePoint>& tie, const Slot& s) {
  int lo = s.pos > 0 ? find_cusp(tie, m[s.sw][side_idx(s.side)][s.pos - 1]) : -1;
  int hi = s.pos < t.side_size(s.sw, s.side) - 1 ? find_cusp(tie, m[s.sw][side_idx(s.side)][s.pos])
                                                   : static_cast<int>(tie.size());
  return {lo, hi};
}

struct Interval {
  int sw = -1;
  Side side = Side::A;
  int upper = -1;  // exclusive
  int lower = -1;  // exclusive
};

/// Where the far end of piece p may go, given its near end is placed.
Interval far_interval(const TrainTrack& t, const MarkTable& m, const ZipperFamily& z, int p, int near_k) {
  int near_id = 2 * p + near_k;
  Slot ns = piece_end_slot(t, z, near_id);
  const auto& tie1 = z.ties[ns.sw];
  int in = find_end(tie1, ns.side, near_id);
  auto [lo1, hi1] = segment(t, m, tie1, ns);
  int up = -1, dn = -1;
  for (int i = in - 1; i > lo1; --i)
    if (tie1[i].end[side_idx(ns.side)] >= 0) {
      up = tie1[i].end[side_idx(ns.side)];
      break;
    }
  for (int i = in + 1; i < hi1; ++i)
    if (tie1[i].end[side_idx(ns.side)] >= 0) {
      dn = tie1[i].end[side_idx(ns.side)];
      break;
    }
  Slot fs = piece_end_slot(t, z, near_id ^ 1);
  const auto& tie2 = z.ties[fs.sw];
  auto [lo2, hi2] = segment(t, m, tie2, fs);
  bool flip = top_is_left(near_k, ns.side) != top_is_left(1 - near_k, fs.side);
  if (flip) std::swap(up, dn);
  Interval iv;
  iv.sw = fs.sw;
  iv.side = fs.side;
  iv.upper = up >= 0 ? find_end(tie2, fs.side, up ^ 1) : lo2;
  iv.lower = dn >= 0 ? find_end(tie2, fs.side, dn ^ 1) : hi2;
  return iv;
}

struct Stop {};

class Enumerator {
 public:
  Enumerator(const TrainTrack& t, const MarkTable& m, int r) : t_(t), m_(m), r_(r) {}

  ZipperFamily st;
  std::vector<ZipperFamily>* out = nullptr;
  std::vector<std::pair<ZipperFamily, int>>* prefixes = nullptr;
  int prefix_arcs = 0;
  std::atomic<std::uint64_t>* total = nullptr;
  std::uint64_t cap = 0;
  std::uint64_t count = 0;

  void next_arc(int from) {
    if (prefixes && static_cast<int>(st.arcs.size()) == prefix_arcs) {
      prefixes->emplace_back(st, from);
      return;
    }
    const int P = static_cast<int>(t_.cusps().size());
    int c = from;
    while (c < P && st.arc_of_cusp[c] >= 0) ++c;
    if (c == P) {
      if (prefixes) {
        prefixes->emplace_back(st, P);
        return;
      }
      emit();
      return;
    }
    const Cusp cu = t_.cusps()[c];
    const int a = static_cast<int>(st.arcs.size());
    st.arcs.push_back({c, -1, false, {}});
    st.arc_of_cusp[c] = a;
    auto& tie = st.ties[cu.sw];
    int mi = find_cusp(tie, c);

    if (cu.side == Side::A && cu.gap == t_.side_size(cu.sw, Side::A) - 2 && t_.side_size(cu.sw, Side::B) >= 2) {
      int cb = m_[cu.sw][1][0];
      if (st.arc_of_cusp[cb] < 0 && mi + 1 < static_cast<int>(tie.size()) && tie[mi + 1].cusp == cb) {
        st.arcs[a].connection = true;
        st.arcs[a].end_cusp = cb;
        st.arc_of_cusp[cb] = a;
        tie[mi].blocked_below = true;
        next_arc(c + 1);
        tie[mi].blocked_below = false;
        st.arc_of_cusp[cb] = -1;
        st.arcs[a].connection = false;
        st.arcs[a].end_cusp = -1;
      }
    }

    Side y = opposite(cu.side);
    Slot s{cu.sw, y, marks_above(t_, tie, y, mi)};
    int ref = t_.end_at(s);
    int p = add_piece(a, ref);
    tie[mi].end[side_idx(y)] = 2 * p + ref % 2;
    extend(a, p, 1);
    tie[mi].end[side_idx(y)] = -1;
    pop_piece(a);

    st.arcs.pop_back();
    st.arc_of_cusp[c] = -1;
  }

 private:
  int add_piece(int a, int ref) {
    int p = static_cast<int>(st.pieces.size());
    st.pieces.push_back({a, ref / 2, ref % 2 == 0});
    st.arcs[a].pieces.push_back(p);
    return p;
  }
  void pop_piece(int a) {
    st.pieces.pop_back();
    st.arcs[a].pieces.pop_back();
  }

  void extend(int a, int p, int len) {
    const int near_k = st.pieces[p].forward ? 0 : 1;
    const Interval iv = far_interval(t_, m_, st, p, near_k);
    auto& tie = st.ties[iv.sw];
    const Side x = iv.side;
    const Side y = opposite(x);
    const int far_id = 2 * p + 1 - near_k;
    const int root = st.arcs[a].root;
    for (int g = iv.upper + 1; g <= iv.lower; ++g) {
      if (g > 0 && tie[g - 1].blocked_below) continue;
      if (len == r_) {
        TiePoint tp;
        tp.end[side_idx(x)] = far_id;
        tie.insert(tie.begin() + g, tp);
        next_arc(root + 1);
        tie.erase(tie.begin() + g);
      }
      if (len < 2 * r_) {
        Slot s{iv.sw, y, marks_above(t_, tie, y, g)};
        int ref = t_.end_at(s);
        int q = add_piece(a, ref);
        TiePoint tp;
        tp.end[side_idx(x)] = far_id;
        tp.end[side_idx(y)] = 2 * q + ref % 2;
        tie.insert(tie.begin() + g, tp);
        extend(a, q, len + 1);
        tie.erase(tie.begin() + g);
        pop_piece(a);
      }
    }
    for (int j = iv.upper + 1; j < iv.lower; ++j) {
      int c2 = tie[j].cusp;
      if (c2 < 0 || t_.cusps()[c2].side != y || st.arc_of_cusp[c2] >= 0) continue;
      tie[j].end[side_idx(x)] = far_id;
      st.arc_of_cusp[c2] = a;
      st.arcs[a].connection = true;
      st.arcs[a].end_cusp = c2;
      next_arc(root + 1);
      st.arcs[a].connection = false;
      st.arcs[a].end_cusp = -1;
      st.arc_of_cusp[c2] = -1;
      tie[j].end[side_idx(x)] = -1;
    }
  }

  void emit() {
    ++count;
    if (total && total->fetch_add(1) + 1 > cap) throw Stop{};
    if (out) out->push_back(st);
  }

  const TrainTrack& t_;
  const MarkTable& m_;
  int r_;
};

std::uint64_t run_enumeration(const TrainTrack& t, int r, std::uint64_t cap, int jobs, std::vector<ZipperFamily>* out) {
  if (r < 1) throw ContractViolation("zipper radius must be >= 1");
  if (!validate(t).empty()) throw ContractViolation("zipper enumeration needs a valid track");
  MarkTable m = mark_table(t);
  ZipperFamily init;
  init.r = r;
  init.arc_of_cusp.assign(t.cusps().size(), -1);
  init.ties = initial_ties(t, m);

  std::vector<std::pair<ZipperFamily, int>> prefixes;
  {
    Enumerator e(t, m, r);
    e.st = init;
    e.prefixes = &prefixes;
    e.prefix_arcs = std::min<int>(2, static_cast<int>(t.cusps().size()));
    e.next_arc(0);
  }
  std::atomic<std::uint64_t> total{0};
  std::vector<std::vector<ZipperFamily>> parts(prefixes.size());
  try {
    parallel_for(static_cast<int>(prefixes.size()), jobs, [&](int i) {
      if (total.load() > cap) throw Stop{};
      Enumerator e(t, m, r);
      e.st = prefixes[i].first;
      e.total = &total;
      e.cap = cap;
      if (out) e.out = &parts[i];
      e.next_arc(prefixes[i].second);
    });
  } catch (const Stop&) {
    throw EnumerationLimitError(cap, cap + 1);
  }
  if (out) {
    std::vector<std::pair<std::string, ZipperFamily*>> keyed;
    for (auto& part : parts)
      for (auto& z : part) keyed.emplace_back(z.normal_form(t), &z);
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    keyed.erase(std::unique(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
                keyed.end());
    out->clear();
    out->reserve(keyed.size());
    for (auto& [k, z] : keyed) out->push_back(std::move(*z));
    return out->size();
  }
  return total.load();
}

}  // namespace

std::vector<int> ZipperFamily::crossings(const TrainTrack& track) const {
  std::vector<int> n(track.num_edges(), 0);
  for (const auto& p : pieces) ++n[p.edge];
  return n;
}

EdgePath ZipperFamily::arc_path(int arc) const {
  EdgePath out;
  for (int p : arcs.at(arc).pieces) out.push_back({pieces[p].edge, pieces[p].forward});
  return out;
}

int tie_position(const TrainTrack& track, const ZipperFamily& z, int piece_end) {
  Slot s = piece_end_slot(track, z, piece_end);
  return find_end(z.ties[s.sw], s.side, piece_end);
}

namespace {

/// Left-to-right order of the pieces on each edge.
std::vector<std::vector<int>> left_orders(const TrainTrack& t, const ZipperFamily& z) {
  std::vector<std::vector<std::pair<int, int>>> keyed(t.num_edges());
  for (int p = 0; p < static_cast<int>(z.pieces.size()); ++p) {
    int e = z.pieces[p].edge;
    const Slot& s = t.edges()[e].start;
    int pos = find_end(z.ties[s.sw], s.side, 2 * p);
    keyed[e].emplace_back(top_is_left(0, s.side) ? pos : -pos, p);
  }
  std::vector<std::vector<int>> out(t.num_edges());
  for (int e = 0; e < t.num_edges(); ++e) {
    std::sort(keyed[e].begin(), keyed[e].end());
    for (auto& [k, p] : keyed[e]) out[e].push_back(p);
  }
  return out;
}

}  // namespace

std::vector<int> ZipperFamily::arc_gaps(const TrainTrack& track, int arc) const {
  auto order = left_orders(track, *this);
  std::vector<int> out;
  for (int p : arcs.at(arc).pieces) {
    const auto& o = order[pieces[p].edge];
    out.push_back(static_cast<int>(std::find(o.begin(), o.end(), p) - o.begin()));
  }
  return out;
}

std::string ZipperFamily::normal_form(const TrainTrack& track) const {
  std::vector<int> ordinal(pieces.size(), 0);
  for (const auto& a : arcs)
    for (std::size_t i = 0; i < a.pieces.size(); ++i) ordinal[a.pieces[i]] = static_cast<int>(i);
  auto label = [&](int id) {
    int p = id / 2;
    return std::to_string(arcs[pieces[p].arc].root) + "." + std::to_string(ordinal[p]) + "." + std::to_string(id % 2);
  };
  std::ostringstream os;
  for (std::size_t sw = 0; sw < ties.size(); ++sw) {
    os << 's' << sw << ':';
    for (const auto& tp : ties[sw]) {
      os << (tp.cusp >= 0 ? "c" + std::to_string(tp.cusp) : std::string("p"));
      if (tp.end[0] >= 0) os << 'a' << label(tp.end[0]);
      if (tp.end[1] >= 0) os << 'b' << label(tp.end[1]);
      if (tp.blocked_below) os << '|';
      os << ' ';
    }
    os << ';';
  }
  os << "n=";
  auto n = crossings(track);
  for (std::size_t e = 0; e < n.size(); ++e) os << (e ? "," : "") << n[e];
  return os.str();
}

std::string check_zipper_family(const TrainTrack& t, const ZipperFamily& z) {
  const int P = static_cast<int>(t.cusps().size());
  MarkTable m = mark_table(t);
  if (static_cast<int>(z.arc_of_cusp.size()) != P) return "cusp table size";
  if (static_cast<int>(z.ties.size()) != t.num_switches()) return "tie count";
  for (int sw = 0; sw < t.num_switches(); ++sw) {
    std::vector<int> marks;
    for (const auto& tp : z.ties[sw])
      if (tp.cusp >= 0) marks.push_back(tp.cusp);
    std::vector<int> expect;
    for (Side s : {Side::A, Side::B})
      for (int c : m[sw][side_idx(s)]) expect.push_back(c);
    if (marks != expect) return "cusp marks out of order at switch " + std::to_string(sw);
  }
  // every piece end appears once, inside its slot segment
  for (int id = 0; id < 2 * static_cast<int>(z.pieces.size()); ++id) {
    Slot s = piece_end_slot(t, z, id);
    const auto& tie = z.ties[s.sw];
    int hits = 0, at = -1;
    for (int i = 0; i < static_cast<int>(tie.size()); ++i)
      for (int k = 0; k < 2; ++k)
        if (tie[i].end[k] == id) {
          if (k != side_idx(s.side)) return "piece end on the wrong side";
          ++hits;
          at = i;
        }
    if (hits != 1) return "piece end " + std::to_string(id) + " placed " + std::to_string(hits) + " times";
    auto [lo, hi] = segment(t, m, tie, s);
    if (at <= lo || at >= hi) return "piece end outside its slot";
  }
  for (int sw = 0; sw < t.num_switches(); ++sw)
    for (int i = 0; i < static_cast<int>(z.ties[sw].size()); ++i) {
      const auto& tp = z.ties[sw][i];
      for (int k = 0; k < 2; ++k)
        if (tp.end[k] >= 0 && tp.end[k] / 2 >= static_cast<int>(z.pieces.size())) return "dangling piece end";
      if (tp.blocked_below) {
        if (i + 1 >= static_cast<int>(z.ties[sw].size()) || tp.cusp < 0 || z.ties[sw][i + 1].cusp < 0)
          return "blocked gap not between two cusps";
        int a = z.arc_of_cusp[tp.cusp];
        if (a < 0 || a != z.arc_of_cusp[z.ties[sw][i + 1].cusp] || !z.arcs[a].pieces.empty())
          return "blocked gap without a zero-length connection";
      }
    }
  // stacks agree at both ends
  for (int e = 0; e < t.num_edges(); ++e) {
    std::vector<std::pair<int, int>> at_start, at_end;
    for (int p = 0; p < static_cast<int>(z.pieces.size()); ++p) {
      if (z.pieces[p].edge != e) continue;
      const Slot& s0 = t.edges()[e].start;
      const Slot& s1 = t.edges()[e].end;
      int i0 = find_end(z.ties[s0.sw], s0.side, 2 * p);
      int i1 = find_end(z.ties[s1.sw], s1.side, 2 * p + 1);
      at_start.emplace_back(top_is_left(0, s0.side) ? i0 : -i0, p);
      at_end.emplace_back(top_is_left(1, s1.side) ? i1 : -i1, p);
    }
    std::sort(at_start.begin(), at_start.end());
    std::sort(at_end.begin(), at_end.end());
    for (std::size_t i = 0; i < at_start.size(); ++i)
      if (at_start[i].second != at_end[i].second) return "crossing pieces on edge " + t.edges()[e].id;
  }
  // arcs
  for (int c = 0; c < P; ++c)
    if (z.arc_of_cusp[c] < 0) return "cusp without arc";
  for (int a = 0; a < static_cast<int>(z.arcs.size()); ++a) {
    const auto& arc = z.arcs[a];
    if (z.arc_of_cusp[arc.root] != a) return "arc root mismatch";
    if (arc.connection && z.arc_of_cusp[arc.end_cusp] != a) return "connection end mismatch";
    int len = static_cast<int>(arc.pieces.size());
    if (arc.connection ? len > 2 * z.r : len != z.r) return "arc length";
    if (len == 0) continue;
    const Cusp& rc = t.cusps()[arc.root];
    const auto& rt = z.ties[rc.sw];
    int first = arc.pieces[0];
    int near0 = z.pieces[first].forward ? 0 : 1;
    if (rt[find_cusp(rt, arc.root)].end[side_idx(opposite(rc.side))] != 2 * first + near0) return "arc not at its root";
    for (int i = 0; i < len; ++i) {
      int p = arc.pieces[i];
      int nk = z.pieces[p].forward ? 0 : 1;
      int far_id = 2 * p + 1 - nk;
      Slot fs = piece_end_slot(t, z, far_id);
      const auto& tp = z.ties[fs.sw][find_end(z.ties[fs.sw], fs.side, far_id)];
      int other = tp.end[side_idx(opposite(fs.side))];
      if (i + 1 < len) {
        int q = arc.pieces[i + 1];
        if (other != 2 * q + (z.pieces[q].forward ? 0 : 1)) return "arc broken";
      } else if (arc.connection) {
        if (tp.cusp != arc.end_cusp || other >= 0) return "connection does not end at its cusp";
      } else if (tp.cusp >= 0 || other >= 0) {
        return "plain arc end not free";
      }
    }
  }
  return {};
}

std::vector<ZipperFamily> enumerate_zipper_families(const TrainTrack& track, int r, std::uint64_t cap, int jobs) {
  std::vector<ZipperFamily> out;
  run_enumeration(track, r, cap, jobs, &out);
  return out;
}

std::uint64_t count_zipper_families(const TrainTrack& track, int r, std::uint64_t cap, int jobs) {
  return run_enumeration(track, r, cap, jobs, nullptr);
}

ZipperFamily zippers_from_multicurve(const TrainTrack& t, const WeightSystem& w, int r) {
  if (r < 1) throw ContractViolation("zipper radius must be >= 1");
  if (static_cast<int>(w.size()) != t.num_edges()) throw ContractViolation("weight vector length mismatch");
  std::vector<std::int64_t> wt(w.size());
  for (std::size_t e = 0; e < w.size(); ++e) {
    if (w[e].denominator() != 1 || w[e] <= Rational(0)) throw ContractViolation("weights must be positive integers");
    wt[e] = w[e].numerator();
  }
  if (!satisfies_switch_relations(t, w)) throw ContractViolation("weights violate the switch relations");
  MarkTable m = mark_table(t);
  const int S = t.num_switches();
  // off[sw][side][pos]: tie rank of the first strand in that slot
  std::vector<std::array<std::vector<std::int64_t>, 2>> off(S);
  for (int sw = 0; sw < S; ++sw)
    for (Side s : {Side::A, Side::B}) {
      auto& o = off[sw][side_idx(s)];
      o.push_back(0);
      for (int ref : t.switches()[sw].side(s)) o.push_back(o.back() + wt[ref / 2]);
    }
  auto mark_rank = [&](int c) {
    const Cusp& cu = t.cusps()[c];
    return off[cu.sw][side_idx(cu.side)][cu.gap + 1];
  };
  for (int sw = 0; sw < S; ++sw) {
    const auto& ma = m[sw][0];
    const auto& mb = m[sw][1];
    if (!ma.empty() && !mb.empty() && mark_rank(ma.back()) > mark_rank(mb.front()))
      throw ContractViolation("multicurve is not carried with side-A cusps above side-B cusps at switch " +
                              t.switches()[sw].id);
  }
  auto slot_of_rank = [&](int sw, Side s, std::int64_t rank) {
    const auto& o = off[sw][side_idx(s)];
    return static_cast<int>(std::upper_bound(o.begin(), o.end(), rank) - o.begin()) - 1;
  };
  // left index of a strand from its tie rank at a slot, and back
  auto left_index = [&](const Slot& s, std::int64_t rank) {
    int ref = t.end_at(s);
    std::int64_t tpos = rank - off[s.sw][side_idx(s.side)][s.pos];
    return top_is_left(ref % 2, s.side) ? tpos : wt[ref / 2] - 1 - tpos;
  };
  auto rank_of = [&](const Slot& s, int k, std::int64_t j) {
    std::int64_t tpos = top_is_left(k, s.side) ? j : wt[t.end_at(s) / 2] - 1 - j;
    return off[s.sw][side_idx(s.side)][s.pos] + tpos;
  };

  ZipperFamily z;
  z.r = r;
  z.arc_of_cusp.assign(t.cusps().size(), -1);
  struct Item {
    std::int64_t rank;  // the point sits just above the strand of this rank
    int kind;           // 0 side-A cusp, 1 side-B cusp, 2 arc point
    int seq;
    TiePoint tp;
  };
  std::vector<std::vector<Item>> items(S);
  std::vector<std::pair<int, int>> mark_item(t.cusps().size());
  for (int c = 0; c < static_cast<int>(t.cusps().size()); ++c) {
    const Cusp& cu = t.cusps()[c];
    TiePoint tp;
    tp.cusp = c;
    mark_item[c] = {cu.sw, static_cast<int>(items[cu.sw].size())};
    items[cu.sw].push_back({mark_rank(c), side_idx(cu.side), c, tp});
  }
  struct Step {
    int sw;  // near tie
    std::int64_t rank;
    Side in;
    int ref;  // near edge end
    int far_sw;
    Side far_side;
    std::int64_t far_rank;
  };
  int seq = 0;
  for (int c = 0; c < static_cast<int>(t.cusps().size()); ++c) {
    if (z.arc_of_cusp[c] >= 0) continue;
    const Cusp& cu = t.cusps()[c];
    const int a = static_cast<int>(z.arcs.size());
    z.arcs.push_back({c, -1, false, {}});
    z.arc_of_cusp[c] = a;
    int sw = cu.sw;
    Side in = opposite(cu.side);
    std::int64_t rank = mark_rank(c);
    std::vector<Step> walk;
    int target = -1;
    while (static_cast<int>(walk.size()) <= 2 * r) {
      int lo = slot_of_rank(sw, in, rank - 1);
      int hi = slot_of_rank(sw, in, rank);
      if (lo != hi) {
        target = m[sw][side_idx(in)][lo];
        break;
      }
      if (static_cast<int>(walk.size()) == 2 * r) break;
      Slot s{sw, in, lo};
      int ref = t.end_at(s);
      int k = ref % 2;
      std::int64_t j = std::max(left_index(s, rank - 1), left_index(s, rank));  // between strands j-1 and j
      const Edge& e = t.edges()[ref / 2];
      const Slot& fs = k == 0 ? e.end : e.start;
      std::int64_t far_rank = std::max(rank_of(fs, 1 - k, j - 1), rank_of(fs, 1 - k, j));
      walk.push_back({sw, rank, in, ref, fs.sw, fs.side, far_rank});
      sw = fs.sw;
      in = opposite(fs.side);
      rank = far_rank;
    }
    const int n = target >= 0 ? static_cast<int>(walk.size()) : r;
    if (target >= 0) {
      z.arcs[a].connection = true;
      z.arcs[a].end_cusp = target;
      z.arc_of_cusp[target] = a;
    }
    if (n == 0) {
      items[mark_item[c].first][mark_item[c].second].tp.blocked_below = true;
      continue;
    }
    int prev_far = -1;
    for (int i = 0; i < n; ++i) {
      const Step& st = walk[i];
      int p = static_cast<int>(z.pieces.size());
      z.pieces.push_back({a, st.ref / 2, st.ref % 2 == 0});
      z.arcs[a].pieces.push_back(p);
      int near_id = 2 * p + st.ref % 2;
      if (i == 0) {
        items[mark_item[c].first][mark_item[c].second].tp.end[side_idx(st.in)] = near_id;
      } else {
        TiePoint tp;
        tp.end[side_idx(opposite(st.in))] = prev_far;
        tp.end[side_idx(st.in)] = near_id;
        items[st.sw].push_back({st.rank, 2, seq++, tp});
      }
      prev_far = near_id ^ 1;
    }
    const Step& last = walk[n - 1];
    if (target >= 0) {
      auto [tsw, ti] = mark_item[target];
      items[tsw][ti].tp.end[side_idx(last.far_side)] = prev_far;
    } else {
      TiePoint tp;
      tp.end[side_idx(last.far_side)] = prev_far;
      items[last.far_sw].push_back({last.far_rank, 2, seq++, tp});
    }
  }
  z.ties.assign(S, {});
  for (int sw = 0; sw < S; ++sw) {
    auto& list = items[sw];
    std::sort(list.begin(), list.end(), [](const Item& x, const Item& y) {
      return std::tie(x.rank, x.kind, x.seq) < std::tie(y.rank, y.kind, y.seq);
    });
    for (auto& it : list) z.ties[sw].push_back(it.tp);
  }
  return z;
}

ZipperPathSet pathset_from_zippers(const TrainTrack& t, const ZipperFamily& z, int r) {
  if (r < 1) throw ContractViolation("zipper radius must be >= 1");
  if (auto why = check_zipper_family(t, z); !why.empty()) throw ContractViolation("invalid zipper family: " + why);
  MarkTable m = mark_table(t);
  auto left = left_orders(t, z);
  std::vector<int> pos(2 * z.pieces.size());
  for (int id = 0; id < static_cast<int>(pos.size()); ++id) pos[id] = tie_position(t, z, id);

  using State = std::tuple<int, bool, int>;  // edge, forward, gap in left order
  auto step = [&](const State& st, std::set<State>& next) {
    auto [e, fwd, g] = st;
    const int k = fwd ? 1 : 0;
    const Slot& s = k == 1 ? t.edges()[e].end : t.edges()[e].start;
    const auto& tie = z.ties[s.sw];
    const auto& L = left[e];
    const int n = static_cast<int>(L.size());
    auto [lo, hi] = segment(t, m, tie, s);
    int lp = g > 0 ? pos[2 * L[g - 1] + k] : -2;
    int rp = g < n ? pos[2 * L[g] + k] : -2;
    if (!top_is_left(k, s.side)) std::swap(lp, rp);
    int upper = lp >= 0 ? lp : lo;
    int lower = rp >= 0 ? rp : hi;
    const Side y = opposite(s.side);
    for (int x = upper + 1; x <= lower; ++x) {
      if (x > 0 && tie[x - 1].blocked_below) continue;
      Slot s2{s.sw, y, marks_above(t, tie, y, x)};
      int ref = t.end_at(s2);
      auto [lo2, hi2] = segment(t, m, tie, s2);
      int above = 0;
      for (int i = lo2 + 1; i < x; ++i)
        if (tie[i].end[side_idx(y)] >= 0) ++above;
      int n2 = static_cast<int>(left[ref / 2].size());
      next.insert({ref / 2, ref % 2 == 0, top_is_left(ref % 2, y) ? above : n2 - above});
    }
  };
  auto walk = [&](State s0, EdgePath& out) {
    std::set<State> cur{s0};
    for (int i = 0; i < r; ++i) {
      std::set<State> next;
      for (const auto& st : cur) step(st, next);
      std::set<DirectedEdge> edges;
      for (const auto& [e, f, g] : next) edges.insert({e, f});
      if (edges.size() != 1) return false;
      out.push_back(*edges.begin());
      cur = std::move(next);
    }
    return true;
  };

  ZipperPathSet res;
  res.r = r;
  res.paths.r = 2 * r + 1;
  std::set<EdgePath> found;
  for (int e = 0; e < t.num_edges(); ++e) {
    for (int g = 0; g <= static_cast<int>(left[e].size()); ++g) {
      EdgePath fwd, back;
      if (!walk({e, true, g}, fwd) || !walk({e, false, g}, back)) {
        res.flagged.emplace_back(e, g);
        continue;
      }
      EdgePath gamma = reverse_path(back);
      gamma.push_back({e, true});
      gamma.insert(gamma.end(), fwd.begin(), fwd.end());
      found.insert(canonical_path(gamma));
    }
  }
  res.paths.paths.assign(found.begin(), found.end());
  return res;
}

PathFamilyCensus census_realized_families(const std::vector<Lamination>& sample, int r, int jobs) {
  if (r < 1) throw ContractViolation("census radius must be >= 1");
  PathFamilyCensus out;
  out.r = r;
  if (sample.empty()) return out;
  for (const auto& lam : sample)
    if (lam.track_ptr() != sample[0].track_ptr() && !(lam.track() == sample[0].track()))
      throw ContractViolation("census sample spans several tracks");
  const int len = 2 * r + 1;
  const int n = static_cast<int>(sample.size());
  std::vector<std::optional<std::string>> keys(n);
  parallel_for(n, jobs, [&](int i) { keys[i] = sample[i].backend().family_key(len); });
  bool keyed = true;
  for (int i = 0; i < n; ++i)
    keyed = keyed && keys[i] && sample[i].backend().key_family() == sample[0].backend().key_family();
  if (keyed) {
    std::unordered_set<std::string> distinct;
    distinct.reserve(keys.size());
    for (auto& k : keys) distinct.insert(std::move(*k));
    out.size = distinct.size();
    return out;
  }
  std::vector<std::vector<EdgePath>> sets(n);
  parallel_for(n, jobs, [&](int i) { sets[i] = realized_paths(sample[i], len).paths; });
  std::set<std::vector<EdgePath>> distinct(sets.begin(), sets.end());
  out.size = distinct.size();
  return out;
}

ZipperBounds zipper_bounds(const TrainTrack& track, int r) {
  ZipperBounds b;
  b.p = static_cast<int>(track.cusps().size());
  b.q = track.num_edges();
  b.chi = euler_characteristic(track);
  b.coarse = std::pow(2.0, b.p) * std::pow(static_cast<double>(b.p), b.p + b.q) * std::pow(static_cast<double>(r), b.p + b.q);
  b.better_exponent = 9 * std::abs(b.chi) - 1;
  return b;
}

}  // namespace ttlam
