#include "ttlam/track_io.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string_view>
#include <utility>

namespace ttlam {

namespace detail {
// Generated at configure time from assets/*.track.
const std::vector<std::pair<std::string_view, std::string_view>>& embedded_assets();
}  // namespace detail

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

struct RawSlot {
  std::string sw;
  Side side;
  int pos;
};

RawSlot parse_slot(const std::string& tok, int lineno) {
  auto bad = [&] { return ParseError("line " + std::to_string(lineno) + ": bad slot '" + tok + "'"); };
  auto c1 = tok.find(',');
  if (c1 == std::string::npos) throw bad();
  auto c2 = tok.find(',', c1 + 1);
  if (c2 == std::string::npos || tok.find(',', c2 + 1) != std::string::npos) throw bad();
  RawSlot s;
  s.sw = tok.substr(0, c1);
  std::string side = tok.substr(c1 + 1, c2 - c1 - 1);
  if (side == "A") {
    s.side = Side::A;
  } else if (side == "B") {
    s.side = Side::B;
  } else {
    throw bad();
  }
  std::string pos = tok.substr(c2 + 1);
  if (s.sw.empty() || pos.empty() || pos.size() > 6 || pos.find_first_not_of("0123456789") != std::string::npos)
    throw bad();
  s.pos = std::stoi(pos);
  return s;
}

}  // namespace

TrainTrack parse_track(const std::string& text, const std::string& name) {
  std::vector<std::string> switch_ids;
  std::vector<std::pair<std::string, std::pair<RawSlot, RawSlot>>> raw_edges;
  std::vector<RegionLabel> labels;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto w = split_ws(line);
    if (w.empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (w[0] == "switch") {
      if (w.size() != 2) throw ParseError(where + "expected 'switch <id>'");
      switch_ids.push_back(w[1]);
    } else if (w[0] == "edge") {
      if (w.size() != 4) throw ParseError(where + "expected 'edge <id> <sw,side,pos> <sw,side,pos>'");
      raw_edges.push_back({w[1], {parse_slot(w[2], lineno), parse_slot(w[3], lineno)}});
    } else if (w[0] == "region") {
      if (w.size() != 3) throw ParseError(where + "expected 'region <spikes> <kind>'");
      if (w[1].empty() || w[1].size() > 6 || w[1].find_first_not_of("0123456789") != std::string::npos)
        throw ParseError(where + "bad spike count '" + w[1] + "'");
      auto kind = region_kind_from_string(w[2]);
      if (!kind) throw ParseError(where + "unknown region kind '" + w[2] + "'");
      labels.push_back({std::stoi(w[1]), *kind});
    } else {
      throw ParseError(where + "unknown record '" + w[0] + "'");
    }
  }
  std::map<std::string, int> sw_index;
  for (std::size_t i = 0; i < switch_ids.size(); ++i) sw_index.emplace(switch_ids[i], static_cast<int>(i));
  std::vector<Edge> edges;
  for (auto& [id, ends] : raw_edges) {
    auto resolve = [&](const RawSlot& r) {
      auto it = sw_index.find(r.sw);
      if (it == sw_index.end()) throw StructuralError("edge '" + id + "' references unknown switch '" + r.sw + "'");
      return Slot{it->second, r.side, r.pos};
    };
    edges.push_back(Edge{id, resolve(ends.first), resolve(ends.second)});
  }
  return TrainTrack::build(name, std::move(switch_ids), std::move(edges), std::move(labels));
}

std::string serialize_track(const TrainTrack& track) {
  std::ostringstream out;
  auto slot = [&](const Slot& s) {
    return track.switches()[s.sw].id + "," + side_char(s.side) + "," + std::to_string(s.pos);
  };
  for (const auto& sw : track.switches()) out << "switch " << sw.id << "\n";
  for (const auto& e : track.edges()) out << "edge " << e.id << " " << slot(e.start) << " " << slot(e.end) << "\n";
  for (const auto& l : track.labels()) out << "region " << l.spikes << " " << to_string(l.kind) << "\n";
  return out.str();
}

TrainTrack load_track_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open track file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_track(ss.str(), std::filesystem::path(path).stem().string());
}

std::vector<std::string> bundled_track_names() {
  std::vector<std::string> out;
  for (const auto& [name, text] : detail::embedded_assets()) out.emplace_back(name);
  return out;
}

std::string bundled_track_text(const std::string& name) {
  for (const auto& [n, text] : detail::embedded_assets())
    if (n == name) return std::string(text);
  throw ParseError("unknown bundled track '" + name + "'");
}

TrainTrack bundled_track(const std::string& name) { return parse_track(bundled_track_text(name), name); }

TrainTrack resolve_track(const std::string& name_or_path) {
  for (const auto& [n, text] : detail::embedded_assets())
    if (n == name_or_path) return parse_track(std::string(text), name_or_path);
  return load_track_file(name_or_path);
}

}  // namespace ttlam
