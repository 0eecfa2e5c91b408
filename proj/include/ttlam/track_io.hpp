#pragma once

#include <string>
#include <vector>

#include "ttlam/track.hpp"

namespace ttlam {

/// Parses the line format
///   switch <id>
///   edge <id> <sw,side,pos> <sw,side,pos>
///   region <spikes> <annular|disc|peripheral>
/// with `#` comments. Throws ParseError on syntax, StructuralError on dangling references.
TrainTrack parse_track(const std::string& text, const std::string& name);

/// Canonical text form; parse_track(serialize_track(t), t.name()) == t.
std::string serialize_track(const TrainTrack& track);

TrainTrack load_track_file(const std::string& path);

/// Bundled assets: "torus", "sphere4", "genus2".
std::vector<std::string> bundled_track_names();
std::string bundled_track_text(const std::string& name);  // throws ParseError if unknown
TrainTrack bundled_track(const std::string& name);

/// A bundled name, or else a path to a .track file.
TrainTrack resolve_track(const std::string& name_or_path);

}  // namespace ttlam
