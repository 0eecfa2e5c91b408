#include "ttlam/lamination.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ttlam {

bool RealizedPathSet::contains(const EdgePath& p) const {
  return std::binary_search(paths.begin(), paths.end(), canonical_path(p));
}

Lamination::Lamination(std::shared_ptr<const TrainTrack> track, std::shared_ptr<const LanguageBackend> backend)
    : track_(std::move(track)), backend_(std::move(backend)) {
  if (!track_ || !backend_) throw ContractViolation("lamination needs a track and a backend");
}

RealizedPathSet realized_paths(const Lamination& lam, int r) {
  if (r < 1) throw ContractViolation("realized_paths requires r >= 1");
  if (r > lam.max_depth()) throw DepthLimitError(r, lam.max_depth());
  return RealizedPathSet{r, lam.backend().paths(r)};
}

namespace {

std::vector<EdgePath> canonical_unique(std::vector<EdgePath> v) {
  for (auto& p : v) p = canonical_path(p);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

PeriodicBackend::PeriodicBackend(std::vector<EdgePath> loops) {
  for (auto& l : loops) {
    if (l.empty()) throw ContractViolation("empty loop");
    l = canonical_loop(l);
  }
  std::sort(loops.begin(), loops.end());
  loops.erase(std::unique(loops.begin(), loops.end()), loops.end());
  if (loops.empty()) throw ContractViolation("a lamination needs at least one leaf");
  loops_ = std::move(loops);
}

std::vector<EdgePath> PeriodicBackend::paths(int r) const {
  std::vector<EdgePath> out;
  for (const auto& loop : loops_) {
    const std::size_t n = loop.size();
    for (std::size_t s = 0; s < n; ++s) {
      EdgePath p(r);
      for (int k = 0; k < r; ++k) p[k] = loop[(s + k) % n];
      out.push_back(std::move(p));
    }
  }
  return canonical_unique(std::move(out));
}

std::optional<std::string> PeriodicBackend::identity_key() const {
  std::ostringstream key;
  key << "periodic:";
  for (std::size_t i = 0; i < loops_.size(); ++i) {
    if (i) key << '|';
    for (auto d : loops_[i]) key << d.edge << (d.forward ? '+' : '-');
  }
  return key.str();
}

ExplicitBackend::ExplicitBackend(std::vector<std::vector<EdgePath>> by_length) {
  for (std::size_t k = 0; k < by_length.size(); ++k) {
    for (const auto& p : by_length[k])
      if (p.size() != k + 1) throw ContractViolation("explicit language path has the wrong length");
    sets_.push_back(canonical_unique(std::move(by_length[k])));
  }
}

Lamination from_loops(std::shared_ptr<const TrainTrack> track, const std::vector<EdgePath>& loops) {
  for (const auto& l : loops) {
    EdgePath twice = l;
    twice.insert(twice.end(), l.begin(), l.end());
    if (!is_legal(*track, twice)) throw ContractViolation("loop " + track->format_path(l) + " is not legal");
  }
  return Lamination(std::move(track), std::make_shared<PeriodicBackend>(loops));
}

Lamination from_multicurve(std::shared_ptr<const TrainTrack> track, const WeightSystem& w) {
  if (std::all_of(w.begin(), w.end(), [](const Rational& x) { return x == Rational(0); }))
    throw ContractViolation("zero weight system carries no lamination");
  auto loops = multicurve_from_weights(*track, w);
  return Lamination(std::move(track), std::make_shared<PeriodicBackend>(std::move(loops)));
}

Lamination materialize(const Lamination& source, int depth) {
  std::vector<std::vector<EdgePath>> sets;
  for (int r = 1; r <= depth; ++r) sets.push_back(realized_paths(source, r).paths);
  return Lamination(source.track_ptr(), std::make_shared<ExplicitBackend>(std::move(sets)));
}

Lamination from_explicit(std::shared_ptr<const TrainTrack> track, std::vector<std::vector<EdgePath>> by_length) {
  return Lamination(std::move(track), std::make_shared<ExplicitBackend>(std::move(by_length)));
}

namespace {

void require_same_track(const Lamination& a, const Lamination& b) {
  if (a.track_ptr() != b.track_ptr() && !(a.track() == b.track()))
    throw ContractViolation("laminations live on different tracks");
}

}  // namespace

bool provably_equal(const Lamination& a, const Lamination& b) {
  auto ka = a.backend().identity_key();
  auto kb = b.backend().identity_key();
  return ka && kb && *ka == *kb;
}

bool equal_up_to_depth(const Lamination& a, const Lamination& b, int r) {
  require_same_track(a, b);
  if (r < 1) throw ContractViolation("equal_up_to_depth requires r >= 1");
  if (r > a.max_depth()) throw DepthLimitError(r, a.max_depth());
  if (r > b.max_depth()) throw DepthLimitError(r, b.max_depth());
  if (&a.backend() == &b.backend() || provably_equal(a, b)) return true;
  if (a.backend().key_family() == b.backend().key_family()) {
    auto ka = a.backend().family_key(r);
    if (ka) {
      auto kb = b.backend().family_key(r);
      if (kb) return *ka == *kb;
    }
  }
  return realized_paths(a, r) == realized_paths(b, r);
}

std::string format_path_set(const TrainTrack& track, const RealizedPathSet& set) {
  std::string out;
  for (const auto& p : set.paths) {
    out += track.format_path(p);
    out += '\n';
  }
  return out;
}

}  // namespace ttlam
