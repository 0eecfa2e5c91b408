#pragma once

#include <climits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ttlam/track.hpp"

namespace ttlam {

/// Canonical, sorted, duplicate-free unoriented paths of one length.
struct RealizedPathSet {
  int r = 0;
  std::vector<EdgePath> paths;

  [[nodiscard]] bool contains(const EdgePath& p) const;
  friend bool operator==(const RealizedPathSet&, const RealizedPathSet&) = default;
};

/// Source of a realized edge-path language.
class LanguageBackend {
 public:
  virtual ~LanguageBackend() = default;
  [[nodiscard]] virtual std::string tag() const = 0;
  /// Largest length the backend can answer exactly.
  [[nodiscard]] virtual int max_depth() const { return INT_MAX; }
  /// Canonical sorted unique paths of length r; r is in [1, max_depth()].
  [[nodiscard]] virtual std::vector<EdgePath> paths(int r) const = 0;
  /// Equal keys imply equal languages. Empty when no such certificate exists.
  [[nodiscard]] virtual std::optional<std::string> identity_key() const { return std::nullopt; }
  /// Optional cheap key with key equality iff equality of the length-n sets,
  /// comparable only between backends reporting the same key_family().
  [[nodiscard]] virtual std::optional<std::string> family_key(int /*length*/) const { return std::nullopt; }
  [[nodiscard]] virtual std::string key_family() const { return tag(); }
};

class Lamination {
 public:
  Lamination(std::shared_ptr<const TrainTrack> track, std::shared_ptr<const LanguageBackend> backend);

  [[nodiscard]] const TrainTrack& track() const { return *track_; }
  [[nodiscard]] const std::shared_ptr<const TrainTrack>& track_ptr() const { return track_; }
  [[nodiscard]] const LanguageBackend& backend() const { return *backend_; }
  [[nodiscard]] std::string tag() const { return backend_->tag(); }
  [[nodiscard]] int max_depth() const { return backend_->max_depth(); }

 private:
  std::shared_ptr<const TrainTrack> track_;
  std::shared_ptr<const LanguageBackend> backend_;
};

/// Throws DepthLimitError past the backend's depth, ContractViolation for r < 1.
RealizedPathSet realized_paths(const Lamination& lam, int r);

/// Oriented cyclic factors of closed loops.
class PeriodicBackend : public LanguageBackend {
 public:
  explicit PeriodicBackend(std::vector<EdgePath> loops);
  [[nodiscard]] std::string tag() const override { return "periodic"; }
  [[nodiscard]] std::vector<EdgePath> paths(int r) const override;
  [[nodiscard]] std::optional<std::string> identity_key() const override;
  [[nodiscard]] const std::vector<EdgePath>& loops() const { return loops_; }

 private:
  std::vector<EdgePath> loops_;  // canonical, distinct
};

/// Path sets listed per length; used for fixtures and fault injection.
class ExplicitBackend : public LanguageBackend {
 public:
  /// by_length[k] holds the paths of length k+1.
  explicit ExplicitBackend(std::vector<std::vector<EdgePath>> by_length);
  [[nodiscard]] std::string tag() const override { return "explicit-language"; }
  [[nodiscard]] int max_depth() const override { return static_cast<int>(sets_.size()); }
  [[nodiscard]] std::vector<EdgePath> paths(int r) const override { return sets_.at(r - 1); }

 private:
  std::vector<std::vector<EdgePath>> sets_;
};

Lamination from_loops(std::shared_ptr<const TrainTrack> track, const std::vector<EdgePath>& loops);

/// Periodic lamination of the multicurve carried with weights w.
/// Throws ContractViolation for a zero, negative, non-integral or relation-violating w.
Lamination from_multicurve(std::shared_ptr<const TrainTrack> track, const WeightSystem& w);

/// Copies the language of `source` at lengths 1..depth into an explicit backend.
Lamination materialize(const Lamination& source, int depth);

Lamination from_explicit(std::shared_ptr<const TrainTrack> track, std::vector<std::vector<EdgePath>> by_length);

/// Realized sets agree at exactly length r. Throws ContractViolation for different tracks.
bool equal_up_to_depth(const Lamination& a, const Lamination& b, int r);

/// Equal identity keys (language equality certified without enumeration).
bool provably_equal(const Lamination& a, const Lamination& b);

/// One path per line, `id+`/`id-` tokens.
std::string format_path_set(const TrainTrack& track, const RealizedPathSet& set);

}  // namespace ttlam
