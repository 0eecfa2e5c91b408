#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace ttlam {

using Rational = boost::rational<std::int64_t>;

/// The two directions of the tangent line at a switch.
enum class Side : std::uint8_t { A = 0, B = 1 };

constexpr Side opposite(Side s) { return s == Side::A ? Side::B : Side::A; }
constexpr char side_char(Side s) { return s == Side::A ? 'A' : 'B'; }

/// Attachment point of an edge end: switch index, side, position in that
/// side's top-to-bottom order.
struct Slot {
  int sw = -1;
  Side side = Side::A;
  int pos = -1;

  friend auto operator<=>(const Slot&, const Slot&) = default;
};

struct DirectedEdge {
  int edge = -1;
  bool forward = true;

  [[nodiscard]] DirectedEdge reversed() const { return {edge, !forward}; }

  friend bool operator==(const DirectedEdge&, const DirectedEdge&) = default;
  // Order: by edge index, forward before backward.
  friend std::strong_ordering operator<=>(const DirectedEdge& a, const DirectedEdge& b) {
    if (auto c = a.edge <=> b.edge; c != 0) return c;
    return static_cast<int>(!a.forward) <=> static_cast<int>(!b.forward);
  }
};

using EdgePath = std::vector<DirectedEdge>;

EdgePath reverse_path(const EdgePath& p);

/// Unoriented canonical form: lexicographic minimum of the path and its reverse.
EdgePath canonical_path(const EdgePath& p);

// Error taxonomy. Every error carries a stable machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what) : std::runtime_error(what), code_(std::move(code)) {}
  [[nodiscard]] const std::string& code() const { return code_; }

 private:
  std::string code_;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error("parse", what) {}
};

/// Unresolvable references or malformed ribbon data.
class StructuralError : public Error {
 public:
  explicit StructuralError(const std::string& what) : Error("structural", what) {}
};

class ContractViolation : public Error {
 public:
  explicit ContractViolation(const std::string& what) : Error("contract", what) {}
};

/// A backend was asked for a depth beyond what it can certify.
class DepthLimitError : public Error {
 public:
  DepthLimitError(int requested, int supported)
      : Error("depth_limit", "requested depth " + std::to_string(requested) + " exceeds supported depth " +
                                 std::to_string(supported)),
        requested_(requested),
        supported_(supported) {}
  [[nodiscard]] int requested() const { return requested_; }
  [[nodiscard]] int supported() const { return supported_; }

 private:
  int requested_;
  int supported_;
};

/// An enumeration exceeded its cap. partial_count is a lower bound on the true count.
class EnumerationLimitError : public Error {
 public:
  EnumerationLimitError(std::uint64_t cap, std::uint64_t partial)
      : Error("enumeration_limit",
              "enumeration cap " + std::to_string(cap) + " exceeded (partial count " + std::to_string(partial) + ")"),
        cap_(cap),
        partial_(partial) {}
  [[nodiscard]] std::uint64_t cap() const { return cap_; }
  [[nodiscard]] std::uint64_t partial_count() const { return partial_; }

 private:
  std::uint64_t cap_;
  std::uint64_t partial_;
};

}  // namespace ttlam
