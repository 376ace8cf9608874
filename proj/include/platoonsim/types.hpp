// Core aliases and small helpers shared by every module.
//
// Times are integer seconds since an arbitrary epoch (midnight of the
// simulated day). Money is SEK as IEEE double; files print money with six
// decimals, which is the resolution of every published figure.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace platoonsim {

using HubId = std::int32_t;
using TruckId = std::int32_t;
using Seconds = std::int64_t;
using Money = double;

inline constexpr int kFormatVersion = 1;

/// A directed road segment between two hubs, used as a map/grouping key.
struct Edge {
  HubId from = -1;
  HubId to = -1;
  auto operator<=>(const Edge&) const = default;
};

/// Malformed input file (bad JSON, missing field, wrong type).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structurally well-formed input that violates a model invariant
/// (dangling hub id, non-positive travel time, infeasible deadline, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed six-decimal rendering used by every CSV/ledger writer.
/// Negative zero is normalized so reruns and identities are byte-stable.
std::string format_money(Money v);

/// Shortest decimal that still reads back clean for ratios like alpha.
std::string format_ratio(double v);

/// FNV-1a 64-bit over bytes; content hashes in manifests use this
/// (stable across platforms, no crypto dependency).
std::uint64_t fnv1a64(std::string_view bytes);

/// "fnv1a64:<16 hex digits>"
std::string content_hash_string(std::string_view bytes);

}  // namespace platoonsim
