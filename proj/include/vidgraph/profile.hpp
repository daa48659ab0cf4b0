#pragma once

/// \file profile.hpp
/// Per-user interest model. Dynamic indicators (clicks, dwell time, last
/// visit) accumulate per shot and map to a user weight Wu in [0,1):
///
///   score = clicks + dwell_seconds / 60
///   Wu    = score / (score + 1)
///
/// Wu personalizes edge weights by lifting, never lowering, the base
/// similarity.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "vidgraph/error.hpp"
#include "vidgraph/graph.hpp"

namespace vidgraph {

using Timestamp = std::int64_t;  // seconds since the Unix epoch

struct ShotStats {
  std::uint64_t clicks{};
  double dwell_seconds{};
  Timestamp last_seen{};

  friend bool operator==(const ShotStats&, const ShotStats&) = default;
};

struct UserProfile {
  std::string user_id;
  std::map<ShotId, ShotStats> stats;
  std::map<std::string, std::string> static_info;  // stored, not used for weighting

  const ShotStats* find(std::string_view shot) const {
    auto it = stats.find(std::string(shot));
    return it == stats.end() ? nullptr : &it->second;
  }

  friend bool operator==(const UserProfile&, const UserProfile&) = default;
};

enum class EventKind { click, dwell };

struct InteractionEvent {
  std::string user_id;
  ShotId shot_id;
  EventKind kind{EventKind::click};
  std::optional<double> dwell_seconds;  // present iff kind == dwell
  Timestamp timestamp{};
};

inline void validate_event(const InteractionEvent& e) {
  if (e.user_id.empty()) throw DomainError("event without user");
  if (e.shot_id.empty()) throw DomainError("event without shot");
  if (e.kind == EventKind::click && e.dwell_seconds) throw DomainError("click events carry no dwell_seconds");
  if (e.kind == EventKind::dwell && !(e.dwell_seconds && *e.dwell_seconds > 0.0))
    throw DomainError("dwell events need dwell_seconds > 0");
}

inline constexpr double kDwellSecondsPerClick = 60.0;

inline double user_weight(const UserProfile& profile, std::string_view shot) {
  const auto* s = profile.find(shot);
  if (!s) return 0.0;
  const double score = static_cast<double>(s->clicks) + s->dwell_seconds / kDwellSecondsPerClick;
  return score / (score + 1.0);
}

/// Applies one event. The shot must be a node of `graph`.
inline UserProfile record_event(UserProfile profile, const InteractionEvent& event, const ExplorationGraph& graph) {
  validate_event(event);
  if (!graph.contains(event.shot_id)) throw NotFoundError("unknown shot '" + event.shot_id + "'");
  auto& s = profile.stats[event.shot_id];
  if (event.kind == EventKind::click) ++s.clicks;
  else s.dwell_seconds += *event.dwell_seconds;
  s.last_seen = std::max(s.last_seen, event.timestamp);
  return profile;
}

/// max(base, (1 - lambda) * base + lambda * max(Wu(src), Wu(dst))).
/// Equals `base` bit-for-bit when lambda is 0 or both endpoints are untouched.
inline double effective_weight(double base, double wu_src, double wu_dst, double lambda) {
  const double blended = (1.0 - lambda) * base + lambda * std::max(wu_src, wu_dst);
  return std::clamp(std::max(base, blended), 0.0, 1.0);
}

inline double effective_weight(const GraphEdge& edge, const UserProfile& profile, double lambda) {
  return effective_weight(edge.base_weight, user_weight(profile, edge.src), user_weight(profile, edge.dst), lambda);
}

}  // namespace vidgraph
