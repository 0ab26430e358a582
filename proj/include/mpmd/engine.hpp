#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mpmd/metric.hpp"

namespace mpmd {

using RequestId = std::int64_t;

struct Request {
  RequestId id = 0;
  TimedPoint point;
  std::optional<int> color;  // 0 or 1, present iff the instance is bipartite

  double arrival() const { return point.time; }
  bool operator==(const Request&) const = default;
};

struct Instance {
  MetricSpace space = MetricSpace::line();
  std::vector<Request> requests;
  bool bipartite = false;

  std::size_t size() const { return requests.size(); }

  /// Throws Error on: odd request count, duplicate or negative ids, invalid
  /// locations, non-finite times, colors present/absent inconsistently with
  /// `bipartite`, or unbalanced colors.
  void validate() const;

  /// Position of the request with the given id; throws Error if unknown.
  std::size_t position_of(RequestId id) const;

  bool operator==(const Instance&) const = default;
};

enum class Policy {
  kHemisphere,
  kHemisphereBipartite,
  kNoTimeMin,
  kNoTimeLate,
  kNoTimeEarly,
};

struct PolicyId {
  Policy policy = Policy::kHemisphere;
  double epsilon = 1.0;

  bool operator==(const PolicyId&) const = default;
};

std::string policy_name(Policy policy);
/// Parses the CLI spelling: hemisphere, hemisphere-b, notime-min, notime-late, notime-early.
Policy parse_policy(const std::string& name);
bool is_hemisphere(Policy policy);

struct MatchRecord {
  RequestId p = 0;  // earlier arrival
  RequestId q = 0;  // later arrival
  double match_time = 0.0;
  double connection = 0.0;
  double delay_p = 0.0;
  double delay_q = 0.0;

  bool operator==(const MatchRecord&) const = default;
};

struct RunReport {
  PolicyId policy;
  std::vector<MatchRecord> records;  // in firing order
  double online_cost = 0.0;
  double offline_weight = 0.0;

  bool operator==(const RunReport&) const = default;
};

/// Absolute tolerance under which event times count as simultaneous.
inline constexpr double kEventTolerance = 1e-9;

/// Earliest time the pair may be matched when both are still unmatched;
/// +infinity for pairs the policy never matches (same color under the
/// bipartite policy). Throws Error when epsilon <= 0.
double event_time(const PolicyId& policy, const Request& p, const Request& q,
                  const MetricSpace& space);

/// Runs the online policy to completion. Events fire in order of event time;
/// events whose times lie within kEventTolerance of the earliest pending
/// event are ordered by (owner id, other id), where the owner is the later
/// arrival (the earlier arrival for kNoTimeEarly).
RunReport simulate(const Instance& instance, const PolicyId& policy);

/// Sum of connection plus both delays over the records.
double online_cost(std::span<const MatchRecord> records);

/// Sum of time-augmented distances over the matched pairs.
double offline_weight(std::span<const MatchRecord> records, const Instance& instance);

}  // namespace mpmd
