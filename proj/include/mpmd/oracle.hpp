#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mpmd/engine.hpp"

namespace mpmd {

using Pair = std::pair<RequestId, RequestId>;

/// A perfect matching. Pairs are stored with the smaller id first and sorted.
struct Matching {
  std::vector<Pair> pairs;
  double weight = 0.0;

  bool operator==(const Matching&) const = default;
};

/// Canonical matching (sorted pairs, weight recomputed under the
/// time-augmented metric). Throws Error unless the pairs partition the ids.
Matching make_matching(std::vector<Pair> pairs, const Instance& instance);

/// The matching an online run produced.
Matching matching_of(const RunReport& report, const Instance& instance);

inline constexpr std::size_t kGeneralOracleLimit = 20;
inline constexpr std::size_t kBruteForceLimit = 10;

/// Exact minimum-weight perfect matching by subset dynamic programming.
/// Requires m <= kGeneralOracleLimit. Among equal-weight optima the
/// lexicographically smallest pair list wins.
Matching opt_general(const Instance& instance);

/// Exact minimum-weight color-crossing perfect matching (assignment problem).
Matching opt_bipartite(const Instance& instance);

/// Exhaustive enumeration of all perfect matchings (color-crossing ones for
/// bipartite instances). Requires m <= kBruteForceLimit.
Matching brute_force_opt(const Instance& instance);

/// Minimum-cost assignment of rows to columns of a square cost matrix;
/// returns the column assigned to each row.
std::vector<std::size_t> min_cost_assignment(const DistanceMatrix& cost);

/// Online cost of matching each pair as soon as both endpoints have arrived.
double realize_online(const Matching& matching, const Instance& instance);

struct Cycle {
  std::vector<RequestId> vertices;  // in traversal order, starting at the smallest id
  double length_a = 0.0;            // total weight of first-matching edges
  double length_b = 0.0;            // total weight of second-matching edges
};

struct CycleDecomposition {
  std::vector<Cycle> cycles;
};

/// Alternating cycles of the union of two perfect matchings on the same ids.
/// A pair shared by both matchings forms a two-vertex cycle.
CycleDecomposition cycle_decompose(const Matching& a, const Matching& b, const Instance& instance);

/// Sub-instance induced by a set of request ids (ids and order preserved).
Instance restrict_instance(const Instance& instance, const std::vector<RequestId>& ids);

struct RestrictionCounterexample {
  std::size_t cycle_index = 0;
  std::vector<Pair> expected;  // the run's pairs inside the cycle
  std::vector<Pair> actual;    // pairs from re-running on the cycle alone
  std::string describe() const;
};

/// For every cycle, re-runs the report's policy on the requests of that cycle
/// and compares the resulting pairs with the report's pairs inside the cycle.
std::optional<RestrictionCounterexample> restriction_check(const Instance& instance,
                                                           const RunReport& report,
                                                           const CycleDecomposition& decomposition);

}  // namespace mpmd
