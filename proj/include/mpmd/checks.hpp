#pragma once

// Invariant checks shared by the verify command and the test suites. Each
// returns nullopt on success or a human-readable failure description.

#include <optional>
#include <string>

#include "mpmd/engine.hpp"
#include "mpmd/oracle.hpp"

namespace mpmd::checks {

using Result = std::optional<std::string>;

/// Every id in exactly one record; m/2 records.
Result perfect_matching(const RunReport& report, const Instance& instance);

/// match_time >= both arrivals, delays consistent, connection = d.
Result feasible_records(const RunReport& report, const Instance& instance);

/// online_cost = (1 + 2/epsilon) * offline_weight within relative 1e-9.
Result cost_identity(const RunReport& report, double epsilon);

/// Last-two-pairs inequalities. For the monochromatic hemisphere policy all
/// four; for the bipartite one the two admissible ones, with c taken as the
/// request of b's class. Slack: 1e-9 relative plus the event-order tolerance.
Result last_pairs(const RunReport& report, const Instance& instance);

/// Vertex-disjoint, covering, alternating cycles whose lengths sum to the
/// two matchings' weights.
Result cycle_structure(const CycleDecomposition& decomposition, const Matching& a,
                       const Matching& b, const Instance& instance);

/// weight(a) / weight(b) <= max_i l_i / l_i* + 1e-9.
Result cycle_ratio_bound(const CycleDecomposition& decomposition, const Matching& a,
                         const Matching& b);

/// Every pair crosses colors.
Result color_crossing(const Matching& matching, const Instance& instance);

/// Colors alternate around every cycle.
Result cycles_alternate_colors(const CycleDecomposition& decomposition, const Instance& instance);

/// For a bipartite run whose union with an optimum is one cycle: with (a,b), (c,d)
/// the last two pairs, t(a) <= t(b) and c the endpoint joined to a by the
/// path avoiding both pairs, class(a) = class(d) != class(b) = class(c).
/// Returns nullopt (vacuous) when there is more than one cycle or m < 4.
Result single_cycle_classes(const RunReport& report, const CycleDecomposition& decomposition,
                            const Instance& instance);

}  // namespace mpmd::checks
