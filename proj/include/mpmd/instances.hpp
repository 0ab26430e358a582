#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "mpmd/engine.hpp"
#include "mpmd/oracle.hpp"

namespace mpmd {

/// Nested adversarial family on a single point: m = 2^k requests on the time
/// axis. Inner gaps are shrunk by a factor (1 - eta) so that the intended
/// pairs fire strictly before the competing ones.
struct LowerBoundParams {
  int k = 1;
  double epsilon = 1.0;
  double eta = 1e-6;
  bool bipartite = false;  // colors alternate in time order
};

/// Two points at distance 2 + delta, each receiving an identical row of m/2
/// requests with gaps 1, delta, 1, ..., 1.
struct AppendixBParams {
  int m = 8;
  double delta = 0.1;
};

struct GapRecurrence {
  double a = 0.0;
  double b = 0.0;
};

/// a_i = b_i / (1 + eps), b_i = 2 b_{i-1} + a_{i-1}, b_1 = 1, unrolled.
GapRecurrence recurrence_ab(int i, double epsilon);
/// Closed form of the same recurrence.
GapRecurrence recurrence_ab_closed(int i, double epsilon);

Instance gen_lower_bound(const LowerBoundParams& params);

struct ExpectedLowerBound {
  std::vector<Pair> pairs;  // ids are 0-based in time order
  double weight = 0.0;      // unperturbed (eta -> 0) offline weight
};

ExpectedLowerBound expected_lower_bound_result(const LowerBoundParams& params);

/// Consecutive pairs (0,1), (2,3), ... of the lower-bound family; each has
/// weight 1, so this matching certifies OPT <= m / 2.
Matching lower_bound_consecutive_matching(const Instance& instance);

Instance gen_appendix_b(const AppendixBParams& params);

/// Both end columns matched across the two points, inner rows matched over
/// the short gaps. Weight 4 + (m/2) delta; an upper bound on OPT.
Matching appendix_b_cross_matching(const Instance& instance);

enum class RandomMetric { kLine, kEuclidean, kFinite };

struct RandomConfig {
  RandomMetric metric = RandomMetric::kLine;
  std::size_t dim = 2;            // euclidean dimension
  std::size_t finite_points = 5;  // points of a sampled finite metric
  double extent = 1.0;            // locations in [0, extent]^dim
  double horizon = 1.0;           // arrival times in [0, horizon]
  bool bipartite = false;
};

/// Parses "line", "euclidean:D" or "finite:N" into the metric part of a config.
RandomConfig parse_random_metric(const std::string& text);

/// Deterministic in (m, seed, config). Requests get ids 0..m-1 in arrival order.
Instance gen_random(std::size_t m, std::uint64_t seed, const RandomConfig& config);

std::string instance_to_json(const Instance& instance);
/// Throws Error with field context on malformed input.
Instance instance_from_json(const std::string& text);
Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& instance, const std::filesystem::path& path);

/// FNV-1a hash of the canonical JSON serialization, as 16 hex digits.
std::string instance_hash(const Instance& instance);

}  // namespace mpmd
