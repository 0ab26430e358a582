#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mpmd/engine.hpp"
#include "mpmd/instances.hpp"
#include "mpmd/oracle.hpp"

namespace mpmd {

inline constexpr const char* kToolVersion = "0.1.0";

/// Values f(2), f(4), ..., f(m_max) of the single-cycle recurrence
/// f(2k) = min_{1<=i<=k-1} min{ f(2i), (f(2i) + f(2k-2i)) / gamma }, f(2) = 1.
class FTable {
 public:
  FTable(double gamma, std::vector<double> values) : gamma_(gamma), values_(std::move(values)) {}

  double gamma() const { return gamma_; }
  /// f(m) for even m in [2, max_m()].
  double at(std::size_t m) const;
  std::size_t max_m() const { return 2 * values_.size(); }
  const std::vector<double>& values() const { return values_; }

 private:
  double gamma_;
  std::vector<double> values_;  // values_[k - 1] = f(2k)
};

/// Exact evaluation of the recurrence; throws Error when gamma <= 2 or
/// m_max is not an even number >= 2.
FTable eval_f(std::size_t m_max, double gamma);

/// (2/gamma)^{log2 k}, the closed-form lower bound on f(2k).
double f_lower_bound(std::size_t k, double gamma);

/// 2 / f(m) with gamma = 3 + epsilon: the upper bound on the offline ratio.
double theoretical_bound(std::size_t m, double epsilon);

struct RatioReport {
  std::size_t m = 0;
  std::string metric_kind;
  bool bipartite = false;
  PolicyId policy;
  double online_cost = 0.0;
  double offline_weight = 0.0;
  double opt_weight = 0.0;
  std::string opt_source;  // "general", "bipartite"
  double ratio_online = 0.0;
  double ratio_offline = 0.0;
  std::optional<double> bound_2_over_f;  // hemisphere policies only
  std::optional<bool> within_bound;
};

/// Runs the policy and the matching exact oracle (bipartite oracle for the
/// bipartite policy, subset DP otherwise). Throws Error when the general
/// oracle's size limit is exceeded.
RatioReport compute_ratio(const Instance& instance, const PolicyId& policy);

enum class SweepFamily { kLowerBound, kAppendixB };

struct SweepRow {
  std::size_t m = 0;
  double online_cost = 0.0;
  double offline_weight = 0.0;
  double opt_weight = 0.0;
  bool exact_opt = false;  // false: opt_weight is an explicit upper bound on OPT
  double ratio_online = 0.0;
  double ratio_offline = 0.0;
  std::string instance_hash;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double slope = 0.0;  // least-squares slope of log2(ratio_offline) against log2(m)
};

/// Lower-bound family for k in [k_min, k_max] under the hemisphere policy.
SweepResult sweep_lower_bound(int k_min, int k_max, double epsilon, double eta = 1e-6);

/// Appendix-B family for each m; delta = delta_scale / m when
/// `delta_per_m`, otherwise delta = delta_scale.
SweepResult sweep_appendix_b(const std::vector<int>& ms, const PolicyId& policy, double delta_scale,
                             bool delta_per_m);

/// CSV with a `#` header line (tool version, epsilon, seed), one row per m and a trailing
/// `# slope=` line. Byte-identical for identical inputs.
std::string sweep_csv(const SweepResult& result, const std::string& family, const PolicyId& policy);

/// Records CSV: a `#` header line (tool version, epsilon, seed), then p,q,match_time,connection,delay_p,delay_q.
std::string records_csv(const RunReport& report, const Instance& instance);

/// Shortest round-trip decimal representation.
std::string format_number(double value);

/// Least-squares slope of log2(y) against log2(x).
double fit_log_slope(const std::vector<double>& xs, const std::vector<double>& ys);

struct VerifyOptions {
  std::size_t count = 200;
  std::size_t max_m = 12;
  std::uint64_t seed = 1;
  std::vector<double> epsilons{0.1, 0.5, 1.0, 2.0};
  /// Mutation hook: simulate with epsilon * this factor while checking the
  /// cost identity against the nominal epsilon. 1.0 means no fault.
  double fault_epsilon_scale = 1.0;
  bool include_families = true;
};

struct InvariantTally {
  std::string name;
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::string first_failure;
};

struct VerifyReport {
  std::vector<InvariantTally> invariants;
  bool passed() const;
  const InvariantTally* find(const std::string& name) const;
};

/// Runs every invariant check on seeded random instances and on the two
/// adversarial families.
VerifyReport run_verify(const VerifyOptions& options);

}  // namespace mpmd
