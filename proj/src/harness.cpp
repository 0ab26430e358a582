#include "mpmd/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace mpmd {

double FTable::at(std::size_t m) const {
  if (m < 2 || m % 2 != 0 || m > max_m())
    throw Error("f(" + std::to_string(m) + ") is outside the table (even m in [2, " +
                std::to_string(max_m()) + "])");
  return values_[m / 2 - 1];
}

FTable eval_f(std::size_t m_max, double gamma) {
  if (!(gamma > 2.0) || !std::isfinite(gamma)) throw Error("gamma must be greater than 2");
  if (m_max < 2 || m_max % 2 != 0) throw Error("m_max must be an even number >= 2");
  const std::size_t k_max = m_max / 2;
  std::vector<double> f(k_max + 1, 0.0);  // f[k] = f(2k)
  f[1] = 1.0;
  for (std::size_t k = 2; k <= k_max; ++k) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < k; ++i)
      best = std::min({best, f[i], (f[i] + f[k - i]) / gamma});
    f[k] = best;
  }
  return FTable(gamma, std::vector<double>(f.begin() + 1, f.end()));
}

double f_lower_bound(std::size_t k, double gamma) {
  return std::pow(2.0 / gamma, std::log2(static_cast<double>(k)));
}

double theoretical_bound(std::size_t m, double epsilon) {
  if (!(epsilon > 0.0)) throw Error("epsilon must be positive");
  return 2.0 / eval_f(m, 3.0 + epsilon).at(m);
}

namespace {

double safe_ratio(double numerator, double denominator) {
  if (denominator > 0.0) return numerator / denominator;
  return numerator == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
}

}  // namespace

RatioReport compute_ratio(const Instance& instance, const PolicyId& policy) {
  const RunReport run = simulate(instance, policy);
  RatioReport report;
  report.m = instance.size();
  report.metric_kind = instance.space.kind_name();
  report.bipartite = instance.bipartite;
  report.policy = policy;
  report.online_cost = run.online_cost;
  report.offline_weight = run.offline_weight;

  if (policy.policy == Policy::kHemisphereBipartite) {
    report.opt_weight = opt_bipartite(instance).weight;
    report.opt_source = "bipartite";
  } else {
    if (instance.size() > kGeneralOracleLimit)
      throw Error("exact general oracle limited to m <= " + std::to_string(kGeneralOracleLimit) +
                  " (got m = " + std::to_string(instance.size()) +
                  "); use a smaller instance or a bipartite instance with policy hemisphere-b");
    report.opt_weight = opt_general(instance).weight;
    report.opt_source = "general";
  }
  report.ratio_online = safe_ratio(report.online_cost, report.opt_weight);
  report.ratio_offline = safe_ratio(report.offline_weight, report.opt_weight);
  if (is_hemisphere(policy.policy) && report.m >= 2) {
    report.bound_2_over_f = theoretical_bound(report.m, policy.epsilon);
    report.within_bound = report.ratio_offline <= *report.bound_2_over_f + 1e-9;
  }
  return report;
}

double fit_log_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw Error("slope fit needs at least two points");
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = std::log2(xs[i]);
    const double y = std::log2(ys[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw Error("slope fit needs at least two distinct x values");
  return (n * sxy - sx * sy) / denom;
}

namespace {

SweepRow make_row(const Instance& instance, const RunReport& run, const Matching& opt, bool exact) {
  SweepRow row;
  row.m = instance.size();
  row.online_cost = run.online_cost;
  row.offline_weight = run.offline_weight;
  row.opt_weight = opt.weight;
  row.exact_opt = exact;
  row.ratio_online = safe_ratio(run.online_cost, opt.weight);
  row.ratio_offline = safe_ratio(run.offline_weight, opt.weight);
  row.instance_hash = instance_hash(instance);
  return row;
}

void finish(SweepResult& result) {
  if (result.rows.size() < 2) return;
  std::vector<double> xs, ys;
  for (const auto& row : result.rows) {
    xs.push_back(static_cast<double>(row.m));
    ys.push_back(row.ratio_offline);
  }
  result.slope = fit_log_slope(xs, ys);
}

}  // namespace

SweepResult sweep_lower_bound(int k_min, int k_max, double epsilon, double eta) {
  if (k_min < 1 || k_max < k_min || k_max > 20) throw Error("lower-bound sweep needs 1 <= k_min <= k_max <= 20");
  SweepResult result;
  for (int k = k_min; k <= k_max; ++k) {
    const Instance instance = gen_lower_bound(LowerBoundParams{k, epsilon, eta, false});
    const RunReport run = simulate(instance, PolicyId{Policy::kHemisphere, epsilon});
    const bool exact = instance.size() <= kGeneralOracleLimit;
    const Matching opt = exact ? opt_general(instance) : lower_bound_consecutive_matching(instance);
    result.rows.push_back(make_row(instance, run, opt, exact));
  }
  finish(result);
  return result;
}

SweepResult sweep_appendix_b(const std::vector<int>& ms, const PolicyId& policy, double delta_scale,
                             bool delta_per_m) {
  if (ms.empty()) throw Error("appendix-b sweep needs at least one m");
  if (policy.policy == Policy::kHemisphereBipartite)
    throw Error("appendix-b instances are not bipartite");
  std::vector<int> sorted = ms;
  std::sort(sorted.begin(), sorted.end());
  SweepResult result;
  for (int m : sorted) {
    const double delta = delta_per_m ? delta_scale / m : delta_scale;
    const Instance instance = gen_appendix_b(AppendixBParams{m, delta});
    const RunReport run = simulate(instance, policy);
    const bool exact = instance.size() <= kGeneralOracleLimit;
    const Matching opt = exact ? opt_general(instance) : appendix_b_cross_matching(instance);
    result.rows.push_back(make_row(instance, run, opt, exact));
  }
  finish(result);
  return result;
}

std::string format_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, end);
}

std::string sweep_csv(const SweepResult& result, const std::string& family, const PolicyId& policy) {
  std::ostringstream out;
  out << "# mpmd " << kToolVersion << " family=" << family << " policy=" << policy_name(policy.policy)
      << " epsilon=" << format_number(policy.epsilon) << " seed=none\n";
  out << "m,ratio_online,ratio_offline,online_cost,offline_weight,opt_weight,opt_exact,instance\n";
  for (const auto& row : result.rows)
    out << row.m << ',' << format_number(row.ratio_online) << ',' << format_number(row.ratio_offline)
        << ',' << format_number(row.online_cost) << ',' << format_number(row.offline_weight) << ','
        << format_number(row.opt_weight) << ',' << (row.exact_opt ? "true" : "false") << ','
        << row.instance_hash << '\n';
  out << "# slope=" << format_number(result.slope) << '\n';
  return out.str();
}

std::string records_csv(const RunReport& report, const Instance& instance) {
  std::ostringstream out;
  out << "# mpmd " << kToolVersion << " policy=" << policy_name(report.policy.policy)
      << " epsilon=" << format_number(report.policy.epsilon) << " seed=none instance="
      << instance_hash(instance) << '\n';
  out << "p,q,match_time,connection,delay_p,delay_q\n";
  for (const auto& r : report.records)
    out << r.p << ',' << r.q << ',' << format_number(r.match_time) << ','
        << format_number(r.connection) << ',' << format_number(r.delay_p) << ','
        << format_number(r.delay_q) << '\n';
  return out.str();
}

}  // namespace mpmd
