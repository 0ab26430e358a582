// mpmd: command-line front end for the online matching-with-delays lab.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mpmd/harness.hpp"

using nlohmann::ordered_json;

namespace {

ordered_json meta(std::optional<double> epsilon, std::optional<std::uint64_t> seed,
                  const std::string& instance_hash) {
  ordered_json j;
  j["tool"] = "mpmd";
  j["version"] = mpmd::kToolVersion;
  j["epsilon"] = epsilon ? ordered_json(*epsilon) : ordered_json(nullptr);
  j["seed"] = seed ? ordered_json(*seed) : ordered_json(nullptr);
  j["instance"] = instance_hash.empty() ? ordered_json(nullptr) : ordered_json(instance_hash);
  return j;
}

ordered_json matching_json(const mpmd::Matching& matching) {
  ordered_json pairs = ordered_json::array();
  for (const auto& [p, q] : matching.pairs) pairs.push_back({p, q});
  return {{"pairs", pairs}, {"weight", matching.weight}};
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw mpmd::Error("cannot write " + path);
  out << text;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      values.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw mpmd::Error("invalid integer list '" + text + "'");
    }
  }
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online min-cost perfect matching with delays: simulator, oracles and experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("mpmd ") + mpmd::kToolVersion);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate an instance file");
  gen->require_subcommand(1);
  std::string out_path;

  auto* gen_lb = gen->add_subcommand("lower-bound", "Nested single-point family with m = 2^k requests");
  mpmd::LowerBoundParams lb;
  gen_lb->add_option("--k", lb.k, "log2 of the request count")->required()->check(CLI::Range(1, 30));
  gen_lb->add_option("--epsilon", lb.epsilon, "Growth rate the family targets")->required();
  gen_lb->add_option("--eta", lb.eta, "Inner-gap shrink factor")->capture_default_str();
  gen_lb->add_flag("--bipartite", lb.bipartite, "Alternate colors in time order");
  gen_lb->add_option("-o,--output", out_path, "Output file")->required();

  auto* gen_b = gen->add_subcommand("appendix-b", "Two-point family defeating space-only policies");
  mpmd::AppendixBParams ab;
  gen_b->add_option("--m", ab.m, "Request count (multiple of 4, >= 8)")->required();
  gen_b->add_option("--delta", ab.delta, "Short gap")->required();
  gen_b->add_option("-o,--output", out_path, "Output file")->required();

  auto* gen_r = gen->add_subcommand("random", "Seeded random instance");
  std::size_t random_m = 0;
  std::uint64_t random_seed = 0;
  std::string random_metric = "line";
  bool random_bipartite = false;
  double horizon = 1.0, extent = 1.0;
  gen_r->add_option("--m", random_m, "Request count (even)")->required();
  gen_r->add_option("--seed", random_seed, "RNG seed")->required();
  gen_r->add_option("--metric", random_metric, "line | euclidean:D | finite:N")->capture_default_str();
  gen_r->add_flag("--bipartite", random_bipartite, "Balanced random colors");
  gen_r->add_option("--horizon", horizon, "Arrival times in [0, horizon]")->capture_default_str();
  gen_r->add_option("--extent", extent, "Locations in [0, extent]^dim")->capture_default_str();
  gen_r->add_option("-o,--output", out_path, "Output file")->required();

  // run
  auto* run = app.add_subcommand("run", "Simulate a policy on an instance");
  std::string in_path, policy_text, format = "csv", summary_path;
  double epsilon = 1.0;
  run->add_option("-i,--input", in_path, "Instance file")->required();
  run->add_option("--policy", policy_text, "hemisphere | hemisphere-b | notime-min | notime-late | notime-early")
      ->required();
  run->add_option("--epsilon", epsilon, "Growth rate")->required();
  run->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  run->add_option("--summary", summary_path, "Also write the summary JSON to this file");

  // opt
  auto* opt = app.add_subcommand("opt", "Exact offline optimum");
  bool opt_bipartite = false;
  opt->add_option("-i,--input", in_path, "Instance file")->required();
  opt->add_flag("--bipartite", opt_bipartite, "Color-crossing optimum");

  // ratio
  auto* ratio = app.add_subcommand("ratio", "Competitive ratio of one run against the exact optimum");
  ratio->add_option("-i,--input", in_path, "Instance file")->required();
  ratio->add_option("--policy", policy_text, "Policy")->required();
  ratio->add_option("--epsilon", epsilon, "Growth rate")->required();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Ratio growth over an adversarial family");
  std::string family;
  int k_min = 4, k_max = 10;
  double eta = 1e-6;
  std::string m_list = "16,32,64,128";
  std::optional<double> delta;
  double delta_per_m = 1.0;
  std::string sweep_policy = "notime-min";
  sweep->add_option("--family", family, "lower-bound | appendix-b")
      ->required()
      ->check(CLI::IsMember({"lower-bound", "appendix-b"}));
  sweep->add_option("--epsilon", epsilon, "Growth rate")->capture_default_str();
  sweep->add_option("--k-min", k_min, "lower-bound: smallest k")->capture_default_str();
  sweep->add_option("--k-max", k_max, "lower-bound: largest k")->capture_default_str();
  sweep->add_option("--eta", eta, "lower-bound: inner-gap shrink factor")->capture_default_str();
  sweep->add_option("--m", m_list, "appendix-b: comma-separated request counts")->capture_default_str();
  sweep->add_option("--delta", delta, "appendix-b: fixed short gap (default: delta = scale/m)");
  sweep->add_option("--delta-scale", delta_per_m, "appendix-b: delta = scale/m")->capture_default_str();
  sweep->add_option("--policy", sweep_policy, "appendix-b: policy")->capture_default_str();
  sweep->add_option("-o,--output", out_path, "Output CSV (default stdout)");

  // bound
  auto* bound = app.add_subcommand("bound", "Evaluate the recurrence and the 2/f(m) bound");
  std::size_t bound_m = 2;
  bound->add_option("--m", bound_m, "Even request count")->required();
  bound->add_option("--epsilon", epsilon, "Growth rate")->required();

  // verify
  auto* verify = app.add_subcommand("verify", "Run the invariant suite on seeded instances");
  mpmd::VerifyOptions vopt;
  bool inject_fault = false, verify_json = false;
  verify->add_option("--count", vopt.count, "Random instances")->capture_default_str();
  verify->add_option("--max-m", vopt.max_m, "Largest request count")->capture_default_str();
  verify->add_option("--seed", vopt.seed, "Base seed")->capture_default_str();
  verify->add_option("--epsilon", vopt.epsilons, "Growth rates")->delimiter(',');
  verify->add_flag("--inject-fault", inject_fault, "Mutation check: simulate with 2*epsilon");
  verify->add_flag("--json", verify_json, "JSON report");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      mpmd::Instance instance;
      if (gen_lb->parsed()) {
        instance = mpmd::gen_lower_bound(lb);
      } else if (gen_b->parsed()) {
        instance = mpmd::gen_appendix_b(ab);
      } else {
        auto config = mpmd::parse_random_metric(random_metric);
        config.bipartite = random_bipartite;
        config.horizon = horizon;
        config.extent = extent;
        instance = mpmd::gen_random(random_m, random_seed, config);
      }
      mpmd::save_instance(instance, out_path);
      return 0;
    }

    if (run->parsed()) {
      const auto instance = mpmd::load_instance(in_path);
      const mpmd::PolicyId policy{mpmd::parse_policy(policy_text), epsilon};
      const auto report = mpmd::simulate(instance, policy);
      ordered_json summary;
      summary["meta"] = meta(epsilon, std::nullopt, mpmd::instance_hash(instance));
      summary["policy"] = mpmd::policy_name(policy.policy);
      summary["online_cost"] = report.online_cost;
      summary["offline_weight"] = report.offline_weight;
      if (!summary_path.empty()) write_output(summary.dump(2) + "\n", summary_path);
      if (format == "csv") {
        std::cout << mpmd::records_csv(report, instance);
      } else {
        ordered_json records = ordered_json::array();
        for (const auto& r : report.records)
          records.push_back({{"p", r.p},
                             {"q", r.q},
                             {"match_time", r.match_time},
                             {"connection", r.connection},
                             {"delay_p", r.delay_p},
                             {"delay_q", r.delay_q}});
        summary["records"] = records;
        std::cout << summary.dump(2) << '\n';
      }
      return 0;
    }

    if (opt->parsed()) {
      const auto instance = mpmd::load_instance(in_path);
      const auto matching = opt_bipartite ? mpmd::opt_bipartite(instance) : mpmd::opt_general(instance);
      ordered_json out;
      out["meta"] = meta(std::nullopt, std::nullopt, mpmd::instance_hash(instance));
      out["oracle"] = opt_bipartite ? "bipartite" : "general";
      out["matching"] = matching_json(matching);
      std::cout << out.dump(2) << '\n';
      return 0;
    }

    if (ratio->parsed()) {
      const auto instance = mpmd::load_instance(in_path);
      const auto r = mpmd::compute_ratio(instance, {mpmd::parse_policy(policy_text), epsilon});
      ordered_json out;
      out["meta"] = meta(epsilon, std::nullopt, mpmd::instance_hash(instance));
      out["m"] = r.m;
      out["metric"] = r.metric_kind;
      out["bipartite"] = r.bipartite;
      out["policy"] = mpmd::policy_name(r.policy.policy);
      out["epsilon"] = r.policy.epsilon;
      out["online_cost"] = r.online_cost;
      out["offline_weight"] = r.offline_weight;
      out["opt_weight"] = r.opt_weight;
      out["opt_oracle"] = r.opt_source;
      out["ratio_online"] = r.ratio_online;
      out["ratio_offline"] = r.ratio_offline;
      out["bound_2_over_f"] = r.bound_2_over_f ? ordered_json(*r.bound_2_over_f) : ordered_json(nullptr);
      out["within_bound"] = r.within_bound ? ordered_json(*r.within_bound) : ordered_json(nullptr);
      std::cout << out.dump(2) << '\n';
      return r.within_bound.value_or(true) ? 0 : 1;
    }

    if (sweep->parsed()) {
      mpmd::SweepResult result;
      mpmd::PolicyId policy{mpmd::Policy::kHemisphere, epsilon};
      if (family == "lower-bound") {
        result = mpmd::sweep_lower_bound(k_min, k_max, epsilon, eta);
      } else {
        policy.policy = mpmd::parse_policy(sweep_policy);
        result = delta ? mpmd::sweep_appendix_b(parse_int_list(m_list), policy, *delta, false)
                       : mpmd::sweep_appendix_b(parse_int_list(m_list), policy, delta_per_m, true);
      }
      write_output(mpmd::sweep_csv(result, family, policy), out_path);
      return 0;
    }

    if (bound->parsed()) {
      const double gamma = 3.0 + epsilon;
      const auto table = mpmd::eval_f(bound_m, gamma);
      ordered_json out;
      out["meta"] = meta(epsilon, std::nullopt, "");
      out["m"] = bound_m;
      out["gamma"] = gamma;
      out["f"] = table.at(bound_m);
      out["f_lower_bound"] = mpmd::f_lower_bound(bound_m / 2, gamma);
      out["bound_2_over_f"] = mpmd::theoretical_bound(bound_m, epsilon);
      std::cout << out.dump(2) << '\n';
      return 0;
    }

    if (verify->parsed()) {
      if (inject_fault) vopt.fault_epsilon_scale = 2.0;
      const auto report = mpmd::run_verify(vopt);
      if (verify_json) {
        ordered_json out;
        out["meta"] = meta(std::nullopt, vopt.seed, "");
        out["passed"] = report.passed();
        ordered_json list = ordered_json::array();
        for (const auto& inv : report.invariants)
          list.push_back({{"name", inv.name},
                          {"checked", inv.checked},
                          {"failed", inv.failed},
                          {"first_failure", inv.first_failure}});
        out["invariants"] = list;
        std::cout << out.dump(2) << '\n';
      } else {
        for (const auto& inv : report.invariants) {
          std::cout << (inv.failed == 0 ? "PASS " : "FAIL ") << inv.name << "  checked=" << inv.checked
                    << " failed=" << inv.failed;
          if (inv.failed) std::cout << "  first: " << inv.first_failure;
          std::cout << '\n';
        }
        std::cout << (report.passed() ? "all invariants passed\n" : "invariant failures detected\n");
      }
      return report.passed() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "mpmd: error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
