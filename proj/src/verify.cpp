#include <cmath>
#include <functional>
#include <map>
#include <random>

#include "mpmd/checks.hpp"
#include "mpmd/harness.hpp"

namespace mpmd {

bool VerifyReport::passed() const {
  for (const auto& inv : invariants)
    if (inv.failed != 0) return false;
  return true;
}

const InvariantTally* VerifyReport::find(const std::string& name) const {
  for (const auto& inv : invariants)
    if (inv.name == name) return &inv;
  return nullptr;
}

namespace {

class Tally {
 public:
  void record(const std::string& name, const checks::Result& failure, const std::string& context) {
    auto& inv = slot(name);
    ++inv.checked;
    if (failure) {
      if (inv.failed++ == 0) inv.first_failure = context + ": " + *failure;
    }
  }

  void record(const std::string& name, bool ok, const std::string& context, const std::string& what) {
    record(name, ok ? checks::Result{} : checks::Result{what}, context);
  }

  // Runs `body`, turning an escaped exception into a failure of `name`.
  void guarded(const std::string& name, const std::string& context, const std::function<void()>& body) {
    try {
      body();
      record(name, checks::Result{}, context);
    } catch (const std::exception& e) {
      record(name, checks::Result{std::string("exception: ") + e.what()}, context);
    }
  }

  VerifyReport finish() {
    VerifyReport report;
    for (auto& name : order_) report.invariants.push_back(std::move(tallies_[name]));
    return report;
  }

 private:
  InvariantTally& slot(const std::string& name) {
    auto [it, inserted] = tallies_.try_emplace(name);
    if (inserted) {
      it->second.name = name;
      order_.push_back(name);
    }
    return it->second;
  }

  std::map<std::string, InvariantTally> tallies_;
  std::vector<std::string> order_;
};

Instance uncolored(Instance instance) {
  instance.bipartite = false;
  for (auto& r : instance.requests) r.color.reset();
  return instance;
}

void check_metric(Tally& tally, const Instance& instance, const std::string& ctx) {
  const auto& reqs = instance.requests;
  checks::Result failure;
  for (std::size_t i = 0; i < reqs.size() && !failure; ++i)
    for (std::size_t j = 0; j < reqs.size() && !failure; ++j) {
      const double dij = augmented_distance(instance.space, reqs[i].point, reqs[j].point);
      if (dij != augmented_distance(instance.space, reqs[j].point, reqs[i].point))
        failure = "asymmetric augmented distance";
      if (dij < std::abs(reqs[i].point.time - reqs[j].point.time) ||
          dij < distance(instance.space, reqs[i].point.location, reqs[j].point.location))
        failure = "augmented distance below a component";
      for (std::size_t k = 0; k < reqs.size() && !failure; ++k) {
        const double via = augmented_distance(instance.space, reqs[i].point, reqs[k].point) +
                           augmented_distance(instance.space, reqs[k].point, reqs[j].point);
        if (dij > via * (1 + 1e-12)) failure = "triangle inequality violated";
      }
    }
  tally.record("metric.augmented_axioms", failure, ctx);
}

void check_run(Tally& tally, const Instance& instance, const PolicyId& policy, double nominal_eps,
               const std::optional<Matching>& opt, const std::string& ctx) {
  const RunReport run = simulate(instance, policy);
  tally.record("engine.perfect_matching", checks::perfect_matching(run, instance), ctx);
  tally.record("engine.feasible_match_times", checks::feasible_records(run, instance), ctx);
  tally.record("engine.determinism", simulate(instance, policy) == run, ctx, "two runs differ");
  if (!is_hemisphere(policy.policy)) return;

  RunReport nominal = run;
  nominal.policy.epsilon = nominal_eps;
  tally.record("engine.cost_identity", checks::cost_identity(nominal, nominal_eps), ctx);
  tally.record(policy.policy == Policy::kHemisphere ? "engine.last_pairs"
                                                    : "engine.last_pairs_bipartite",
               checks::last_pairs(run, instance), ctx);
  if (!opt) return;

  const Matching alg = matching_of(run, instance);
  tally.record("oracle.optimality_lower_bound", alg.weight >= opt->weight - 1e-9 * std::max(1.0, opt->weight),
               ctx, "policy matching lighter than the optimum");
  const auto cycles = cycle_decompose(alg, *opt, instance);
  tally.record("oracle.cycle_structure", checks::cycle_structure(cycles, alg, *opt, instance), ctx);
  tally.record("oracle.cycle_ratio_bound", checks::cycle_ratio_bound(cycles, alg, *opt), ctx);
  const auto counter = restriction_check(instance, run, cycles);
  tally.record("oracle.restriction", counter ? checks::Result{counter->describe()} : checks::Result{}, ctx);

  if (policy.policy == Policy::kHemisphereBipartite) {
    tally.record("oracle.bipartite_cycle_colors", checks::cycles_alternate_colors(cycles, instance), ctx);
    if (cycles.cycles.size() == 1 && instance.size() >= 4)
      tally.record("oracle.single_cycle_classes", checks::single_cycle_classes(run, cycles, instance), ctx);
  }

  if (opt->weight > 0.0 && instance.size() >= 2) {
    const double ratio = run.offline_weight / opt->weight;
    const double bound = theoretical_bound(instance.size(), policy.epsilon);
    tally.record("harness.ratio_within_2_over_f", ratio <= bound + 1e-9, ctx,
                 "ratio " + std::to_string(ratio) + " > bound " + std::to_string(bound));
  }
}

void verify_random(Tally& tally, const VerifyOptions& options) {
  std::mt19937_64 sizes(options.seed);
  const std::size_t half_max = std::max<std::size_t>(1, options.max_m / 2);
  const char* metrics[] = {"line", "euclidean:2", "finite:5"};
  const double horizons[] = {0.25, 1.0, 4.0};

  for (std::size_t n = 0; n < options.count; ++n) {
    const std::size_t m = 2 * (1 + sizes() % half_max);
    RandomConfig config = parse_random_metric(metrics[n % 3]);
    config.horizon = horizons[(n / 3) % 3];
    config.bipartite = n % 2 == 1;
    const std::uint64_t seed = options.seed * 1000003ull + n;
    const std::string ctx = "random #" + std::to_string(n) + " (m=" + std::to_string(m) +
                            ", seed=" + std::to_string(seed) + ", " + metrics[n % 3] +
                            (config.bipartite ? ", bipartite" : "") + ")";
    tally.guarded("verify.no_exceptions", ctx, [&] {
      const Instance instance = gen_random(m, seed, config);
      check_metric(tally, instance, ctx);

      const Instance plain = uncolored(instance);
      const Matching opt = opt_general(plain);
      tally.record("oracle.realize_online", realize_online(opt, plain) == opt.weight, ctx,
                   "realized online cost differs from the matching weight");
      if (m <= kBruteForceLimit) {
        const Matching brute = brute_force_opt(plain);
        tally.record("oracle.general_equals_brute_force", opt.weight == brute.weight, ctx,
                     "subset DP " + std::to_string(opt.weight) + " vs brute force " +
                         std::to_string(brute.weight));
      }

      std::optional<Matching> opt_b;
      if (instance.bipartite) {
        opt_b = opt_bipartite(instance);
        tally.record("oracle.realize_online", realize_online(*opt_b, instance) == opt_b->weight, ctx,
                     "realized online cost differs from the matching weight");
        tally.record("oracle.bipartite_color_crossing", checks::color_crossing(*opt_b, instance), ctx);
        if (m <= kBruteForceLimit) {
          const Matching brute = brute_force_opt(instance);
          tally.record("oracle.bipartite_equals_brute_force",
                       std::abs(opt_b->weight - brute.weight) <= 1e-12 * std::max(1.0, brute.weight),
                       ctx, "assignment " + std::to_string(opt_b->weight) + " vs brute force " +
                                std::to_string(brute.weight));
        }
      }

      for (double eps : options.epsilons) {
        const std::string ectx = ctx + " eps=" + format_number(eps);
        const double run_eps = eps * options.fault_epsilon_scale;
        check_run(tally, plain, PolicyId{Policy::kHemisphere, run_eps}, eps, opt, ectx);
        if (instance.bipartite)
          check_run(tally, instance, PolicyId{Policy::kHemisphereBipartite, run_eps}, eps, opt_b, ectx);
        for (Policy p : {Policy::kNoTimeMin, Policy::kNoTimeLate, Policy::kNoTimeEarly})
          check_run(tally, plain, PolicyId{p, eps}, eps, std::nullopt, ectx);
      }

      const Instance reloaded = instance_from_json(instance_to_json(instance));
      tally.record("lab.round_trip", reloaded == instance, ctx, "save/load changed the instance");
    });
  }
}

void verify_families(Tally& tally, const VerifyOptions& options) {
  for (double eps : options.epsilons) {
    for (int i = 1; i <= 40; ++i) {
      const auto unrolled = recurrence_ab(i, eps);
      const auto closed = recurrence_ab_closed(i, eps);
      const bool ok = std::abs(unrolled.a - closed.a) <= 1e-12 * closed.a &&
                      std::abs(unrolled.b - closed.b) <= 1e-12 * closed.b;
      tally.record("lab.recurrence_closed_form", ok, "i=" + std::to_string(i) + " eps=" + format_number(eps),
                   "recurrence and closed form disagree");
    }

    const FTable table = eval_f(1024, 3.0 + eps);
    checks::Result failure;
    if (table.at(2) != 1.0) failure = "f(2) != 1";
    for (std::size_t k = 2; k <= 512 && !failure; ++k) {
      if (table.at(2 * k) > table.at(2 * k - 2)) failure = "f increases at 2k=" + std::to_string(2 * k);
      if (table.at(2 * k) < f_lower_bound(k, table.gamma()) - 1e-12)
        failure = "f below (2/gamma)^log2(k) at k=" + std::to_string(k);
    }
    tally.record("harness.f_table", failure, "gamma=" + format_number(3.0 + eps));

    for (int k = 1; k <= 8; ++k) {
      const std::string ctx = "lower-bound k=" + std::to_string(k) + " eps=" + format_number(eps);
      tally.guarded("verify.no_exceptions", ctx, [&] {
        const LowerBoundParams params{k, eps, 1e-6, false};
        const Instance instance = gen_lower_bound(params);
        const RunReport run = simulate(instance, PolicyId{Policy::kHemisphere, eps * options.fault_epsilon_scale});
        RunReport nominal = run;
        nominal.policy.epsilon = eps;
        tally.record("engine.cost_identity", checks::cost_identity(nominal, eps), ctx);
        tally.record("engine.last_pairs", checks::last_pairs(run, instance), ctx);
        const auto expected = expected_lower_bound_result(params);
        tally.record("lab.lower_bound_pairs", matching_of(run, instance).pairs == expected.pairs, ctx,
                     "run pairs differ from the nested pattern");
        const Instance colored = gen_lower_bound(LowerBoundParams{k, eps, 1e-6, true});
        const RunReport run_b =
            simulate(colored, PolicyId{Policy::kHemisphereBipartite, eps * options.fault_epsilon_scale});
        RunReport nominal_b = run_b;
        nominal_b.policy.epsilon = eps;
        tally.record("engine.cost_identity", checks::cost_identity(nominal_b, eps), ctx + " bipartite");
        tally.record("engine.last_pairs_bipartite", checks::last_pairs(run_b, colored), ctx + " bipartite");
      });
    }

    for (int m : {8, 16, 32}) {
      for (double delta : {0.1, 1.0 / m}) {
        const std::string ctx = "appendix-b m=" + std::to_string(m) + " delta=" + format_number(delta) +
                                " eps=" + format_number(eps);
        tally.guarded("verify.no_exceptions", ctx, [&] {
          const Instance instance = gen_appendix_b(AppendixBParams{m, delta});
          const auto& finite = std::get<FiniteSpace>(instance.space.kind());
          tally.record("lab.appendix_b_valid", !validate_metric(finite.matrix()).has_value(), ctx,
                       "metric invalid");
          const RunReport run =
              simulate(instance, PolicyId{Policy::kHemisphere, eps * options.fault_epsilon_scale});
          RunReport nominal = run;
          nominal.policy.epsilon = eps;
          tally.record("engine.cost_identity", checks::cost_identity(nominal, eps), ctx);
          tally.record("engine.last_pairs", checks::last_pairs(run, instance), ctx);
          for (Policy p : {Policy::kNoTimeMin, Policy::kNoTimeLate, Policy::kNoTimeEarly}) {
            const RunReport other = simulate(instance, PolicyId{p, eps});
            tally.record("engine.perfect_matching", checks::perfect_matching(other, instance), ctx);
            tally.record("engine.feasible_match_times", checks::feasible_records(other, instance), ctx);
          }
        });
      }
    }
  }
}

}  // namespace

VerifyReport run_verify(const VerifyOptions& options) {
  if (options.epsilons.empty()) throw Error("verify needs at least one epsilon");
  for (double eps : options.epsilons)
    if (!(eps > 0.0)) throw Error("epsilon must be positive");
  if (options.max_m < 2) throw Error("max m must be at least 2");
  if (options.max_m > kGeneralOracleLimit)
    throw Error("max m must not exceed " + std::to_string(kGeneralOracleLimit));
  Tally tally;
  verify_random(tally, options);
  if (options.include_families) verify_families(tally, options);
  return tally.finish();
}

}  // namespace mpmd
