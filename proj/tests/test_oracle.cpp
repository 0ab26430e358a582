#include <algorithm>
#include <functional>
#include <numeric>

#include "doctest.h"
#include "helpers.hpp"
#include "mpmd/checks.hpp"
#include "mpmd/instances.hpp"

using namespace mpmd;
using test_support::line_instance;

namespace {

// Independent reference: plain recursion over "pair the first free request".
double reference_opt(const Instance& inst, bool crossing_only) {
  const std::size_t m = inst.size();
  std::vector<bool> used(m, false);
  std::function<double()> rec = [&]() -> double {
    std::size_t i = 0;
    while (i < m && used[i]) ++i;
    if (i == m) return 0.0;
    used[i] = true;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = i + 1; j < m; ++j) {
      if (used[j]) continue;
      if (crossing_only && inst.requests[i].color == inst.requests[j].color) continue;
      used[j] = true;
      best = std::min(best, augmented_distance(inst.space, inst.requests[i].point, inst.requests[j].point) + rec());
      used[j] = false;
    }
    used[i] = false;
    return best;
  };
  return rec();
}

RandomConfig config_for(std::uint64_t seed, bool bipartite) {
  static const std::vector<std::string> metrics{"line", "euclidean:2", "finite:5"};
  auto c = parse_random_metric(metrics[seed % 3]);
  c.bipartite = bipartite;
  return c;
}

}  // namespace

TEST_CASE("opt_general examples") {
  const auto two = line_instance({{0, 1}, {3, 4}});
  const auto m2 = opt_general(two);
  REQUIRE(m2.pairs.size() == 1);
  CHECK(m2.weight == 6.0);

  const auto lb = gen_lower_bound({2, 1.0, 0.0, false});
  const auto opt = opt_general(lb);
  CHECK(opt.pairs == std::vector<Pair>{{0, 1}, {2, 3}});
  CHECK(opt.weight == 2.0);
  CHECK(realize_online(opt, lb) == 2.0);

  CHECK_THROWS_AS(opt_general(line_instance({{0, 0}, {1, 1}, {2, 2}})), Error);
  std::vector<std::pair<double, double>> big(22, {0.0, 0.0});
  CHECK_THROWS_AS(opt_general(line_instance(big)), Error);
}

TEST_CASE("opt ties resolve to the lexicographically smallest pair list") {
  const auto inst = line_instance({{0, 0}, {0, 0}, {0, 0}, {0, 0}});
  CHECK(opt_general(inst).pairs == std::vector<Pair>{{0, 1}, {2, 3}});
  CHECK(brute_force_opt(inst).pairs == std::vector<Pair>{{0, 1}, {2, 3}});
}

TEST_CASE("opt_bipartite examples") {
  const auto forced = line_instance({{0, 0}, {5, 1}}, {1, 0});
  CHECK(opt_bipartite(forced).weight == 6.0);

  const auto assignment = min_cost_assignment({{1, 2}, {3, 1}});
  CHECK(assignment == std::vector<std::size_t>{0, 1});
  CHECK(min_cost_assignment({{4, 1, 3}, {2, 0, 5}, {3, 2, 2}}) == std::vector<std::size_t>{1, 0, 2});

  // One point, class 0 at t=0,3 and class 1 at t=1,2: costs [[1,2],[2,1]].
  const auto inst = line_instance({{0, 0}, {0, 3}, {0, 1}, {0, 2}}, {0, 0, 1, 1});
  Instance ordered = inst;
  std::stable_sort(ordered.requests.begin(), ordered.requests.end(),
                   [](const Request& a, const Request& b) { return a.arrival() < b.arrival(); });
  const auto m = opt_bipartite(ordered);
  CHECK(m.weight == 2.0);
  CHECK(m.pairs == std::vector<Pair>{{0, 2}, {1, 3}});

  CHECK_THROWS_AS(opt_bipartite(line_instance({{0, 0}, {1, 1}})), Error);
}

TEST_CASE("brute_force_opt examples") {
  CHECK(brute_force_opt(line_instance({{0, 0}, {1, 1}})).weight == 2.0);
  // Four requests on a line at one time: weights 1, 2, 4 between neighbours.
  const auto inst = line_instance({{0, 0}, {1, 0}, {3, 0}, {7, 0}});
  const auto m = brute_force_opt(inst);
  CHECK(m.pairs == std::vector<Pair>{{0, 1}, {2, 3}});
  CHECK(m.weight == 5.0);
  std::vector<std::pair<double, double>> big(12, {0.0, 0.0});
  CHECK_THROWS_AS(brute_force_opt(line_instance(big)), Error);
}

TEST_CASE("realize_online examples") {
  const auto inst = line_instance({{0, 2}, {1, 5}});
  const auto m = make_matching({{0, 1}}, inst);
  CHECK(realize_online(m, inst) == 4.0);
  CHECK(m.weight == 4.0);
  const auto zero = line_instance({{2, 2}, {2, 2}});
  CHECK(realize_online(make_matching({{0, 1}}, zero), zero) == 0.0);
  CHECK_THROWS_AS(make_matching({{0, 1}}, line_instance({{0, 0}, {1, 1}, {2, 2}, {3, 3}})), Error);
}

TEST_CASE("cycle_decompose examples") {
  const auto lb = gen_lower_bound({2, 1.0, 1e-6, false});
  const auto alg = matching_of(simulate(lb, {Policy::kHemisphere, 1.0}), lb);
  const auto opt = opt_general(lb);
  const auto dec = cycle_decompose(alg, opt, lb);
  REQUIRE(dec.cycles.size() == 1);
  CHECK(dec.cycles[0].vertices.size() == 4);
  CHECK(dec.cycles[0].length_a == doctest::Approx(3.0).epsilon(1e-5));
  CHECK(dec.cycles[0].length_b == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(opt.pairs == std::vector<Pair>{{0, 1}, {2, 3}});
  CHECK_FALSE(checks::cycle_structure(dec, alg, opt, lb));

  const auto self = cycle_decompose(opt, opt, lb);
  CHECK(self.cycles.size() == 2);
  for (const auto& c : self.cycles) {
    CHECK(c.vertices.size() == 2);
    CHECK(c.length_a == c.length_b);
  }
  CHECK_FALSE(checks::cycle_structure(self, opt, opt, lb));

  const auto other = line_instance({{0, 0}, {1, 1}});
  CHECK_THROWS_AS(cycle_decompose(opt, make_matching({{0, 1}}, other), lb), Error);
}

TEST_CASE("restriction_check examples") {
  const auto lb = gen_lower_bound({2, 1.0, 1e-6, false});
  const auto report = simulate(lb, {Policy::kHemisphere, 1.0});
  const auto alg = matching_of(report, lb);
  CHECK_FALSE(restriction_check(lb, report, cycle_decompose(alg, opt_general(lb), lb)));
  CHECK_FALSE(restriction_check(lb, report, cycle_decompose(alg, alg, lb)));
}

TEST_CASE("property: oracle agreement and structure on random instances") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const bool bip = seed % 2 == 0;
    const std::size_t m = 2 + 2 * (seed % 5);
    const auto inst = gen_random(m, seed, config_for(seed, bip));
    CAPTURE(seed);

    Instance plain = inst;
    plain.bipartite = false;
    for (auto& r : plain.requests) r.color.reset();

    const auto general = opt_general(plain);
    const auto brute = brute_force_opt(plain);
    CHECK(general.weight == brute.weight);
    CHECK(general.weight == doctest::Approx(reference_opt(plain, false)).epsilon(1e-12));
    CHECK(realize_online(general, plain) == general.weight);

    for (double eps : {0.5, 1.0, 2.0}) {
      const auto report = simulate(plain, {Policy::kHemisphere, eps});
      const auto alg = matching_of(report, plain);
      CHECK(general.weight <= alg.weight + 1e-12);
      const auto dec = cycle_decompose(alg, general, plain);
      CHECK_FALSE(checks::cycle_structure(dec, alg, general, plain));
      CHECK_FALSE(checks::cycle_ratio_bound(dec, alg, general));
      const auto cex = restriction_check(plain, report, dec);
      CHECK_MESSAGE(!cex, (cex ? cex->describe() : std::string()));
    }

    if (bip) {
      const auto b = opt_bipartite(inst);
      CHECK(b.weight == doctest::Approx(reference_opt(inst, true)).epsilon(1e-12));
      CHECK(b.weight == doctest::Approx(brute_force_opt(inst).weight).epsilon(1e-12));
      CHECK(realize_online(b, inst) == doctest::Approx(b.weight).epsilon(1e-12));
      CHECK_FALSE(checks::color_crossing(b, inst));
      const auto report = simulate(inst, {Policy::kHemisphereBipartite, 1.0});
      const auto alg = matching_of(report, inst);
      CHECK_FALSE(checks::color_crossing(alg, inst));
      const auto dec = cycle_decompose(alg, b, inst);
      CHECK_FALSE(checks::cycles_alternate_colors(dec, inst));
      CHECK_FALSE(checks::single_cycle_classes(report, dec, inst));
    }
  }
}
