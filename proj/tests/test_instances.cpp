#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "helpers.hpp"
#include "mpmd/instances.hpp"
#include "mpmd/oracle.hpp"

using namespace mpmd;

namespace {

std::vector<double> times_of(const Instance& inst) {
  std::vector<double> t;
  for (const auto& r : inst.requests) t.push_back(r.arrival());
  return t;
}

void check_times(const Instance& inst, const std::vector<double>& want) {
  const auto got = times_of(inst);
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("mpmd_test_" + name);
}

}  // namespace

TEST_CASE("recurrence_ab examples") {
  for (double eps : {0.1, 1.0, 3.0}) CHECK(recurrence_ab(1, eps).b == 1.0);
  CHECK(recurrence_ab(1, 1.0).a == 0.5);
  CHECK(recurrence_ab(2, 1.0).b == 2.5);
  CHECK(recurrence_ab(2, 1.0).a == 1.25);
  CHECK(recurrence_ab(3, 1.0).b == 6.25);
  CHECK(recurrence_ab_closed(3, 1.0).b == doctest::Approx(6.25));
  CHECK(recurrence_ab_closed(2, 1.0).a == doctest::Approx(1.25));
  CHECK_THROWS_AS(recurrence_ab(0, 1.0), Error);
  CHECK_THROWS_AS(recurrence_ab(2, 0.0), Error);
}

TEST_CASE("property: recurrence closed form agrees") {
  for (double eps : {0.1, 0.5, 1.0, 2.0})
    for (int i = 1; i <= 40; ++i) {
      const auto u = recurrence_ab(i, eps), c = recurrence_ab_closed(i, eps);
      CHECK(std::abs(u.a - c.a) <= 1e-12 * std::abs(u.a));
      CHECK(std::abs(u.b - c.b) <= 1e-12 * std::abs(u.b));
    }
}

TEST_CASE("gen_lower_bound layouts") {
  check_times(gen_lower_bound({1, 1.0, 0.0, false}), {0, 1});
  check_times(gen_lower_bound({2, 1.0, 0.0, false}), {0, 1, 1.5, 2.5});
  check_times(gen_lower_bound({3, 1.0, 0.0, false}), {0, 1, 1.5, 2.5, 3.75, 4.75, 5.25, 6.25});

  const auto bip = gen_lower_bound({3, 1.0, 1e-6, true});
  CHECK(bip.bipartite);
  for (std::size_t i = 0; i < bip.size(); ++i) CHECK(bip.requests[i].color == static_cast<int>(i % 2));

  CHECK_THROWS_AS(gen_lower_bound({0, 1.0, 0.0, false}), Error);
  CHECK_THROWS_AS(gen_lower_bound({2, 1.0, 0.5, false}), Error);
}

TEST_CASE("property: unperturbed span is b_k") {
  for (double eps : {0.1, 0.5, 1.0, 2.0})
    for (int k = 1; k <= 10; ++k) {
      const auto t = times_of(gen_lower_bound({k, eps, 0.0, false}));
      const double b = recurrence_ab(k, eps).b;
      CHECK(std::abs(t.back() - t.front() - b) <= 1e-9 * b);
    }
}

TEST_CASE("expected_lower_bound_result examples") {
  auto e = expected_lower_bound_result({1, 1.0, 0.0, false});
  CHECK(e.pairs == std::vector<Pair>{{0, 1}});
  CHECK(e.weight == 1.0);
  e = expected_lower_bound_result({2, 1.0, 0.0, false});
  CHECK(e.pairs == std::vector<Pair>{{0, 3}, {1, 2}});
  CHECK(e.weight == doctest::Approx(3.0));
  e = expected_lower_bound_result({3, 1.0, 0.0, false});
  CHECK(e.weight == doctest::Approx(8.5));
}

TEST_CASE("property: hemisphere reproduces the expected pairs for k <= 10") {
  for (double eta : {1e-6, 1e-4, 5e-4})
    for (double eps : {0.5, 1.0, 2.0})
      for (int k = 1; k <= 10; ++k) {
        const LowerBoundParams params{k, eps, eta, false};
        const auto inst = gen_lower_bound(params);
        const auto report = simulate(inst, {Policy::kHemisphere, eps});
        std::vector<Pair> got;
        for (const auto& r : report.records) got.emplace_back(r.p, r.q);
        std::sort(got.begin(), got.end());
        CAPTURE(k);
        CAPTURE(eps);
        CHECK(got == expected_lower_bound_result(params).pairs);
      }
}

TEST_CASE("gen_appendix_b layouts") {
  const auto b8 = gen_appendix_b({8, 0.1});
  CHECK(b8.space.is_finite());
  CHECK(distance(b8.space, std::string("A"), std::string("B")) == doctest::Approx(2.1));
  std::vector<double> row_a, row_b;
  for (const auto& r : b8.requests)
    (std::get<std::string>(r.point.location) == "A" ? row_a : row_b).push_back(r.arrival());
  const std::vector<double> want{0, 1, 1.1, 2.1};
  REQUIRE(row_a.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(row_a[i] == doctest::Approx(want[i]));
    CHECK(row_b[i] == row_a[i]);
  }

  const auto b16 = gen_appendix_b({16, 0.1});
  const std::vector<double> want16{0, 1, 1.1, 2.1, 2.2, 3.2, 3.3, 4.3};
  std::size_t col = 0;
  for (const auto& r : b16.requests)
    if (std::get<std::string>(r.point.location) == "A") CHECK(r.arrival() == doctest::Approx(want16[col++]));

  CHECK_THROWS_AS(gen_appendix_b({10, 0.1}), Error);
  CHECK_THROWS_AS(gen_appendix_b({4, 0.1}), Error);
  CHECK_THROWS_AS(gen_appendix_b({8, 0.0}), Error);
}

TEST_CASE("property: appendix-b instances are valid and balanced") {
  for (int m : {8, 16, 32, 64})
    for (double delta : {0.05, 0.1, 1.0 / m}) {
      const auto inst = gen_appendix_b({m, delta});
      CHECK_NOTHROW(inst.validate());
      const auto& fin = std::get<FiniteSpace>(inst.space.kind());
      CHECK_FALSE(validate_metric(fin.matrix()).has_value());
      int on_a = 0;
      for (const auto& r : inst.requests) on_a += std::get<std::string>(r.point.location) == "A";
      CHECK(on_a == m / 2);
      const auto red = appendix_b_cross_matching(inst);
      CHECK(red.weight == doctest::Approx(4.0 + m / 2.0 * delta));
    }
}

TEST_CASE("gen_random: determinism, config errors, small cases") {
  RandomConfig c = parse_random_metric("euclidean:3");
  CHECK(c.metric == RandomMetric::kEuclidean);
  CHECK(c.dim == 3);
  CHECK(parse_random_metric("finite:7").finite_points == 7);
  CHECK_THROWS_AS(parse_random_metric("torus"), Error);
  CHECK_THROWS_AS(parse_random_metric("euclidean:x"), Error);

  c.bipartite = true;
  CHECK(gen_random(10, 42, c) == gen_random(10, 42, c));
  CHECK_FALSE(gen_random(10, 42, c) == gen_random(10, 43, c));
  CHECK_THROWS_AS(gen_random(5, 1, c), Error);

  const auto two = gen_random(2, 9, parse_random_metric("line"));
  const auto report = simulate(two, {Policy::kHemisphere, 1.0});
  CHECK(report.offline_weight == opt_general(two).weight);

  const auto ten = gen_random(10, 3, parse_random_metric("line"));
  CHECK(opt_general(ten).weight == brute_force_opt(ten).weight);
}

TEST_CASE("instance files: round trip") {
  std::vector<Instance> all{gen_lower_bound({4, 1.0, 1e-6, false}), gen_lower_bound({3, 0.5, 1e-6, true}),
                            gen_appendix_b({16, 1.0 / 16})};
  for (const char* metric : {"line", "euclidean:2", "finite:5"})
    for (bool bip : {false, true}) {
      auto c = parse_random_metric(metric);
      c.bipartite = bip;
      all.push_back(gen_random(12, 5, c));
    }
  const auto path = temp_file("round_trip.json");
  for (const auto& inst : all) {
    save_instance(inst, path);
    CHECK(load_instance(path) == inst);
    CHECK(instance_from_json(instance_to_json(inst)) == inst);
    CHECK(instance_hash(load_instance(path)) == instance_hash(inst));
  }
  std::filesystem::remove(path);
}

TEST_CASE("instance files: errors carry context") {
  const std::string dup =
      R"({"metric":{"kind":"line"},"bipartite":false,"requests":[{"id":0,"t":0,"loc":0},{"id":0,"t":1,"loc":1}]})";
  CHECK_THROWS_WITH_AS(instance_from_json(dup), doctest::Contains("duplicate request id 0"), Error);

  const std::string odd = R"({"metric":{"kind":"line"},"bipartite":false,"requests":[{"id":0,"t":0,"loc":0}]})";
  CHECK_THROWS_WITH_AS(instance_from_json(odd), doctest::Contains("request count must be even"), Error);

  const std::string imbalance =
      R"({"metric":{"kind":"line"},"bipartite":true,"requests":[{"id":0,"t":0,"loc":0,"color":0},{"id":1,"t":1,"loc":1,"color":0}]})";
  CHECK_THROWS_WITH_AS(instance_from_json(imbalance), doctest::Contains("color imbalance"), Error);

  const std::string bad_loc =
      R"({"metric":{"kind":"line"},"bipartite":false,"requests":[{"id":0,"t":0,"loc":"A"},{"id":1,"t":1,"loc":1}]})";
  CHECK_THROWS_WITH_AS(instance_from_json(bad_loc), doctest::Contains("requests[0]"), Error);

  const std::string bad_metric =
      R"({"metric":{"kind":"finite","points":["A","B"],"matrix":[[0,1],[2,0]]},"bipartite":false,"requests":[]})";
  CHECK_THROWS_AS(instance_from_json(bad_metric), Error);

  CHECK_THROWS_AS(instance_from_json("{not json"), Error);
  CHECK_THROWS_AS(load_instance(temp_file("missing.json")), Error);
}
