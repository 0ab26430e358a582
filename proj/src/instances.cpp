#include "mpmd/instances.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace mpmd {

namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw Error("epsilon must be positive");
}

}  // namespace

GapRecurrence recurrence_ab(int i, double epsilon) {
  check_epsilon(epsilon);
  if (i < 1) throw Error("recurrence index must be at least 1");
  GapRecurrence g{1.0 / (1.0 + epsilon), 1.0};
  for (int j = 2; j <= i; ++j) {
    const double b = 2.0 * g.b + g.a;
    g = GapRecurrence{b / (1.0 + epsilon), b};
  }
  return g;
}

GapRecurrence recurrence_ab_closed(int i, double epsilon) {
  check_epsilon(epsilon);
  if (i < 1) throw Error("recurrence index must be at least 1");
  const double base = 2.0 + 1.0 / (1.0 + epsilon);
  return GapRecurrence{std::pow(base, i) / (2.0 * epsilon + 3.0), std::pow(base, i - 1)};
}

Instance gen_lower_bound(const LowerBoundParams& params) {
  check_epsilon(params.epsilon);
  if (params.k < 1) throw Error("k must be at least 1");
  if (params.k > 30) throw Error("k must be at most 30");
  if (!(params.eta >= 0.0 && params.eta < 1e-3)) throw Error("eta must lie in [0, 1e-3)");

  std::vector<double> times{0.0, 1.0};
  for (int level = 2; level <= params.k; ++level) {
    const double gap = recurrence_ab(level - 1, params.epsilon).a * (1.0 - params.eta);
    const double shift = times.back() + gap;
    const std::size_t half = times.size();
    for (std::size_t i = 0; i < half; ++i) times.push_back(times[i] + shift);
  }

  Instance instance{MetricSpace::finite({"x"}, {{0.0}}), {}, params.bipartite};
  for (std::size_t i = 0; i < times.size(); ++i) {
    Request r{static_cast<RequestId>(i), TimedPoint{std::string("x"), times[i]}, std::nullopt};
    if (params.bipartite) r.color = static_cast<int>(i % 2);
    instance.requests.push_back(std::move(r));
  }
  return instance;
}

ExpectedLowerBound expected_lower_bound_result(const LowerBoundParams& params) {
  check_epsilon(params.epsilon);
  if (params.k < 1) throw Error("k must be at least 1");
  const RequestId m = RequestId{1} << params.k;

  ExpectedLowerBound result;
  for (RequestId i = 1; i + 1 < m - 1; i += 2) result.pairs.emplace_back(i, i + 1);
  result.pairs.emplace_back(0, m - 1);
  std::sort(result.pairs.begin(), result.pairs.end());

  // b_k plus 2^i pairs at gap a_{k-1-i} for 0 <= i <= k-2.
  double weight = recurrence_ab(params.k, params.epsilon).b;
  for (int i = 0; i <= params.k - 2; ++i)
    weight += std::ldexp(recurrence_ab(params.k - 1 - i, params.epsilon).a, i);
  result.weight = weight;
  return result;
}

Matching lower_bound_consecutive_matching(const Instance& instance) {
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i + 1 < instance.size(); i += 2)
    pairs.emplace_back(instance.requests[i].id, instance.requests[i + 1].id);
  return make_matching(std::move(pairs), instance);
}

Instance gen_appendix_b(const AppendixBParams& params) {
  if (params.m < 8 || params.m % 4 != 0) throw Error("m must be a multiple of 4 and at least 8");
  if (!(params.delta > 0.0) || !std::isfinite(params.delta)) throw Error("delta must be positive");

  const double d = 2.0 + params.delta;
  Instance instance{MetricSpace::finite({"A", "B"}, {{0.0, d}, {d, 0.0}}), {}, false};
  const int row = params.m / 2;
  double t = 0.0;
  RequestId id = 0;
  for (int i = 0; i < row; ++i) {
    if (i > 0) t += (i % 2 == 1) ? 1.0 : params.delta;
    for (const char* name : {"A", "B"})
      instance.requests.push_back(Request{id++, TimedPoint{std::string(name), t}, std::nullopt});
  }
  return instance;
}

Matching appendix_b_cross_matching(const Instance& instance) {
  // Requests alternate A, B per column; column c holds ids at positions 2c, 2c+1.
  const std::size_t columns = instance.size() / 2;
  auto id = [&](std::size_t column, std::size_t side) {
    return instance.requests[2 * column + side].id;
  };
  std::vector<Pair> pairs;
  pairs.emplace_back(id(0, 0), id(0, 1));
  pairs.emplace_back(id(columns - 1, 0), id(columns - 1, 1));
  for (std::size_t c = 1; c + 1 < columns; c += 2)
    for (std::size_t side : {0u, 1u}) pairs.emplace_back(id(c, side), id(c + 1, side));
  return make_matching(std::move(pairs), instance);
}

RandomConfig parse_random_metric(const std::string& text) {
  RandomConfig config;
  auto count_after_colon = [&](const std::string& prefix) -> std::size_t {
    const std::string digits = text.substr(prefix.size());
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit))
      throw Error("invalid metric spec '" + text + "'");
    return std::stoul(digits);
  };
  if (text == "line") {
    config.metric = RandomMetric::kLine;
  } else if (text.rfind("euclidean:", 0) == 0) {
    config.metric = RandomMetric::kEuclidean;
    config.dim = count_after_colon("euclidean:");
  } else if (text.rfind("finite:", 0) == 0) {
    config.metric = RandomMetric::kFinite;
    config.finite_points = count_after_colon("finite:");
  } else {
    throw Error("invalid metric spec '" + text + "' (expected line, euclidean:D or finite:N)");
  }
  return config;
}

Instance gen_random(std::size_t m, std::uint64_t seed, const RandomConfig& config) {
  if (m % 2 != 0) throw Error("request count must be even");
  if (!(config.extent > 0.0) || !(config.horizon >= 0.0))
    throw Error("random config needs extent > 0 and horizon >= 0");
  if (config.metric == RandomMetric::kEuclidean && config.dim == 0)
    throw Error("euclidean dimension must be at least 1");
  if (config.metric == RandomMetric::kFinite && config.finite_points == 0)
    throw Error("finite metric needs at least one point");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, config.extent);
  std::uniform_real_distribution<double> clock(0.0, config.horizon);

  Instance instance;
  instance.bipartite = config.bipartite;
  std::vector<Location> locations(m);
  switch (config.metric) {
    case RandomMetric::kLine:
      instance.space = MetricSpace::line();
      for (auto& loc : locations) loc = coord(rng);
      break;
    case RandomMetric::kEuclidean:
      instance.space = MetricSpace::euclidean(config.dim);
      for (auto& loc : locations) {
        std::vector<double> v(config.dim);
        for (auto& c : v) c = coord(rng);
        loc = std::move(v);
      }
      break;
    case RandomMetric::kFinite: {
      const std::size_t n = config.finite_points;
      std::vector<std::vector<double>> points(n, std::vector<double>(2));
      for (auto& p : points)
        for (auto& c : p) c = coord(rng);
      std::vector<std::string> names(n);
      DistanceMatrix matrix(n, std::vector<double>(n, 0.0));
      for (std::size_t i = 0; i < n; ++i) {
        names[i] = "p" + std::to_string(i);
        for (std::size_t j = 0; j < n; ++j)
          matrix[i][j] = std::hypot(points[i][0] - points[j][0], points[i][1] - points[j][1]);
      }
      instance.space = MetricSpace::finite(std::move(names), std::move(matrix));
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      for (auto& loc : locations) loc = "p" + std::to_string(pick(rng));
      break;
    }
  }

  std::vector<double> times(m);
  for (auto& t : times) t = clock(rng);
  std::sort(times.begin(), times.end());

  std::vector<int> colors(m);
  for (std::size_t i = 0; i < m; ++i) colors[i] = static_cast<int>(i % 2);
  if (config.bipartite) std::shuffle(colors.begin(), colors.end(), rng);

  for (std::size_t i = 0; i < m; ++i) {
    Request r{static_cast<RequestId>(i), TimedPoint{std::move(locations[i]), times[i]}, std::nullopt};
    if (config.bipartite) r.color = colors[i];
    instance.requests.push_back(std::move(r));
  }
  return instance;
}

}  // namespace mpmd
