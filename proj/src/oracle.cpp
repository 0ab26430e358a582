#include "mpmd/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace mpmd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Positions of the requests ordered by id.
std::vector<std::size_t> positions_by_id(const Instance& instance) {
  std::vector<std::size_t> order(instance.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return instance.requests[a].id < instance.requests[b].id;
  });
  return order;
}

DistanceMatrix weights_between(const Instance& instance, const std::vector<std::size_t>& order) {
  const std::size_t m = order.size();
  DistanceMatrix w(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      w[i][j] = w[j][i] = augmented_distance(instance.space, instance.requests[order[i]].point,
                                             instance.requests[order[j]].point);
  return w;
}

std::map<RequestId, std::size_t> id_index(const Instance& instance) {
  std::map<RequestId, std::size_t> index;
  for (std::size_t i = 0; i < instance.size(); ++i) index.emplace(instance.requests[i].id, i);
  return index;
}

}  // namespace

Matching make_matching(std::vector<Pair> pairs, const Instance& instance) {
  const auto index = id_index(instance);
  std::set<RequestId> covered;
  for (auto& [p, q] : pairs) {
    if (p > q) std::swap(p, q);
    for (RequestId id : {p, q}) {
      if (!index.count(id)) throw Error("matching references unknown id " + std::to_string(id));
      if (!covered.insert(id).second)
        throw Error("request " + std::to_string(id) + " matched more than once");
    }
  }
  if (covered.size() != instance.size())
    throw Error("matching is not perfect: " + std::to_string(covered.size()) + " of " +
                std::to_string(instance.size()) + " requests covered");
  std::sort(pairs.begin(), pairs.end());
  double weight = 0.0;
  for (const auto& [p, q] : pairs)
    weight += augmented_distance(instance.space, instance.requests[index.at(p)].point,
                                 instance.requests[index.at(q)].point);
  return Matching{std::move(pairs), weight};
}

Matching matching_of(const RunReport& report, const Instance& instance) {
  std::vector<Pair> pairs;
  pairs.reserve(report.records.size());
  for (const auto& r : report.records) pairs.emplace_back(r.p, r.q);
  return make_matching(std::move(pairs), instance);
}

Matching opt_general(const Instance& instance) {
  instance.validate();
  const std::size_t m = instance.size();
  if (m > kGeneralOracleLimit)
    throw Error("exact general oracle supports at most " + std::to_string(kGeneralOracleLimit) +
                " requests (got " + std::to_string(m) + ")");
  const auto order = positions_by_id(instance);
  const auto w = weights_between(instance, order);

  // best[mask]: minimum weight of a perfect matching on the vertex set `mask`;
  // partner[mask]: partner of the lowest vertex of `mask` in that optimum.
  const std::uint32_t full = m == 0 ? 0u : static_cast<std::uint32_t>((1u << m) - 1u);
  std::vector<double> best(std::size_t{full} + 1, kInf);
  std::vector<std::uint8_t> partner(std::size_t{full} + 1, 0);
  best[0] = 0.0;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    if (std::popcount(mask) % 2 != 0) continue;
    const int i = std::countr_zero(mask);
    const std::uint32_t rest = mask & ~(1u << i);
    for (std::uint32_t bits = rest; bits != 0; bits &= bits - 1) {
      const int j = std::countr_zero(bits);
      const double candidate = w[i][j] + best[rest & ~(1u << j)];
      if (candidate < best[mask]) {
        best[mask] = candidate;
        partner[mask] = static_cast<std::uint8_t>(j);
      }
    }
  }

  std::vector<Pair> pairs;
  for (std::uint32_t mask = full; mask != 0;) {
    const int i = std::countr_zero(mask);
    const int j = partner[mask];
    pairs.emplace_back(instance.requests[order[i]].id, instance.requests[order[j]].id);
    mask &= ~((1u << i) | (1u << j));
  }
  return make_matching(std::move(pairs), instance);
}

std::vector<std::size_t> min_cost_assignment(const DistanceMatrix& cost) {
  const std::size_t n = cost.size();
  for (const auto& row : cost)
    if (row.size() != n) throw Error("assignment cost matrix must be square");
  if (n == 0) return {};

  // Shortest augmenting path with potentials; 1-based with column 0 as the
  // virtual source.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> row_of(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    row_of[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = row_of[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double reduced = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (reduced < minv[j]) {
          minv[j] = reduced;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      row_of[j0] = row_of[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> column_of(n);
  for (std::size_t j = 1; j <= n; ++j) column_of[row_of[j] - 1] = j - 1;
  return column_of;
}

Matching opt_bipartite(const Instance& instance) {
  instance.validate();
  if (!instance.bipartite) throw Error("bipartite oracle needs a bipartite instance");
  std::vector<std::size_t> side[2];
  for (std::size_t pos : positions_by_id(instance))
    side[*instance.requests[pos].color].push_back(pos);

  const std::size_t n = side[0].size();
  DistanceMatrix cost(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      cost[i][j] = augmented_distance(instance.space, instance.requests[side[0][i]].point,
                                      instance.requests[side[1][j]].point);
  const auto column_of = min_cost_assignment(cost);

  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < n; ++i)
    pairs.emplace_back(instance.requests[side[0][i]].id, instance.requests[side[1][column_of[i]]].id);
  return make_matching(std::move(pairs), instance);
}

Matching brute_force_opt(const Instance& instance) {
  instance.validate();
  const std::size_t m = instance.size();
  if (m > kBruteForceLimit)
    throw Error("brute-force oracle supports at most " + std::to_string(kBruteForceLimit) +
                " requests (got " + std::to_string(m) + ")");
  const auto order = positions_by_id(instance);
  const auto w = weights_between(instance, order);
  auto color = [&](std::size_t i) { return instance.requests[order[i]].color; };

  std::vector<bool> used(m, false);
  std::vector<std::pair<std::size_t, std::size_t>> current, best;
  double best_weight = kInf;

  // Pairs are generated with increasing first element, so the first optimum
  // found is the lexicographically smallest one.
  auto recurse = [&](auto&& self, double weight) -> void {
    std::size_t i = 0;
    while (i < m && used[i]) ++i;
    if (i == m) {
      if (weight < best_weight) {
        best_weight = weight;
        best = current;
      }
      return;
    }
    used[i] = true;
    for (std::size_t j = i + 1; j < m; ++j) {
      if (used[j]) continue;
      if (instance.bipartite && color(i) == color(j)) continue;
      used[j] = true;
      current.emplace_back(i, j);
      self(self, weight + w[i][j]);
      current.pop_back();
      used[j] = false;
    }
    used[i] = false;
  };
  recurse(recurse, 0.0);

  if (best_weight == kInf && m > 0) throw Error("instance admits no perfect matching");
  std::vector<Pair> pairs;
  for (const auto& [i, j] : best)
    pairs.emplace_back(instance.requests[order[i]].id, instance.requests[order[j]].id);
  return make_matching(std::move(pairs), instance);
}

double realize_online(const Matching& matching, const Instance& instance) {
  // Validates perfection.
  make_matching(matching.pairs, instance);
  const auto index = id_index(instance);
  double total = 0.0;
  for (const auto& [a, b] : matching.pairs) {
    const auto& p = instance.requests[index.at(a)];
    const auto& q = instance.requests[index.at(b)];
    const double at = std::max(p.arrival(), q.arrival());
    total += (at - p.arrival()) + (at - q.arrival()) +
             distance(instance.space, p.point.location, q.point.location);
  }
  return total;
}

CycleDecomposition cycle_decompose(const Matching& a, const Matching& b, const Instance& instance) {
  std::map<RequestId, RequestId> mate_a, mate_b;
  for (const auto& [p, q] : a.pairs) mate_a[p] = q, mate_a[q] = p;
  for (const auto& [p, q] : b.pairs) mate_b[p] = q, mate_b[q] = p;
  if (mate_a.size() != instance.size() || mate_b.size() != instance.size())
    throw Error("cycle decomposition needs two perfect matchings on the instance");
  for (const auto& [id, _] : mate_a)
    if (!mate_b.count(id)) throw Error("matchings cover different id sets");

  const auto index = id_index(instance);
  auto weight = [&](RequestId p, RequestId q) {
    return augmented_distance(instance.space, instance.requests[index.at(p)].point,
                              instance.requests[index.at(q)].point);
  };

  CycleDecomposition result;
  std::set<RequestId> visited;
  for (const auto& [start, _] : mate_a) {
    if (visited.count(start)) continue;
    Cycle cycle;
    RequestId cur = start;
    do {
      const RequestId via_a = mate_a.at(cur);
      cycle.vertices.push_back(cur);
      cycle.vertices.push_back(via_a);
      visited.insert(cur);
      visited.insert(via_a);
      cycle.length_a += weight(cur, via_a);
      const RequestId via_b = mate_b.at(via_a);
      cycle.length_b += weight(via_a, via_b);
      cur = via_b;
    } while (cur != start);
    result.cycles.push_back(std::move(cycle));
  }
  return result;
}

Instance restrict_instance(const Instance& instance, const std::vector<RequestId>& ids) {
  const std::set<RequestId> keep(ids.begin(), ids.end());
  Instance sub{instance.space, {}, instance.bipartite};
  for (const auto& r : instance.requests)
    if (keep.count(r.id)) sub.requests.push_back(r);
  if (sub.size() != keep.size()) throw Error("restriction references unknown ids");
  return sub;
}

std::string RestrictionCounterexample::describe() const {
  std::ostringstream out;
  auto print = [&](const std::vector<Pair>& pairs) {
    for (const auto& [p, q] : pairs) out << " (" << p << "," << q << ")";
  };
  out << "cycle " << cycle_index << ": run pairs";
  print(expected);
  out << " but restricted run pairs";
  print(actual);
  return out.str();
}

std::optional<RestrictionCounterexample> restriction_check(const Instance& instance,
                                                           const RunReport& report,
                                                           const CycleDecomposition& decomposition) {
  for (std::size_t c = 0; c < decomposition.cycles.size(); ++c) {
    const auto& vertices = decomposition.cycles[c].vertices;
    const std::set<RequestId> members(vertices.begin(), vertices.end());
    std::vector<Pair> expected;
    for (const auto& r : report.records)
      if (members.count(r.p) && members.count(r.q)) expected.emplace_back(std::min(r.p, r.q), std::max(r.p, r.q));
    std::sort(expected.begin(), expected.end());

    const Instance sub = restrict_instance(instance, vertices);
    const auto actual = matching_of(simulate(sub, report.policy), sub).pairs;
    if (actual != expected) return RestrictionCounterexample{c, expected, actual};
  }
  return std::nullopt;
}

}  // namespace mpmd
