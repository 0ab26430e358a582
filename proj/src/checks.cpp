#include "mpmd/checks.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace mpmd::checks {

namespace {

std::map<RequestId, const Request*> by_id(const Instance& instance) {
  std::map<RequestId, const Request*> index;
  for (const auto& r : instance.requests) index.emplace(r.id, &r);
  return index;
}

std::string num(double x) {
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

bool close_rel(double x, double y, double rel) {
  return std::abs(x - y) <= rel * std::max({1.0, std::abs(x), std::abs(y)});
}

}  // namespace

Result perfect_matching(const RunReport& report, const Instance& instance) {
  if (report.records.size() != instance.size() / 2)
    return "expected " + std::to_string(instance.size() / 2) + " records, got " +
           std::to_string(report.records.size());
  const auto index = by_id(instance);
  std::set<RequestId> seen;
  for (const auto& r : report.records)
    for (RequestId id : {r.p, r.q}) {
      if (!index.count(id)) return "record references unknown id " + std::to_string(id);
      if (!seen.insert(id).second) return "id " + std::to_string(id) + " matched twice";
    }
  return std::nullopt;
}

Result feasible_records(const RunReport& report, const Instance& instance) {
  const auto index = by_id(instance);
  for (const auto& r : report.records) {
    const Request& p = *index.at(r.p);
    const Request& q = *index.at(r.q);
    const std::string tag = "pair (" + std::to_string(r.p) + "," + std::to_string(r.q) + ")";
    if (r.match_time < std::max(p.arrival(), q.arrival()))
      return tag + " matched at " + num(r.match_time) + " before both arrived";
    if (r.delay_p != r.match_time - p.arrival() || r.delay_q != r.match_time - q.arrival())
      return tag + " has inconsistent delays";
    if (r.delay_p < 0 || r.delay_q < 0) return tag + " has a negative delay";
    if (r.connection != distance(instance.space, p.point.location, q.point.location))
      return tag + " connection differs from the metric distance";
    if (report.policy.policy == Policy::kHemisphereBipartite && p.color == q.color)
      return tag + " joins two requests of the same class";
  }
  return std::nullopt;
}

Result cost_identity(const RunReport& report, double epsilon) {
  const double expected = (1.0 + 2.0 / epsilon) * report.offline_weight;
  const double err = std::abs(report.online_cost - expected);
  if (err <= 1e-9 * std::max(std::abs(expected), 1e-300) || err <= 1e-12) return std::nullopt;
  return "online_cost " + num(report.online_cost) + " != (1+2/eps)*offline_weight " + num(expected);
}

Result last_pairs(const RunReport& report, const Instance& instance) {
  if (report.records.size() < 2) return std::nullopt;
  const auto index = by_id(instance);
  const auto& first = report.records[report.records.size() - 2];
  const auto& last = report.records.back();
  // Records list the earlier arrival first, so t(a) <= t(b).
  const Request& a = *index.at(first.p);
  const Request& b = *index.at(first.q);
  const Request* c = index.at(last.p);
  const Request* d = index.at(last.q);
  const double eps = report.policy.epsilon;
  auto D = [&](const Request& x, const Request& y) {
    return augmented_distance(instance.space, x.point, y.point);
  };
  const double ab = D(a, b);
  const double slack = 1e-9 * std::max(1.0, ab) + eps * kEventTolerance;

  std::vector<std::pair<const Request*, const Request*>> bounds;
  if (report.policy.policy == Policy::kHemisphere) {
    bounds = {{&a, c}, {&a, d}, {&b, c}, {&b, d}};
  } else if (report.policy.policy == Policy::kHemisphereBipartite) {
    if (c->color != b.color) std::swap(c, d);
    bounds = {{&a, c}, {&b, d}};
  } else {
    return std::nullopt;
  }
  for (const auto& [x, y] : bounds) {
    if (ab > (1.0 + eps) * D(*x, *y) + slack)
      return "D(" + std::to_string(a.id) + "," + std::to_string(b.id) + ")=" + num(ab) +
             " exceeds (1+eps)*D(" + std::to_string(x->id) + "," + std::to_string(y->id) + ")=" +
             num((1.0 + eps) * D(*x, *y));
  }
  return std::nullopt;
}

Result cycle_structure(const CycleDecomposition& decomposition, const Matching& a,
                       const Matching& b, const Instance& instance) {
  const std::set<Pair> in_a(a.pairs.begin(), a.pairs.end());
  const std::set<Pair> in_b(b.pairs.begin(), b.pairs.end());
  auto edge = [](RequestId x, RequestId y) { return Pair{std::min(x, y), std::max(x, y)}; };

  std::set<RequestId> covered;
  double sum_a = 0.0, sum_b = 0.0;
  for (std::size_t c = 0; c < decomposition.cycles.size(); ++c) {
    const auto& v = decomposition.cycles[c].vertices;
    const std::string tag = "cycle " + std::to_string(c);
    if (v.size() < 2 || v.size() % 2 != 0) return tag + " has odd or too few vertices";
    for (RequestId id : v)
      if (!covered.insert(id).second) return tag + " reuses request " + std::to_string(id);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Pair e = edge(v[i], v[(i + 1) % v.size()]);
      const bool want_a = i % 2 == 0;
      if (want_a ? !in_a.count(e) : !in_b.count(e))
        return tag + " does not alternate at position " + std::to_string(i);
    }
    sum_a += decomposition.cycles[c].length_a;
    sum_b += decomposition.cycles[c].length_b;
  }
  if (covered.size() != instance.size()) return std::string("cycles do not cover every request");
  if (!close_rel(sum_a, a.weight, 1e-9)) return "sum of l_i " + num(sum_a) + " != " + num(a.weight);
  if (!close_rel(sum_b, b.weight, 1e-9)) return "sum of l_i* " + num(sum_b) + " != " + num(b.weight);
  return std::nullopt;
}

Result cycle_ratio_bound(const CycleDecomposition& decomposition, const Matching& a,
                         const Matching& b) {
  if (b.weight <= 0.0) return std::nullopt;
  double worst = 0.0;
  for (const auto& c : decomposition.cycles) {
    if (c.length_b > 0.0) {
      worst = std::max(worst, c.length_a / c.length_b);
    } else if (c.length_a > 0.0) {
      return std::nullopt;  // unbounded cycle ratio: holds trivially
    }
  }
  const double ratio = a.weight / b.weight;
  if (ratio <= worst + 1e-9) return std::nullopt;
  return "weight ratio " + num(ratio) + " exceeds max cycle ratio " + num(worst);
}

Result color_crossing(const Matching& matching, const Instance& instance) {
  const auto index = by_id(instance);
  for (const auto& [p, q] : matching.pairs)
    if (index.at(p)->color == index.at(q)->color)
      return "pair (" + std::to_string(p) + "," + std::to_string(q) + ") does not cross colors";
  return std::nullopt;
}

Result cycles_alternate_colors(const CycleDecomposition& decomposition, const Instance& instance) {
  const auto index = by_id(instance);
  for (std::size_t c = 0; c < decomposition.cycles.size(); ++c) {
    const auto& v = decomposition.cycles[c].vertices;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (index.at(v[i])->color == index.at(v[(i + 1) % v.size()])->color)
        return "colors do not alternate in cycle " + std::to_string(c);
  }
  return std::nullopt;
}

Result single_cycle_classes(const RunReport& report, const CycleDecomposition& decomposition,
                            const Instance& instance) {
  if (decomposition.cycles.size() != 1 || report.records.size() < 2) return std::nullopt;
  const auto index = by_id(instance);
  const auto& first = report.records[report.records.size() - 2];
  const auto& last = report.records.back();
  const RequestId a = first.p, b = first.q;

  const auto& v = decomposition.cycles.front().vertices;
  const std::size_t n = v.size();
  const std::size_t ia = static_cast<std::size_t>(std::find(v.begin(), v.end(), a) - v.begin());
  // Step away from b along the cycle until reaching an endpoint of the last pair.
  const std::size_t toward_b_next = (ia + 1) % n;
  const bool forward = v[toward_b_next] != b;
  RequestId c = -1;
  for (std::size_t step = 1; step < n; ++step) {
    const RequestId x = v[forward ? (ia + step) % n : (ia + n - step) % n];
    if (x == last.p || x == last.q) {
      c = x;
      break;
    }
  }
  if (c < 0) return std::string("could not locate the path from a to the last pair");
  const RequestId d = c == last.p ? last.q : last.p;
  const auto cls = [&](RequestId id) { return index.at(id)->color; };
  if (cls(a) == cls(d) && cls(b) == cls(c) && cls(a) != cls(b)) return std::nullopt;
  return "class pattern violated for a=" + std::to_string(a) + " b=" + std::to_string(b) +
         " c=" + std::to_string(c) + " d=" + std::to_string(d);
}

}  // namespace mpmd::checks
