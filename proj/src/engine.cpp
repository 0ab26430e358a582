#include "mpmd/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <unordered_map>
#include <unordered_set>

namespace mpmd {

void Instance::validate() const {
  if (requests.size() % 2 != 0) throw Error("request count must be even");
  std::unordered_set<RequestId> seen;
  std::size_t color_count[2] = {0, 0};
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const auto& r = requests[i];
    const std::string where = "request #" + std::to_string(i) + " (id " + std::to_string(r.id) + ")";
    if (r.id < 0) throw Error(where + ": id must be non-negative");
    if (!seen.insert(r.id).second) throw Error("duplicate request id " + std::to_string(r.id));
    if (!std::isfinite(r.point.time)) throw Error(where + ": arrival time must be finite");
    try {
      space.check_location(r.point.location);
    } catch (const Error& e) {
      throw Error(where + ": " + e.what());
    }
    if (bipartite) {
      if (!r.color) throw Error(where + ": missing color in bipartite instance");
      if (*r.color != 0 && *r.color != 1) throw Error(where + ": color must be 0 or 1");
      ++color_count[*r.color];
    } else if (r.color) {
      throw Error(where + ": color given in a non-bipartite instance");
    }
  }
  if (bipartite && color_count[0] != color_count[1])
    throw Error("color imbalance: " + std::to_string(color_count[0]) + " requests of color 0, " +
                std::to_string(color_count[1]) + " of color 1");
}

std::size_t Instance::position_of(RequestId id) const {
  for (std::size_t i = 0; i < requests.size(); ++i)
    if (requests[i].id == id) return i;
  throw Error("unknown request id " + std::to_string(id));
}

std::string policy_name(Policy policy) {
  switch (policy) {
    case Policy::kHemisphere: return "hemisphere";
    case Policy::kHemisphereBipartite: return "hemisphere-b";
    case Policy::kNoTimeMin: return "notime-min";
    case Policy::kNoTimeLate: return "notime-late";
    case Policy::kNoTimeEarly: return "notime-early";
  }
  return "unknown";
}

Policy parse_policy(const std::string& name) {
  for (auto p : {Policy::kHemisphere, Policy::kHemisphereBipartite, Policy::kNoTimeMin,
                 Policy::kNoTimeLate, Policy::kNoTimeEarly})
    if (policy_name(p) == name) return p;
  throw Error("unknown policy '" + name + "'");
}

bool is_hemisphere(Policy policy) {
  return policy == Policy::kHemisphere || policy == Policy::kHemisphereBipartite;
}

namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw Error("epsilon must be a positive finite number");
}

double firing_time(Policy policy, double epsilon, double t_p, double t_q, double space_distance) {
  const double later = std::max(t_p, t_q);
  const double earlier = std::min(t_p, t_q);
  switch (policy) {
    case Policy::kHemisphere:
    case Policy::kHemisphereBipartite:
      return later + (space_distance + (later - earlier)) / epsilon;
    case Policy::kNoTimeMin:
    case Policy::kNoTimeEarly:
      return std::max(later, earlier + space_distance / epsilon);
    case Policy::kNoTimeLate:
      return later + space_distance / epsilon;
  }
  return std::numeric_limits<double>::infinity();
}

struct Event {
  double time;
  RequestId owner;
  RequestId other;
  std::size_t early;  // position of the earlier arrival
  std::size_t late;   // position of the later arrival
};

struct LaterEvent {
  bool operator()(const Event& x, const Event& y) const {
    if (x.time != y.time) return x.time > y.time;
    if (x.owner != y.owner) return x.owner > y.owner;
    return x.other > y.other;
  }
};

}  // namespace

double event_time(const PolicyId& policy, const Request& p, const Request& q,
                  const MetricSpace& space) {
  check_epsilon(policy.epsilon);
  if (policy.policy == Policy::kHemisphereBipartite) {
    if (!p.color || !q.color) throw Error("bipartite policy needs colored requests");
    if (*p.color == *q.color) return std::numeric_limits<double>::infinity();
  }
  return firing_time(policy.policy, policy.epsilon, p.arrival(), q.arrival(),
                     distance(space, p.point.location, q.point.location));
}

RunReport simulate(const Instance& instance, const PolicyId& policy) {
  check_epsilon(policy.epsilon);
  instance.validate();
  if (policy.policy == Policy::kHemisphereBipartite && !instance.bipartite)
    throw Error("policy hemisphere-b requires a bipartite instance");

  const auto& reqs = instance.requests;
  const std::size_t m = reqs.size();

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (reqs[a].arrival() != reqs[b].arrival()) return reqs[a].arrival() < reqs[b].arrival();
    return reqs[a].id < reqs[b].id;
  });

  std::priority_queue<Event, std::vector<Event>, LaterEvent> queue;
  std::vector<bool> matched(m, false);
  std::vector<std::size_t> waiting;  // admitted, unmatched
  RunReport report{policy, {}, 0.0, 0.0};
  report.records.reserve(m / 2);

  auto live = [&](const Event& e) { return !matched[e.early] && !matched[e.late]; };
  auto drop_dead = [&] {
    while (!queue.empty() && !live(queue.top())) queue.pop();
  };

  auto admit = [&](std::size_t pos) {
    const auto& late = reqs[pos];
    for (std::size_t w : waiting) {
      const auto& early = reqs[w];
      const double t = event_time(policy, late, early, instance.space);
      if (!std::isfinite(t)) continue;
      const bool early_owns = policy.policy == Policy::kNoTimeEarly;
      queue.push(Event{t, early_owns ? early.id : late.id, early_owns ? late.id : early.id, w, pos});
    }
    waiting.push_back(pos);
  };

  auto fire_next = [&] {
    const double anchor = queue.top().time;
    std::vector<Event> group;
    while (!queue.empty() && queue.top().time <= anchor + kEventTolerance) {
      if (live(queue.top())) group.push_back(queue.top());
      queue.pop();
    }
    auto best = std::min_element(group.begin(), group.end(), [](const Event& x, const Event& y) {
      if (x.owner != y.owner) return x.owner < y.owner;
      if (x.other != y.other) return x.other < y.other;
      return x.time < y.time;
    });
    const Event chosen = *best;
    for (const auto& e : group)
      if (&e != &*best) queue.push(e);

    matched[chosen.early] = matched[chosen.late] = true;
    std::erase_if(waiting, [&](std::size_t w) { return matched[w]; });
    const auto& p = reqs[chosen.early];
    const auto& q = reqs[chosen.late];
    report.records.push_back(MatchRecord{p.id, q.id, chosen.time,
                                         distance(instance.space, p.point.location, q.point.location),
                                         chosen.time - p.arrival(), chosen.time - q.arrival()});
  };

  std::size_t next = 0;
  while (report.records.size() < m / 2) {
    drop_dead();
    const double next_arrival =
        next < m ? reqs[order[next]].arrival() : std::numeric_limits<double>::infinity();
    if (!queue.empty() && queue.top().time < next_arrival - kEventTolerance) {
      fire_next();
    } else if (next < m) {
      admit(order[next++]);
    } else if (!queue.empty()) {
      fire_next();
    } else {
      throw Error("no admissible pair left for the remaining requests");
    }
  }

  report.online_cost = online_cost(report.records);
  report.offline_weight = offline_weight(report.records, instance);
  return report;
}

double online_cost(std::span<const MatchRecord> records) {
  double total = 0.0;
  for (const auto& r : records) total += r.connection + r.delay_p + r.delay_q;
  return total;
}

double offline_weight(std::span<const MatchRecord> records, const Instance& instance) {
  std::unordered_map<RequestId, std::size_t> pos;
  for (std::size_t i = 0; i < instance.requests.size(); ++i) pos.emplace(instance.requests[i].id, i);
  auto lookup = [&](RequestId id) -> const Request& {
    auto it = pos.find(id);
    if (it == pos.end()) throw Error("unknown request id " + std::to_string(id));
    return instance.requests[it->second];
  };
  double total = 0.0;
  for (const auto& r : records) {
    const auto& p = lookup(r.p);
    const auto& q = lookup(r.q);
    total += augmented_distance(instance.space, p.point, q.point);
  }
  return total;
}

}  // namespace mpmd
