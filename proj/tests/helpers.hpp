#pragma once

#include <vector>

#include "mpmd/engine.hpp"

namespace test_support {

// Line instance from (location, time) pairs; ids follow list order.
inline mpmd::Instance line_instance(const std::vector<std::pair<double, double>>& pts,
                                    const std::vector<int>& colors = {}) {
  mpmd::Instance inst;
  inst.bipartite = !colors.empty();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    mpmd::Request r;
    r.id = static_cast<mpmd::RequestId>(i);
    r.point = {pts[i].first, pts[i].second};
    if (inst.bipartite) r.color = colors[i];
    inst.requests.push_back(r);
  }
  return inst;
}

inline mpmd::Request line_request(mpmd::RequestId id, double x, double t) {
  mpmd::Request r;
  r.id = id;
  r.point = {x, t};
  return r;
}

}  // namespace test_support
