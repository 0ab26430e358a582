#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mpmd/harness.hpp"

namespace py = pybind11;

namespace {

mpmd::PolicyId policy_of(const std::string& name, double epsilon) {
  return mpmd::PolicyId{mpmd::parse_policy(name), epsilon};
}

py::dict ratio_dict(const mpmd::RatioReport& r) {
  py::dict d;
  d["m"] = r.m;
  d["metric"] = r.metric_kind;
  d["bipartite"] = r.bipartite;
  d["policy"] = mpmd::policy_name(r.policy.policy);
  d["epsilon"] = r.policy.epsilon;
  d["online_cost"] = r.online_cost;
  d["offline_weight"] = r.offline_weight;
  d["opt_weight"] = r.opt_weight;
  d["opt_oracle"] = r.opt_source;
  d["ratio_online"] = r.ratio_online;
  d["ratio_offline"] = r.ratio_offline;
  d["bound_2_over_f"] = r.bound_2_over_f;
  d["within_bound"] = r.within_bound;
  return d;
}

py::dict sweep_dict(const mpmd::SweepResult& s) {
  py::list rows;
  for (const auto& row : s.rows) {
    py::dict d;
    d["m"] = row.m;
    d["ratio_online"] = row.ratio_online;
    d["ratio_offline"] = row.ratio_offline;
    d["online_cost"] = row.online_cost;
    d["offline_weight"] = row.offline_weight;
    d["opt_weight"] = row.opt_weight;
    d["opt_exact"] = row.exact_opt;
    rows.append(d);
  }
  py::dict out;
  out["rows"] = rows;
  out["slope"] = s.slope;
  return out;
}

}  // namespace

PYBIND11_MODULE(_mpmd, m) {
  m.doc() = "Online min-cost perfect matching with delays: policies, oracles and instance families.";

  py::register_exception<mpmd::Error>(m, "MpmdError", PyExc_ValueError);

  py::class_<mpmd::Instance>(m, "Instance")
      .def_property_readonly("size", &mpmd::Instance::size)
      .def_property_readonly("bipartite", [](const mpmd::Instance& i) { return i.bipartite; })
      .def_property_readonly("metric_kind", [](const mpmd::Instance& i) { return i.space.kind_name(); })
      .def_property_readonly("times",
                             [](const mpmd::Instance& i) {
                               std::vector<double> t;
                               for (const auto& r : i.requests) t.push_back(r.arrival());
                               return t;
                             })
      .def_property_readonly("ids",
                             [](const mpmd::Instance& i) {
                               std::vector<mpmd::RequestId> ids;
                               for (const auto& r : i.requests) ids.push_back(r.id);
                               return ids;
                             })
      .def("to_json", &mpmd::instance_to_json)
      .def_static("from_json", &mpmd::instance_from_json, py::arg("text"))
      .def("hash", &mpmd::instance_hash)
      .def("__len__", &mpmd::Instance::size)
      .def("__eq__", [](const mpmd::Instance& a, const mpmd::Instance& b) { return a == b; });

  py::class_<mpmd::MatchRecord>(m, "MatchRecord")
      .def_readonly("p", &mpmd::MatchRecord::p)
      .def_readonly("q", &mpmd::MatchRecord::q)
      .def_readonly("match_time", &mpmd::MatchRecord::match_time)
      .def_readonly("connection", &mpmd::MatchRecord::connection)
      .def_readonly("delay_p", &mpmd::MatchRecord::delay_p)
      .def_readonly("delay_q", &mpmd::MatchRecord::delay_q)
      .def("__repr__", [](const mpmd::MatchRecord& r) {
        return "MatchRecord(p=" + std::to_string(r.p) + ", q=" + std::to_string(r.q) +
               ", match_time=" + mpmd::format_number(r.match_time) + ")";
      });

  py::class_<mpmd::RunReport>(m, "RunReport")
      .def_readonly("records", &mpmd::RunReport::records)
      .def_readonly("online_cost", &mpmd::RunReport::online_cost)
      .def_readonly("offline_weight", &mpmd::RunReport::offline_weight)
      .def_property_readonly("policy", [](const mpmd::RunReport& r) { return mpmd::policy_name(r.policy.policy); })
      .def_property_readonly("epsilon", [](const mpmd::RunReport& r) { return r.policy.epsilon; })
      .def_property_readonly("pairs", [](const mpmd::RunReport& r) {
        std::vector<std::pair<mpmd::RequestId, mpmd::RequestId>> pairs;
        for (const auto& rec : r.records) pairs.emplace_back(rec.p, rec.q);
        return pairs;
      });

  py::class_<mpmd::Matching>(m, "Matching")
      .def_readonly("pairs", &mpmd::Matching::pairs)
      .def_readonly("weight", &mpmd::Matching::weight);

  m.def("gen_lower_bound",
        [](int k, double epsilon, double eta, bool bipartite) {
          return mpmd::gen_lower_bound({k, epsilon, eta, bipartite});
        },
        py::arg("k"), py::arg("epsilon"), py::arg("eta") = 1e-6, py::arg("bipartite") = false);
  m.def("expected_lower_bound_result",
        [](int k, double epsilon) {
          const auto e = mpmd::expected_lower_bound_result({k, epsilon, 0.0, false});
          return py::make_tuple(e.pairs, e.weight);
        },
        py::arg("k"), py::arg("epsilon"));
  m.def("recurrence_ab",
        [](int i, double epsilon) {
          const auto g = mpmd::recurrence_ab(i, epsilon);
          return py::make_tuple(g.a, g.b);
        },
        py::arg("i"), py::arg("epsilon"));
  m.def("gen_appendix_b", [](int m_, double delta) { return mpmd::gen_appendix_b({m_, delta}); },
        py::arg("m"), py::arg("delta"));
  m.def("gen_random",
        [](std::size_t m_, std::uint64_t seed, const std::string& metric, bool bipartite, double horizon,
           double extent) {
          auto config = mpmd::parse_random_metric(metric);
          config.bipartite = bipartite;
          config.horizon = horizon;
          config.extent = extent;
          return mpmd::gen_random(m_, seed, config);
        },
        py::arg("m"), py::arg("seed"), py::arg("metric") = "line", py::arg("bipartite") = false,
        py::arg("horizon") = 1.0, py::arg("extent") = 1.0);
  m.def("load_instance", [](const std::string& path) { return mpmd::load_instance(path); }, py::arg("path"));
  m.def("save_instance", [](const mpmd::Instance& i, const std::string& path) { mpmd::save_instance(i, path); },
        py::arg("instance"), py::arg("path"));

  m.def("simulate",
        [](const mpmd::Instance& i, const std::string& policy, double epsilon) {
          return mpmd::simulate(i, policy_of(policy, epsilon));
        },
        py::arg("instance"), py::arg("policy"), py::arg("epsilon"));
  m.def("event_time",
        [](const mpmd::Instance& i, const std::string& policy, double epsilon, std::size_t a, std::size_t b) {
          return mpmd::event_time(policy_of(policy, epsilon), i.requests.at(a), i.requests.at(b), i.space);
        },
        py::arg("instance"), py::arg("policy"), py::arg("epsilon"), py::arg("a"), py::arg("b"),
        "Firing time of the pair at positions a and b (inf when never admissible).");

  m.def("opt_general", &mpmd::opt_general, py::arg("instance"));
  m.def("opt_bipartite", &mpmd::opt_bipartite, py::arg("instance"));
  m.def("brute_force_opt", &mpmd::brute_force_opt, py::arg("instance"));
  m.def("realize_online", &mpmd::realize_online, py::arg("matching"), py::arg("instance"));
  m.def("cycle_decompose",
        [](const mpmd::Matching& a, const mpmd::Matching& b, const mpmd::Instance& i) {
          py::list cycles;
          for (const auto& c : mpmd::cycle_decompose(a, b, i).cycles) {
            py::dict d;
            d["vertices"] = c.vertices;
            d["length_a"] = c.length_a;
            d["length_b"] = c.length_b;
            cycles.append(d);
          }
          return cycles;
        },
        py::arg("a"), py::arg("b"), py::arg("instance"));

  m.def("eval_f", [](std::size_t m_max, double gamma) { return mpmd::eval_f(m_max, gamma).values(); },
        py::arg("m_max"), py::arg("gamma"), "Returns [f(2), f(4), ..., f(m_max)].");
  m.def("theoretical_bound", &mpmd::theoretical_bound, py::arg("m"), py::arg("epsilon"));
  m.def("ratio",
        [](const mpmd::Instance& i, const std::string& policy, double epsilon) {
          return ratio_dict(mpmd::compute_ratio(i, policy_of(policy, epsilon)));
        },
        py::arg("instance"), py::arg("policy"), py::arg("epsilon"));
  m.def("sweep_lower_bound",
        [](int k_min, int k_max, double epsilon, double eta) {
          return sweep_dict(mpmd::sweep_lower_bound(k_min, k_max, epsilon, eta));
        },
        py::arg("k_min"), py::arg("k_max"), py::arg("epsilon"), py::arg("eta") = 1e-6);
  m.def("sweep_appendix_b",
        [](const std::vector<int>& ms, const std::string& policy, double epsilon, double delta_scale,
           bool delta_per_m) {
          return sweep_dict(mpmd::sweep_appendix_b(ms, policy_of(policy, epsilon), delta_scale, delta_per_m));
        },
        py::arg("ms"), py::arg("policy") = "notime-min", py::arg("epsilon") = 1.0,
        py::arg("delta_scale") = 1.0, py::arg("delta_per_m") = true);
  m.def("verify",
        [](std::size_t count, std::size_t max_m, std::uint64_t seed) {
          mpmd::VerifyOptions options;
          options.count = count;
          options.max_m = max_m;
          options.seed = seed;
          const auto report = mpmd::run_verify(options);
          py::dict out;
          for (const auto& inv : report.invariants)
            out[py::str(inv.name)] = py::make_tuple(inv.checked, inv.failed, inv.first_failure);
          return out;
        },
        py::arg("count") = 50, py::arg("max_m") = 10, py::arg("seed") = 1);

  m.attr("__version__") = mpmd::kToolVersion;
}
