#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mpmd/instances.hpp"

namespace mpmd {

namespace {

using nlohmann::json;

json location_to_json(const Location& loc) {
  if (const auto* x = std::get_if<double>(&loc)) return *x;
  if (const auto* v = std::get_if<std::vector<double>>(&loc)) return *v;
  return std::get<std::string>(loc);
}

json metric_to_json(const MetricSpace& space) {
  if (space.is_line()) return {{"kind", "line"}};
  if (space.is_euclidean())
    return {{"kind", "euclidean"}, {"dim", std::get<EuclideanSpace>(space.kind()).dim}};
  const auto& finite = std::get<FiniteSpace>(space.kind());
  return {{"kind", "finite"}, {"points", finite.names()}, {"matrix", finite.matrix()}};
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error("instance file: " + where + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing field \"") + key + "\"");
  return *it;
}

double number(const json& value, const std::string& where) {
  if (!value.is_number()) fail(where, "expected a number");
  return value.get<double>();
}

MetricSpace metric_from_json(const json& metric) {
  const std::string where = "metric";
  const json& kind = field(metric, "kind", where);
  if (!kind.is_string()) fail(where + ".kind", "expected a string");
  const auto name = kind.get<std::string>();
  try {
    if (name == "line") return MetricSpace::line();
    if (name == "euclidean") {
      const json& dim = field(metric, "dim", where);
      if (!dim.is_number_integer() || dim.get<long long>() < 1)
        fail(where + ".dim", "expected a positive integer");
      return MetricSpace::euclidean(dim.get<std::size_t>());
    }
    if (name == "finite") {
      const json& points = field(metric, "points", where);
      const json& matrix = field(metric, "matrix", where);
      if (!points.is_array()) fail(where + ".points", "expected an array of names");
      if (!matrix.is_array()) fail(where + ".matrix", "expected an array of rows");
      std::vector<std::string> names;
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (!points[i].is_string()) fail(where + ".points[" + std::to_string(i) + "]", "expected a string");
        names.push_back(points[i].get<std::string>());
      }
      DistanceMatrix rows;
      for (std::size_t i = 0; i < matrix.size(); ++i) {
        if (!matrix[i].is_array()) fail(where + ".matrix[" + std::to_string(i) + "]", "expected an array");
        std::vector<double> row;
        for (std::size_t j = 0; j < matrix[i].size(); ++j)
          row.push_back(number(matrix[i][j], where + ".matrix[" + std::to_string(i) + "][" + std::to_string(j) + "]"));
        rows.push_back(std::move(row));
      }
      return MetricSpace::finite(std::move(names), std::move(rows));
    }
  } catch (const json::exception& e) {
    fail(where, e.what());
  }
  fail(where + ".kind", "unknown metric kind \"" + name + "\"");
}

Location location_from_json(const json& loc, const MetricSpace& space, const std::string& where) {
  if (space.is_line()) return number(loc, where);
  if (space.is_euclidean()) {
    if (!loc.is_array()) fail(where, "expected a coordinate array");
    std::vector<double> v;
    for (std::size_t i = 0; i < loc.size(); ++i)
      v.push_back(number(loc[i], where + "[" + std::to_string(i) + "]"));
    return v;
  }
  if (!loc.is_string()) fail(where, "expected a point name");
  return loc.get<std::string>();
}

json to_json(const Instance& instance) {
  std::vector<const Request*> ordered;
  for (const auto& r : instance.requests) ordered.push_back(&r);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const Request* a, const Request* b) { return a->arrival() < b->arrival(); });

  json requests = json::array();
  for (const Request* r : ordered) {
    json entry = {{"id", r->id}, {"t", r->point.time}, {"loc", location_to_json(r->point.location)}};
    if (r->color) entry["color"] = *r->color;
    requests.push_back(std::move(entry));
  }
  return {{"metric", metric_to_json(instance.space)},
          {"bipartite", instance.bipartite},
          {"requests", std::move(requests)}};
}

}  // namespace

std::string instance_to_json(const Instance& instance) { return to_json(instance).dump(); }

Instance instance_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("instance file: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("document", "expected an object");

  Instance instance;
  instance.space = metric_from_json(field(doc, "metric", "document"));
  const json& bipartite = field(doc, "bipartite", "document");
  if (!bipartite.is_boolean()) fail("bipartite", "expected true or false");
  instance.bipartite = bipartite.get<bool>();

  const json& requests = field(doc, "requests", "document");
  if (!requests.is_array()) fail("requests", "expected an array");
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const std::string where = "requests[" + std::to_string(i) + "]";
    const json& entry = requests[i];
    const json& id = field(entry, "id", where);
    if (!id.is_number_integer() || id.get<long long>() < 0)
      fail(where + ".id", "expected a non-negative integer");
    Request r;
    r.id = id.get<RequestId>();
    r.point.time = number(field(entry, "t", where), where + ".t");
    r.point.location = location_from_json(field(entry, "loc", where), instance.space, where + ".loc");
    if (entry.contains("color")) {
      const json& color = entry["color"];
      if (!color.is_number_integer() || (color.get<long long>() != 0 && color.get<long long>() != 1))
        fail(where + ".color", "expected 0 or 1");
      r.color = color.get<int>();
    }
    if (!instance.requests.empty() && r.point.time < instance.requests.back().point.time)
      fail(where + ".t", "requests must be listed in arrival order");
    instance.requests.push_back(std::move(r));
  }
  instance.validate();
  return instance;
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open instance file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return instance_from_json(buffer.str());
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void save_instance(const Instance& instance, const std::filesystem::path& path) {
  instance.validate();
  std::ofstream out(path);
  if (!out) throw Error("cannot write instance file " + path.string());
  out << to_json(instance).dump(1) << '\n';
  if (!out) throw Error("failed writing instance file " + path.string());
}

std::string instance_hash(const Instance& instance) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : instance_to_json(instance)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mpmd
