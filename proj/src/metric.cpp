#include "mpmd/metric.hpp"

#include <cmath>
#include <sstream>

namespace mpmd {

FiniteSpace::FiniteSpace(std::vector<std::string> names, DistanceMatrix matrix)
    : names_(std::move(names)), matrix_(std::move(matrix)) {
  if (names_.empty()) throw Error("finite metric needs at least one point");
  if (matrix_.size() != names_.size())
    throw Error("finite metric: " + std::to_string(names_.size()) + " names but " +
                std::to_string(matrix_.size()) + " matrix rows");
  if (auto violation = validate_metric(matrix_))
    throw Error("finite metric: " + violation->describe());
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!index_.emplace(names_[i], i).second)
      throw Error("finite metric: duplicate point name '" + names_[i] + "'");
  }
}

std::size_t FiniteSpace::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw Error("unknown point name '" + name + "'");
  return it->second;
}

MetricSpace MetricSpace::euclidean(std::size_t dim) {
  if (dim == 0) throw Error("euclidean dimension must be at least 1");
  return MetricSpace(EuclideanSpace{dim});
}

MetricSpace MetricSpace::finite(std::vector<std::string> names, DistanceMatrix matrix) {
  return MetricSpace(FiniteSpace(std::move(names), std::move(matrix)));
}

std::string MetricSpace::kind_name() const {
  if (is_line()) return "line";
  if (is_euclidean()) return "euclidean";
  return "finite";
}

bool MetricSpace::operator==(const MetricSpace& other) const {
  if (kind_.index() != other.kind_.index()) return false;
  if (is_euclidean())
    return std::get<EuclideanSpace>(kind_).dim == std::get<EuclideanSpace>(other.kind_).dim;
  if (is_finite()) return std::get<FiniteSpace>(kind_) == std::get<FiniteSpace>(other.kind_);
  return true;
}

std::string describe_location(const Location& loc) {
  std::ostringstream out;
  if (const auto* x = std::get_if<double>(&loc)) {
    out << *x;
  } else if (const auto* v = std::get_if<std::vector<double>>(&loc)) {
    out << '[';
    for (std::size_t i = 0; i < v->size(); ++i) out << (i ? "," : "") << (*v)[i];
    out << ']';
  } else {
    out << '\'' << std::get<std::string>(loc) << '\'';
  }
  return out.str();
}

void MetricSpace::check_location(const Location& loc) const {
  if (is_line()) {
    if (!std::holds_alternative<double>(loc))
      throw Error("line metric expects a scalar location, got " + describe_location(loc));
    if (!std::isfinite(std::get<double>(loc))) throw Error("location must be finite");
    return;
  }
  if (is_euclidean()) {
    const auto* v = std::get_if<std::vector<double>>(&loc);
    const auto dim = std::get<EuclideanSpace>(kind_).dim;
    if (v == nullptr)
      throw Error("euclidean metric expects a coordinate vector, got " + describe_location(loc));
    if (v->size() != dim)
      throw Error("dimension mismatch: expected " + std::to_string(dim) + " coordinates, got " +
                  std::to_string(v->size()));
    for (double c : *v)
      if (!std::isfinite(c)) throw Error("location must be finite");
    return;
  }
  const auto* name = std::get_if<std::string>(&loc);
  if (name == nullptr)
    throw Error("finite metric expects a point name, got " + describe_location(loc));
  std::get<FiniteSpace>(kind_).index_of(*name);
}

double distance(const MetricSpace& space, const Location& a, const Location& b) {
  space.check_location(a);
  space.check_location(b);
  if (space.is_line()) return std::abs(std::get<double>(a) - std::get<double>(b));
  if (space.is_euclidean()) {
    const auto& u = std::get<std::vector<double>>(a);
    const auto& v = std::get<std::vector<double>>(b);
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) sum += (u[i] - v[i]) * (u[i] - v[i]);
    return std::sqrt(sum);
  }
  const auto& finite = std::get<FiniteSpace>(space.kind());
  return finite.matrix()[finite.index_of(std::get<std::string>(a))]
                        [finite.index_of(std::get<std::string>(b))];
}

double augmented_distance(const MetricSpace& space, const TimedPoint& p, const TimedPoint& q) {
  return distance(space, p.location, q.location) + std::abs(p.time - q.time);
}

std::string MetricViolation::describe() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::kNonzeroDiagonal:
      out << "non-zero diagonal at (" << i << "," << i << ")";
      break;
    case Kind::kAsymmetry:
      out << "asymmetry at (" << i << "," << j << ")";
      break;
    case Kind::kNonPositive:
      out << "non-positive off-diagonal distance at (" << i << "," << j << ")";
      break;
    case Kind::kTriangle:
      out << "triangle inequality violated: d(" << i << "," << j << ") > d(" << i << "," << k
          << ") + d(" << k << "," << j << ")";
      break;
  }
  return out.str();
}

std::optional<MetricViolation> validate_metric(const DistanceMatrix& matrix) {
  const std::size_t n = matrix.size();
  for (const auto& row : matrix)
    if (row.size() != n) throw Error("distance matrix is not square");

  using K = MetricViolation::Kind;
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i][i] != 0.0) return MetricViolation{K::kNonzeroDiagonal, i, i, 0};
    for (std::size_t j = i + 1; j < n; ++j) {
      if (matrix[i][j] != matrix[j][i]) return MetricViolation{K::kAsymmetry, i, j, 0};
      // NaN fails this comparison as well.
      if (!(matrix[i][j] > 0.0) || !std::isfinite(matrix[i][j]))
        return MetricViolation{K::kNonPositive, i, j, 0};
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (matrix[i][j] > matrix[i][k] + matrix[k][j])
          return MetricViolation{K::kTriangle, i, j, k};
      }
  return std::nullopt;
}

}  // namespace mpmd
