#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace mpmd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using DistanceMatrix = std::vector<std::vector<double>>;

struct LineSpace {};

struct EuclideanSpace {
  std::size_t dim = 1;
};

/// Explicit finite metric: named points plus a validated distance matrix.
class FiniteSpace {
 public:
  /// Throws Error if the matrix is not a metric or the names are not unique.
  FiniteSpace(std::vector<std::string> names, DistanceMatrix matrix);

  const std::vector<std::string>& names() const { return names_; }
  const DistanceMatrix& matrix() const { return matrix_; }
  std::size_t size() const { return names_.size(); }

  /// Index of a named point; throws Error for unknown names.
  std::size_t index_of(const std::string& name) const;
  bool contains(const std::string& name) const { return index_.count(name) != 0; }

  bool operator==(const FiniteSpace& other) const {
    return names_ == other.names_ && matrix_ == other.matrix_;
  }

 private:
  std::vector<std::string> names_;
  DistanceMatrix matrix_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// A point of a metric space: a coordinate on the line, a euclidean vector,
/// or the name of a point of a finite space.
using Location = std::variant<double, std::vector<double>, std::string>;

class MetricSpace {
 public:
  using Kind = std::variant<LineSpace, EuclideanSpace, FiniteSpace>;

  static MetricSpace line() { return MetricSpace(LineSpace{}); }
  static MetricSpace euclidean(std::size_t dim);
  static MetricSpace finite(std::vector<std::string> names, DistanceMatrix matrix);

  const Kind& kind() const { return kind_; }
  bool is_line() const { return std::holds_alternative<LineSpace>(kind_); }
  bool is_euclidean() const { return std::holds_alternative<EuclideanSpace>(kind_); }
  bool is_finite() const { return std::holds_alternative<FiniteSpace>(kind_); }

  /// "line", "euclidean" or "finite".
  std::string kind_name() const;

  /// Throws Error when the location does not belong to this space.
  void check_location(const Location& loc) const;

  bool operator==(const MetricSpace& other) const;

 private:
  explicit MetricSpace(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

/// A point of the time-augmented space S x R.
struct TimedPoint {
  Location location;
  double time = 0.0;

  bool operator==(const TimedPoint&) const = default;
};

double distance(const MetricSpace& space, const Location& a, const Location& b);

/// d(loc_p, loc_q) + |t_p - t_q|.
double augmented_distance(const MetricSpace& space, const TimedPoint& p, const TimedPoint& q);

struct MetricViolation {
  enum class Kind { kNonzeroDiagonal, kAsymmetry, kNonPositive, kTriangle };
  Kind kind;
  // For kTriangle: d(i,j) > d(i,k) + d(k,j). Otherwise k is unused.
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;

  std::string describe() const;
};

/// Checks the metric axioms on a square matrix and returns the first
/// violation found, or nullopt when the matrix is a metric. Throws Error on
/// non-square input.
std::optional<MetricViolation> validate_metric(const DistanceMatrix& matrix);

std::string describe_location(const Location& loc);

}  // namespace mpmd
