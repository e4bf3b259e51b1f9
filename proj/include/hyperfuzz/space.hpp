#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hyperfuzz/certificate.hpp"
#include "hyperfuzz/common.hpp"

namespace hyperfuzz {

// An element of the ambient space: coordinates in Euclidean mode, or an index
// into the distance matrix in finite mode.
class Point {
 public:
  static Point euclidean(std::vector<double> coords) {
    for (double c : coords) require(std::isfinite(c), "point coordinates must be finite");
    Point p;
    p.coords_ = std::move(coords);
    return p;
  }

  static Point indexed(std::size_t index) {
    Point p;
    p.index_ = index;
    p.indexed_ = true;
    return p;
  }

  bool is_indexed() const noexcept { return indexed_; }
  std::span<const double> coords() const noexcept { return coords_; }
  std::size_t index() const noexcept { return index_; }

  friend bool operator==(const Point&, const Point&) = default;

  std::string to_string() const {
    if (indexed_) return "#" + std::to_string(index_);
    std::string out = "(";
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      if (i) out += ",";
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.9g", coords_[i]);
      out += buf;
    }
    return out + ")";
  }

 private:
  Point() = default;

  std::vector<double> coords_;
  std::size_t index_ = 0;
  bool indexed_ = false;
};

class MetricSpace;
using SpacePtr = std::shared_ptr<const MetricSpace>;

// (X, d): either R^dim with the Euclidean norm, or a finite set given by a
// square distance matrix. Metric axioms of a matrix are not enforced here;
// validate_metric() reports them.
class MetricSpace {
 public:
  enum class Mode { Euclidean, Finite };
  using Matrix = std::vector<std::vector<double>>;

  static SpacePtr euclidean(std::size_t dim) {
    require(dim >= 1, "euclidean dimension must be at least 1");
    return SpacePtr(new MetricSpace(Mode::Euclidean, dim, {}));
  }

  static SpacePtr finite(Matrix matrix) {
    require(!matrix.empty(), "distance matrix must be nonempty");
    for (const auto& row : matrix) {
      require(row.size() == matrix.size(), "distance matrix must be square");
      for (double v : row)
        require(std::isfinite(v) && v >= 0.0, "distance matrix entries must be finite and nonnegative");
    }
    const std::size_t n = matrix.size();
    return SpacePtr(new MetricSpace(Mode::Finite, n, std::move(matrix)));
  }

  Mode mode() const noexcept { return mode_; }
  bool is_finite() const noexcept { return mode_ == Mode::Finite; }
  // Coordinate dimension (Euclidean) or number of points (finite).
  std::size_t dim() const noexcept { return dim_; }
  const Matrix& matrix() const noexcept { return matrix_; }

  bool contains(const Point& p) const noexcept {
    if (mode_ == Mode::Finite) return p.is_indexed() && p.index() < dim_;
    return !p.is_indexed() && p.coords().size() == dim_;
  }

  void check(const Point& p) const {
    if (contains(p)) return;
    if (mode_ == Mode::Finite)
      throw InputError("point " + p.to_string() + " is not an index below " + std::to_string(dim_));
    throw InputError("point " + p.to_string() + " does not have dimension " + std::to_string(dim_));
  }

  double distance(const Point& p, const Point& q) const {
    check(p);
    check(q);
    if (mode_ == Mode::Finite) return matrix_[p.index()][q.index()];
    double sum = 0.0;
    auto a = p.coords();
    auto b = q.coords();
    for (std::size_t i = 0; i < dim_; ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(sum);
  }

  // Points closer than kTolerance are the same element.
  bool same_point(const Point& p, const Point& q) const {
    if (mode_ == Mode::Finite) return p.index() == q.index();
    auto a = p.coords();
    auto b = q.coords();
    for (std::size_t i = 0; i < dim_; ++i)
      if (std::abs(a[i] - b[i]) > kTolerance) return false;
    return true;
  }

  bool operator==(const MetricSpace& other) const {
    return mode_ == other.mode_ && dim_ == other.dim_ && matrix_ == other.matrix_;
  }

 private:
  MetricSpace(Mode mode, std::size_t dim, Matrix matrix)
      : mode_(mode), dim_(dim), matrix_(std::move(matrix)) {}

  Mode mode_;
  std::size_t dim_;
  Matrix matrix_;
};

inline bool same_space(const SpacePtr& a, const SpacePtr& b) {
  return a == b || (a && b && *a == *b);
}

// (x, alpha) in X x [0,1].
struct LiftedPoint {
  Point point;
  double level;

  LiftedPoint(Point p, double alpha) : point(std::move(p)), level(alpha) {
    require(std::isfinite(alpha) && alpha >= 0.0 && alpha <= 1.0, "lifted level must lie in [0,1]");
  }
};

inline double distance(const MetricSpace& space, const Point& p, const Point& q) {
  return space.distance(p, q);
}

// d((x,a),(y,b)) + |a - b|
inline double lifted_distance(const MetricSpace& space, const LiftedPoint& a, const LiftedPoint& b) {
  return space.distance(a.point, b.point) + std::abs(a.level - b.level);
}

// Exhaustive check of zero diagonal, symmetry and the triangle inequality on a
// finite-mode space. The first violation found (row-major scan) is the witness.
inline Certificate validate_metric(const MetricSpace& space) {
  if (!space.is_finite())
    throw Unsupported("validate_metric: euclidean spaces are metric by construction");

  const auto& d = space.matrix();
  const std::size_t n = d.size();
  Certificate cert{CertificateKind::MetricAxioms};

  double worst_diag = 0.0;
  double worst_asym = 0.0;
  double worst_triangle = 0.0;
  std::optional<std::string> witness;
  auto note = [&](std::string w) {
    if (!witness) witness = std::move(w);
  };

  for (std::size_t i = 0; i < n; ++i) {
    worst_diag = std::max(worst_diag, d[i][i]);
    if (d[i][i] > kTolerance) note("nonzero diagonal (" + std::to_string(i) + ")");
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double gap = std::abs(d[i][j] - d[j][i]);
      worst_asym = std::max(worst_asym, gap);
      if (gap > kTolerance) note("asymmetry (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        double excess = d[i][j] - (d[i][k] + d[k][j]);
        worst_triangle = std::max(worst_triangle, excess);
        if (excess > kTolerance)
          note("triangle (" + std::to_string(i) + "," + std::to_string(j) + ") via " + std::to_string(k));
      }

  cert.evidence = {{"max_diagonal", {worst_diag}},
                   {"max_asymmetry", {worst_asym}},
                   {"max_triangle_excess", {worst_triangle}}};
  if (witness) {
    cert.verdict = Verdict::Fail;
    cert.witness = std::move(witness);
  }
  return cert;
}

}  // namespace hyperfuzz
