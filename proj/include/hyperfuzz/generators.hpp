#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hyperfuzz/common.hpp"
#include "hyperfuzz/family.hpp"
#include "hyperfuzz/fuzzy_set.hpp"
#include "hyperfuzz/hausdorff.hpp"
#include "hyperfuzz/space.hpp"

namespace hyperfuzz {

// Seeded source for generated corpora. Draws are derived from raw 64-bit
// engine output so that a seed gives the same corpus on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  // Uniform on [lo, hi].
  std::size_t index(std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 engine_;
};

struct RandomFuzzyOptions {
  std::size_t max_levels = 3;
  std::size_t max_core_points = 3;  // points in the 1-cut
  std::size_t max_added_points = 2;  // new points per lower level
  double lo = 0.0;                   // euclidean box [lo, hi]^dim
  double hi = 1.0;
  double min_alpha = 0.05;
};

inline Point random_point(Rng& rng, const MetricSpace& space, double lo, double hi) {
  if (space.is_finite()) return Point::indexed(rng.index(0, space.dim() - 1));
  std::vector<double> c(space.dim());
  for (auto& x : c) x = rng.uniform(lo, hi);
  return Point::euclidean(std::move(c));
}

inline FiniteSet random_finite_set(Rng& rng, const SpacePtr& space, std::size_t max_points, double lo = 0.0,
                                   double hi = 1.0) {
  std::vector<Point> pts;
  const std::size_t n = rng.index(1, std::max<std::size_t>(1, max_points));
  for (std::size_t i = 0; i < n; ++i) pts.push_back(random_point(rng, *space, lo, hi));
  return FiniteSet(space, std::move(pts));
}

// Random nested levels: a random core at alpha = 1, then each lower level adds
// a few fresh points (possibly none, which gives a non-platform level).
inline StepFuzzySet random_fuzzy_set(Rng& rng, const SpacePtr& space, const RandomFuzzyOptions& opt = {}) {
  const std::size_t count = rng.index(1, std::max<std::size_t>(1, opt.max_levels));
  std::vector<double> alphas{1.0};
  while (alphas.size() < count) {
    double a = rng.uniform(opt.min_alpha, 0.95);
    bool distinct = std::all_of(alphas.begin(), alphas.end(), [&](double b) { return std::abs(a - b) > 0.02; });
    if (distinct) alphas.push_back(a);
  }
  std::sort(alphas.begin(), alphas.end(), std::greater<>());

  std::vector<Level> levels;
  FiniteSet current = random_finite_set(rng, space, opt.max_core_points, opt.lo, opt.hi);
  levels.push_back({1.0, current});
  for (std::size_t i = 1; i < alphas.size(); ++i) {
    std::vector<Point> pts(current.begin(), current.end());
    const std::size_t added = rng.index(0, opt.max_added_points);
    for (std::size_t k = 0; k < added; ++k) pts.push_back(random_point(rng, *space, opt.lo, opt.hi));
    current = FiniteSet(space, std::move(pts));
    levels.push_back({alphas[i], current});
  }
  return make_fuzzy(std::move(levels));
}

namespace detail {

inline Point along_first_axis(const MetricSpace& space, double t) {
  require(!space.is_finite(), "generator needs a euclidean space");
  std::vector<double> c(space.dim(), 0.0);
  c[0] = t;
  return Point::euclidean(std::move(c));
}

inline std::string member_name(const std::string& family, std::size_t n) {
  return family + "#" + std::to_string(n);
}

}  // namespace detail

// Crisp singletons {n * step} along the first axis, n = 1..count.
inline FuzzyFamily translates_family(const std::string& name, const SpacePtr& space, std::size_t count,
                                     double step = 1.0) {
  require(count >= 1, "generator count must be positive");
  std::vector<std::string> names;
  std::vector<StepFuzzySet> members;
  GeneratorTag tag{"translates", {}, std::nullopt};
  for (std::size_t n = 1; n <= count; ++n) {
    const double t = static_cast<double>(n) * step;
    members.push_back(StepFuzzySet::crisp(FiniteSet(space, {detail::along_first_axis(*space, t)})));
    names.push_back(detail::member_name(name, n));
    tag.parameters.push_back(static_cast<double>(n));
  }
  return FuzzyFamily(name, std::move(names), std::move(members), std::move(tag));
}

// u_n = 1 on {base}, 1/n on {outlier}. At n = 1 both points sit at level 1.
inline StepFuzzySet collapse_member(const SpacePtr& space, std::size_t n, const Point& base, const Point& outlier) {
  const FiniteSet core(space, {base});
  const FiniteSet wide(space, {base, outlier});
  if (n == 1) return StepFuzzySet::crisp(wide);
  return make_fuzzy({{1.0, core}, {1.0 / static_cast<double>(n), wide}});
}

// Default points: 0 and e_1 (euclidean) or indices 0 and 1 (finite).
inline std::pair<Point, Point> default_collapse_points(const MetricSpace& space) {
  if (space.is_finite()) {
    require(space.dim() >= 2, "collapse generator needs at least two points");
    return {Point::indexed(0), Point::indexed(1)};
  }
  return {detail::along_first_axis(space, 0.0), detail::along_first_axis(space, 1.0)};
}

inline FuzzyFamily collapse_family(const std::string& name, const SpacePtr& space, std::size_t count,
                                   std::optional<std::pair<Point, Point>> points = std::nullopt) {
  require(count >= 1, "generator count must be positive");
  auto [base, outlier] = points ? *points : default_collapse_points(*space);
  std::vector<std::string> names;
  std::vector<StepFuzzySet> members;
  GeneratorTag tag{"collapse", {}, std::nullopt};
  for (std::size_t n = 1; n <= count; ++n) {
    members.push_back(collapse_member(space, n, base, outlier));
    names.push_back(detail::member_name(name, n));
    tag.parameters.push_back(static_cast<double>(n));
  }
  return FuzzyFamily(name, std::move(names), std::move(members), std::move(tag));
}

// The grid {origin, origin + step, ..., x} standing in for [origin, x].
inline FiniteSet discretized_interval(const SpacePtr& space, double origin, double x, double step) {
  require(step > 0.0 && x >= origin, "interval needs step > 0 and x >= origin");
  const auto count = static_cast<std::size_t>(std::llround((x - origin) / step));
  std::vector<Point> pts;
  pts.reserve(count + 1);
  for (std::size_t i = 0; i <= count; ++i)
    pts.push_back(detail::along_first_axis(*space, origin + static_cast<double>(i) * step));
  return FiniteSet(space, std::move(pts));
}

// Crisp intervals [origin, x] for x = lo + k*step, k = 1..round((hi-lo)/step),
// each discretised at `step` (Hausdorff error at most step/2).
inline FuzzyFamily crisp_intervals_family(const std::string& name, const SpacePtr& space, double lo = 0.3,
                                          double hi = 1.0, double step = 0.01, double origin = 0.0) {
  require(hi > lo && step > 0.0 && lo >= origin, "crisp_intervals needs origin <= lo < hi and step > 0");
  const auto count = static_cast<std::size_t>(std::llround((hi - lo) / step));
  require(count >= 1, "crisp_intervals produces no members");
  std::vector<std::string> names;
  std::vector<StepFuzzySet> members;
  GeneratorTag tag{"crisp_intervals", {}, step / 2.0};
  for (std::size_t k = 1; k <= count; ++k) {
    const double x = lo + static_cast<double>(k) * step;
    members.push_back(StepFuzzySet::crisp(discretized_interval(space, origin, x, step)));
    names.push_back(detail::member_name(name, k));
    tag.parameters.push_back(x);
  }
  return FuzzyFamily(name, std::move(names), std::move(members), std::move(tag));
}

inline FuzzyFamily random_family(const std::string& name, const SpacePtr& space, std::size_t count,
                                 std::uint64_t seed, const RandomFuzzyOptions& opt = {}) {
  require(count >= 1, "generator count must be positive");
  Rng rng(seed);
  std::vector<std::string> names;
  std::vector<StepFuzzySet> members;
  GeneratorTag tag{"random", {}, std::nullopt};
  for (std::size_t n = 1; n <= count; ++n) {
    members.push_back(random_fuzzy_set(rng, space, opt));
    names.push_back(detail::member_name(name, n));
    tag.parameters.push_back(static_cast<double>(n));
  }
  return FuzzyFamily(name, std::move(names), std::move(members), std::move(tag));
}

}  // namespace hyperfuzz
