#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "hyperfuzz/hyperfuzz.hpp"

namespace hyperfuzz::testing {

inline const SpacePtr& line() {
  static const SpacePtr space = MetricSpace::euclidean(1);
  return space;
}

inline const SpacePtr& plane() {
  static const SpacePtr space = MetricSpace::euclidean(2);
  return space;
}

inline Point pt(double x) { return Point::euclidean({x}); }
inline Point pt(double x, double y) { return Point::euclidean({x, y}); }

inline FiniteSet set1(std::initializer_list<double> xs) {
  std::vector<Point> pts;
  for (double x : xs) pts.push_back(pt(x));
  return FiniteSet(line(), std::move(pts));
}

// Crisp set S on the real line.
inline StepFuzzySet crisp1(std::initializer_list<double> xs) { return StepFuzzySet::crisp(set1(xs)); }

// 1 on {0}, 0.5 on {1}.
inline StepFuzzySet uA() { return make_fuzzy({{1.0, set1({0})}, {0.5, set1({0, 1})}}); }

// u_n = 1 on {0}, 1/n on {1}.
inline StepFuzzySet collapse_n(std::size_t n) { return collapse_member(line(), n, pt(0), pt(1)); }

}  // namespace hyperfuzz::testing
