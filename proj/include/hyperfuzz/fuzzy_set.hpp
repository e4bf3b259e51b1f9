#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hyperfuzz/common.hpp"
#include "hyperfuzz/hausdorff.hpp"
#include "hyperfuzz/space.hpp"

namespace hyperfuzz {

struct Level {
  double alpha;
  FiniteSet cut;

  friend bool operator==(const Level&, const Level&) = default;
};

// Normal upper semi-continuous fuzzy set with finitely many levels.
//
// Levels are stored with strictly decreasing alphas starting at 1.0, and cuts
// grow as alpha drops: levels[i].cut is contained in levels[i+1].cut. The
// membership of x is the largest stored alpha whose cut contains x, else 0, so
// [u]_a is the cut at the smallest stored alpha >= a.
class StepFuzzySet {
 public:
  static StepFuzzySet make(std::vector<Level> levels) {
    require(!levels.empty(), "fuzzy set needs at least one level");
    require(std::abs(levels.front().alpha - 1.0) <= kTolerance,
            "first level must be alpha = 1.0 (normality), got " + std::to_string(levels.front().alpha));
    levels.front().alpha = 1.0;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const double a = levels[i].alpha;
      require(std::isfinite(a) && a > 0.0 && a <= 1.0,
              "level " + std::to_string(i) + ": alpha " + std::to_string(a) + " outside (0,1]");
      require(same_space(levels[i].cut.space(), levels.front().cut.space()),
              "level " + std::to_string(i) + ": cut lives in a different space");
      if (i == 0) continue;
      require(a < levels[i - 1].alpha, "levels " + std::to_string(i - 1) + " and " + std::to_string(i) +
                                           ": alphas must be strictly decreasing");
      if (!levels[i - 1].cut.subset_of(levels[i].cut))
        throw InputError("levels " + std::to_string(i - 1) + " (alpha=" + format_alpha(levels[i - 1].alpha) +
                         ") and " + std::to_string(i) + " (alpha=" + format_alpha(a) +
                         "): nestedness violated, cut " + levels[i - 1].cut.to_string() +
                         " is not contained in " + levels[i].cut.to_string());
    }
    return StepFuzzySet(std::move(levels));
  }

  // The crisp set S seen as a fuzzy set (membership 1 on S, 0 elsewhere).
  static StepFuzzySet crisp(FiniteSet s) { return make({Level{1.0, std::move(s)}}); }

  std::span<const Level> levels() const noexcept { return levels_; }
  const SpacePtr& space() const noexcept { return levels_.front().cut.space(); }

  friend bool operator==(const StepFuzzySet&, const StepFuzzySet&) = default;

 private:
  explicit StepFuzzySet(std::vector<Level> levels) : levels_(std::move(levels)) {}

  static std::string format_alpha(double a) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", a);
    return buf;
  }

  std::vector<Level> levels_;
};

inline StepFuzzySet make_fuzzy(std::vector<Level> levels) { return StepFuzzySet::make(std::move(levels)); }

inline double membership(const StepFuzzySet& u, const Point& x) {
  u.space()->check(x);
  for (const auto& level : u.levels())
    if (level.cut.contains(x)) return level.alpha;
  return 0.0;
}

inline FiniteSet alpha_cut(const StepFuzzySet& u, double alpha) {
  require(alpha > 0.0 && alpha <= 1.0, "alpha_cut: alpha " + std::to_string(alpha) + " outside (0,1]");
  const auto levels = u.levels();
  const Level* chosen = &levels.front();
  for (const auto& level : levels)
    if (level.alpha >= alpha - kTolerance) chosen = &level;
  return chosen->cut;
}

// Closure of {u > 0}; for finite cuts that is the lowest stored cut.
inline FiniteSet support(const StepFuzzySet& u) { return u.levels().back().cut; }

// {x : u(x) > alpha}, already closed since it is finite.
inline FiniteSet strict_cut_closure(const StepFuzzySet& u, double alpha) {
  require(alpha > 0.0 && alpha < 1.0, "strict_cut_closure: alpha " + std::to_string(alpha) + " outside (0,1)");
  std::vector<Point> above;
  for (const auto& x : support(u))
    if (membership(u, x) > alpha + kTolerance) above.push_back(x);
  return FiniteSet(u.space(), std::move(above));
}

// Finite set of levels in (0,1), ascending.
struct PlatformSet {
  std::vector<double> alphas;

  bool empty() const noexcept { return alphas.empty(); }
  std::size_t size() const noexcept { return alphas.size(); }
  bool contains(double alpha) const {
    return std::any_of(alphas.begin(), alphas.end(), [&](double a) { return std::abs(a - alpha) <= kTolerance; });
  }
  friend bool operator==(const PlatformSet&, const PlatformSet&) = default;
};

// Levels where the cut strictly grows over the next-higher stored cut, i.e.
// where closure{u > a} is a proper subset of [u]_a.
inline PlatformSet platform_points(const StepFuzzySet& u) {
  const auto levels = u.levels();
  PlatformSet out;
  for (std::size_t i = levels.size(); i-- > 1;)
    if (!levels[i].cut.subset_of(levels[i - 1].cut)) out.alphas.push_back(levels[i].alpha);
  return out;
}

// Levels where beta -> [u]_beta is discontinuous in H, found from one-sided
// limits. The map is piecewise constant between stored levels, so a probe at a
// quarter of the smallest level gap on each side realises both limits. For any
// fuzzy set the limit from below equals [u]_a; the jump, when present, is on
// the strict-cut side (beta decreasing to a).
inline PlatformSet p0_points(const StepFuzzySet& u) {
  std::vector<double> marks{0.0};
  for (const auto& level : u.levels()) marks.push_back(level.alpha);
  std::sort(marks.begin(), marks.end());
  double gap = 1.0;
  for (std::size_t i = 1; i < marks.size(); ++i) gap = std::min(gap, marks[i] - marks[i - 1]);
  const double probe = gap / 4.0;

  PlatformSet out;
  for (double alpha : marks) {
    if (alpha <= 0.0 || alpha >= 1.0) continue;
    const FiniteSet at = alpha_cut(u, alpha);
    const double from_above = hausdorff(alpha_cut(u, alpha + probe), at);
    const double from_below = hausdorff(alpha_cut(u, alpha - probe), at);
    if (std::max(from_above, from_below) > kTolerance) out.alphas.push_back(alpha);
  }
  return out;
}

}  // namespace hyperfuzz
