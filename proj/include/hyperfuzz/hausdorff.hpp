#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hyperfuzz/certificate.hpp"
#include "hyperfuzz/common.hpp"
#include "hyperfuzz/space.hpp"

namespace hyperfuzz {

// Generic sup-inf over two finite ranges under a distance callable. Used for
// point sets, lifted point sets and families of sets alike.
template <class From, class To, class Dist>
double directed_hausdorff_by(const From& from, const To& to, Dist&& dist) {
  double worst = 0.0;
  for (const auto& a : from) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& b : to) {
      nearest = std::min(nearest, dist(a, b));
      if (nearest <= worst) break;  // cannot raise the running max
    }
    worst = std::max(worst, nearest);
  }
  return worst;
}

template <class Range, class Dist>
double hausdorff_by(const Range& a, const Range& b, Dist&& dist) {
  auto flipped = [&](const auto& x, const auto& y) { return dist(y, x); };
  return std::max(directed_hausdorff_by(a, b, dist), directed_hausdorff_by(b, a, flipped));
}

// Greedy first-uncovered centers in input order: an item becomes a center
// unless it is within eps of a center already chosen. Returns center indices.
template <class Range, class Dist>
std::vector<std::size_t> greedy_net_indices(const Range& items, double eps, Dist&& dist) {
  require(eps > 0.0, "eps must be positive");
  std::vector<std::size_t> centers;
  std::size_t i = 0;
  for (auto it = std::begin(items); it != std::end(items); ++it, ++i) {
    bool covered = std::any_of(centers.begin(), centers.end(), [&](std::size_t c) {
      return dist(*(std::begin(items) + static_cast<std::ptrdiff_t>(c)), *it) <= eps;
    });
    if (!covered) centers.push_back(i);
  }
  return centers;
}

// Nonempty finite point set, the stand-in for a member of K(X). Duplicates
// (within kTolerance) are dropped, keeping first occurrences in order.
class FiniteSet {
 public:
  FiniteSet(SpacePtr space, std::vector<Point> points) : space_(std::move(space)) {
    require(space_ != nullptr, "finite set needs a space");
    require(!points.empty(), "finite set must be nonempty");
    points_.reserve(points.size());
    for (auto& p : points) {
      space_->check(p);
      if (!contains(p)) points_.push_back(std::move(p));
    }
  }

  const SpacePtr& space() const noexcept { return space_; }
  std::span<const Point> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  auto begin() const noexcept { return points_.begin(); }
  auto end() const noexcept { return points_.end(); }

  bool contains(const Point& p) const {
    return std::any_of(points_.begin(), points_.end(),
                       [&](const Point& q) { return space_->same_point(p, q); });
  }

  bool subset_of(const FiniteSet& other) const {
    return std::all_of(points_.begin(), points_.end(),
                       [&](const Point& p) { return other.contains(p); });
  }

  bool same_elements(const FiniteSet& other) const {
    return subset_of(other) && other.subset_of(*this);
  }

  // Representation equality: same space, same points in the same order.
  friend bool operator==(const FiniteSet& a, const FiniteSet& b) {
    return same_space(a.space_, b.space_) && a.points_ == b.points_;
  }

  std::string to_string() const {
    std::string out = "{";
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (i) out += " ";
      out += points_[i].to_string();
    }
    return out + "}";
  }

 private:
  SpacePtr space_;
  std::vector<Point> points_;
};

namespace detail {

inline void require_same_space(const FiniteSet& a, const FiniteSet& b) {
  require(same_space(a.space(), b.space()), "finite sets live in different spaces");
}

}  // namespace detail

// H*(A, B) = max_{a in A} min_{b in B} d(a, b)
inline double directed_hausdorff(const FiniteSet& a, const FiniteSet& b) {
  detail::require_same_space(a, b);
  const MetricSpace& space = *a.space();
  return directed_hausdorff_by(a, b, [&](const Point& p, const Point& q) { return space.distance(p, q); });
}

inline double hausdorff(const FiniteSet& a, const FiniteSet& b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

// Every point of `a` is within eps of the returned subset.
inline FiniteSet eps_net(const FiniteSet& a, double eps) {
  const MetricSpace& space = *a.space();
  auto centers = greedy_net_indices(a.points(), eps,
                                    [&](const Point& p, const Point& q) { return space.distance(p, q); });
  std::vector<Point> picked;
  picked.reserve(centers.size());
  for (std::size_t c : centers) picked.push_back(a.points()[c]);
  return FiniteSet(a.space(), std::move(picked));
}

inline std::size_t covering_number(const FiniteSet& a, double eps) { return eps_net(a, eps).size(); }

inline FiniteSet union_family(std::span<const FiniteSet> family) {
  require(!family.empty(), "union of an empty family");
  std::vector<Point> all;
  for (const auto& s : family) {
    detail::require_same_space(family.front(), s);
    all.insert(all.end(), s.begin(), s.end());
  }
  return FiniteSet(family.front().space(), std::move(all));
}

// Greedy eps-net of a family of sets inside (K(X), H); indices into `family`.
inline std::vector<std::size_t> family_eps_net(std::span<const FiniteSet> family, double eps) {
  return greedy_net_indices(family, eps, [](const FiniteSet& a, const FiniteSet& b) { return hausdorff(a, b); });
}

struct KuratowskiDiagnostic {
  std::vector<double> liminf_deficit;  // H*(C, C_n)
  std::vector<double> limsup_excess;   // H*(C_n, C)
  std::size_t window = 0;
  double tol = 0.0;
  Verdict verdict = Verdict::Inconclusive;
};

// Tail diagnostic for C_n -> C (Kuratowski). Vanishing deficit means every
// point of C is approached (C within liminf); vanishing excess means no
// cluster point escapes C (limsup within C). Both together are sufficient for
// Kuratowski convergence and, for sequences inside a common compact set, also
// necessary.
inline KuratowskiDiagnostic kuratowski_tail_diagnostic(std::span<const FiniteSet> prefix, const FiniteSet& limit,
                                                       std::size_t window, double tol) {
  TailRule rule{window, tol};
  rule.validate(prefix.size());
  KuratowskiDiagnostic out;
  out.window = window;
  out.tol = tol;
  out.liminf_deficit.reserve(prefix.size());
  out.limsup_excess.reserve(prefix.size());
  for (const auto& c : prefix) {
    out.liminf_deficit.push_back(directed_hausdorff(limit, c));
    out.limsup_excess.push_back(directed_hausdorff(c, limit));
  }
  double m = std::max(rule.tail_max(out.liminf_deficit), rule.tail_max(out.limsup_excess));
  out.verdict = rule.judge_max(m);
  return out;
}

struct CauchyConstruction {
  std::vector<FiniteSet> partial_unions;  // D_n = C_1 u ... u C_n
  FiniteSet limit;                        // D = union of the whole prefix
  std::vector<double> residuals;          // H(D_n, D)
};

inline CauchyConstruction cauchy_limit_construct(std::span<const FiniteSet> prefix) {
  require(!prefix.empty(), "cauchy construction needs a nonempty prefix");
  std::vector<FiniteSet> unions;
  unions.reserve(prefix.size());
  unions.push_back(prefix.front());
  for (std::size_t n = 1; n < prefix.size(); ++n) {
    const FiniteSet pair[] = {unions.back(), prefix[n]};
    unions.push_back(union_family(pair));
  }
  FiniteSet limit = unions.back();
  std::vector<double> residuals;
  residuals.reserve(unions.size());
  for (const auto& d : unions) residuals.push_back(hausdorff(d, limit));
  return CauchyConstruction{std::move(unions), std::move(limit), std::move(residuals)};
}

}  // namespace hyperfuzz
