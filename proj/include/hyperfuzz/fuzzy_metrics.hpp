#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hyperfuzz/certificate.hpp"
#include "hyperfuzz/common.hpp"
#include "hyperfuzz/fuzzy_set.hpp"
#include "hyperfuzz/hausdorff.hpp"
#include "hyperfuzz/space.hpp"

namespace hyperfuzz {

enum class FuzzyMetric { End, Send };

inline std::string_view to_string(FuzzyMetric m) { return m == FuzzyMetric::End ? "end" : "send"; }

namespace detail {

struct GradedPoint {
  const Point* point;
  double grade;
};

inline std::vector<GradedPoint> graded_support(const StepFuzzySet& u) {
  std::vector<GradedPoint> out;
  // Walk levels top-down; a point's grade is the first level that holds it.
  for (const auto& level : u.levels())
    for (const auto& p : level.cut)
      if (std::none_of(out.begin(), out.end(), [&](const GradedPoint& g) { return u.space()->same_point(*g.point, p); }))
        out.push_back({&p, level.alpha});
  return out;
}

inline void require_same_space(const StepFuzzySet& u, const StepFuzzySet& v) {
  require(same_space(u.space(), v.space()), "fuzzy sets live in different spaces");
}

// Directed distance from the graph of u to the graph of v. Each top point
// (x, u(x)) is matched to (y, min(u(x), v(y))) at cost d(x,y) + (u(x)-v(y))^+.
// With the X x {0} sheet present (endographs) it may instead drop to (x, 0).
inline double directed_graph_distance(const StepFuzzySet& u, const StepFuzzySet& v, bool with_sheet) {
  const MetricSpace& space = *u.space();
  const auto from = graded_support(u);
  const auto to = graded_support(v);
  double worst = 0.0;
  for (const auto& [x, ux] : from) {
    double best = with_sheet ? ux : std::numeric_limits<double>::infinity();
    for (const auto& [y, vy] : to) best = std::min(best, space.distance(*x, *y) + std::max(0.0, ux - vy));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace detail

// H(end u, end v) in closed form.
inline double endograph_metric(const StepFuzzySet& u, const StepFuzzySet& v) {
  detail::require_same_space(u, v);
  return std::max(detail::directed_graph_distance(u, v, true), detail::directed_graph_distance(v, u, true));
}

// H(send u, send v) in closed form.
inline double sendograph_metric(const StepFuzzySet& u, const StepFuzzySet& v) {
  detail::require_same_space(u, v);
  return std::max(detail::directed_graph_distance(u, v, false), detail::directed_graph_distance(v, u, false));
}

inline double fuzzy_distance(FuzzyMetric metric, const StepFuzzySet& u, const StepFuzzySet& v) {
  return metric == FuzzyMetric::End ? endograph_metric(u, v) : sendograph_metric(u, v);
}

// A vertically sampled graph: for each base point, the sampled heights in
// ascending order.
struct SampledGraph {
  struct Column {
    Point base;
    std::vector<double> heights;
  };
  std::vector<Column> columns;

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& c : columns) n += c.heights.size();
    return n;
  }

  std::vector<LiftedPoint> lifted_points() const {
    std::vector<LiftedPoint> out;
    for (const auto& c : columns)
      for (double h : c.heights) out.emplace_back(c.base, h);
    return out;
  }
};

// Heights k*resolution <= u(x) above every base point listed, always
// including (x, 0).
inline SampledGraph sample_graph(const StepFuzzySet& u, std::span<const Point> bases, double resolution) {
  SampledGraph g;
  for (const auto& x : bases) {
    const double top = membership(u, x);
    const auto steps = static_cast<std::size_t>(std::floor(top / resolution + kTolerance));
    SampledGraph::Column column{x, {}};
    column.heights.reserve(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) column.heights.push_back(static_cast<double>(k) * resolution);
    g.columns.push_back(std::move(column));
  }
  return g;
}

// Exact directed Hausdorff distance between two sampled graphs under the
// lifted metric. Heights inside a column are sorted, so the nearest height is
// found by bisection instead of a linear scan; the result is identical to the
// all-pairs minimum.
inline double directed_sampled_hausdorff(const MetricSpace& space, const SampledGraph& a, const SampledGraph& b) {
  double worst = 0.0;
  for (const auto& ca : a.columns) {
    std::vector<double> base(b.columns.size());
    for (std::size_t j = 0; j < b.columns.size(); ++j) base[j] = space.distance(ca.base, b.columns[j].base);
    for (double t : ca.heights) {
      double nearest = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < b.columns.size(); ++j) {
        const auto& hs = b.columns[j].heights;
        auto it = std::lower_bound(hs.begin(), hs.end(), t);
        double dz = std::numeric_limits<double>::infinity();
        if (it != hs.end()) dz = *it - t;
        if (it != hs.begin()) dz = std::min(dz, t - *std::prev(it));
        nearest = std::min(nearest, base[j] + dz);
      }
      worst = std::max(worst, nearest);
    }
  }
  return worst;
}

inline double sampled_hausdorff(const MetricSpace& space, const SampledGraph& a, const SampledGraph& b) {
  return std::max(directed_sampled_hausdorff(space, a, b), directed_sampled_hausdorff(space, b, a));
}

namespace detail {

inline void require_resolution(double resolution) {
  require(resolution > 0.0 && resolution <= 0.1,
          "oracle resolution " + std::to_string(resolution) + " outside (0, 0.1]");
}

}  // namespace detail

// Brute-force H_end: both endographs are sampled over the union of both
// supports, which carries the shared X x {0} sheet wherever it matters.
inline double endograph_oracle(const StepFuzzySet& u, const StepFuzzySet& v, double resolution) {
  detail::require_same_space(u, v);
  detail::require_resolution(resolution);
  const FiniteSet supports[] = {support(u), support(v)};
  const FiniteSet bases = union_family(supports);
  return sampled_hausdorff(*u.space(), sample_graph(u, bases.points(), resolution),
                           sample_graph(v, bases.points(), resolution));
}

// Brute-force H_send: each sendograph is sampled over its own support only.
inline double sendograph_oracle(const StepFuzzySet& u, const StepFuzzySet& v, double resolution) {
  detail::require_same_space(u, v);
  detail::require_resolution(resolution);
  const FiniteSet su = support(u);
  const FiniteSet sv = support(v);
  return sampled_hausdorff(*u.space(), sample_graph(u, su.points(), resolution),
                           sample_graph(v, sv.points(), resolution));
}

inline double fuzzy_oracle(FuzzyMetric metric, const StepFuzzySet& u, const StepFuzzySet& v, double resolution) {
  return metric == FuzzyMetric::End ? endograph_oracle(u, v, resolution) : sendograph_oracle(u, v, resolution);
}

inline double levelwise_distance(const StepFuzzySet& u, const StepFuzzySet& v, double alpha) {
  detail::require_same_space(u, v);
  return hausdorff(alpha_cut(u, alpha), alpha_cut(v, alpha));
}

inline std::vector<double> metric_series(std::span<const StepFuzzySet> seq, const StepFuzzySet& limit,
                                         FuzzyMetric metric) {
  std::vector<double> out;
  out.reserve(seq.size());
  for (const auto& un : seq) out.push_back(fuzzy_distance(metric, un, limit));
  return out;
}

// `count` evenly spaced levels k/(count+1) in (0,1). Any that is a platform
// point of `limit` is replaced by the midpoint towards a non-platform
// neighbour.
inline std::vector<double> default_alpha_grid(const StepFuzzySet& limit, std::size_t count = 101) {
  require(count >= 1, "alpha grid needs at least one point");
  const PlatformSet platform = platform_points(limit);
  const double step = 1.0 / static_cast<double>(count + 1);
  std::vector<double> grid;
  grid.reserve(count);
  for (std::size_t k = 1; k <= count; ++k) {
    double a = static_cast<double>(k) * step;
    if (platform.contains(a)) {
      double up = a + step / 2.0;
      a = (k < count && !platform.contains(up)) ? up : a - step / 2.0;
    }
    grid.push_back(a);
  }
  return grid;
}

struct LevelProfile {
  std::vector<double> alphas;
  std::vector<std::vector<double>> distances;  // [alpha][n] = H([u_n]_a, [u]_a)
  std::vector<Verdict> verdicts;
  TailRule rule;
  Verdict verdict = Verdict::Pass;
};

enum class LevelMode {
  Plain,
  Necessity,  // alphas must avoid the platform points of the limit
};

namespace detail {

inline void require_open_levels(std::span<const double> alphas) {
  require(!alphas.empty(), "alpha list must be nonempty");
  for (double a : alphas) require(a > 0.0 && a < 1.0, "alpha " + std::to_string(a) + " outside (0,1)");
}

inline void require_sequence(std::span<const StepFuzzySet> seq, const StepFuzzySet& limit) {
  require(!seq.empty(), "sequence must be nonempty");
  for (const auto& un : seq) require_same_space(un, limit);
}

}  // namespace detail

inline LevelProfile levelwise_profile(std::span<const StepFuzzySet> seq, const StepFuzzySet& limit,
                                      std::span<const double> alphas, TailRule rule,
                                      LevelMode mode = LevelMode::Necessity) {
  detail::require_sequence(seq, limit);
  detail::require_open_levels(alphas);
  rule.validate(seq.size());
  if (mode == LevelMode::Necessity) {
    const PlatformSet platform = platform_points(limit);
    for (double a : alphas) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.9g", a);
      require(!platform.contains(a), std::string("alpha ") + buf + " collides with a platform point of the limit");
    }
  }
  LevelProfile out;
  out.alphas.assign(alphas.begin(), alphas.end());
  out.rule = rule;
  std::vector<Verdict> all;
  for (double a : alphas) {
    const FiniteSet target = alpha_cut(limit, a);
    std::vector<double> series;
    series.reserve(seq.size());
    for (const auto& un : seq) series.push_back(hausdorff(alpha_cut(un, a), target));
    out.verdicts.push_back(rule.judge(series));
    out.distances.push_back(std::move(series));
  }
  out.verdict = Verdict::Pass;
  for (Verdict v : out.verdicts) out.verdict = conjunction({out.verdict, v});
  return out;
}

struct GammaDiagnostic {
  std::vector<double> alphas;
  std::vector<std::vector<double>> lower;  // [alpha][n] = H*(closure{u > a}, [u_n]_a)
  std::vector<std::vector<double>> upper;  // [alpha][n] = H*([u_n]_a, [u]_a)
  std::vector<Verdict> verdicts;
  TailRule rule;
  Verdict verdict = Verdict::Pass;
};

// Levelwise sandwich closure{u > a} within liminf [u_n]_a and limsup [u_n]_a
// within [u]_a, with each inclusion measured by a directed Hausdorff tail.
inline GammaDiagnostic gamma_diagnostic(std::span<const StepFuzzySet> seq, const StepFuzzySet& limit,
                                        std::span<const double> alphas, TailRule rule) {
  detail::require_sequence(seq, limit);
  detail::require_open_levels(alphas);
  rule.validate(seq.size());
  GammaDiagnostic out;
  out.alphas.assign(alphas.begin(), alphas.end());
  out.rule = rule;
  for (double a : alphas) {
    const FiniteSet strict = strict_cut_closure(limit, a);
    const FiniteSet full = alpha_cut(limit, a);
    std::vector<double> lower, upper;
    lower.reserve(seq.size());
    upper.reserve(seq.size());
    for (const auto& un : seq) {
      const FiniteSet cut = alpha_cut(un, a);
      lower.push_back(directed_hausdorff(strict, cut));
      upper.push_back(directed_hausdorff(cut, full));
    }
    out.verdicts.push_back(rule.judge_max(std::max(rule.tail_max(lower), rule.tail_max(upper))));
    out.lower.push_back(std::move(lower));
    out.upper.push_back(std::move(upper));
  }
  out.verdict = Verdict::Pass;
  for (Verdict v : out.verdicts) out.verdict = conjunction({out.verdict, v});
  return out;
}

// H_send(u_n,u) -> 0 exactly when H_end(u_n,u) -> 0 and H([u_n]_0,[u]_0) -> 0.
// The certificate passes when the three tail verdicts satisfy that identity;
// an inconclusive component makes the whole check inconclusive.
inline Certificate send_decomposition_check(std::span<const StepFuzzySet> seq, const StepFuzzySet& limit,
                                            TailRule rule) {
  detail::require_sequence(seq, limit);
  rule.validate(seq.size());
  std::vector<double> send = metric_series(seq, limit, FuzzyMetric::Send);
  std::vector<double> end = metric_series(seq, limit, FuzzyMetric::End);
  std::vector<double> cut0;
  const FiniteSet limit_support = support(limit);
  for (const auto& un : seq) cut0.push_back(hausdorff(support(un), limit_support));

  const Verdict vs = rule.judge(send);
  const Verdict ve = rule.judge(end);
  const Verdict vc = rule.judge(cut0);

  Certificate cert{CertificateKind::SendDecomposition};
  cert.evidence = {{"send", std::move(send)}, {"end", std::move(end)}, {"cut0", std::move(cut0)}};
  const std::string summary = "send=" + std::string(to_string(vs)) + " end=" + std::string(to_string(ve)) +
                              " cut0=" + std::string(to_string(vc));
  cert.notes.push_back(summary);
  if (vs == Verdict::Inconclusive || ve == Verdict::Inconclusive || vc == Verdict::Inconclusive) {
    cert.verdict = Verdict::Inconclusive;
  } else if ((vs == Verdict::Pass) != (ve == Verdict::Pass && vc == Verdict::Pass)) {
    cert.verdict = Verdict::Fail;
    cert.witness = summary;
  }
  return cert;
}

}  // namespace hyperfuzz
