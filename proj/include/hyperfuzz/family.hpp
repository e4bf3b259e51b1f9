#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "hyperfuzz/certificate.hpp"
#include "hyperfuzz/common.hpp"
#include "hyperfuzz/fuzzy_metrics.hpp"
#include "hyperfuzz/fuzzy_set.hpp"
#include "hyperfuzz/hausdorff.hpp"

namespace hyperfuzz {

// Marks a family as a finite sweep of an infinite parametrised family. Claims
// about "all members" then become tail-trend decisions along the sweep.
struct GeneratorTag {
  std::string kind;
  std::vector<double> parameters;
  // Hausdorff error of discretising continuum members, when there is one.
  std::optional<double> discretization_bound;
};

class FuzzyFamily {
 public:
  FuzzyFamily(std::string name, std::vector<std::string> member_names, std::vector<StepFuzzySet> members,
              std::optional<GeneratorTag> generator = std::nullopt)
      : name_(std::move(name)),
        names_(std::move(member_names)),
        members_(std::move(members)),
        generator_(std::move(generator)) {
    require(!members_.empty(), "family '" + name_ + "' must have at least one member");
    require(names_.size() == members_.size(), "family '" + name_ + "': one name per member");
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < members_.size(); ++i) {
      require(seen.insert(names_[i]).second, "family '" + name_ + "': duplicate member name '" + names_[i] + "'");
      require(same_space(members_[i].space(), members_.front().space()),
              "family '" + name_ + "': member '" + names_[i] + "' lives in a different space");
    }
    if (generator_)
      require(generator_->parameters.size() == members_.size(),
              "family '" + name_ + "': generator parameters must match member count");
  }

  const std::string& name() const noexcept { return name_; }
  std::span<const std::string> member_names() const noexcept { return names_; }
  std::span<const StepFuzzySet> members() const noexcept { return members_; }
  const std::optional<GeneratorTag>& generator() const noexcept { return generator_; }
  std::size_t size() const noexcept { return members_.size(); }
  const SpacePtr& space() const noexcept { return members_.front().space(); }

 private:
  std::string name_;
  std::vector<std::string> names_;
  std::vector<StepFuzzySet> members_;
  std::optional<GeneratorTag> generator_;
};

// U(alpha): union of the members' alpha-cuts.
inline FiniteSet family_union_cut(const FuzzyFamily& family, double alpha) {
  require(alpha > 0.0 && alpha <= 1.0, "family_union_cut: alpha " + std::to_string(alpha) + " outside (0,1]");
  std::vector<FiniteSet> cuts;
  for (const auto& u : family.members()) cuts.push_back(alpha_cut(u, alpha));
  return union_family(cuts);
}

// U(0): union of the members' supports.
inline FiniteSet family_union_support(const FuzzyFamily& family) {
  std::vector<FiniteSet> cuts;
  for (const auto& u : family.members()) cuts.push_back(support(u));
  return union_family(cuts);
}

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// Covering numbers of the running unions of `cut_of(member)` along the sweep.
template <class CutOf>
std::vector<double> prefix_covering_numbers(const FuzzyFamily& family, double eps, CutOf&& cut_of) {
  std::vector<double> sizes;
  std::optional<FiniteSet> running;
  for (const auto& u : family.members()) {
    FiniteSet cut = cut_of(u);
    if (running) {
      const FiniteSet pair[] = {*running, cut};
      running = union_family(pair);
    } else {
      running = std::move(cut);
    }
    sizes.push_back(static_cast<double>(covering_number(*running, eps)));
  }
  return sizes;
}

// One total-boundedness decision on a union of cuts. Fixed families are
// finite and therefore always totally bounded; swept families fail when every
// step of the window adds a new net center.
template <class CutOf>
Verdict covering_decision(const FuzzyFamily& family, double eps, CutOf&& cut_of, Series& sweep,
                          double& final_size) {
  if (!family.generator()) {
    std::vector<FiniteSet> cuts;
    for (const auto& u : family.members()) cuts.push_back(cut_of(u));
    final_size = static_cast<double>(covering_number(union_family(cuts), eps));
    return Verdict::Pass;
  }
  sweep.values = prefix_covering_numbers(family, eps, cut_of);
  final_size = sweep.values.back();
  return strictly_increasing_tail(sweep.values, TailRule::default_window(family.size())) ? Verdict::Fail
                                                                                       : Verdict::Pass;
}

}  // namespace detail

// Total boundedness in (F_USCG, H_end): U(alpha) totally bounded at every
// sampled positive level.
inline Certificate tb_end_report(const FuzzyFamily& family, double eps, std::span<const double> alphas) {
  require(eps > 0.0, "eps must be positive");
  require(!alphas.empty(), "tb_end_report needs at least one alpha");
  for (double a : alphas) require(a > 0.0 && a <= 1.0, "alpha " + std::to_string(a) + " outside (0,1]");

  Certificate cert{CertificateKind::TbEnd};
  Series levels{"alpha", {}};
  Series sizes{"net_size", {}};
  for (double a : alphas) {
    Series sweep{"net_size_sweep@" + detail::fmt(a), {}};
    double final_size = 0.0;
    Verdict v = detail::covering_decision(
        family, eps, [a](const StepFuzzySet& u) { return alpha_cut(u, a); }, sweep, final_size);
    levels.values.push_back(a);
    sizes.values.push_back(final_size);
    if (!sweep.values.empty()) cert.evidence.push_back(std::move(sweep));
    if (v == Verdict::Fail && !cert.witness) {
      cert.verdict = Verdict::Fail;
      cert.witness = "alpha=" + detail::fmt(a) + ": net sizes strictly increasing along the sweep";
    }
  }
  cert.evidence.insert(cert.evidence.begin(), {std::move(levels), std::move(sizes)});
  return cert;
}

// Total boundedness in (F_USCB, H_send): U(0) totally bounded.
inline Certificate tb_send_report(const FuzzyFamily& family, double eps) {
  require(eps > 0.0, "eps must be positive");
  Certificate cert{CertificateKind::TbSend};
  Series sweep{"net_size_sweep", {}};
  double final_size = 0.0;
  Verdict v = detail::covering_decision(
      family, eps, [](const StepFuzzySet& u) { return support(u); }, sweep, final_size);
  cert.evidence.push_back({"net_size", {final_size}});
  if (!sweep.values.empty()) cert.evidence.push_back(std::move(sweep));
  if (v == Verdict::Fail) {
    cert.verdict = Verdict::Fail;
    cert.witness = "U(0): net sizes strictly increasing along the sweep";
  }
  return cert;
}

// Largest stored level delta with H([u]_b, [u]_0) < eps for every stored
// level b <= delta. The lowest cut is the support, so one always exists.
inline double erc_member_modulus(const StepFuzzySet& u, double eps) {
  require(eps > 0.0, "eps must be positive");
  const FiniteSet base = support(u);
  const auto levels = u.levels();
  double delta = levels.back().alpha;
  for (std::size_t i = levels.size(); i-- > 0;) {
    if (hausdorff(levels[i].cut, base) >= eps) break;
    delta = levels[i].alpha;
  }
  return delta;
}

// Equi-right-continuity at 0: one delta serving every member.
inline Certificate erc_modulus(const FuzzyFamily& family, double eps) {
  require(eps > 0.0, "eps must be positive");
  Certificate cert{CertificateKind::Erc};
  Series per_member{"member_modulus", {}};
  Series running{"family_modulus", {}};
  double current = std::numeric_limits<double>::infinity();
  std::size_t argmin = 0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const double delta = erc_member_modulus(family.members()[i], eps);
    per_member.values.push_back(delta);
    if (delta < current) {
      current = delta;
      argmin = i;
    }
    running.values.push_back(current);
  }
  cert.evidence = {std::move(per_member), std::move(running)};
  if (family.generator() &&
      strictly_decreasing_tail(cert.series("family_modulus"), TailRule::default_window(family.size()))) {
    cert.verdict = Verdict::Fail;
    cert.witness = "member '" + family.member_names()[argmin] + "' modulus " + detail::fmt(current) +
                   ": family modulus strictly decreasing along the sweep";
  }
  return cert;
}

// Relative compactness in (F_USCB, H_send): U(0) relatively compact and the
// family equi-right-continuous at 0.
inline Certificate rel_compact_send_report(const FuzzyFamily& family, double eps) {
  Certificate tb = tb_send_report(family, eps);
  Certificate erc = erc_modulus(family, eps);
  Certificate cert{CertificateKind::RelCompactSend};
  cert.verdict = conjunction({tb.verdict, erc.verdict});
  for (auto& s : tb.evidence) cert.evidence.push_back({"tb." + s.name, std::move(s.values)});
  for (auto& s : erc.evidence) cert.evidence.push_back({"erc." + s.name, std::move(s.values)});
  if (tb.witness) cert.witness = "TB component: " + *tb.witness;
  else if (erc.witness) cert.witness = "ERC component: " + *erc.witness;
  cert.notes.push_back("TB=" + std::string(to_string(tb.verdict)) + " ERC=" + std::string(to_string(erc.verdict)));
  cert.notes.push_back(
      "relative compactness of U(0) is certified as total boundedness; equivalent only when X is complete");
  return cert;
}

// Same membership function: equal supports and equal grades on them.
inline bool same_fuzzy_set(const StepFuzzySet& u, const StepFuzzySet& v) {
  if (!same_space(u.space(), v.space())) return false;
  const FiniteSet su = support(u);
  const FiniteSet sv = support(v);
  if (!su.same_elements(sv)) return false;
  return std::all_of(su.begin(), su.end(),
                     [&](const Point& x) { return std::abs(membership(u, x) - membership(v, x)) <= kTolerance; });
}

// Searches for evidence that `candidate` lies in the closure of the family but
// not in the family. Only non-closedness can be witnessed; a PASS means no
// witness was found.
inline Certificate closedness_witness(const FuzzyFamily& family, const StepFuzzySet& candidate, FuzzyMetric metric,
                                      double tol) {
  require(tol > 0.0, "tolerance must be positive");
  require(same_space(candidate.space(), family.space()), "candidate lives in a different space");

  Certificate cert{CertificateKind::ClosednessWitness};
  Series distances{"distance", {}};
  std::optional<std::size_t> equal_member;
  for (std::size_t i = 0; i < family.size(); ++i) {
    distances.values.push_back(fuzzy_distance(metric, candidate, family.members()[i]));
    if (!equal_member && same_fuzzy_set(candidate, family.members()[i])) equal_member = i;
  }
  // Best approximants last: the approach sequence toward the candidate.
  Series approach{"approach", distances.values};
  std::sort(approach.values.begin(), approach.values.end(), std::greater<>());
  const auto nearest = static_cast<std::size_t>(
      std::min_element(distances.values.begin(), distances.values.end()) - distances.values.begin());
  const double min_distance = distances.values[nearest];

  cert.evidence = {std::move(distances), std::move(approach), {"min_distance", {min_distance}}};
  if (family.generator() && family.generator()->discretization_bound)
    cert.evidence.push_back({"discretization_bound", {*family.generator()->discretization_bound}});
  cert.notes.push_back("only non-closedness is witnessed; PASS is not a proof of closedness");

  if (equal_member) {
    cert.notes.push_back("candidate equals member '" + family.member_names()[*equal_member] + "'");
    return cert;
  }
  const bool approaching = strictly_decreasing_tail(cert.series("approach"), TailRule::default_window(family.size()));
  if (min_distance < tol && approaching) {
    cert.verdict = Verdict::Fail;
    cert.witness = "candidate is not a member but members approach it: nearest '" + family.member_names()[nearest] +
                   "' at " + std::string(to_string(metric)) + " distance " + detail::fmt(min_distance);
  } else if (min_distance < 2.0 * tol) {
    cert.verdict = Verdict::Inconclusive;
  }
  return cert;
}

// Residuals r_n = max_{n < m <= N} dist(u_n, u_m). Cauchy behaviour shows as
// nonincreasing residuals whose tail falls below tol; the last member is the
// constructed limit candidate.
inline Certificate cauchy_tail_profile(std::span<const StepFuzzySet> seq, FuzzyMetric metric, TailRule rule) {
  require(seq.size() >= 3, "cauchy_tail_profile needs at least 3 members");
  const std::size_t n = seq.size();
  Series residuals{"residual", {}};
  Series to_last{"distance_to_last", {}};
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double r = 0.0;
    for (std::size_t m = i + 1; m < n; ++m) r = std::max(r, fuzzy_distance(metric, seq[i], seq[m]));
    residuals.values.push_back(r);
    to_last.values.push_back(fuzzy_distance(metric, seq[i], seq.back()));
  }
  rule.window = std::min(rule.window, residuals.values.size());
  rule.validate(residuals.values.size());

  Certificate cert{CertificateKind::CauchyLimit};
  std::optional<std::size_t> rise;
  for (std::size_t i = 1; i < residuals.values.size() && !rise; ++i)
    if (residuals.values[i] > residuals.values[i - 1] + kTolerance) rise = i;
  const double tail = rule.tail_max(residuals.values);
  cert.evidence = {std::move(residuals), std::move(to_last), {"tail_max", {tail}}};
  if (rise) {
    cert.verdict = Verdict::Fail;
    cert.witness = "residual increases at n=" + std::to_string(*rise + 1);
    return cert;
  }
  cert.verdict = rule.judge_max(tail);
  if (cert.verdict == Verdict::Fail)
    cert.witness = "tail residual " + detail::fmt(tail) + " does not vanish (not Cauchy)";
  return cert;
}

}  // namespace hyperfuzz
