#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hyperfuzz/common.hpp"

namespace hyperfuzz {

enum class Verdict { Pass, Fail, Inconclusive };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

// PASS only if every input passes; FAIL dominates INCONCLUSIVE.
inline Verdict conjunction(std::initializer_list<Verdict> verdicts) {
  bool inconclusive = false;
  for (Verdict v : verdicts) {
    if (v == Verdict::Fail) return Verdict::Fail;
    if (v == Verdict::Inconclusive) inconclusive = true;
  }
  return inconclusive ? Verdict::Inconclusive : Verdict::Pass;
}

enum class CertificateKind {
  MetricAxioms,
  TbEnd,
  TbSend,
  Erc,
  RelCompactSend,
  ClosednessWitness,
  CauchyLimit,
  SendDecomposition,
};

inline std::string_view to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::MetricAxioms: return "METRIC_AXIOMS";
    case CertificateKind::TbEnd: return "TB_END";
    case CertificateKind::TbSend: return "TB_SEND";
    case CertificateKind::Erc: return "ERC";
    case CertificateKind::RelCompactSend: return "REL_COMPACT_SEND";
    case CertificateKind::ClosednessWitness: return "CLOSEDNESS_WITNESS";
    case CertificateKind::CauchyLimit: return "CAUCHY_LIMIT";
    case CertificateKind::SendDecomposition: return "SEND_DECOMPOSITION";
  }
  return "?";
}

// A named numeric series carried as evidence.
struct Series {
  std::string name;
  std::vector<double> values;
};

// Structured verdict. A FAIL always carries a witness.
struct Certificate {
  Certificate() = default;
  explicit Certificate(CertificateKind k) : kind(k) {}

  CertificateKind kind{};
  Verdict verdict = Verdict::Pass;
  std::vector<Series> evidence;
  std::optional<std::string> witness;
  std::vector<std::string> notes;

  bool passed() const { return verdict == Verdict::Pass; }

  const Series* find(std::string_view name) const {
    auto it = std::find_if(evidence.begin(), evidence.end(),
                           [&](const Series& s) { return s.name == name; });
    return it == evidence.end() ? nullptr : &*it;
  }

  const std::vector<double>& series(std::string_view name) const {
    const Series* s = find(name);
    if (s == nullptr) throw InputError("certificate has no series '" + std::string(name) + "'");
    return s->values;
  }
};

// Decision rule for finite prefixes standing in for infinite sequences.
//
// The tail is the last `window` entries. With m the tail maximum:
// m < tol is PASS, m >= 2*tol is FAIL, anything in between is INCONCLUSIVE.
struct TailRule {
  std::size_t window = 5;
  double tol = 1e-3;

  static constexpr double kDefaultTol = 1e-3;

  // window = max(5, 10% of length), never longer than the sequence.
  static std::size_t default_window(std::size_t length) {
    return std::min(length, std::max<std::size_t>(5, length / 10));
  }

  static TailRule defaults_for(std::size_t length, double tol = kDefaultTol) {
    return TailRule{default_window(length), tol};
  }

  void validate(std::size_t length) const {
    require(window >= 1, "window must be at least 1");
    require(window <= length, "window (" + std::to_string(window) +
                                  ") exceeds sequence length (" + std::to_string(length) + ")");
    require(tol > 0.0, "tolerance must be positive");
  }

  std::span<const double> tail(std::span<const double> values) const {
    return values.subspan(values.size() - window);
  }

  double tail_max(std::span<const double> values) const {
    validate(values.size());
    auto t = tail(values);
    return *std::max_element(t.begin(), t.end());
  }

  Verdict judge_max(double m) const {
    if (m < tol) return Verdict::Pass;
    if (m >= 2.0 * tol) return Verdict::Fail;
    return Verdict::Inconclusive;
  }

  Verdict judge(std::span<const double> values) const { return judge_max(tail_max(values)); }
};

// True when every step inside the last `window` entries strictly increases.
inline bool strictly_increasing_tail(std::span<const double> values, std::size_t window) {
  if (values.size() < 2 || window < 2) return false;
  window = std::min(window, values.size());
  for (std::size_t i = values.size() - window + 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1])) return false;
  return true;
}

inline bool strictly_decreasing_tail(std::span<const double> values, std::size_t window) {
  if (values.size() < 2 || window < 2) return false;
  window = std::min(window, values.size());
  for (std::size_t i = values.size() - window + 1; i < values.size(); ++i)
    if (!(values[i] < values[i - 1])) return false;
  return true;
}

}  // namespace hyperfuzz
