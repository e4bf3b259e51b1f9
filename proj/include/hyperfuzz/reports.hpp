#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hyperfuzz/certificate.hpp"
#include "hyperfuzz/document.hpp"
#include "hyperfuzz/family.hpp"
#include "hyperfuzz/fuzzy_metrics.hpp"

namespace hyperfuzz {

// '.' decimal point, 9 significant digits, independent of the C locale.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string_view> header) { row(header); }

  void row(const std::vector<std::string_view>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ += ',';
      out_ += escape(cells[i]);
    }
    out_ += '\n';
  }

  const std::string& str() const noexcept { return out_; }

 private:
  static std::string escape(std::string_view cell) {
    if (cell.find_first_of(",\"\n") == std::string_view::npos) return std::string(cell);
    std::string quoted = "\"";
    for (char c : cell) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    return quoted + "\"";
  }

  std::string out_;
};

struct Report {
  std::string csv;
  std::vector<Verdict> verdicts;  // the verdicts the caller asked for
  std::vector<Certificate> certificates;

  bool all_pass() const {
    for (Verdict v : verdicts)
      if (v != Verdict::Pass) return false;
    return true;
  }
};

inline nlohmann::json certificate_json(const Certificate& cert) {
  nlohmann::json evidence = nlohmann::json::object();
  for (const auto& s : cert.evidence) evidence[s.name] = s.values;
  nlohmann::json out = {{"kind", to_string(cert.kind)},
                        {"verdict", to_string(cert.verdict)},
                        {"evidence", std::move(evidence)},
                        {"notes", cert.notes}};
  out["witness"] = cert.witness ? nlohmann::json(*cert.witness) : nlohmann::json(nullptr);
  return out;
}

// --- metrics -----------------------------------------------------------------

// kind: "end", "send" or "level:<alpha>". Matrix over the listed sets (all
// explicitly declared sets when `names` is empty).
inline Report run_metrics(const Document& doc, const std::string& kind, std::vector<std::string> names = {}) {
  std::optional<double> level;
  std::optional<FuzzyMetric> metric;
  if (kind == "end") metric = FuzzyMetric::End;
  else if (kind == "send") metric = FuzzyMetric::Send;
  else if (kind.rfind("level:", 0) == 0) {
    try {
      std::size_t used = 0;
      level = std::stod(kind.substr(6), &used);
      require(used == kind.size() - 6, "");
    } catch (const std::exception&) {
      throw InputError("bad level in metric kind '" + kind + "'");
    }
  } else {
    throw InputError("unknown metric kind '" + kind + "' (expected end, send or level:<alpha>)");
  }
  if (names.empty()) names = doc.set_names;
  require(!names.empty(), "metrics needs at least one fuzzy set");

  const std::size_t n = names.size();
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& u = doc.fuzzy_set(names[i]);
      const auto& v = doc.fuzzy_set(names[j]);
      m[i][j] = m[j][i] = metric ? fuzzy_distance(*metric, u, v) : levelwise_distance(u, v, *level);
    }

  std::vector<std::string_view> header{"name"};
  for (const auto& s : names) header.push_back(s);
  CsvWriter csv(header);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> cells{names[i]};
    for (double d : m[i]) cells.push_back(format_number(d));
    csv.row(std::vector<std::string_view>(cells.begin(), cells.end()));
  }
  return Report{csv.str(), {}, {}};
}

// --- convergence -------------------------------------------------------------

struct ConvergenceOptions {
  std::size_t alpha_grid = 101;
  std::optional<std::size_t> window;
  double tol = TailRule::kDefaultTol;
};

namespace detail {

class ConvergenceCsv {
 public:
  ConvergenceCsv() : csv_({"record", "mode", "alpha", "index", "value", "verdict"}) {}

  void series(std::string_view mode, std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i)
      put("series", mode, "", std::to_string(i + 1), format_number(values[i]), "");
  }
  void verdict(std::string_view mode, double tail_max, Verdict v) {
    put("verdict", mode, "", "", format_number(tail_max), to_string(v));
  }
  void alpha_verdict(std::string_view mode, double alpha, double tail_max, Verdict v) {
    put("alpha_verdict", mode, format_number(alpha), "", format_number(tail_max), to_string(v));
  }
  void excluded(std::string_view mode, double alpha) { put("excluded", mode, format_number(alpha), "", "", ""); }
  void note(std::string_view mode, std::string_view what, Verdict v) { put("check", mode, "", "", what, to_string(v)); }

  const std::string& str() const { return csv_.str(); }

 private:
  void put(std::string_view record, std::string_view mode, std::string_view alpha, std::string_view index,
           std::string_view value, std::string_view verdict) {
    csv_.row({record, mode, alpha, index, value, verdict});
  }
  CsvWriter csv_;
};

}  // namespace detail

// mode: gamma, end, send, level or all.
inline Report run_convergence(const Document& doc, const std::string& sequence_name, const std::string& limit_name,
                              const std::string& mode, const ConvergenceOptions& opt = {}) {
  const bool all = mode == "all";
  if (!all && mode != "gamma" && mode != "end" && mode != "send" && mode != "level")
    throw InputError("unknown convergence mode '" + mode + "' (expected gamma, end, send, level or all)");
  const Sequence& seq = doc.sequence(sequence_name);
  const StepFuzzySet& limit = doc.fuzzy_set(limit_name);
  TailRule rule = TailRule::defaults_for(seq.members.size(), opt.tol);
  if (opt.window) rule.window = *opt.window;
  rule.validate(seq.members.size());

  Report report;
  detail::ConvergenceCsv csv;
  const std::vector<double> grid = default_alpha_grid(limit, opt.alpha_grid);

  if (all || mode == "end") {
    auto s = metric_series(seq.members, limit, FuzzyMetric::End);
    Verdict v = rule.judge(s);
    csv.series("end", s);
    csv.verdict("end", rule.tail_max(s), v);
    report.verdicts.push_back(v);
  }
  if (all || mode == "send") {
    Certificate dec = send_decomposition_check(seq.members, limit, rule);
    const auto& send = dec.series("send");
    const auto& end = dec.series("end");
    const auto& cut0 = dec.series("cut0");
    csv.series("send", send);
    csv.series("cut0", cut0);
    const Verdict vs = rule.judge(send);
    csv.verdict("send", rule.tail_max(send), vs);
    csv.verdict("end_component", rule.tail_max(end), rule.judge(end));
    csv.verdict("cut0_component", rule.tail_max(cut0), rule.judge(cut0));
    csv.note("decomposition", dec.notes.front(), dec.verdict);
    report.verdicts.push_back(vs);
    report.certificates.push_back(std::move(dec));
  }
  if (all || mode == "level") {
    for (double a : platform_points(limit).alphas) csv.excluded("level", a);
    LevelProfile p = levelwise_profile(seq.members, limit, grid, rule, LevelMode::Necessity);
    for (std::size_t i = 0; i < p.alphas.size(); ++i)
      csv.alpha_verdict("level", p.alphas[i], rule.tail_max(p.distances[i]), p.verdicts[i]);
    double worst = 0.0;
    for (const auto& d : p.distances) worst = std::max(worst, rule.tail_max(d));
    csv.verdict("level", worst, p.verdict);
    report.verdicts.push_back(p.verdict);
  }
  if (all || mode == "gamma") {
    GammaDiagnostic g = gamma_diagnostic(seq.members, limit, grid, rule);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.alphas.size(); ++i) {
      const double m = std::max(rule.tail_max(g.lower[i]), rule.tail_max(g.upper[i]));
      worst = std::max(worst, m);
      csv.alpha_verdict("gamma", g.alphas[i], m, g.verdicts[i]);
    }
    csv.verdict("gamma", worst, g.verdict);
    report.verdicts.push_back(g.verdict);
  }
  report.csv = csv.str();
  return report;
}

// --- compactness -------------------------------------------------------------

struct CompactnessOptions {
  std::size_t alpha_grid = 101;
  std::optional<std::string> candidate;  // closedness mode
  FuzzyMetric metric = FuzzyMetric::Send;
  double tol = TailRule::kDefaultTol;
};

// k/(count+1) for k = 1..count, plus the top level 1.
inline std::vector<double> positive_level_grid(std::size_t count) {
  std::vector<double> grid;
  for (std::size_t k = 1; k <= count; ++k) grid.push_back(static_cast<double>(k) / static_cast<double>(count + 1));
  grid.push_back(1.0);
  return grid;
}

inline std::string certificate_csv(const Certificate& cert) {
  CsvWriter csv({"field", "name", "index", "value"});
  csv.row({"certificate", "kind", "", to_string(cert.kind)});
  csv.row({"certificate", "verdict", "", to_string(cert.verdict)});
  if (cert.witness) csv.row({"witness", "", "", *cert.witness});
  for (const auto& n : cert.notes) csv.row({"note", "", "", n});
  for (const auto& s : cert.evidence)
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      const std::string idx = std::to_string(i + 1);
      const std::string val = format_number(s.values[i]);
      csv.row({"evidence", s.name, idx, val});
    }
  return csv.str();
}

// mode: tb_end, tb_send, erc, rel_send or closedness.
inline Report run_compactness(const Document& doc, const std::string& family_name, double eps,
                              const std::string& mode, const CompactnessOptions& opt = {}) {
  require(eps > 0.0, "eps must be positive");
  const FuzzyFamily& family = doc.family(family_name);
  Certificate cert;
  if (mode == "tb_end") {
    const auto grid = positive_level_grid(opt.alpha_grid);
    cert = tb_end_report(family, eps, grid);
  } else if (mode == "tb_send") {
    cert = tb_send_report(family, eps);
  } else if (mode == "erc") {
    cert = erc_modulus(family, eps);
  } else if (mode == "rel_send") {
    cert = rel_compact_send_report(family, eps);
  } else if (mode == "closedness") {
    require(opt.candidate.has_value(), "closedness mode needs a candidate fuzzy set");
    // Discretised members cannot approach closer than one grid step.
    double tol = opt.tol;
    std::optional<double> bound;
    if (family.generator()) bound = family.generator()->discretization_bound;
    if (bound) tol = std::max(tol, 4.0 * *bound);
    cert = closedness_witness(family, doc.fuzzy_set(*opt.candidate), opt.metric, tol);
    cert.notes.push_back("tol=" + format_number(tol));
  } else {
    throw InputError("unknown compactness mode '" + mode + "' (expected tb_end, tb_send, erc, rel_send or closedness)");
  }
  Report report;
  report.csv = certificate_csv(cert);
  report.verdicts.push_back(cert.verdict);
  report.certificates.push_back(std::move(cert));
  return report;
}

// --- oracle cross-check -----------------------------------------------------

inline Report run_oracle_check(const Document& doc, double resolution) {
  require(resolution > 0.0 && resolution <= 0.1, "resolution must lie in (0, 0.1]");
  const auto& names = doc.set_names;
  require(!names.empty(), "oracle check needs at least one fuzzy set");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = i + 1; j < names.size(); ++j) pairs.emplace_back(i, j);
  if (pairs.empty()) pairs.emplace_back(0, 0);

  Report report;
  CsvWriter csv({"u", "v", "metric", "closed_form", "oracle", "abs_diff", "bound", "verdict"});
  const double bound = 2.0 * resolution;
  for (auto [i, j] : pairs) {
    const auto& u = doc.fuzzy_set(names[i]);
    const auto& v = doc.fuzzy_set(names[j]);
    for (FuzzyMetric metric : {FuzzyMetric::End, FuzzyMetric::Send}) {
      const double closed = fuzzy_distance(metric, u, v);
      const double oracle = fuzzy_oracle(metric, u, v, resolution);
      const double diff = std::abs(closed - oracle);
      const Verdict verdict = diff <= bound ? Verdict::Pass : Verdict::Fail;
      report.verdicts.push_back(verdict);
      csv.row({names[i], names[j], to_string(metric), format_number(closed), format_number(oracle),
               format_number(diff), format_number(bound), to_string(verdict)});
    }
  }
  report.csv = csv.str();
  return report;
}

// --- generation --------------------------------------------------------------

struct GenerateOptions {
  std::string kind = "collapse";
  std::string name = "family";
  std::size_t count = 50;
  std::uint64_t seed = 0;
  std::size_t dim = 1;
  bool expand = false;  // inline members as explicit fuzzy sets
};

// A document holding one generated family and a sequence over it.
inline nlohmann::json generate_document(const GenerateOptions& opt) {
  nlohmann::json generator = {{"kind", opt.kind}, {"count", opt.count}, {"seed", opt.seed}, {"params", nlohmann::json::object()}};
  nlohmann::json doc = {{"space", {{"type", "euclidean"}, {"dim", opt.dim}}}};
  // Expanding validates the generator settings as a side effect.
  nlohmann::json probe = doc;
  probe["families"] = nlohmann::json::array({{{"name", opt.name}, {"generator", generator}}});
  const Document expanded = parse_document(probe);
  if (!opt.expand) {
    doc["families"] = probe["families"];
    doc["sequences"] = nlohmann::json::array({{{"name", opt.name + "_seq"}, {"family", opt.name}}});
    return doc;
  }
  const FuzzyFamily& fam = expanded.family(opt.name);
  nlohmann::json sets = nlohmann::json::array();
  nlohmann::json names = nlohmann::json::array();
  for (std::size_t i = 0; i < fam.size(); ++i) {
    sets.push_back(to_json(fam.members()[i], fam.member_names()[i]));
    names.push_back(fam.member_names()[i]);
  }
  // Member names are reused verbatim, so the explicit family gets its own name.
  doc["fuzzy_sets"] = std::move(sets);
  doc["families"] = nlohmann::json::array({{{"name", opt.name + "_members"}, {"members", names}}});
  doc["sequences"] = nlohmann::json::array({{{"name", opt.name + "_seq"}, {"members", names}}});
  return doc;
}

}  // namespace hyperfuzz
