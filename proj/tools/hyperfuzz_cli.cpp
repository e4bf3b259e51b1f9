// Batch front end: metric matrices, convergence reports, compactness
// certificates, oracle cross-checks and document generation. CSV goes to
// stdout or --out.
//
// Exit codes: 0 when every requested verdict is PASS, 1 on any FAIL or
// INCONCLUSIVE verdict, 2 on input errors.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hyperfuzz/hyperfuzz.hpp"

namespace {

using namespace hyperfuzz;

struct Common {
  std::string document;
  std::string out;
  std::string emit_json;
};

void add_common(CLI::App* cmd, Common& c, bool needs_document = true) {
  if (needs_document) cmd->add_option("document", c.document, "Input JSON document")->required();
  cmd->add_option("--out", c.out, "Write output to this path instead of stdout");
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

int finish(const Report& report, const Common& c) {
  write_output(report.csv, c.out);
  if (!c.emit_json.empty()) {
    nlohmann::json certs = nlohmann::json::array();
    for (const auto& cert : report.certificates) certs.push_back(certificate_json(cert));
    write_output(certs.dump(2) + "\n", c.emit_json);
  }
  return report.all_pass() ? 0 : 1;
}

FuzzyMetric parse_metric(const std::string& s) {
  if (s == "end") return FuzzyMetric::End;
  if (s == "send") return FuzzyMetric::Send;
  throw InputError("unknown metric '" + s + "' (expected end or send)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Endograph, sendograph and levelwise Hausdorff analysis of step fuzzy sets"};
  app.require_subcommand(1);

  Common common;
  std::size_t alpha_grid = 101;
  std::optional<std::size_t> window;
  double tol = TailRule::kDefaultTol;
  double eps = 0.5;
  double resolution = 1e-3;
  std::uint64_t seed = 0;

  std::string kind = "end";
  auto* metrics = app.add_subcommand("metrics", "Pairwise distance matrix over the document's fuzzy sets");
  add_common(metrics, common);
  metrics->add_option("--kind", kind, "end, send or level:<alpha>");

  std::string sequence, limit, conv_mode = "all";
  auto* converge = app.add_subcommand("converge", "Tail diagnostics for a sequence against a limit");
  add_common(converge, common);
  converge->add_option("--sequence", sequence, "Sequence name")->required();
  converge->add_option("--limit", limit, "Limit fuzzy set name")->required();
  converge->add_option("--mode", conv_mode, "gamma, end, send, level or all");
  converge->add_option("--alpha-grid", alpha_grid, "Number of levels in the alpha grid");
  converge->add_option("--window", window, "Tail window (default max(5, 10% of length))");
  converge->add_option("--tol", tol, "Tail tolerance");
  converge->add_option("--emit-json", common.emit_json, "Also write certificates as JSON to this path");

  std::string family, comp_mode, candidate, metric_name = "send";
  auto* compact = app.add_subcommand("compact", "Compactness certificate for a family");
  add_common(compact, common);
  compact->add_option("--family", family, "Family name")->required();
  compact->add_option("--mode", comp_mode, "tb_end, tb_send, erc, rel_send or closedness")->required();
  compact->add_option("--eps", eps, "Covering radius / continuity epsilon");
  compact->add_option("--alpha-grid", alpha_grid, "Number of positive levels for tb_end");
  compact->add_option("--candidate", candidate, "Candidate fuzzy set (closedness)");
  compact->add_option("--metric", metric_name, "end or send (closedness)");
  compact->add_option("--tol", tol, "Approach tolerance (closedness)");
  compact->add_option("--emit-json", common.emit_json, "Also write the certificate as JSON to this path");

  auto* oracle = app.add_subcommand("oracle", "Cross-check closed-form metrics against sampled graphs");
  add_common(oracle, common);
  oracle->add_option("--resolution", resolution, "Vertical sampling step in (0, 0.1]");

  GenerateOptions gen_opt;
  auto* gen = app.add_subcommand("gen", "Emit a document with one generated family");
  add_common(gen, common, false);
  gen->add_option("--kind", gen_opt.kind, "translates, collapse, crisp_intervals or random");
  gen->add_option("--count", gen_opt.count, "Number of members");
  gen->add_option("--seed", seed, "Generator seed");
  gen->add_option("--dim", gen_opt.dim, "Euclidean dimension");
  gen->add_option("--name", gen_opt.name, "Family name");
  gen->add_flag("--expand", gen_opt.expand, "Inline members as explicit fuzzy sets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      gen_opt.seed = seed;
      write_output(generate_document(gen_opt).dump(2) + "\n", common.out);
      return 0;
    }
    const Document doc = load_document(common.document);
    if (*metrics) return finish(run_metrics(doc, kind), common);
    if (*converge) {
      ConvergenceOptions opt{alpha_grid, window, tol};
      return finish(run_convergence(doc, sequence, limit, conv_mode, opt), common);
    }
    if (*compact) {
      CompactnessOptions opt;
      opt.alpha_grid = alpha_grid;
      if (!candidate.empty()) opt.candidate = candidate;
      opt.metric = parse_metric(metric_name);
      opt.tol = tol;
      return finish(run_compactness(doc, family, eps, comp_mode, opt), common);
    }
    if (*oracle) return finish(run_oracle_check(doc, resolution), common);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Unsupported& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
