#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace hyperfuzz;
using namespace hyperfuzz::testing;
using nlohmann::json;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_document_text(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

// Rows of a CSV as vectors of cells (no quoting in the inputs used here).
std::vector<std::vector<std::string>> rows(const std::string& csv) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream cs(line);
    std::string cell;
    while (std::getline(cs, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    out.push_back(std::move(cells));
  }
  return out;
}

std::vector<std::vector<std::string>> records(const std::string& csv, const std::string& record,
                                              const std::string& mode) {
  std::vector<std::vector<std::string>> out;
  for (auto& r : rows(csv))
    if (r.size() == 6 && r[0] == record && r[1] == mode) out.push_back(r);
  return out;
}

const char* kTwoSingletons = R"({
  "space": {"type": "euclidean", "dim": 1},
  "fuzzy_sets": [
    {"name": "u0", "levels": [{"alpha": 1.0, "points": [[0]]}]},
    {"name": "u3", "levels": [{"alpha": 1.0, "points": [[3]]}]}
  ]
})";

json singleton_sequence_doc(std::size_t count) {
  json sets = json::array();
  json names = json::array();
  sets.push_back({{"name", "zero"}, {"levels", {{{"alpha", 1.0}, {"points", {{0.0}}}}}}});
  for (std::size_t n = 1; n <= count; ++n) {
    const std::string name = "s" + std::to_string(n);
    sets.push_back({{"name", name}, {"levels", {{{"alpha", 1.0}, {"points", {{1.0 / static_cast<double>(n)}}}}}}});
    names.push_back(name);
  }
  return {{"space", {{"type", "euclidean"}, {"dim", 1}}},
          {"fuzzy_sets", sets},
          {"sequences", {{{"name", "shrink"}, {"members", names}}, {{"name", "still"}, {"members", {"zero", "zero", "zero", "zero", "zero"}}}}}};
}

}  // namespace

TEST(LoadDocument, MinimalCrispSingleton) {
  auto doc = parse_document_text(R"({"space": {"type": "euclidean", "dim": 1},
    "fuzzy_sets": [{"name": "a", "levels": [{"alpha": 1.0, "points": [[0]]}]}]})");
  EXPECT_EQ(doc.set_names, std::vector<std::string>{"a"});
  EXPECT_EQ(doc.fuzzy_set("a"), crisp1({0}));
}

TEST(LoadDocument, NonNestedLevelsNameTheSet) {
  const std::string msg = error_of(R"({"space": {"type": "euclidean", "dim": 1},
    "fuzzy_sets": [{"name": "broken", "levels": [{"alpha": 1.0, "points": [[0]]}, {"alpha": 0.5, "points": [[1]]}]}]})");
  EXPECT_NE(msg.find("fuzzy set 'broken'"), std::string::npos) << msg;
  EXPECT_NE(msg.find("levels 0 (alpha=1) and 1 (alpha=0.5)"), std::string::npos) << msg;
}

TEST(LoadDocument, CollapseGeneratorExpands) {
  auto doc = parse_document_text(R"({"space": {"type": "euclidean", "dim": 1},
    "families": [{"name": "c", "generator": {"kind": "collapse", "count": 50}}]})");
  const auto& fam = doc.family("c");
  EXPECT_EQ(fam.size(), 50u);
  EXPECT_EQ(fam.members()[9], collapse_n(10));
  EXPECT_EQ(doc.fuzzy_set("c#10"), collapse_n(10));
}

TEST(LoadDocument, ErrorsCarryFieldPaths) {
  EXPECT_NE(error_of(R"({"space": {"type": "euclidean", "dim": 1},
    "fuzzy_sets": [{"name": "a", "levels": [{"alpha": "x", "points": [[0]]}]}]})")
                .find("document.fuzzy_sets[0].levels[0].alpha"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"space": {"type": "euclidean", "dim": 2},
    "fuzzy_sets": [{"name": "a", "levels": [{"alpha": 1, "points": [[0]]}]}]})")
                .find("document.fuzzy_sets[0].levels[0].points[0]: expected 2 coordinates"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"fuzzy_sets": []})").find("missing field 'space'"), std::string::npos);
  EXPECT_NE(error_of(R"({"space": {"type": "torus"}})").find("unknown space type"), std::string::npos);
  EXPECT_NE(error_of("{ not json").find("parse error"), std::string::npos);
  EXPECT_NE(error_of(R"({"space": {"type": "euclidean", "dim": 1},
    "families": [{"name": "f", "members": ["ghost"]}]})")
                .find("unknown fuzzy set 'ghost'"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"space": {"type": "euclidean", "dim": 1},
    "families": [{"name": "f", "generator": {"kind": "spiral", "count": 3}}]})")
                .find("unknown generator kind"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"space": {"type": "finite", "matrix": [[0, 1], [1, 0]]},
    "fuzzy_sets": [{"name": "a", "levels": [{"alpha": 1, "points": [5]}]}]})")
                .find("outside the space"),
            std::string::npos);
}

TEST(LoadDocument, FiniteSpacesAndAllGenerators) {
  auto finite = parse_document_text(R"({"space": {"type": "finite", "matrix": [[0, 1], [1, 0]]},
    "fuzzy_sets": [{"name": "a", "levels": [{"alpha": 1, "points": [0]}, {"alpha": 0.4, "points": [[0], 1]}]}]})");
  EXPECT_EQ(support(finite.fuzzy_set("a")).size(), 2u);

  auto gen = parse_document_text(R"({"space": {"type": "euclidean", "dim": 2},
    "families": [
      {"name": "t", "generator": {"kind": "translates", "count": 4, "params": {"step": 2}}},
      {"name": "iv", "generator": {"kind": "crisp_intervals", "params": {"lo": 0.3, "hi": 0.5, "step": 0.05}}},
      {"name": "r", "generator": {"kind": "random", "count": 5, "seed": 9}}
    ],
    "sequences": [{"name": "ts", "family": "t"}]})");
  EXPECT_EQ(gen.family("t").size(), 4u);
  EXPECT_EQ(gen.family("iv").size(), 4u);
  EXPECT_EQ(gen.family("r").size(), 5u);
  EXPECT_EQ(gen.sequence("ts").members.size(), 4u);
  EXPECT_EQ(support(gen.fuzzy_set("t#3")).points()[0], pt(6, 0));
  EXPECT_EQ(gen.family("r").members()[2], random_family("r", gen.space, 5, 9).members()[2]);
}

TEST(LoadDocument, MissingFile) { EXPECT_THROW(load_document("/nonexistent/doc.json"), InputError); }

TEST(ToJson, RoundTrips) {
  Rng rng(5);
  json sets = json::array();
  std::vector<StepFuzzySet> originals;
  for (int i = 0; i < 20; ++i) {
    originals.push_back(random_fuzzy_set(rng, plane()));
    sets.push_back(to_json(originals.back(), "u" + std::to_string(i)));
  }
  auto doc = parse_document(json{{"space", {{"type", "euclidean"}, {"dim", 2}}}, {"fuzzy_sets", sets}});
  for (int i = 0; i < 20; ++i) EXPECT_EQ(doc.fuzzy_set("u" + std::to_string(i)), originals[i]);
}

TEST(FormatNumber, NineSignificantDigits) {
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(format_number(2.5e-7), "2.5e-07");
}

TEST(RunMetrics, Examples) {
  auto doc = parse_document_text(kTwoSingletons);
  auto send = rows(run_metrics(doc, "send").csv);
  ASSERT_EQ(send.size(), 3u);
  EXPECT_EQ(send[0], (std::vector<std::string>{"name", "u0", "u3"}));
  EXPECT_EQ(send[1], (std::vector<std::string>{"u0", "0", "3"}));
  EXPECT_EQ(send[2], (std::vector<std::string>{"u3", "3", "0"}));

  auto end = rows(run_metrics(doc, "end").csv);
  EXPECT_EQ(end[1][2], "1");
  EXPECT_EQ(end[2][1], "1");

  auto same = rows(run_metrics(doc, "end", {"u0", "u0"}).csv);
  EXPECT_EQ(same[1], (std::vector<std::string>{"u0", "0", "0"}));

  EXPECT_EQ(rows(run_metrics(doc, "level:0.5").csv)[1][2], "3");
  EXPECT_THROW(run_metrics(doc, "sup"), InputError);
  EXPECT_THROW(run_metrics(doc, "level:abc"), InputError);
}

TEST(RunConvergence, ShrinkingSingletonsPassEveryMode) {
  auto doc = parse_document(singleton_sequence_doc(1200));
  auto report = run_convergence(doc, "shrink", "zero", "all", ConvergenceOptions{25, std::nullopt, 1e-3});
  EXPECT_TRUE(report.all_pass()) << report.csv.substr(report.csv.size() - 400);
  for (const char* mode : {"end", "send", "level", "gamma"}) {
    auto v = records(report.csv, "verdict", mode);
    ASSERT_EQ(v.size(), 1u) << mode;
    EXPECT_EQ(v[0][5], "PASS") << mode;
  }
}

TEST(RunConvergence, CollapseSendFailsThroughZeroCut) {
  auto doc = parse_document_text(R"({"space": {"type": "euclidean", "dim": 1},
    "fuzzy_sets": [{"name": "zero", "levels": [{"alpha": 1, "points": [0]}]}],
    "families": [{"name": "c", "generator": {"kind": "collapse", "count": 1200}}],
    "sequences": [{"name": "cs", "family": "c"}]})");
  auto report = run_convergence(doc, "cs", "zero", "all", ConvergenceOptions{11, std::nullopt, 1e-3});
  EXPECT_FALSE(report.all_pass());
  EXPECT_EQ(records(report.csv, "verdict", "end")[0][5], "PASS");
  EXPECT_EQ(records(report.csv, "verdict", "send")[0][5], "FAIL");
  EXPECT_EQ(records(report.csv, "verdict", "cut0_component")[0][5], "FAIL");
  EXPECT_EQ(records(report.csv, "verdict", "end_component")[0][5], "PASS");
  auto check = records(report.csv, "check", "decomposition");
  ASSERT_EQ(check.size(), 1u);
  EXPECT_EQ(check[0][4], "send=FAIL end=PASS cut0=FAIL");
  EXPECT_EQ(check[0][5], "PASS");
}

TEST(RunConvergence, ConstantSequenceAllZero) {
  auto doc = parse_document(singleton_sequence_doc(3));
  auto report = run_convergence(doc, "still", "zero", "all");
  EXPECT_TRUE(report.all_pass());
  for (const auto& r : rows(report.csv)) {
    if (r[0] == "series") {
      EXPECT_EQ(r[4], "0");
    }
  }
}

TEST(RunConvergence, LevelModeListsExcludedPlatformAlphas) {
  auto doc = parse_document_text(R"({"space": {"type": "euclidean", "dim": 1},
    "fuzzy_sets": [{"name": "a", "levels": [{"alpha": 1, "points": [0]}, {"alpha": 0.5, "points": [0, 1]}]}],
    "sequences": [{"name": "s", "members": ["a", "a", "a", "a", "a"]}]})");
  auto report = run_convergence(doc, "s", "a", "level", ConvergenceOptions{101, std::nullopt, 1e-3});
  auto excluded = records(report.csv, "excluded", "level");
  ASSERT_EQ(excluded.size(), 1u);
  EXPECT_EQ(excluded[0][2], "0.5");
  EXPECT_EQ(records(report.csv, "alpha_verdict", "level").size(), 101u);
  EXPECT_TRUE(report.all_pass());
}

TEST(RunConvergence, RejectsUnknownNames) {
  auto doc = parse_document(singleton_sequence_doc(3));
  EXPECT_THROW(run_convergence(doc, "nope", "zero", "end"), InputError);
  EXPECT_THROW(run_convergence(doc, "still", "nope", "end"), InputError);
  EXPECT_THROW(run_convergence(doc, "still", "zero", "psychic"), InputError);
  EXPECT_THROW(run_convergence(doc, "still", "zero", "end", ConvergenceOptions{101, 9, 1e-3}), InputError);
}

TEST(RunCompactness, Examples) {
  auto doc = parse_document_text(R"({"space": {"type": "euclidean", "dim": 1},
    "fuzzy_sets": [
      {"name": "base", "levels": [{"alpha": 1, "points": [0]}]},
      {"name": "head", "levels": [{"alpha": 1, "points": [0, 0.1, 0.2, 0.3]}]}
    ],
    "families": [
      {"name": "t", "generator": {"kind": "translates", "count": 30}},
      {"name": "iv", "generator": {"kind": "crisp_intervals", "params": {"step": 0.1}}},
      {"name": "single", "members": ["base"]}
    ]})");

  auto tb = run_compactness(doc, "t", 0.4, "tb_send");
  EXPECT_FALSE(tb.all_pass());
  ASSERT_EQ(tb.certificates.size(), 1u);
  std::vector<double> expected;
  for (int n = 1; n <= 30; ++n) expected.push_back(n);
  EXPECT_EQ(tb.certificates[0].series("net_size_sweep"), expected);
  EXPECT_NE(tb.csv.find("certificate,verdict,,FAIL"), std::string::npos);

  CompactnessOptions opt;
  opt.candidate = "head";
  auto closed = run_compactness(doc, "iv", 0.4, "closedness", opt);
  EXPECT_EQ(closed.certificates[0].verdict, Verdict::Fail);
  EXPECT_NE(closed.csv.find("witness,,,"), std::string::npos);

  opt.candidate = "base";
  for (const char* mode : {"tb_end", "tb_send", "erc", "rel_send", "closedness"})
    EXPECT_TRUE(run_compactness(doc, "single", 0.4, mode, opt).all_pass()) << mode;

  EXPECT_THROW(run_compactness(doc, "t", 0.0, "tb_send"), InputError);
  EXPECT_THROW(run_compactness(doc, "nope", 0.4, "tb_send"), InputError);
  EXPECT_THROW(run_compactness(doc, "t", 0.4, "closedness"), InputError);
  EXPECT_THROW(run_compactness(doc, "t", 0.4, "warp"), InputError);
}

TEST(RunOracleCheck, Examples) {
  auto doc = parse_document_text(kTwoSingletons);
  auto report = run_oracle_check(doc, 1e-3);
  EXPECT_TRUE(report.all_pass());
  auto r = rows(report.csv);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[1][2], "end");
  EXPECT_NEAR(std::stod(r[1][3]), 1.0, 1e-12);
  EXPECT_NEAR(std::stod(r[1][4]), 1.0, 2e-3);
  EXPECT_EQ(r[2][2], "send");
  EXPECT_NEAR(std::stod(r[2][3]), 3.0, 1e-12);
  EXPECT_EQ(r[2][7], "PASS");

  auto single = parse_document_text(R"({"space": {"type": "euclidean", "dim": 1},
    "fuzzy_sets": [{"name": "a", "levels": [{"alpha": 1, "points": [0]}, {"alpha": 0.3, "points": [0, 2]}]}]})");
  for (const auto& row : rows(run_oracle_check(single, 0.01).csv))
    if (row[0] == "a") {
      EXPECT_EQ(row[3], "0");
      EXPECT_EQ(row[4], "0");
    }

  EXPECT_THROW(run_oracle_check(doc, 0.0), InputError);
  EXPECT_THROW(run_oracle_check(doc, 0.5), InputError);
}

TEST(RunOracleCheck, GeneratedDocumentsStayWithinBound) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    GenerateOptions opt;
    opt.kind = "random";
    opt.count = 8;
    opt.seed = seed;
    opt.dim = 2;
    opt.expand = true;
    auto doc = parse_document(generate_document(opt));
    EXPECT_TRUE(run_oracle_check(doc, 1e-3).all_pass());
  }
}

TEST(GenerateDocument, CompactAndExpandedFormsAgree) {
  GenerateOptions opt;
  opt.kind = "collapse";
  opt.count = 12;
  auto compact = parse_document(generate_document(opt));
  opt.expand = true;
  auto expanded = parse_document(generate_document(opt));
  const auto& a = compact.family("family");
  const auto& b = expanded.family("family_members");
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.members()[i], b.members()[i]);
  EXPECT_EQ(compact.sequence("family_seq").members.size(), 12u);
  EXPECT_EQ(generate_document(opt).dump(), generate_document(opt).dump());

  opt.kind = "nonsense";
  EXPECT_THROW(generate_document(opt), InputError);
}

TEST(Reports, DeterministicOutput) {
  auto doc = parse_document_text(R"({"space": {"type": "euclidean", "dim": 2},
    "families": [{"name": "r", "generator": {"kind": "random", "count": 30, "seed": 4}}],
    "sequences": [{"name": "rs", "family": "r"}]})");
  const auto a = run_convergence(doc, "rs", "r#30", "all").csv;
  const auto b = run_convergence(doc, "rs", "r#30", "all").csv;
  EXPECT_EQ(a, b);
  EXPECT_EQ(run_compactness(doc, "r", 0.3, "rel_send").csv, run_compactness(doc, "r", 0.3, "rel_send").csv);
}
