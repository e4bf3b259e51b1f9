#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hyperfuzz/common.hpp"
#include "hyperfuzz/family.hpp"
#include "hyperfuzz/fuzzy_set.hpp"
#include "hyperfuzz/generators.hpp"
#include "hyperfuzz/space.hpp"

namespace hyperfuzz {

struct Sequence {
  std::string name;
  std::vector<std::string> member_names;
  std::vector<StepFuzzySet> members;
};

// A validated input document: one space, named fuzzy sets, families and
// sequences. Generated family members are addressable as "<family>#<n>".
class Document {
 public:
  SpacePtr space;
  std::vector<std::string> set_names;  // explicitly listed fuzzy sets, in order
  std::vector<FuzzyFamily> families;
  std::vector<Sequence> sequences;

  const StepFuzzySet& fuzzy_set(const std::string& name) const {
    auto it = sets_.find(name);
    if (it == sets_.end()) throw InputError("unknown fuzzy set '" + name + "'");
    return it->second;
  }

  bool has_fuzzy_set(const std::string& name) const { return sets_.count(name) != 0; }

  const FuzzyFamily& family(const std::string& name) const {
    for (const auto& f : families)
      if (f.name() == name) return f;
    throw InputError("unknown family '" + name + "'");
  }

  const Sequence& sequence(const std::string& name) const {
    for (const auto& s : sequences)
      if (s.name == name) return s;
    throw InputError("unknown sequence '" + name + "'");
  }

  void add_fuzzy_set(const std::string& name, StepFuzzySet u) {
    require(!name.empty(), "fuzzy set names must be nonempty");
    require(sets_.emplace(name, std::move(u)).second, "duplicate fuzzy set name '" + name + "'");
  }

 private:
  std::map<std::string, StepFuzzySet> sets_;
};

namespace detail {

using nlohmann::json;

class FieldPath {
 public:
  explicit FieldPath(std::string path) : path_(std::move(path)) {}
  FieldPath operator/(const std::string& key) const { return FieldPath(path_ + "." + key); }
  FieldPath operator[](std::size_t i) const { return FieldPath(path_ + "[" + std::to_string(i) + "]"); }
  [[noreturn]] void fail(const std::string& what) const { throw InputError(path_ + ": " + what); }
  const std::string& str() const { return path_; }

 private:
  std::string path_;
};

inline const json& field(const json& obj, const FieldPath& where, const std::string& key) {
  if (!obj.is_object()) where.fail("expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) where.fail("missing field '" + key + "'");
  return *it;
}

inline double number(const json& j, const FieldPath& where) {
  if (!j.is_number()) where.fail("expected a number");
  return j.get<double>();
}

inline std::size_t count_value(const json& j, const FieldPath& where) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 1) where.fail("expected a positive integer");
  return j.get<std::size_t>();
}

inline std::string text(const json& j, const FieldPath& where) {
  if (!j.is_string()) where.fail("expected a string");
  return j.get<std::string>();
}

inline double number_or(const json& obj, const std::string& key, double fallback, const FieldPath& where) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : number(*it, where / key);
}

inline SpacePtr parse_space(const json& j, const FieldPath& where) {
  const std::string type = text(field(j, where, "type"), where / "type");
  if (type == "euclidean") return MetricSpace::euclidean(count_value(field(j, where, "dim"), where / "dim"));
  if (type == "finite") {
    const json& rows = field(j, where, "matrix");
    if (!rows.is_array()) (where / "matrix").fail("expected an array of rows");
    MetricSpace::Matrix m;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!rows[i].is_array()) (where / "matrix")[i].fail("expected an array");
      std::vector<double> row;
      for (std::size_t k = 0; k < rows[i].size(); ++k) row.push_back(number(rows[i][k], (where / "matrix")[i][k]));
      m.push_back(std::move(row));
    }
    try {
      return MetricSpace::finite(std::move(m));
    } catch (const InputError& e) {
      (where / "matrix").fail(e.what());
    }
  }
  (where / "type").fail("unknown space type '" + type + "'");
}

// Euclidean points are coordinate arrays (a bare number is accepted when
// dim = 1); finite-space points are indices, bare or as a one-element array.
inline Point parse_point(const json& j, const MetricSpace& space, const FieldPath& where) {
  if (space.is_finite()) {
    const json& v = (j.is_array() && j.size() == 1) ? j[0] : j;
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) where.fail("expected a point index");
    Point p = Point::indexed(v.get<std::size_t>());
    if (!space.contains(p)) where.fail("index " + std::to_string(p.index()) + " outside the space");
    return p;
  }
  std::vector<double> coords;
  if (j.is_number()) {
    coords.push_back(j.get<double>());
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) coords.push_back(number(j[i], where[i]));
  } else {
    where.fail("expected a coordinate array");
  }
  if (coords.size() != space.dim())
    where.fail("expected " + std::to_string(space.dim()) + " coordinates, got " + std::to_string(coords.size()));
  return Point::euclidean(std::move(coords));
}

inline StepFuzzySet parse_fuzzy_set(const json& j, const SpacePtr& space, const std::string& name,
                                    const FieldPath& where) {
  const json& levels_json = field(j, where, "levels");
  if (!levels_json.is_array() || levels_json.empty()) (where / "levels").fail("expected a nonempty array");
  std::vector<Level> levels;
  for (std::size_t i = 0; i < levels_json.size(); ++i) {
    const FieldPath at = (where / "levels")[i];
    const double alpha = number(field(levels_json[i], at, "alpha"), at / "alpha");
    const json& pts = field(levels_json[i], at, "points");
    if (!pts.is_array() || pts.empty()) (at / "points").fail("expected a nonempty array of points");
    std::vector<Point> points;
    for (std::size_t k = 0; k < pts.size(); ++k) points.push_back(parse_point(pts[k], *space, (at / "points")[k]));
    levels.push_back({alpha, FiniteSet(space, std::move(points))});
  }
  try {
    return make_fuzzy(std::move(levels));
  } catch (const InputError& e) {
    throw InputError("fuzzy set '" + name + "': " + e.what());
  }
}

inline FuzzyFamily expand_generator(const std::string& name, const json& g, const SpacePtr& space,
                                    const FieldPath& where) {
  const std::string kind = text(field(g, where, "kind"), where / "kind");
  static const json kEmpty = json::object();
  const json& params = g.contains("params") ? g["params"] : kEmpty;
  const FieldPath pw = where / "params";
  if (!params.is_object()) pw.fail("expected an object");
  auto count = [&]() { return count_value(field(g, where, "count"), where / "count"); };
  std::uint64_t seed = 0;
  if (g.contains("seed")) {
    if (!g["seed"].is_number_integer() || g["seed"].get<std::int64_t>() < 0) (where / "seed").fail("expected a nonnegative integer");
    seed = g["seed"].get<std::uint64_t>();
  }

  if (kind == "translates") return translates_family(name, space, count(), number_or(params, "step", 1.0, pw));
  if (kind == "collapse") {
    std::optional<std::pair<Point, Point>> pts;
    if (params.contains("base") || params.contains("outlier")) {
      auto defaults = default_collapse_points(*space);
      Point base = params.contains("base") ? parse_point(params["base"], *space, pw / "base") : defaults.first;
      Point out = params.contains("outlier") ? parse_point(params["outlier"], *space, pw / "outlier") : defaults.second;
      pts.emplace(std::move(base), std::move(out));
    }
    return collapse_family(name, space, count(), pts);
  }
  if (kind == "crisp_intervals") {
    const double lo = number_or(params, "lo", 0.3, pw);
    const double step = number_or(params, "step", 0.01, pw);
    double hi = number_or(params, "hi", 1.0, pw);
    if (g.contains("count")) hi = lo + static_cast<double>(count()) * step;
    return crisp_intervals_family(name, space, lo, hi, step, number_or(params, "origin", 0.0, pw));
  }
  if (kind == "random") {
    RandomFuzzyOptions opt;
    opt.max_levels = static_cast<std::size_t>(number_or(params, "max_levels", 3, pw));
    opt.max_core_points = static_cast<std::size_t>(number_or(params, "max_core_points", 3, pw));
    opt.max_added_points = static_cast<std::size_t>(number_or(params, "max_added_points", 2, pw));
    opt.lo = number_or(params, "lo", 0.0, pw);
    opt.hi = number_or(params, "hi", 1.0, pw);
    return random_family(name, space, count(), seed, opt);
  }
  (where / "kind").fail("unknown generator kind '" + kind + "'");
}

}  // namespace detail

inline Document parse_document(const nlohmann::json& root) {
  using detail::FieldPath;
  const FieldPath top("document");
  Document doc;
  doc.space = detail::parse_space(detail::field(root, top, "space"), top / "space");

  if (root.contains("fuzzy_sets")) {
    const auto& sets = root["fuzzy_sets"];
    if (!sets.is_array()) (top / "fuzzy_sets").fail("expected an array");
    for (std::size_t i = 0; i < sets.size(); ++i) {
      const FieldPath at = (top / "fuzzy_sets")[i];
      const std::string name = detail::text(detail::field(sets[i], at, "name"), at / "name");
      doc.add_fuzzy_set(name, detail::parse_fuzzy_set(sets[i], doc.space, name, at));
      doc.set_names.push_back(name);
    }
  }

  if (root.contains("families")) {
    const auto& fams = root["families"];
    if (!fams.is_array()) (top / "families").fail("expected an array");
    for (std::size_t i = 0; i < fams.size(); ++i) {
      const FieldPath at = (top / "families")[i];
      const std::string name = detail::text(detail::field(fams[i], at, "name"), at / "name");
      for (const auto& f : doc.families) require(f.name() != name, "duplicate family name '" + name + "'");
      if (fams[i].contains("generator")) {
        FuzzyFamily fam = detail::expand_generator(name, fams[i]["generator"], doc.space, at / "generator");
        for (std::size_t k = 0; k < fam.size(); ++k)
          doc.add_fuzzy_set(std::string(fam.member_names()[k]), fam.members()[k]);
        doc.families.push_back(std::move(fam));
      } else {
        const auto& refs = detail::field(fams[i], at, "members");
        if (!refs.is_array() || refs.empty()) (at / "members").fail("expected a nonempty array of names");
        std::vector<std::string> names;
        std::vector<StepFuzzySet> members;
        for (std::size_t k = 0; k < refs.size(); ++k) {
          names.push_back(detail::text(refs[k], (at / "members")[k]));
          members.push_back(doc.fuzzy_set(names.back()));
        }
        doc.families.emplace_back(name, std::move(names), std::move(members));
      }
    }
  }

  if (root.contains("sequences")) {
    const auto& seqs = root["sequences"];
    if (!seqs.is_array()) (top / "sequences").fail("expected an array");
    for (std::size_t i = 0; i < seqs.size(); ++i) {
      const FieldPath at = (top / "sequences")[i];
      Sequence s;
      s.name = detail::text(detail::field(seqs[i], at, "name"), at / "name");
      for (const auto& other : doc.sequences) require(other.name != s.name, "duplicate sequence name '" + s.name + "'");
      if (seqs[i].contains("family")) {
        const FuzzyFamily& f = doc.family(detail::text(seqs[i]["family"], at / "family"));
        s.member_names.assign(f.member_names().begin(), f.member_names().end());
        s.members.assign(f.members().begin(), f.members().end());
      } else {
        const auto& refs = detail::field(seqs[i], at, "members");
        if (!refs.is_array() || refs.empty()) (at / "members").fail("expected a nonempty array of names");
        for (std::size_t k = 0; k < refs.size(); ++k) {
          s.member_names.push_back(detail::text(refs[k], (at / "members")[k]));
          s.members.push_back(doc.fuzzy_set(s.member_names.back()));
        }
      }
      doc.sequences.push_back(std::move(s));
    }
  }
  return doc;
}

inline Document parse_document_text(const std::string& text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("parse error: ") + e.what());
  }
  return parse_document(root);
}

inline Document load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open document '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_document_text(buf.str());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

// Serialises a fuzzy set in the document's level format.
inline nlohmann::json to_json(const StepFuzzySet& u, const std::string& name) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& level : u.levels()) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : level.cut) {
      if (p.is_indexed()) pts.push_back(p.index());
      else pts.push_back(std::vector<double>(p.coords().begin(), p.coords().end()));
    }
    levels.push_back({{"alpha", level.alpha}, {"points", std::move(pts)}});
  }
  return {{"name", name}, {"levels", std::move(levels)}};
}

}  // namespace hyperfuzz
