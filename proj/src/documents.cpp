#include "freeprod/documents.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace freeprod {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

const Json& field(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) bad(where, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) bad(where, "missing field '" + key + "'");
  return *it;
}

std::string str(const Json& j, const std::string& where) {
  if (!j.is_string()) bad(where, "expected a string");
  return j.get<std::string>();
}

std::uint64_t count(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    bad(where, "expected a nonnegative integer");
  }
  return j.get<std::uint64_t>();
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) bad(where, "expected a number");
  return j.get<double>();
}

Rational parse_rational(const std::string& s, const std::string& where) {
  try {
    const auto slash = s.find('/');
    std::size_t used = 0;
    const std::int64_t p = std::stoll(s.substr(0, slash), &used);
    if (used != (slash == std::string::npos ? s.size() : slash)) bad(where, "not a rational: '" + s + "'");
    std::int64_t q = 1;
    if (slash != std::string::npos) {
      q = std::stoll(s.substr(slash + 1), &used);
      if (used != s.size() - slash - 1 || q == 0) bad(where, "not a rational: '" + s + "'");
    }
    return Rational(p, q);
  } catch (const std::logic_error&) {
    bad(where, "not a rational: '" + s + "'");
  }
}

Json qdim_json(const IrrInfo& info, bool exact) {
  if (exact && info.exact_qdim) {
    const auto& q = *info.exact_qdim;
    if (q.denominator() == 1) return q.numerator();
    return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
  }
  return info.qdim;
}

Complex entry(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  bad(where, "expected a number or [re, im]");
}

}  // namespace

Json parse_json(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// ---------------------------------------------------------------------------
// Specs

FusionTable table_from_json(const Json& doc) {
  if (!doc.is_object()) bad("spec", "expected an object");
  FusionTable t;
  if (doc.contains("name")) t.name = str(doc["name"], "name");
  if (doc.contains("exact")) {
    if (!doc["exact"].is_boolean()) bad("exact", "expected true or false");
    t.exact = doc["exact"].get<bool>();
  }
  if (doc.contains("tolerance")) t.tolerance = number(doc["tolerance"], "tolerance");

  const Json& cells = field(doc, "zero_cells", "spec");
  if (!cells.is_array()) bad("zero_cells", "expected a list");
  for (std::size_t k = 0; k < cells.size(); ++k) {
    t.zero_cells.push_back(str(cells[k], "zero_cells[" + std::to_string(k) + "]"));
  }

  const Json& irrs = field(doc, "irreducibles", "spec");
  if (!irrs.is_array()) bad("irreducibles", "expected a list");
  for (std::size_t k = 0; k < irrs.size(); ++k) {
    const std::string where = "irreducibles[" + std::to_string(k) + "]";
    const Json& e = irrs[k];
    IrrInfo info;
    info.label = str(field(e, "label", where), where + ".label");
    info.source = str(field(e, "source", where), where + ".source");
    info.target = str(field(e, "target", where), where + ".target");
    info.dual = str(field(e, "dual", where), where + ".dual");
    const Json& q = field(e, "qdim", where);
    if (q.is_string()) {
      const Rational r = parse_rational(q.get<std::string>(), where + ".qdim");
      info.exact_qdim = r;
      info.qdim = boost::rational_cast<double>(r);
    } else {
      info.qdim = number(q, where + ".qdim");
      if (t.exact) {
        if (!q.is_number_integer()) bad(where + ".qdim", "exact specs need integer or \"p/q\" dimensions");
        info.exact_qdim = Rational(q.get<std::int64_t>());
      }
    }
    t.irreducibles.push_back(std::move(info));
  }

  const Json& units = field(doc, "units", "spec");
  if (!units.is_object()) bad("units", "expected a mapping from 0-cells to labels");
  for (const auto& [cell, label] : units.items()) t.units[cell] = str(label, "units." + cell);

  if (doc.contains("fusion")) {
    const Json& fusion = doc["fusion"];
    if (!fusion.is_array()) bad("fusion", "expected a list");
    for (std::size_t k = 0; k < fusion.size(); ++k) {
      const std::string where = "fusion[" + std::to_string(k) + "]";
      FusionEntry f;
      f.left = str(field(fusion[k], "left", where), where + ".left");
      f.right = str(field(fusion[k], "right", where), where + ".right");
      const Json& result = field(fusion[k], "result", where);
      if (!result.is_object()) bad(where + ".result", "expected a mapping from labels to multiplicities");
      for (const auto& [label, m] : result.items()) {
        const auto n = count(m, where + ".result." + label);
        if (n > 0) f.result[label] = n;
      }
      t.fusion.push_back(std::move(f));
    }
  }
  return t;
}

Json table_to_json(const FusionTable& t) {
  Json doc;
  doc["name"] = t.name;
  doc["exact"] = t.exact;
  doc["tolerance"] = t.tolerance;
  doc["zero_cells"] = t.zero_cells;
  Json irrs = Json::array();
  for (const auto& i : t.irreducibles) {
    irrs.push_back(Json{{"label", i.label},
                        {"source", i.source},
                        {"target", i.target},
                        {"dual", i.dual},
                        {"qdim", qdim_json(i, t.exact)}});
  }
  doc["irreducibles"] = irrs;
  Json units = Json::object();
  for (const auto& [c, u] : t.units) units[c] = u;
  doc["units"] = units;
  Json fusion = Json::array();
  for (const auto& f : t.fusion) {
    Json result = Json::object();
    for (const auto& [label, m] : f.result) result[label] = m;
    fusion.push_back(Json{{"left", f.left}, {"right", f.right}, {"result", result}});
  }
  doc["fusion"] = fusion;
  return doc;
}

CategorySpec spec_from_text(const std::string& text) { return make_table_spec(table_from_json(parse_json(text, "spec"))); }

Json spec_to_json(const CategorySpec& spec) { return table_to_json(to_table(spec)); }

bool has_point(const Json& doc) { return doc.is_object() && doc.contains("point"); }

PointedSpec pointed_from_json(const Json& doc) {
  PointedSpec p;
  p.ambient = make_table_spec(table_from_json(doc));
  const Json& pt = field(doc, "point", "spec");
  p.a = str(field(pt, "a", "point"), "point.a");
  p.b = str(field(pt, "b", "point"), "point.b");
  p.point.source = p.a;
  p.point.target = p.b;
  const Json& terms = field(pt, "terms", "point");
  if (!terms.is_object()) bad("point.terms", "expected a mapping from labels to multiplicities");
  for (const auto& [label, m] : terms.items()) p.point.add(label, count(m, "point.terms." + label));
  check_pointed(p);
  return p;
}

// ---------------------------------------------------------------------------
// Groups and representations

FiniteGroup group_from_json(const Json& doc) {
  const std::string name = doc.contains("name") ? str(doc["name"], "name") : "G";
  const auto order = count(field(doc, "order", "group"), "order");
  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    const Json& ls = doc["labels"];
    if (!ls.is_array() || ls.size() != order) bad("labels", "expected " + std::to_string(order) + " labels");
    for (std::size_t k = 0; k < ls.size(); ++k) labels.push_back(str(ls[k], "labels[" + std::to_string(k) + "]"));
  } else {
    for (std::size_t k = 0; k < order; ++k) labels.push_back("g" + std::to_string(k));
  }
  const Json& table = field(doc, "table", "group");
  if (!table.is_array() || table.size() != order) bad("table", "expected " + std::to_string(order) + " rows");
  std::vector<std::size_t> flat;
  for (std::size_t g = 0; g < order; ++g) {
    const std::string where = "table[" + std::to_string(g) + "]";
    if (!table[g].is_array() || table[g].size() != order) bad(where, "expected " + std::to_string(order) + " entries");
    for (std::size_t h = 0; h < order; ++h) {
      flat.push_back(count(table[g][h], where + "[" + std::to_string(h) + "]"));
    }
  }
  return make_group(name, labels, flat);
}

std::vector<UnitaryRep> reps_from_json(const Json& doc, std::size_t order) {
  const Json& irreps = field(doc, "irreps", "reps");
  if (!irreps.is_array()) bad("irreps", "expected a list");
  std::vector<UnitaryRep> out;
  for (std::size_t k = 0; k < irreps.size(); ++k) {
    const std::string where = "irreps[" + std::to_string(k) + "]";
    UnitaryRep r;
    r.label = str(field(irreps[k], "label", where), where + ".label");
    const Json& ms = field(irreps[k], "matrices", where);
    if (!ms.is_array() || ms.size() != order) bad(where + ".matrices", "expected one matrix per group element");
    for (std::size_t g = 0; g < order; ++g) {
      const std::string mw = where + ".matrices[" + std::to_string(g) + "]";
      const Json& rows = ms[g];
      if (!rows.is_array() || rows.empty()) bad(mw, "expected a nonempty list of rows");
      const auto d = rows.size();
      if (g == 0) r.dim = d;
      if (d != r.dim) bad(mw, "dimension differs from the first matrix");
      Matrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
      for (std::size_t p = 0; p < d; ++p) {
        if (!rows[p].is_array() || rows[p].size() != d) bad(mw, "expected a square matrix");
        for (std::size_t q = 0; q < d; ++q) {
          m(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) =
              entry(rows[p][q], mw + "[" + std::to_string(p) + "][" + std::to_string(q) + "]");
        }
      }
      r.matrices.push_back(std::move(m));
    }
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Results

Json decomposition_to_json(const Amalgam& am, const Word& v, const FreeDecomposition& d) {
  Json terms = Json::array();
  for (const auto& [w, m] : d.terms) {
    terms.push_back(Json{{"word", to_string(am, w)}, {"mult", m}, {"qdim", word_qdim(am, w)}});
  }
  const double total = decomposition_qdim(am, d);
  const double expected = word_qdim(am, v);
  return Json{{"word", to_string(am, v)},
              {"terms", terms},
              {"qdim", Json{{"sum", total}, {"word", expected}, {"conserved", std::abs(total - expected) <= 1e-9 * std::max(1.0, expected)}}}};
}

Json report_to_json(const VerificationReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    Json dev = std::isfinite(c.max_deviation) ? Json(c.max_deviation) : Json(nullptr);
    checks.push_back(Json{{"identity", c.identity},
                          {"tag", c.tag},
                          {"instance", c.instance},
                          {"max_deviation", dev},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass}});
  }
  return Json{{"amalgam", report.amalgam},
              {"depth", report.depth},
              {"seed", report.seed},
              {"pass", report.ok()},
              {"checks", checks}};
}

VerificationReport report_from_json(const Json& doc) {
  VerificationReport r;
  r.amalgam = str(field(doc, "amalgam", "report"), "amalgam");
  r.depth = count(field(doc, "depth", "report"), "depth");
  r.seed = count(field(doc, "seed", "report"), "seed");
  const Json& checks = field(doc, "checks", "report");
  if (!checks.is_array()) bad("checks", "expected a list");
  for (std::size_t k = 0; k < checks.size(); ++k) {
    const std::string where = "checks[" + std::to_string(k) + "]";
    const Json& c = checks[k];
    CheckResult out;
    out.identity = str(field(c, "identity", where), where + ".identity");
    out.tag = str(field(c, "tag", where), where + ".tag");
    out.instance = str(field(c, "instance", where), where + ".instance");
    const Json& dev = field(c, "max_deviation", where);
    out.max_deviation = dev.is_null() ? std::numeric_limits<double>::infinity() : number(dev, where + ".max_deviation");
    out.tolerance = number(field(c, "tolerance", where), where + ".tolerance");
    const Json& pass = field(c, "pass", where);
    if (!pass.is_boolean()) bad(where + ".pass", "expected true or false");
    out.pass = pass.get<bool>();
    r.checks.push_back(std::move(out));
  }
  return r;
}

}  // namespace freeprod
