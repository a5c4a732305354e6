// Command-line front end: spec ingestion, fusion queries, box dimensions and
// verification of the numerical realization.

#include <CLI11.hpp>

#include <cmath>
#include <iomanip>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>

#include "freeprod/documents.hpp"
#include "freeprod/free_fusion.hpp"
#include "freeprod/realization.hpp"
#include "freeprod/tlj.hpp"
#include "freeprod/verify.hpp"

using namespace freeprod;

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

struct Source {
  std::string text;
  CategorySpec spec;
  std::optional<PointedSpec> pointed;
  std::shared_ptr<const ConcreteCategory> concrete;
};

struct Config {
  std::vector<std::string> specs;
  std::vector<std::string> amalgamate;
  std::optional<std::size_t> max_len;
  std::optional<std::size_t> irr_depth;
  std::string format = "human";
  std::optional<double> tolerance;
  std::uint64_t seed = VerifyOptions{}.seed;
  std::size_t depth = 3;
  bool machine() const { return format == "machine"; }
};

double parse_delta(const std::string& s, const std::string& source) {
  try {
    std::size_t used = 0;
    const double d = std::stod(s, &used);
    if (used == s.size()) return d;
  } catch (const std::logic_error&) {
  }
  throw ParseError("bad parameter in spec source '" + source + "'");
}

Source load_source(const std::string& text) {
  static const std::regex call(R"(^\s*([a-z\-]+)\((.*)\)\s*$)");
  std::smatch m;
  Source s{text, {}, std::nullopt, nullptr};
  if (std::regex_match(text, m, call)) {
    const std::string fn = m[1];
    const std::string arg = m[2];
    if (fn == "tlj") {
      s.spec = tlj_spec(TljParams{parse_delta(arg, text), 0});
      return s;
    }
    if (fn == "pointed-tlj") {
      s.pointed = pointed_tlj(TljParams{parse_delta(arg, text), 0});
      s.spec = s.pointed->ambient;
      return s;
    }
    if (fn == "rep") {
      const auto comma = arg.find(',');
      if (comma == std::string::npos) {
        s.concrete = builtin_category(arg);
      } else {
        const std::string gpath = arg.substr(0, comma);
        const std::string rpath = arg.substr(comma + 1);
        const FiniteGroup g = group_from_json(parse_json(read_file(gpath), gpath));
        auto reps = reps_from_json(parse_json(read_file(rpath), rpath), g.order);
        s.concrete = ConcreteCategory::build(g, std::move(reps));
      }
      s.spec = s.concrete->spec();
      return s;
    }
    throw ParseError("unknown spec source '" + text + "'");
  }
  const Json doc = parse_json(read_file(text), text);
  if (has_point(doc)) {
    s.pointed = pointed_from_json(doc);
    s.spec = s.pointed->ambient;
  } else {
    s.spec = make_table_spec(table_from_json(doc));
  }
  return s;
}

std::vector<Source> load_sources(const Config& c) {
  if (c.specs.empty()) throw ArgumentError("no --spec given");
  std::vector<Source> out;
  for (const auto& t : c.specs) out.push_back(load_source(t));
  return out;
}

/// "S:cell@i=cell@j[=...]" with 1-based factor indices.
SharedCell parse_amalgamation(const std::string& text, std::size_t factors) {
  const auto colon = text.find(':');
  if (colon == std::string::npos || colon == 0) throw ParseError("--amalgamate expects S:cell@i=cell@j, got '" + text + "'");
  SharedCell s{text.substr(0, colon), {}};
  std::stringstream rest(text.substr(colon + 1));
  std::string part;
  while (std::getline(rest, part, '=')) {
    const auto at = part.rfind('@');
    if (at == std::string::npos || at == 0) throw ParseError("--amalgamate: bad injection '" + part + "'");
    std::size_t i = 0;
    try {
      std::size_t used = 0;
      i = std::stoul(part.substr(at + 1), &used);
      if (used != part.size() - at - 1) throw std::invalid_argument("trailing");
    } catch (const std::logic_error&) {
      throw ParseError("--amalgamate: bad factor index in '" + part + "'");
    }
    if (i == 0 || i > factors) throw ArgumentError("--amalgamate: no factor " + std::to_string(i));
    s.injections[i - 1] = part.substr(0, at);
  }
  if (s.injections.size() < 2) throw ParseError("--amalgamate needs at least two injections in '" + text + "'");
  return s;
}

Amalgam build_amalgam(const std::vector<Source>& sources, const Config& c) {
  std::vector<CategorySpec> specs;
  for (const auto& s : sources) specs.push_back(s.spec);
  std::vector<SharedCell> shared;
  if (!c.amalgamate.empty()) {
    for (const auto& a : c.amalgamate) shared.push_back(parse_amalgamation(a, specs.size()));
  } else {
    // Default: glue every single-cell factor along its 0-cell.
    SharedCell s{"*", {}};
    for (std::size_t i = 0; i < specs.size(); ++i) {
      const auto cells = specs[i].zero_cells();
      if (cells.size() == 1) s.injections[i] = cells.front();
    }
    if (s.injections.size() >= 2) shared.push_back(s);
  }
  return Amalgam(std::move(specs), std::move(shared));
}

Bound bound_of(const Config& c) { return Bound{c.max_len.value_or(kUnbounded), c.irr_depth.value_or(kUnbounded)}; }

std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

// ---------------------------------------------------------------------------

int cmd_validate(const Config& c) {
  Json docs = Json::array();
  bool ok = true;
  for (const auto& text : c.specs) {
    Json entry{{"spec", text}};
    try {
      const Source s = load_source(text);
      const auto rep = validate(s.spec, c.irr_depth.value_or(6));
      entry["name"] = s.spec.name();
      entry["irreducibles_checked"] = rep.irreducibles_checked;
      Json vs = Json::array();
      for (const auto& v : rep.violations) vs.push_back(Json{{"check", v.check}, {"witness", v.witness}});
      entry["violations"] = vs;
      entry["ok"] = rep.ok();
      ok = ok && rep.ok();
    } catch (const StructuralError& e) {
      entry["violations"] = Json::array({Json{{"check", "structure"}, {"witness", e.what()}}});
      entry["ok"] = false;
      ok = false;
    }
    docs.push_back(entry);
  }
  if (c.machine()) {
    emit(Json{{"ok", ok}, {"specs", docs}});
  } else {
    for (const auto& d : docs) {
      std::cout << d["spec"].get<std::string>() << ": " << (d["ok"].get<bool>() ? "ok" : "VIOLATED");
      if (d.contains("irreducibles_checked")) std::cout << " (" << d["irreducibles_checked"].get<std::size_t>() << " irreducibles)";
      std::cout << "\n";
      for (const auto& v : d["violations"]) {
        std::cout << "  " << v["check"].get<std::string>() << ": " << v["witness"].get<std::string>() << "\n";
      }
    }
  }
  return ok ? kOk : kViolation;
}

int cmd_decompose(const Config& c, const std::string& text) {
  const auto sources = load_sources(c);
  const Amalgam am = build_amalgam(sources, c);
  const Word v = parse_word(am, text);
  const auto d = decompose_word(am, v, bound_of(c));
  const Json doc = decomposition_to_json(am, v, d);
  if (c.machine()) {
    emit(doc);
  } else {
    for (const auto& t : doc["terms"]) {
      std::cout << t["word"].get<std::string>() << " : " << t["mult"].get<std::uint64_t>() << "  (qdim "
                << num(t["qdim"].get<double>()) << ")\n";
    }
    std::cout << "qdim " << num(doc["qdim"]["sum"].get<double>())
              << (doc["qdim"]["conserved"].get<bool>() ? " = " : " != ") << num(doc["qdim"]["word"].get<double>())
              << "\n";
  }
  return doc["qdim"]["conserved"].get<bool>() ? kOk : kViolation;
}

int cmd_hom_dim(const Config& c, const std::string& a, const std::string& b) {
  const auto sources = load_sources(c);
  const Amalgam am = build_amalgam(sources, c);
  const auto n = hom_dim_words(am, parse_word(am, a), parse_word(am, b));
  if (c.machine()) {
    emit(Json{{"left", a}, {"right", b}, {"hom_dim", n}});
  } else {
    std::cout << n << "\n";
  }
  return kOk;
}

int cmd_irreducibles(const Config& c) {
  const auto sources = load_sources(c);
  const Amalgam am = build_amalgam(sources, c);
  const std::size_t len = c.max_len.value_or(3);
  const std::size_t depth = c.irr_depth.value_or(3);
  Json list = Json::array();
  for (CellId a = 0; a < am.cell_count(); ++a) {
    for (CellId b = 0; b < am.cell_count(); ++b) {
      for (const auto& w : enumerate_reduced(am, a, b, len, depth)) {
        list.push_back(Json{{"word", to_string(am, w)},
                            {"source", am.cell_name(a)},
                            {"target", am.cell_name(b)},
                            {"qdim", word_qdim(am, w)}});
      }
    }
  }
  if (c.machine()) {
    emit(Json{{"max_len", len}, {"irr_depth", depth}, {"irreducibles", list}});
  } else {
    for (const auto& e : list) {
      std::cout << e["word"].get<std::string>() << "  " << e["source"].get<std::string>() << " -> "
                << e["target"].get<std::string>() << "  qdim " << num(e["qdim"].get<double>()) << "\n";
    }
  }
  return kOk;
}

PointedSpec pointed_of(const std::vector<Source>& sources, const Config& c) {
  for (const auto& s : sources) {
    if (!s.pointed) throw ArgumentError("'" + s.text + "' is not a pointed spec");
  }
  if (sources.size() == 1) return *sources.front().pointed;
  if (sources.size() == 2) return free_compose(*sources[0].pointed, *sources[1].pointed, bound_of(c));
  throw ArgumentError("box dimensions need one pointed spec, or two to compose");
}

void print_box_dims(const std::vector<std::uint64_t>& dims, const Config& c, Json doc) {
  if (c.machine()) {
    doc["box_dims"] = dims;
    emit(doc);
    return;
  }
  for (std::size_t n = 0; n < dims.size(); ++n) std::cout << n << " : " << dims[n] << "\n";
}

int cmd_box_dims(const Config& c, std::size_t n_max) {
  const auto sources = load_sources(c);
  const PointedSpec p = pointed_of(sources, c);
  print_box_dims(box_dims(p, n_max), c, Json{{"spec", p.ambient.name()}, {"n_max", n_max}});
  return kOk;
}

int cmd_free_compose(const Config& c, std::size_t n_max) {
  const auto sources = load_sources(c);
  if (sources.size() != 2) throw ArgumentError("free-compose needs exactly two pointed specs");
  const PointedSpec p = pointed_of(sources, c);
  const auto dims = box_dims(p, n_max);
  if (!c.machine()) {
    std::cout << "0-cells " << p.a << ", " << p.b << "; point " << to_string(p.point) << "\n";
  }
  print_box_dims(dims, c, Json{{"a", p.a}, {"b", p.b}, {"point", to_string(p.point)}, {"n_max", n_max}});
  return kOk;
}

int cmd_free_product(const Config& c) {
  const auto sources = load_sources(c);
  const Amalgam am = build_amalgam(sources, c);
  const std::size_t len = c.max_len.value_or(2);
  const Bound bound{len, c.irr_depth.value_or(len)};
  const CategorySpec fp = free_product_spec(am, bound);
  FusionTable t;
  t.name = fp.name() + " (words of length <= " + std::to_string(len) + ")";
  t.exact = fp.exact();
  t.tolerance = fp.tolerance();
  t.zero_cells = fp.zero_cells();
  for (const auto& cell : t.zero_cells) t.units[cell] = fp.unit(cell);
  const auto irrs = fp.irreducibles(std::max(bound.max_len, bound.irr_depth));
  for (const auto& irr : irrs) t.irreducibles.push_back(fp.info(irr));
  for (const auto& a : irrs) {
    for (const auto& b : irrs) {
      if (fp.target_cell(a) != fp.source_cell(b)) continue;
      try {
        const auto& f = fp.fuse(a, b);
        t.fusion.push_back({a, b, {f.terms.begin(), f.terms.end()}});
      } catch (const BoundError&) {
      }
    }
  }
  const Json doc = table_to_json(t);
  if (c.machine()) {
    emit(doc);
  } else {
    std::cout << t.name << "\n";
    for (const auto& i : t.irreducibles) {
      std::cout << "  " << i.label << "  " << i.source << " -> " << i.target << "  dual " << i.dual << "  qdim "
                << num(i.qdim) << "\n";
    }
    for (const auto& f : t.fusion) {
      Bundle b{"", "", f.result};
      std::cout << "  " << f.left << " x " << f.right << " = " << to_string(b) << "\n";
    }
  }
  return kOk;
}

int cmd_verify(const Config& c) {
  const auto sources = load_sources(c);
  std::vector<std::shared_ptr<const ConcreteCategory>> cats;
  for (const auto& s : sources) {
    if (!s.concrete) {
      throw UnsupportedFactorError("'" + s.text +
                                   "' has no concrete morphisms; verify needs rep(...) factors "
                                   "(use decompose, hom-dim or box-dims for fusion-only specs)");
    }
    cats.push_back(s.concrete);
  }
  if (!c.amalgamate.empty()) build_amalgam(sources, c);
  const FreeRealization r(cats);
  VerifyOptions o;
  o.depth = c.depth;
  o.seed = c.seed;
  o.tolerance = c.tolerance;
  const auto report = verify_suite(r, o);
  if (c.machine()) {
    emit(report_to_json(report));
  } else {
    std::cout << report.amalgam << ", depth " << report.depth << ", seed " << report.seed << "\n";
    for (const auto& ch : report.checks) {
      std::cout << (ch.pass ? "pass " : "FAIL ") << std::left << std::setw(44) << ch.identity << " max dev "
                << std::setw(12) << num(ch.max_deviation) << " tol " << num(ch.tolerance) << "  " << ch.instance
                << "\n";
    }
    std::cout << (report.ok() ? "all identities hold" : "some identities fail") << "\n";
  }
  return report.ok() ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Free products of rigid C*-2-categories: fusion of reduced words and a numerical realization"};
  app.require_subcommand(1);
  app.fallthrough();
  Config c;
  app.add_option("--spec", c.specs,
                 "Factor spec: a JSON file, tlj(delta), pointed-tlj(delta), rep(S3), rep(Zn) or rep(group.json,reps.json)");
  app.add_option("--amalgamate", c.amalgamate, "Glue 0-cells: S:cell@i=cell@j (1-based factors; repeatable)");
  app.add_option("--max-len", c.max_len, "Longest word considered")->check(CLI::PositiveNumber);
  app.add_option("--irr-depth", c.irr_depth, "Largest factor rank considered")->check(CLI::NonNegativeNumber);
  app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"human", "machine"}));
  app.add_option("--tolerance", c.tolerance, "Override every verification tolerance");
  app.add_option("--seed", c.seed, "Seed for sampled 2-cells");

  std::string word, word2;
  std::size_t n_max = 5;
  auto* validate_cmd = app.add_subcommand("validate", "Check the fusion axioms of each spec");
  auto* decompose_cmd = app.add_subcommand("decompose", "Decompose a word into reduced words");
  decompose_cmd->add_option("word", word, "Word literal, e.g. [std@1][g@2]")->required();
  auto* hom_cmd = app.add_subcommand("hom-dim", "Dimension of the 2-cell space between two words");
  hom_cmd->add_option("left", word)->required();
  hom_cmd->add_option("right", word2)->required();
  auto* irr_cmd = app.add_subcommand("irreducibles", "List reduced words");
  auto* box_cmd = app.add_subcommand("box-dims", "Box space dimensions of a pointed spec (two are composed)");
  box_cmd->add_option("n_max", n_max, "Largest n")->required();
  auto* fp_cmd = app.add_subcommand("free-product", "Emit the free product truncated to --max-len as a spec");
  auto* fc_cmd = app.add_subcommand("free-compose", "Free composition of two pointed specs and its box dimensions");
  fc_cmd->add_option("n_max", n_max, "Largest n")->capture_default_str();
  auto* verify_cmd = app.add_subcommand("verify", "Verify the realization over rep(...) factors");
  verify_cmd->add_option("--depth", c.depth, "Depth of the verified instances")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate_cmd) {
      if (c.specs.empty()) throw ArgumentError("no --spec given");
      return cmd_validate(c);
    }
    if (*decompose_cmd) return cmd_decompose(c, word);
    if (*hom_cmd) return cmd_hom_dim(c, word, word2);
    if (*irr_cmd) return cmd_irreducibles(c);
    if (*box_cmd) return cmd_box_dims(c, n_max);
    if (*fp_cmd) return cmd_free_product(c);
    if (*fc_cmd) return cmd_free_compose(c, n_max);
    if (*verify_cmd) return cmd_verify(c);
  } catch (const StructuralError& e) {
    std::cerr << "structural error: " << e.what() << "\n";
    return kViolation;
  } catch (const UnsupportedFactorError& e) {
    std::cerr << "unsupported factor: " << e.what() << "\n";
    return kUsage;
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
