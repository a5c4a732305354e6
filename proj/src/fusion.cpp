#include "freeprod/fusion.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <mutex>
#include <set>
#include <sstream>
#include <unordered_map>

namespace freeprod {

int compare_labels(std::string_view a, std::string_view b) {
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    const bool da = std::isdigit(static_cast<unsigned char>(a[i])) != 0;
    const bool db = std::isdigit(static_cast<unsigned char>(b[j])) != 0;
    if (da && db) {
      std::size_t ie = i;
      std::size_t je = j;
      while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
      while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
      // strip leading zeros, then longer run is larger
      std::size_t is = i;
      std::size_t js = j;
      while (is + 1 < ie && a[is] == '0') ++is;
      while (js + 1 < je && b[js] == '0') ++js;
      const std::size_t la = ie - is;
      const std::size_t lb = je - js;
      if (la != lb) return la < lb ? -1 : 1;
      const int c = a.substr(is, la).compare(b.substr(js, lb));
      if (c != 0) return c < 0 ? -1 : 1;
      i = ie;
      j = je;
      continue;
    }
    if (a[i] != b[j]) return static_cast<unsigned char>(a[i]) < static_cast<unsigned char>(b[j]) ? -1 : 1;
    ++i;
    ++j;
  }
  if (i < a.size()) return 1;
  if (j < b.size()) return -1;
  const int c = a.compare(b);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

bool LabelLess::operator()(std::string_view a, std::string_view b) const {
  return compare_labels(a, b) < 0;
}

std::uint64_t Bundle::operator[](const IrrId& irr) const {
  const auto it = terms.find(irr);
  return it == terms.end() ? 0 : it->second;
}

void Bundle::add(const IrrId& irr, std::uint64_t mult) {
  if (mult == 0) return;
  terms[irr] += mult;
}

std::string to_string(const Bundle& bundle) {
  std::ostringstream out;
  out << "{";
  bool first = true;
  for (const auto& [irr, mult] : bundle.terms) {
    if (!first) out << ", ";
    first = false;
    out << irr << ":" << mult;
  }
  out << "}";
  return out.str();
}

// ---------------------------------------------------------------------------

struct CategorySpec::Memo {
  std::mutex mutex;
  std::unordered_map<IrrId, std::unique_ptr<IrrInfo>> info;
  std::map<std::pair<IrrId, IrrId>, std::unique_ptr<Bundle>> fusion;
};

CategorySpec::CategorySpec(std::shared_ptr<const FusionSource> source)
    : source_(std::move(source)), memo_(std::make_shared<Memo>()) {
  if (!source_) throw ArgumentError("CategorySpec: null fusion source");
}

bool CategorySpec::has_cell(const ZeroCell& cell) const {
  const auto cells = zero_cells();
  return std::find(cells.begin(), cells.end(), cell) != cells.end();
}

std::vector<IrrId> CategorySpec::irreducibles(std::size_t depth) const {
  return source_->irreducibles(depth);
}

bool CategorySpec::contains(const IrrId& irr) const {
  {
    std::lock_guard lock(memo_->mutex);
    if (memo_->info.count(irr) != 0) return true;
  }
  return source_->info(irr).has_value();
}

const IrrInfo& CategorySpec::info(const IrrId& irr) const {
  {
    std::lock_guard lock(memo_->mutex);
    const auto it = memo_->info.find(irr);
    if (it != memo_->info.end()) return *it->second;
  }
  auto found = source_->info(irr);
  if (!found) throw LookupError("unknown irreducible '" + irr + "' in " + name());
  std::lock_guard lock(memo_->mutex);
  auto [it, inserted] = memo_->info.emplace(irr, std::make_unique<IrrInfo>(std::move(*found)));
  return *it->second;
}

IrrId CategorySpec::unit(const ZeroCell& cell) const {
  auto u = source_->unit(cell);
  if (!u) throw StructuralError("0-cell '" + cell + "' has no unit in " + name());
  return *u;
}

bool CategorySpec::is_unit(const IrrId& irr) const {
  const auto& i = info(irr);
  if (i.source != i.target) return false;
  const auto u = source_->unit(i.source);
  return u && *u == irr;
}

const Bundle& CategorySpec::fuse(const IrrId& a, const IrrId& b) const {
  auto key = std::make_pair(a, b);
  {
    std::lock_guard lock(memo_->mutex);
    const auto it = memo_->fusion.find(key);
    if (it != memo_->fusion.end()) return *it->second;
  }
  const auto& ia = info(a);
  const auto& ib = info(b);
  if (ia.target != ib.source) {
    throw CompositionError("cannot compose " + a + " (target " + ia.target + ") with " + b + " (source " +
                           ib.source + ")");
  }
  auto result = std::make_unique<Bundle>(source_->fuse(a, b));
  result->source = ia.source;
  result->target = ib.target;
  std::lock_guard lock(memo_->mutex);
  auto [it, inserted] = memo_->fusion.emplace(std::move(key), std::move(result));
  return *it->second;
}

std::uint64_t CategorySpec::multiplicity(const IrrId& a, const IrrId& b, const IrrId& c) const {
  return fuse(a, b)[c];
}

// ---------------------------------------------------------------------------

namespace {

class TableSource final : public FusionSource {
 public:
  explicit TableSource(FusionTable table) : table_(std::move(table)) {
    for (std::size_t k = 0; k < table_.irreducibles.size(); ++k) index_.emplace(table_.irreducibles[k].label, k);
    for (const auto& entry : table_.fusion) {
      Bundle b;
      for (const auto& [irr, mult] : entry.result) b.add(irr, mult);
      fusion_[{entry.left, entry.right}] = std::move(b);
    }
  }

  std::vector<ZeroCell> zero_cells() const override { return table_.zero_cells; }
  bool finite() const override { return true; }
  std::vector<IrrId> irreducibles(std::size_t) const override {
    std::vector<IrrId> out;
    out.reserve(table_.irreducibles.size());
    for (const auto& i : table_.irreducibles) out.push_back(i.label);
    return out;
  }
  std::optional<IrrInfo> info(const IrrId& irr) const override {
    const auto it = index_.find(irr);
    if (it == index_.end()) return std::nullopt;
    return table_.irreducibles[it->second];
  }
  std::optional<IrrId> unit(const ZeroCell& cell) const override {
    const auto it = table_.units.find(cell);
    if (it == table_.units.end()) return std::nullopt;
    return it->second;
  }
  Bundle fuse(const IrrId& a, const IrrId& b) const override {
    const auto it = fusion_.find({a, b});
    return it == fusion_.end() ? Bundle{} : it->second;
  }
  bool exact() const override { return table_.exact; }
  double tolerance() const override { return table_.tolerance; }
  std::string name() const override { return table_.name; }

  const FusionTable& table() const { return table_; }

 private:
  FusionTable table_;
  std::unordered_map<IrrId, std::size_t> index_;
  std::map<std::pair<IrrId, IrrId>, Bundle> fusion_;
};

}  // namespace

CategorySpec make_table_spec(FusionTable table) {
  std::set<ZeroCell> cells;
  for (const auto& c : table.zero_cells) {
    if (!cells.insert(c).second) throw StructuralError("duplicate 0-cell '" + c + "'");
  }
  std::map<IrrId, const IrrInfo*> by_label;
  for (const auto& irr : table.irreducibles) {
    if (!by_label.emplace(irr.label, &irr).second) throw StructuralError("duplicate irreducible '" + irr.label + "'");
    if (cells.count(irr.source) == 0 || cells.count(irr.target) == 0) {
      throw StructuralError("irreducible '" + irr.label + "' has an endpoint that is not a declared 0-cell");
    }
    if (table.exact && !irr.exact_qdim) {
      throw StructuralError("exact spec but irreducible '" + irr.label + "' has no exact qdim");
    }
  }
  for (const auto& irr : table.irreducibles) {
    if (by_label.count(irr.dual) == 0) {
      throw StructuralError("irreducible '" + irr.label + "' has dangling dual '" + irr.dual + "'");
    }
  }
  for (const auto& c : table.zero_cells) {
    const auto it = table.units.find(c);
    if (it == table.units.end()) throw StructuralError("0-cell '" + c + "' has no unit");
    const auto u = by_label.find(it->second);
    if (u == by_label.end()) throw StructuralError("unit of '" + c + "' is dangling label '" + it->second + "'");
    if (u->second->source != c || u->second->target != c) {
      throw StructuralError("unit '" + it->second + "' of '" + c + "' has wrong endpoints");
    }
  }
  for (const auto& [c, u] : table.units) {
    if (cells.count(c) == 0) throw StructuralError("unit declared for unknown 0-cell '" + c + "'");
  }
  std::set<std::pair<IrrId, IrrId>> seen;
  for (const auto& e : table.fusion) {
    const auto l = by_label.find(e.left);
    const auto r = by_label.find(e.right);
    if (l == by_label.end() || r == by_label.end()) {
      throw StructuralError("fusion entry (" + e.left + ", " + e.right + ") references an unknown label");
    }
    if (l->second->target != r->second->source) {
      throw StructuralError("fusion entry (" + e.left + ", " + e.right + ") is not composable");
    }
    if (!seen.emplace(e.left, e.right).second) {
      throw StructuralError("duplicate fusion entry (" + e.left + ", " + e.right + ")");
    }
    for (const auto& [irr, mult] : e.result) {
      if (by_label.count(irr) == 0) {
        throw StructuralError("fusion entry (" + e.left + ", " + e.right + ") has dangling result '" + irr + "'");
      }
    }
  }
  return CategorySpec(std::make_shared<TableSource>(std::move(table)));
}

FusionTable to_table(const CategorySpec& spec) {
  if (const auto* t = dynamic_cast<const TableSource*>(&spec.source())) return t->table();
  if (!spec.finite()) throw ArgumentError("to_table: spec '" + spec.name() + "' is not finite");
  FusionTable table;
  table.name = spec.name();
  table.exact = spec.exact();
  table.tolerance = spec.tolerance();
  table.zero_cells = spec.zero_cells();
  const auto irrs = spec.irreducibles(0);
  for (const auto& irr : irrs) table.irreducibles.push_back(spec.info(irr));
  for (const auto& c : table.zero_cells) table.units[c] = spec.unit(c);
  for (const auto& a : irrs) {
    for (const auto& b : irrs) {
      if (spec.target_cell(a) != spec.source_cell(b)) continue;
      const auto& f = spec.fuse(a, b);
      if (f.empty()) continue;
      table.fusion.push_back({a, b, {f.terms.begin(), f.terms.end()}});
    }
  }
  return table;
}

// ---------------------------------------------------------------------------

namespace {

std::string triple(const std::string& a, const std::string& b, const std::string& c) {
  return "(" + a + ", " + b + ", " + c + ")";
}

bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace

ValidationReport validate(const CategorySpec& spec, std::size_t search_depth) {
  ValidationReport report;
  report.depth = search_depth;
  const double tol = spec.tolerance();
  const bool exact = spec.exact();

  const auto cells = spec.zero_cells();
  {
    std::set<ZeroCell> unique(cells.begin(), cells.end());
    if (unique.size() != cells.size()) throw StructuralError("duplicate 0-cells in " + spec.name());
  }
  for (const auto& c : cells) {
    const auto u = spec.unit(c);
    if (!spec.contains(u)) throw StructuralError("unit of '" + c + "' is dangling label '" + u + "'");
    const auto& ui = spec.info(u);
    if (ui.source != c || ui.target != c) throw StructuralError("unit '" + u + "' has wrong endpoints");
  }

  const auto window = spec.irreducibles(search_depth);
  report.irreducibles_checked = window.size();
  for (const auto& a : window) {
    if (!spec.contains(a)) throw StructuralError("enumerated irreducible '" + a + "' is unknown");
    const auto& ia = spec.info(a);
    if (!spec.has_cell(ia.source) || !spec.has_cell(ia.target)) {
      throw StructuralError("irreducible '" + a + "' has an undeclared endpoint");
    }
    if (!spec.contains(ia.dual)) throw StructuralError("irreducible '" + a + "' has dangling dual '" + ia.dual + "'");
    if (exact && !ia.exact_qdim) throw StructuralError("exact spec without exact qdim for '" + a + "'");
  }

  auto violate = [&](std::string check, std::string witness) {
    report.violations.push_back({std::move(check), std::move(witness)});
  };

  // Duals and dimensions.
  for (const auto& a : window) {
    const auto& ia = spec.info(a);
    const auto& id = spec.info(ia.dual);
    if (id.dual != a) violate("dual-involution", a + " -> " + ia.dual + " -> " + id.dual);
    if (id.source != ia.target || id.target != ia.source) violate("dual-endpoints", a);
    if (!(ia.qdim > 0)) violate("qdim-positive", a);
    if (exact ? (*ia.exact_qdim != *id.exact_qdim) : !close(ia.qdim, id.qdim, tol)) violate("dual-qdim", a);
  }
  for (const auto& c : cells) {
    const auto u = spec.unit(c);
    const auto& iu = spec.info(u);
    if (iu.dual != u) violate("unit-self-dual", u);
    if (exact ? (*iu.exact_qdim != Rational(1)) : !close(iu.qdim, 1.0, tol)) violate("unit-qdim", u);
  }

  // Unit laws, endpoints and dimension consistency.
  for (const auto& a : window) {
    const auto& ia = spec.info(a);
    const Bundle expected = single(spec, a);
    const auto& left = spec.fuse(spec.unit(ia.source), a);
    const auto& right = spec.fuse(a, spec.unit(ia.target));
    if (left.terms != expected.terms) violate("left-unit-law", "(" + spec.unit(ia.source) + ", " + a + ") = " + to_string(left));
    if (right.terms != expected.terms) violate("right-unit-law", "(" + a + ", " + spec.unit(ia.target) + ") = " + to_string(right));
  }
  for (const auto& a : window) {
    for (const auto& b : window) {
      const auto& ia = spec.info(a);
      const auto& ib = spec.info(b);
      if (ia.target != ib.source) continue;
      const auto& ab = spec.fuse(a, b);
      for (const auto& [c, m] : ab.terms) {
        const auto& ic = spec.info(c);
        if (ic.source != ia.source || ic.target != ib.target) {
          violate("fusion-endpoints", triple(a, b, c));
        }
      }
      if (exact) {
        Rational sum(0);
        for (const auto& [c, m] : ab.terms) sum += Rational(static_cast<std::int64_t>(m)) * *spec.info(c).exact_qdim;
        if (sum != *ia.exact_qdim * *ib.exact_qdim) violate("dimension", "(" + a + ", " + b + ")");
      } else {
        double sum = 0;
        for (const auto& [c, m] : ab.terms) sum += static_cast<double>(m) * spec.qdim(c);
        if (!close(sum, ia.qdim * ib.qdim, tol)) violate("dimension", "(" + a + ", " + b + ")");
      }
      // Frobenius reciprocity against every window irreducible with matching type.
      for (const auto& c : window) {
        const auto& ic = spec.info(c);
        if (ic.source != ia.source || ic.target != ib.target) continue;
        const auto n = ab[c];
        const auto n1 = spec.fuse(ia.dual, c)[b];
        const auto n2 = spec.fuse(c, ib.dual)[a];
        if (n != n1 || n != n2) {
          violate("frobenius", triple(a, b, c) + ": " + std::to_string(n) + "," + std::to_string(n1) + "," +
                                   std::to_string(n2));
        }
      }
    }
  }

  // Associativity.
  for (const auto& a : window) {
    for (const auto& b : window) {
      if (spec.target_cell(a) != spec.source_cell(b)) continue;
      const Bundle ab = spec.fuse(a, b);
      for (const auto& d : window) {
        if (spec.target_cell(b) != spec.source_cell(d)) continue;
        const Bundle lhs = tensor(spec, ab, single(spec, d));
        const Bundle rhs = tensor(spec, single(spec, a), spec.fuse(b, d));
        if (lhs.terms != rhs.terms) {
          violate("associativity", triple(a, b, d) + ": " + to_string(lhs) + " vs " + to_string(rhs));
        }
      }
    }
  }
  return report;
}

Bundle single(const CategorySpec& spec, const IrrId& irr) {
  const auto& i = spec.info(irr);
  Bundle b{i.source, i.target, {}};
  b.add(irr, 1);
  return b;
}

Bundle fuse_pair(const CategorySpec& spec, const IrrId& a, const IrrId& b) { return spec.fuse(a, b); }

Bundle tensor(const CategorySpec& spec, const Bundle& x, const Bundle& y) {
  if (x.target != y.source) {
    throw CompositionError("cannot tensor bundles of types (" + x.source + "," + x.target + ") and (" + y.source +
                           "," + y.target + ")");
  }
  Bundle out{x.source, y.target, {}};
  for (const auto& [a, ma] : x.terms) {
    for (const auto& [b, mb] : y.terms) {
      for (const auto& [c, mc] : spec.fuse(a, b).terms) out.add(c, ma * mb * mc);
    }
  }
  return out;
}

Bundle dual(const CategorySpec& spec, const Bundle& x) {
  Bundle out{x.target, x.source, {}};
  for (const auto& [a, m] : x.terms) out.add(spec.dual(a), m);
  return out;
}

std::uint64_t hom_dim(const Bundle& x, const Bundle& y) {
  if (x.source != y.source || x.target != y.target) {
    throw CompositionError("hom_dim: bundles of types (" + x.source + "," + x.target + ") and (" + y.source + "," +
                           y.target + ")");
  }
  std::uint64_t total = 0;
  for (const auto& [a, m] : x.terms) total += m * y[a];
  return total;
}

Bundle decompose_tensor(const CategorySpec& spec, const std::vector<IrrId>& seq, const std::optional<ZeroCell>& cell) {
  if (seq.empty()) {
    if (!cell) throw ArgumentError("decompose_tensor: empty sequence needs a 0-cell");
    return single(spec, spec.unit(*cell));
  }
  Bundle acc = single(spec, seq.front());
  for (std::size_t k = 1; k < seq.size(); ++k) acc = tensor(spec, acc, single(spec, seq[k]));
  return acc;
}

Bundle decompose_tensor_right(const CategorySpec& spec, const std::vector<IrrId>& seq) {
  if (seq.empty()) throw ArgumentError("decompose_tensor_right: empty sequence");
  Bundle acc = single(spec, seq.back());
  for (std::size_t k = seq.size() - 1; k-- > 0;) acc = tensor(spec, single(spec, seq[k]), acc);
  return acc;
}

double bundle_qdim(const CategorySpec& spec, const Bundle& x) {
  double d = 0;
  for (const auto& [a, m] : x.terms) d += static_cast<double>(m) * spec.qdim(a);
  return d;
}

std::optional<Rational> bundle_exact_qdim(const CategorySpec& spec, const Bundle& x) {
  Rational d(0);
  for (const auto& [a, m] : x.terms) {
    const auto q = spec.exact_qdim(a);
    if (!q) return std::nullopt;
    d += Rational(static_cast<std::int64_t>(m)) * *q;
  }
  return d;
}

}  // namespace freeprod
