#include "freeprod/free_fusion.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace freeprod {

bool Bound::admits(const Amalgam& am, const Word& w) const {
  if (w.size() > max_len) return false;
  for (const auto& l : w.letters) {
    if (am.factor(l.factor).rank(l.irr) > irr_depth) return false;
  }
  return true;
}

std::uint64_t FreeDecomposition::operator[](const Word& w) const {
  const auto it = terms.find(w);
  return it == terms.end() ? 0 : it->second;
}

namespace {

void check_composable(const Amalgam& am, const Word& v) {
  CellId at = v.source;
  for (const auto& l : v.letters) {
    if (am.letter_source(l) != at) throw CompositionError("word " + to_string(am, v) + " is not composable");
    at = am.letter_target(l);
  }
  if (at != v.target) throw CompositionError("word " + to_string(am, v) + " has inconsistent endpoints");
}

// Right-to-left application of the letters of v to the vacuum, tracking only
// graded dimensions.
std::map<Word, std::uint64_t> act_on_vacuum(const Amalgam& am, const Word& v) {
  std::map<Word, std::uint64_t> state{{empty_word(v.target), 1}};
  for (auto it = v.letters.rbegin(); it != v.letters.rend(); ++it) {
    const auto i = it->factor;
    const auto& spec = am.factor(i);
    const IrrId& alpha = it->irr;
    std::map<Word, std::uint64_t> next;
    for (const auto& [w, count] : state) {
      IrrId gamma;
      Word rest;
      if (!w.empty() && w.letters.front().factor == i) {
        gamma = w.letters.front().irr;
        rest = tail(am, w);
      } else {
        gamma = spec.unit(spec.target_cell(alpha));
        rest = w;
      }
      for (const auto& [pi, n] : spec.fuse(alpha, gamma).terms) next[left_cons(am, i, pi, rest)] += count * n;
    }
    state = std::move(next);
  }
  return state;
}

}  // namespace

FreeDecomposition decompose_word(const Amalgam& am, const Word& v, const Bound& bound) {
  check_composable(am, v);
  FreeDecomposition out{v.source, v.target, {}};
  bool dropped = false;
  for (auto& [w, count] : act_on_vacuum(am, v)) {
    if (count == 0) continue;
    if (bound.admits(am, w)) out.terms.emplace(w, count);
    else dropped = true;
  }
  if (dropped) {
    const double lost = word_qdim(am, v) - decomposition_qdim(am, out);
    throw BoundError("decomposition of " + to_string(am, v) + " leaves the enumeration window (missing qdim " +
                     std::to_string(lost) + ")");
  }
  return out;
}

std::uint64_t mult_in_word(const Amalgam& am, const Word& w, const Word& v) {
  if (w.source != v.source || w.target != v.target) throw CompositionError("mult_in_word: endpoints differ");
  return decompose_word(am, v)[w];
}

std::uint64_t hom_dim_words(const Amalgam& am, const Word& v1, const Word& v2) {
  if (v1.source != v2.source || v1.target != v2.target) throw CompositionError("hom_dim_words: endpoints differ");
  const auto d1 = decompose_word(am, v1);
  const auto d2 = decompose_word(am, v2);
  std::uint64_t total = 0;
  for (const auto& [w, m] : d1.terms) total += m * d2[w];
  return total;
}

double word_qdim(const Amalgam& am, const Word& v) {
  double d = 1.0;
  for (const auto& l : v.letters) d *= am.factor(l.factor).qdim(l.irr);
  return d;
}

std::optional<Rational> word_exact_qdim(const Amalgam& am, const Word& v) {
  Rational d(1);
  for (const auto& l : v.letters) {
    const auto q = am.factor(l.factor).exact_qdim(l.irr);
    if (!q) return std::nullopt;
    d *= *q;
  }
  return d;
}

double decomposition_qdim(const Amalgam& am, const FreeDecomposition& d) {
  double total = 0.0;
  for (const auto& [w, m] : d.terms) total += static_cast<double>(m) * word_qdim(am, w);
  return total;
}

std::optional<Rational> decomposition_exact_qdim(const Amalgam& am, const FreeDecomposition& d) {
  Rational total(0);
  for (const auto& [w, m] : d.terms) {
    const auto q = word_exact_qdim(am, w);
    if (!q) return std::nullopt;
    total += Rational(static_cast<std::int64_t>(m)) * *q;
  }
  return total;
}

// ---------------------------------------------------------------------------

namespace {

class FreeProductSource final : public FusionSource {
 public:
  FreeProductSource(Amalgam am, Bound bound) : am_(std::move(am)), bound_(bound) {}

  std::vector<ZeroCell> zero_cells() const override {
    std::vector<ZeroCell> out;
    for (CellId c = 0; c < am_.cell_count(); ++c) out.push_back(am_.cell_name(c));
    return out;
  }
  bool finite() const override { return false; }
  std::vector<IrrId> irreducibles(std::size_t depth) const override {
    std::vector<Word> words;
    const std::size_t len = std::min(depth, bound_.max_len);
    const std::size_t irr = std::min(depth, bound_.irr_depth);
    for (CellId a = 0; a < am_.cell_count(); ++a) {
      for (CellId b = 0; b < am_.cell_count(); ++b) {
        for (auto& w : enumerate_reduced(am_, a, b, len, irr)) {
          if (word_rank(am_, w) <= depth) words.push_back(std::move(w));
        }
      }
    }
    std::sort(words.begin(), words.end());
    std::vector<IrrId> out;
    out.reserve(words.size());
    for (const auto& w : words) out.push_back(to_string(am_, w));
    return out;
  }
  std::optional<IrrInfo> info(const IrrId& irr) const override {
    const auto w = parse(irr);
    if (!w) return std::nullopt;
    return IrrInfo{irr,
                   am_.cell_name(w->source),
                   am_.cell_name(w->target),
                   to_string(am_, dual_word(am_, *w)),
                   word_qdim(am_, *w),
                   word_exact_qdim(am_, *w),
                   word_rank(am_, *w)};
  }
  std::optional<IrrId> unit(const ZeroCell& cell) const override {
    const auto c = am_.find_cell(cell);
    if (!c) return std::nullopt;
    return to_string(am_, empty_word(*c));
  }
  Bundle fuse(const IrrId& a, const IrrId& b) const override {
    const auto d = decompose_word(am_, concat(*parse(a), *parse(b)), bound_);
    Bundle out{am_.cell_name(d.source), am_.cell_name(d.target), {}};
    for (const auto& [w, m] : d.terms) out.add(to_string(am_, w), m);
    return out;
  }
  bool exact() const override {
    return std::all_of(am_.factors().begin(), am_.factors().end(), [](const CategorySpec& s) { return s.exact(); });
  }
  double tolerance() const override {
    double t = 0;
    for (const auto& s : am_.factors()) t = std::max(t, s.tolerance());
    return t;
  }
  std::string name() const override {
    std::string n;
    for (std::size_t i = 0; i < am_.size(); ++i) n += (i ? " * " : "") + am_.factor(i).name();
    return n;
  }

  const Amalgam& amalgam() const { return am_; }

 private:
  std::optional<Word> parse(const IrrId& irr) const {
    try {
      auto w = parse_word(am_, irr);
      if (!is_reduced(am_, w)) return std::nullopt;
      return w;
    } catch (const Error&) {
      return std::nullopt;
    }
  }

  Amalgam am_;
  Bound bound_;
};

// A spec seen only on a subset of its 0-cells.
class RestrictedSource final : public FusionSource {
 public:
  RestrictedSource(CategorySpec base, std::vector<ZeroCell> cells) : base_(std::move(base)), cells_(std::move(cells)) {}

  std::vector<ZeroCell> zero_cells() const override { return cells_; }
  bool finite() const override { return base_.finite(); }
  std::vector<IrrId> irreducibles(std::size_t depth) const override {
    std::vector<IrrId> out;
    for (auto& irr : base_.irreducibles(depth)) {
      if (keeps(base_.source_cell(irr)) && keeps(base_.target_cell(irr))) out.push_back(std::move(irr));
    }
    return out;
  }
  std::optional<IrrInfo> info(const IrrId& irr) const override {
    if (!base_.contains(irr)) return std::nullopt;
    const auto& i = base_.info(irr);
    if (!keeps(i.source) || !keeps(i.target)) return std::nullopt;
    return i;
  }
  std::optional<IrrId> unit(const ZeroCell& cell) const override {
    if (!keeps(cell)) return std::nullopt;
    return base_.unit(cell);
  }
  Bundle fuse(const IrrId& a, const IrrId& b) const override { return base_.fuse(a, b); }
  bool exact() const override { return base_.exact(); }
  double tolerance() const override { return base_.tolerance(); }
  std::string name() const override { return base_.name(); }

  const CategorySpec& base() const { return base_; }

 private:
  bool keeps(const ZeroCell& c) const { return std::find(cells_.begin(), cells_.end(), c) != cells_.end(); }

  CategorySpec base_;
  std::vector<ZeroCell> cells_;
};

}  // namespace

CategorySpec free_product_spec(const Amalgam& am, const Bound& bound) {
  return CategorySpec(std::make_shared<FreeProductSource>(am, bound));
}

const Amalgam* underlying_amalgam(const CategorySpec& spec) {
  if (const auto* f = dynamic_cast<const FreeProductSource*>(&spec.source())) return &f->amalgam();
  if (const auto* r = dynamic_cast<const RestrictedSource*>(&spec.source())) return underlying_amalgam(r->base());
  return nullptr;
}

// ---------------------------------------------------------------------------

void check_pointed(const PointedSpec& p) {
  if (p.a == p.b) throw ArgumentError("pointed spec needs two distinct 0-cells");
  if (!p.ambient.has_cell(p.a) || !p.ambient.has_cell(p.b)) throw ArgumentError("pointed spec names an unknown 0-cell");
  if (p.point.empty()) throw ArgumentError("pointed spec has a zero point");
  if (p.point.source != p.a || p.point.target != p.b) throw ArgumentError("point is not of type (a, b)");
  for (const auto& [irr, m] : p.point.terms) {
    const auto& i = p.ambient.info(irr);
    if (i.source != p.a || i.target != p.b) throw ArgumentError("point term '" + irr + "' is not of type (a, b)");
  }
}

PointedSpec free_compose(const PointedSpec& p1, const PointedSpec& p2, const Bound& bound) {
  check_pointed(p1);
  check_pointed(p2);
  Amalgam am({p1.ambient, p2.ambient}, {SharedCell{"*", {{0, p1.b}, {1, p2.a}}}});
  const auto a = am.cell_name(am.glue(0, p1.a));
  const auto c = am.cell_name(am.glue(1, p2.b));
  const auto full = free_product_spec(am, bound);
  PointedSpec out{CategorySpec(std::make_shared<RestrictedSource>(full, std::vector<ZeroCell>{a, c})), a, c, {}};
  out.point.source = a;
  out.point.target = c;
  for (const auto& [x, m1] : p1.point.terms) {
    for (const auto& [y, m2] : p2.point.terms) {
      out.point.add(to_string(am, make_word(am, {Letter{0, x}, Letter{1, y}})), m1 * m2);
    }
  }
  return out;
}

std::vector<std::uint64_t> box_dims(const PointedSpec& p, std::size_t n_max) {
  check_pointed(p);
  const Bundle u = p.point;
  const Bundle ubar = dual(p.ambient, u);
  std::vector<std::uint64_t> out{1};
  Bundle power = single(p.ambient, p.ambient.unit(p.a));
  for (std::size_t n = 1; n <= n_max; ++n) {
    power = tensor(p.ambient, power, n % 2 == 1 ? u : ubar);
    out.push_back(hom_dim(power, power));
  }
  return out;
}

NondegeneracyVerdict nondegenerate(const PointedSpec& p, std::size_t depth) {
  check_pointed(p);
  NondegeneracyVerdict verdict;
  verdict.depth = depth;
  const Bundle uu = tensor(p.ambient, p.point, dual(p.ambient, p.point));
  Bundle power = single(p.ambient, p.ambient.unit(p.a));
  std::set<IrrId> reached;
  for (std::size_t k = 0;; ++k) {
    for (const auto& [irr, m] : power.terms) reached.insert(irr);
    if (k == depth) break;
    power = tensor(p.ambient, power, uu);
  }
  for (const auto& irr : p.ambient.irreducibles(depth)) {
    const auto& i = p.ambient.info(irr);
    if (i.source != p.a || i.target != p.a) continue;
    ++verdict.checked;
    if (reached.count(irr) == 0) verdict.unreached.push_back(irr);
  }
  verdict.nondegenerate = verdict.unreached.empty();
  return verdict;
}

}  // namespace freeprod
