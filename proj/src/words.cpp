#include "freeprod/words.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>
#include <set>

namespace freeprod {

bool operator<(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t k = 0; k < a.size(); ++k) {
    const auto& x = a.letters[k];
    const auto& y = b.letters[k];
    if (x.factor != y.factor) return x.factor < y.factor;
    const int c = compare_labels(x.irr, y.irr);
    if (c != 0) return c < 0;
  }
  if (a.source != b.source) return a.source < b.source;
  return a.target < b.target;
}

// ---------------------------------------------------------------------------

Amalgam::Amalgam(std::vector<CategorySpec> factors, std::vector<SharedCell> shared)
    : factors_(std::move(factors)), shared_(std::move(shared)) {
  if (factors_.empty()) throw ArgumentError("amalgam needs at least one factor");

  // nodes are (factor, local cell)
  std::vector<std::pair<std::size_t, ZeroCell>> nodes;
  std::map<std::pair<std::size_t, ZeroCell>, std::size_t> node_of;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    for (const auto& c : factors_[i].zero_cells()) {
      node_of.emplace(std::make_pair(i, c), nodes.size());
      nodes.emplace_back(i, c);
    }
  }
  std::vector<std::size_t> parent(nodes.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  std::vector<std::map<ZeroCell, std::string>> used(factors_.size());
  for (const auto& s : shared_) {
    std::optional<std::size_t> first;
    for (const auto& [i, cell] : s.injections) {
      if (i >= factors_.size()) throw ArgumentError("shared cell '" + s.name + "' names factor " + std::to_string(i + 1));
      const auto it = node_of.find({i, cell});
      if (it == node_of.end()) {
        throw ArgumentError("shared cell '" + s.name + "' maps to unknown 0-cell '" + cell + "' of factor " +
                            std::to_string(i + 1));
      }
      const auto [u, fresh] = used[i].emplace(cell, s.name);
      if (!fresh && u->second != s.name) {
        throw ArgumentError("injection into factor " + std::to_string(i + 1) + " is not injective: '" + u->second +
                            "' and '" + s.name + "' both map to '" + cell + "'");
      }
      if (first) parent[find(it->second)] = find(*first);
      else first = it->second;
    }
  }

  glue_.resize(factors_.size());
  std::map<std::size_t, CellId> id_of_root;
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    const auto root = find(n);
    auto it = id_of_root.find(root);
    if (it == id_of_root.end()) {
      it = id_of_root.emplace(root, static_cast<CellId>(cells_.size())).first;
      cells_.push_back(Cell{nodes[n].second, {}});
    }
    auto& cell = cells_[it->second];
    const auto& [i, local] = nodes[n];
    if (!cell.members.emplace(i, local).second) {
      throw ArgumentError("gluing identifies two 0-cells of factor " + std::to_string(i + 1));
    }
    glue_[i].emplace(local, it->second);
  }

  std::map<std::string, std::size_t> name_count;
  for (const auto& c : cells_) ++name_count[c.name];
  for (auto& c : cells_) {
    if (name_count[c.name] > 1) c.name += "@" + std::to_string(c.members.begin()->first + 1);
  }
}

const CategorySpec& Amalgam::factor(std::size_t i) const {
  if (i >= factors_.size()) throw LookupError("no factor " + std::to_string(i + 1));
  return factors_[i];
}

const std::string& Amalgam::cell_name(CellId c) const {
  if (c >= cells_.size()) throw LookupError("no glued 0-cell #" + std::to_string(c));
  return cells_[c].name;
}

std::optional<CellId> Amalgam::find_cell(const std::string& name) const {
  for (std::size_t k = 0; k < cells_.size(); ++k) {
    if (cells_[k].name == name) return static_cast<CellId>(k);
  }
  return std::nullopt;
}

CellId Amalgam::cell_id(const std::string& name) const {
  const auto c = find_cell(name);
  if (!c) throw LookupError("unknown 0-cell '" + name + "'");
  return *c;
}

CellId Amalgam::glue(std::size_t i, const ZeroCell& cell) const {
  if (i >= glue_.size()) throw LookupError("no factor " + std::to_string(i + 1));
  const auto it = glue_[i].find(cell);
  if (it == glue_[i].end()) throw LookupError("factor " + std::to_string(i + 1) + " has no 0-cell '" + cell + "'");
  return it->second;
}

std::optional<ZeroCell> Amalgam::local_cell(std::size_t i, CellId c) const {
  if (c >= cells_.size()) return std::nullopt;
  const auto it = cells_[c].members.find(i);
  if (it == cells_[c].members.end()) return std::nullopt;
  return it->second;
}

CellId Amalgam::letter_source(const Letter& l) const { return glue(l.factor, factor(l.factor).source_cell(l.irr)); }

CellId Amalgam::letter_target(const Letter& l) const { return glue(l.factor, factor(l.factor).target_cell(l.irr)); }

bool Amalgam::is_unit_letter(const Letter& l) const { return factor(l.factor).is_unit(l.irr); }

const std::vector<IrrId>& Amalgam::letters_from(std::size_t i, CellId c, std::size_t depth) const {
  const auto& spec = factor(i);
  if (spec.finite()) depth = 0;
  else if (depth == kUnbounded) throw ArgumentError("letters_from: lazy factor needs a finite depth");
  const auto key = std::make_tuple(i, c, depth);
  {
    std::lock_guard lock(*cache_mutex_);
    const auto it = letter_cache_.find(key);
    if (it != letter_cache_.end()) return it->second;
  }
  std::vector<IrrId> out;
  if (const auto local = local_cell(i, c)) {
    for (const auto& irr : spec.irreducibles(depth)) {
      const auto& info = spec.info(irr);
      if (info.source == *local && !spec.is_unit(irr)) out.push_back(irr);
    }
  }
  std::lock_guard lock(*cache_mutex_);
  return letter_cache_.emplace(key, std::move(out)).first->second;
}

// ---------------------------------------------------------------------------

Word empty_word(CellId cell) { return Word{{}, cell, cell}; }

Word single_letter(const Amalgam& am, std::size_t factor, const IrrId& irr) {
  Letter l{factor, irr};
  return Word{{l}, am.letter_source(l), am.letter_target(l)};
}

Word make_word(const Amalgam& am, std::vector<Letter> letters) {
  if (letters.empty()) throw ArgumentError("make_word: empty letter sequence needs an explicit 0-cell");
  Word w;
  w.source = am.letter_source(letters.front());
  CellId at = w.source;
  for (const auto& l : letters) {
    if (am.letter_source(l) != at) {
      throw CompositionError("letter [" + l.irr + "@" + std::to_string(l.factor + 1) + "] does not start at 0-cell '" +
                             am.cell_name(at) + "'");
    }
    at = am.letter_target(l);
  }
  w.target = at;
  w.letters = std::move(letters);
  return w;
}

Word concat(const Word& a, const Word& b) {
  if (a.target != b.source) throw CompositionError("concat: word endpoints do not compose");
  Word w{a.letters, a.source, b.target};
  w.letters.insert(w.letters.end(), b.letters.begin(), b.letters.end());
  return w;
}

Word dual_word(const Amalgam& am, const Word& w) {
  Word out{{}, w.target, w.source};
  out.letters.reserve(w.size());
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
    out.letters.push_back(Letter{it->factor, am.factor(it->factor).dual(it->irr)});
  }
  return out;
}

Word tail(const Amalgam& am, const Word& w) {
  if (w.empty()) throw ArgumentError("tail of the empty word");
  Word out{{w.letters.begin() + 1, w.letters.end()}, am.letter_target(w.letters.front()), w.target};
  return out;
}

Word left_cons(const Amalgam& am, std::size_t i, const IrrId& alpha, const Word& w) {
  if (!w.empty() && w.letters.front().factor == i) {
    throw PreconditionError("left_cons: word already starts with a letter of factor " + std::to_string(i + 1));
  }
  const Letter l{i, alpha};
  if (am.letter_target(l) != w.source) throw CompositionError("left_cons: endpoints do not compose");
  if (am.is_unit_letter(l)) return w;
  Word out{{l}, am.letter_source(l), w.target};
  out.letters.insert(out.letters.end(), w.letters.begin(), w.letters.end());
  return out;
}

Word right_cons(const Amalgam& am, const Word& w, std::size_t i, const IrrId& alpha) {
  if (!w.empty() && w.letters.back().factor == i) {
    throw PreconditionError("right_cons: word already ends with a letter of factor " + std::to_string(i + 1));
  }
  const Letter l{i, alpha};
  if (am.letter_source(l) != w.target) throw CompositionError("right_cons: endpoints do not compose");
  if (am.is_unit_letter(l)) return w;
  Word out = w;
  out.letters.push_back(l);
  out.target = am.letter_target(l);
  return out;
}

bool is_reduced(const Amalgam& am, const Word& v) {
  if (v.source >= am.cell_count() || v.target >= am.cell_count()) return false;
  if (v.empty()) return v.source == v.target;
  CellId at = v.source;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const auto& l = v.letters[k];
    if (l.factor >= am.size() || !am.factor(l.factor).contains(l.irr)) return false;
    if (am.is_unit_letter(l)) return false;
    if (k > 0 && v.letters[k - 1].factor == l.factor) return false;
    if (am.letter_source(l) != at) return false;
    at = am.letter_target(l);
  }
  return at == v.target;
}

std::size_t word_rank(const Amalgam& am, const Word& w) {
  std::size_t r = 0;
  for (const auto& l : w.letters) r += std::max<std::size_t>(1, am.factor(l.factor).rank(l.irr));
  return r;
}

std::vector<Word> enumerate_reduced(const Amalgam& am, CellId a, CellId b, std::size_t max_len,
                                    std::size_t irr_depth) {
  if (a >= am.cell_count() || b >= am.cell_count()) throw ArgumentError("enumerate_reduced: unknown 0-cell");
  std::vector<Word> out;
  Word cur = empty_word(a);
  std::function<void()> grow = [&]() {
    if (cur.target == b) out.push_back(cur);
    if (cur.size() >= max_len) return;
    const std::size_t last = cur.empty() ? am.size() : cur.letters.back().factor;
    for (std::size_t i = 0; i < am.size(); ++i) {
      if (i == last) continue;
      for (const auto& irr : am.letters_from(i, cur.target, irr_depth)) {
        const Letter l{i, irr};
        if (am.factor(i).rank(irr) > irr_depth) continue;
        const CellId saved = cur.target;
        cur.letters.push_back(l);
        cur.target = am.letter_target(l);
        grow();
        cur.letters.pop_back();
        cur.target = saved;
      }
    }
  };
  grow();
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Word> enumerate_general(const Amalgam& am, CellId a, CellId b, std::size_t max_len,
                                    std::size_t irr_depth, bool with_units) {
  if (a >= am.cell_count() || b >= am.cell_count()) throw ArgumentError("enumerate_general: unknown 0-cell");
  std::vector<Word> out;
  Word cur = empty_word(a);
  std::function<void()> grow = [&]() {
    if (cur.target == b) out.push_back(cur);
    if (cur.size() >= max_len) return;
    for (std::size_t i = 0; i < am.size(); ++i) {
      std::vector<IrrId> labels;
      if (with_units) {
        if (const auto local = am.local_cell(i, cur.target)) labels.push_back(am.factor(i).unit(*local));
      }
      for (const auto& irr : am.letters_from(i, cur.target, irr_depth)) {
        if (am.factor(i).rank(irr) <= irr_depth) labels.push_back(irr);
      }
      for (const auto& irr : labels) {
        const Letter l{i, irr};
        const CellId saved = cur.target;
        cur.letters.push_back(l);
        cur.target = am.letter_target(l);
        grow();
        cur.letters.pop_back();
        cur.target = saved;
      }
    }
  };
  grow();
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

std::string to_string(const Amalgam& am, const Word& w) {
  if (w.empty()) return "()@" + am.cell_name(w.source);
  std::string s;
  for (const auto& l : w.letters) s += "[" + l.irr + "@" + std::to_string(l.factor + 1) + "]";
  return s;
}

Word parse_word(const Amalgam& am, const std::string& text) {
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip_ws();
  if (text.compare(pos, 2, "()") == 0) {
    pos += 2;
    skip_ws();
    if (pos >= text.size() || text[pos] != '@') throw ParseError("empty word needs a 0-cell suffix: '" + text + "'");
    ++pos;
    std::string cell = text.substr(pos);
    while (!cell.empty() && std::isspace(static_cast<unsigned char>(cell.back()))) cell.pop_back();
    if (cell.empty()) throw ParseError("empty 0-cell name in '" + text + "'");
    return empty_word(am.cell_id(cell));
  }
  std::vector<Letter> letters;
  while (true) {
    skip_ws();
    if (pos >= text.size()) break;
    if (text[pos] != '[') throw ParseError("expected '[' at offset " + std::to_string(pos) + " in '" + text + "'");
    // Brackets nest, so labels may themselves be word literals.
    std::size_t close = pos;
    for (int depth = 0; close < text.size(); ++close) {
      depth += text[close] == '[' ? 1 : text[close] == ']' ? -1 : 0;
      if (depth == 0) break;
    }
    if (close >= text.size()) throw ParseError("unterminated letter in '" + text + "'");
    const std::string body = text.substr(pos + 1, close - pos - 1);
    const auto at = body.rfind('@');
    if (at == std::string::npos || at == 0 || at + 1 == body.size()) {
      throw ParseError("letter '[" + body + "]' is not of the form [label@i]");
    }
    const std::string label = body.substr(0, at);
    const std::string index = body.substr(at + 1);
    if (!std::all_of(index.begin(), index.end(), [](unsigned char c) { return std::isdigit(c); })) {
      throw ParseError("bad factor index '" + index + "' in '[" + body + "]'");
    }
    const std::size_t i = std::stoul(index);
    if (i == 0 || i > am.size()) throw LookupError("factor index " + index + " out of range");
    if (!am.factor(i - 1).contains(label)) {
      throw LookupError("factor " + index + " has no irreducible '" + label + "'");
    }
    letters.push_back(Letter{i - 1, label});
    pos = close + 1;
  }
  if (letters.empty()) throw ParseError("empty word literal; write ()@cell");
  return make_word(am, std::move(letters));
}

}  // namespace freeprod
