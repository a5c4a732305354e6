#pragma once

// Reference computations that share no code with the library beyond its
// fusion data: exhaustive rewriting of words, ballot-path counts, character
// sums and a brute-force word generator.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "freeprod/free_fusion.hpp"
#include "freeprod/rep_groups.hpp"

namespace oracle {

using freeprod::Amalgam;
using freeprod::CellId;
using freeprod::Letter;
using freeprod::Word;

using Multiset = std::map<std::string, std::uint64_t>;

struct Rewriter {
  const Amalgam& am;
  std::map<std::string, Multiset> memo;

  static std::string key(const std::vector<Letter>& ls, CellId s) {
    std::string k = std::to_string(s) + ":";
    for (const auto& l : ls) k += std::to_string(l.factor) + "/" + l.irr + ";";
    return k;
  }

  /// Reduced words reachable by merging adjacent same-factor letters, with
  /// multiplicities; the first mergeable pair is always merged first.
  Multiset run(std::vector<Letter> ls, CellId source) {
    std::erase_if(ls, [&](const Letter& l) { return am.is_unit_letter(l); });
    const std::string k = key(ls, source);
    if (auto it = memo.find(k); it != memo.end()) return it->second;
    Multiset out;
    std::size_t p = 0;
    while (p + 1 < ls.size() && ls[p].factor != ls[p + 1].factor) ++p;
    if (p + 1 >= ls.size()) {
      const Word w = ls.empty() ? freeprod::empty_word(source) : freeprod::make_word(am, ls);
      out[freeprod::to_string(am, w)] = 1;
    } else {
      const auto& spec = am.factor(ls[p].factor);
      for (const auto& [gamma, m] : spec.fuse(ls[p].irr, ls[p + 1].irr).terms) {
        std::vector<Letter> next(ls.begin(), ls.begin() + p);
        next.push_back({ls[p].factor, gamma});
        next.insert(next.end(), ls.begin() + p + 2, ls.end());
        for (const auto& [w, n] : run(next, source)) out[w] += m * n;
      }
    }
    memo[k] = out;
    return out;
  }

  Multiset operator()(const Word& v) { return run(v.letters, v.source); }
};

inline std::uint64_t end_dim(const Multiset& m) {
  std::uint64_t s = 0;
  for (const auto& [w, n] : m) s += n * n;
  return s;
}

/// Paths 0 -> k of n steps +-1 on the nonnegative integers; entry n is the
/// sum of squares over end points, i.e. dim End of the n-th alternating
/// power of the generator of a generic Temperley-Lieb-Jones category.
inline std::vector<std::uint64_t> ballot_end_dims(std::size_t n_max) {
  std::vector<std::uint64_t> out;
  std::vector<std::uint64_t> row{1};
  for (std::size_t n = 0; n <= n_max; ++n) {
    std::uint64_t s = 0;
    for (auto x : row) s += x * x;
    out.push_back(s);
    std::vector<std::uint64_t> next(row.size() + 1, 0);
    for (std::size_t k = 0; k < row.size(); ++k) {
      next[k + 1] += row[k];
      if (k > 0) next[k - 1] += row[k];
    }
    row = next;
  }
  return out;
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline std::uint64_t catalan(std::uint64_t n) { return binomial(2 * n, n) / (n + 1); }
inline std::uint64_t fuss_catalan(std::uint64_t n) { return binomial(3 * n, n) / (2 * n + 1); }

/// N_{ab}^c = |G|^{-1} sum_g chi_a(g) chi_b(g) conj(chi_c(g)).
inline std::uint64_t character_multiplicity(const freeprod::ConcreteCategory& cat, const std::string& a,
                                            const std::string& b, const std::string& c) {
  const auto& ra = cat.rep(a);
  const auto& rb = cat.rep(b);
  const auto& rc = cat.rep(c);
  std::complex<double> s = 0.0;
  for (std::size_t g = 0; g < cat.group().order; ++g) {
    s += ra.matrices[g].trace() * rb.matrices[g].trace() * std::conj(rc.matrices[g].trace());
  }
  s /= static_cast<double>(cat.group().order);
  return static_cast<std::uint64_t>(std::llround(s.real()));
}

/// Every composable letter sequence from `a` with at most max_len letters,
/// letters of rank <= depth, by depth-first extension.
inline std::vector<Word> all_words(const Amalgam& am, CellId a, std::size_t max_len, std::size_t depth,
                                   bool with_units) {
  std::vector<Word> out;
  std::vector<Letter> cur;
  std::function<void(CellId)> grow = [&](CellId at) {
    out.push_back(cur.empty() ? freeprod::empty_word(a) : freeprod::make_word(am, cur));
    if (cur.size() == max_len) return;
    for (std::size_t i = 0; i < am.size(); ++i) {
      const auto local = am.local_cell(i, at);
      if (!local) continue;
      const auto& spec = am.factor(i);
      for (const auto& irr : spec.irreducibles(depth)) {
        if (spec.source_cell(irr) != *local || spec.rank(irr) > depth) continue;
        if (!with_units && spec.is_unit(irr)) continue;
        cur.push_back({i, irr});
        grow(am.glue(i, spec.target_cell(irr)));
        cur.pop_back();
      }
    }
  };
  grow(a);
  return out;
}

}  // namespace oracle
