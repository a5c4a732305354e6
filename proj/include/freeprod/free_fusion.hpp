#pragma once

// Fusion rules of the free product: reduced words are the irreducibles, and a
// general word decomposes by merging adjacent letters of the same factor.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "freeprod/fusion.hpp"
#include "freeprod/words.hpp"

namespace freeprod {

/// Enumeration window for reduced words.
struct Bound {
  std::size_t max_len = kUnbounded;
  std::size_t irr_depth = kUnbounded;

  bool admits(const Amalgam& am, const Word& w) const;
};

struct FreeDecomposition {
  CellId source = 0;
  CellId target = 0;
  std::map<Word, std::uint64_t> terms;

  std::uint64_t operator[](const Word& w) const;
  friend bool operator==(const FreeDecomposition&, const FreeDecomposition&) = default;
};

/// Graded dimension of v > * at w.  Throws CompositionError when the
/// endpoints differ.
std::uint64_t mult_in_word(const Amalgam& am, const Word& w, const Word& v);

/// Full decomposition of v.  Terms outside the bound are dropped; if that
/// loses quantum dimension a BoundError is raised.
FreeDecomposition decompose_word(const Amalgam& am, const Word& v, const Bound& bound = {});

std::uint64_t hom_dim_words(const Amalgam& am, const Word& v1, const Word& v2);

double word_qdim(const Amalgam& am, const Word& v);
std::optional<Rational> word_exact_qdim(const Amalgam& am, const Word& v);

double decomposition_qdim(const Amalgam& am, const FreeDecomposition& d);
std::optional<Rational> decomposition_exact_qdim(const Amalgam& am, const FreeDecomposition& d);

/// The free product as a lazy spec.  Labels are word literals, 0-cells are
/// the glued cells, the rank of a word is word_rank.
CategorySpec free_product_spec(const Amalgam& am, const Bound& bound = {});

/// The amalgam behind a spec built by free_product_spec (or its restriction
/// inside free_compose), or nullptr.
const Amalgam* underlying_amalgam(const CategorySpec& spec);

// ---------------------------------------------------------------------------
// Pointed 2-categories.

struct PointedSpec {
  CategorySpec ambient;
  ZeroCell a;
  ZeroCell b;
  Bundle point;  // of type (a, b)
};

/// Throws ArgumentError unless a != b, both cells exist and the point is a
/// nonzero bundle of type (a, b).
void check_pointed(const PointedSpec& p);

/// Glues b1 = a2 and points the free product, restricted to the outer
/// 0-cells, at u1 u2.
PointedSpec free_compose(const PointedSpec& p1, const PointedSpec& p2, const Bound& bound = {});

/// Entry n is dim End(u (x) u-bar (x) u ...) with n alternating factors;
/// entry 0 is 1.
std::vector<std::uint64_t> box_dims(const PointedSpec& p, std::size_t n_max);

struct NondegeneracyVerdict {
  bool nondegenerate = false;
  std::size_t depth = 0;
  std::size_t checked = 0;
  std::vector<IrrId> unreached;
};

/// Checks that every irreducible of type (a, a) and rank <= depth occurs in
/// some (u u-bar)^k with k <= depth.
NondegeneracyVerdict nondegenerate(const PointedSpec& p, std::size_t depth);

}  // namespace freeprod
