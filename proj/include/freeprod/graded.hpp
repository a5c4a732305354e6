#pragma once

// Finite-dimensional Hilbert spaces graded by reduced words, and the
// grading-preserving maps between them.

#include <cstddef>
#include <map>

#include "freeprod/rep_groups.hpp"
#include "freeprod/words.hpp"

namespace freeprod {

struct GradedSpace {
  CellId source = 0;
  CellId target = 0;
  std::map<Word, std::size_t> dims;  // nonzero components only

  std::size_t dim(const Word& w) const;
  std::size_t total() const;

  friend bool operator==(const GradedSpace&, const GradedSpace&) = default;
};

/// The vacuum: one dimension at the empty word of `cell`.
GradedSpace star_space(CellId cell);

/// One block per word in the union of supports; missing blocks are zero.
struct GradedMap {
  GradedSpace domain;
  GradedSpace codomain;
  std::map<Word, Matrix> blocks;

  /// codomain.dim(w) x domain.dim(w); zero when absent.
  Matrix block(const Word& w) const;
  void set_block(const Word& w, Matrix m);
};

GradedMap zero_map(const GradedSpace& domain, const GradedSpace& codomain);
GradedMap identity_map(const GradedSpace& space);

/// a * b.  Throws LayoutError unless b.codomain == a.domain.
GradedMap compose(const GradedMap& a, const GradedMap& b);
GradedMap adjoint(const GradedMap& a);
GradedMap add(const GradedMap& a, const GradedMap& b);
GradedMap scale(const GradedMap& a, Complex c);

/// Largest absolute entry of a - b.  Throws LayoutError on different shapes.
double deviation(const GradedMap& a, const GradedMap& b);
double max_abs(const GradedMap& a);
/// max(|U*U - 1|, |UU* - 1|) entrywise; U must be square in every grade.
double unitarity_defect(const GradedMap& u);
/// Largest block operator norm.
double operator_norm(const GradedMap& a);

}  // namespace freeprod
