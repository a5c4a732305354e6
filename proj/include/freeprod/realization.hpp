#pragma once

// Numerical realization of the free product over concrete factor
// categories: the factor actions on graded spaces, their associators,
// unitors and swap maps, word functors, extension of 2-cells from the
// vacuum component, and the assembly maps into Hilbert spaces.

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "freeprod/graded.hpp"
#include "freeprod/rep_groups.hpp"
#include "freeprod/words.hpp"

namespace freeprod {

/// One summand (alpha gamma, pi) (x) H_src of a graded component.  For left
/// actions basis index k and H index h sit at offset + k * source_dim + h;
/// for right actions at offset + h * mult + k.
struct Block {
  IrrId gamma;
  Word source;
  std::size_t offset = 0;
  std::size_t mult = 0;
  std::size_t source_dim = 0;
};

struct ActionResult {
  GradedSpace space;
  std::map<Word, std::vector<Block>> layout;
};

/// Switches that remove single scalar prefactors; used to show that the
/// checks are sensitive to them.
struct Mutations {
  bool drop_assoc_scalar = false;   // d(gamma)^{1/2} in the left associator
  bool drop_sigma_outer = false;    // d(gamma')^{1/2} in the same-factor swap
  bool drop_sigma_inner = false;    // d(sigma)^{1/2} in the same-factor swap
  bool drop_universal_weight = false;  // d(w) in the universal functor

  bool any() const { return drop_assoc_scalar || drop_sigma_outer || drop_sigma_inner || drop_universal_weight; }
};

class FreeRealization {
 public:
  /// All factors are glued along their single 0-cell.
  explicit FreeRealization(std::vector<std::shared_ptr<const ConcreteCategory>> factors, Mutations mutations = {});

  const Amalgam& amalgam() const { return amalgam_; }
  const ConcreteCategory& category(std::size_t i) const;
  std::size_t size() const { return cats_.size(); }
  CellId cell() const { return 0; }
  const Mutations& mutations() const { return mutations_; }

  GradedSpace star() const { return star_space(cell()); }
  Object letter_object(const Letter& l) const;
  /// Product of carrier dimensions of the letters.
  std::size_t carrier_dim(const Word& w) const;

  ActionResult act_left(std::size_t i, const Object& alpha, const GradedSpace& h) const;
  ActionResult act_right(std::size_t i, const GradedSpace& h, const Object& alpha) const;

  /// phi (x) T for phi: carrier(a) -> carrier(b) intertwining, T: H -> K.
  GradedMap left_map(std::size_t i, const Object& a, const Object& b, const Matrix& phi, const GradedMap& t) const;
  GradedMap right_map(std::size_t i, const GradedMap& t, const Object& a, const Object& b, const Matrix& phi) const;
  GradedMap left_id(std::size_t i, const Object& a, const GradedMap& t) const;
  GradedMap right_id(std::size_t i, const GradedMap& t, const Object& a) const;

  /// alpha > (beta > H) -> (alpha beta) > H.
  GradedMap assoc_left(std::size_t i, const Object& alpha, const Object& beta, const GradedSpace& h) const;
  /// (H < alpha) < beta -> H < (alpha beta).
  GradedMap assoc_right(std::size_t i, const GradedSpace& h, const Object& alpha, const Object& beta) const;
  /// epsilon > H -> H and H < epsilon -> H.
  GradedMap unitor_left(std::size_t i, const GradedSpace& h) const;
  GradedMap unitor_right(std::size_t i, const GradedSpace& h) const;

  /// (alpha >_i H) <_j beta -> alpha >_i (H <_j beta).
  GradedMap sigma(std::size_t i, const Object& alpha, const GradedSpace& h, std::size_t j, const Object& beta) const;

  /// * <_i alpha -> alpha >_i *.
  GradedMap t_map(std::size_t i, const Object& alpha) const;

  // Word functors ---------------------------------------------------------

  /// The actions applied right to left: stage m acts with letter m on the
  /// result of stage m + 1; stage n is H itself.
  std::vector<ActionResult> word_stages(const Word& v, const GradedSpace& h) const;
  GradedSpace word_space(const Word& v, const GradedSpace& h) const;
  /// L_v(T).
  GradedMap word_map(const Word& v, const GradedMap& t) const;
  /// c^j_v at (H, beta): L_v(H) <_j beta -> L_v(H <_j beta).
  GradedMap word_swap(const Word& v, const GradedSpace& h, std::size_t j, const Object& beta) const;
  /// (L_u *) <_i alpha -> L_{u [alpha]_i} *.
  GradedMap sigma_tilde(const Word& u, std::size_t i, const IrrId& alpha) const;

  /// * < w for a reduced word w, one-dimensional at w.
  GradedSpace star_right(const Word& w) const;

  // 2-cells ---------------------------------------------------------------

  /// The component at H of the 2-cell L_v -> L_v2 with vacuum component
  /// eta_star.  No naturality check.
  GradedMap extend(const Word& v, const Word& v2, const GradedMap& eta_star, const GradedSpace& h) const;

  /// Largest naturality defect of the extension over the objects * < w,
  /// |w| <= depth - 1, and all non-unit letters.
  double naturality_residual(const Word& v, const Word& v2, const GradedMap& eta_star, std::size_t depth) const;

  /// extend, after checking naturality to `tolerance`; throws
  /// NotExtendableError with the defect.
  GradedMap extend_checked(const Word& v, const Word& v2, const GradedMap& eta_star, const GradedSpace& h,
                           std::size_t depth, double tolerance = 1e-8) const;

  /// Dimension of the space of vacuum components that pass the naturality
  /// constraints within depth.
  std::size_t extendable_dim(const Word& v, const Word& v2, std::size_t depth) const;
  /// An orthonormal basis of that space.
  std::vector<GradedMap> extendable_basis(const Word& v, const Word& v2, std::size_t depth) const;

  // Assembly --------------------------------------------------------------

  /// Psi_{v,w} on the basis vector e of (v > *)_w: a matrix
  /// carrier(w) -> carrier(v).
  Matrix assembly_basis(const Word& v, const Word& w, std::size_t e) const;
  Matrix assembly(const Word& v, const Word& w, const Vector& zeta) const;
  /// Psi(eta) for eta: L_v -> L_v2 given by its vacuum component.
  Matrix universal(const Word& v, const Word& v2, const GradedMap& eta_star) const;

 private:
  std::pair<IrrId, Word> split_left(std::size_t i, const Word& w) const;
  std::pair<Word, IrrId> split_right(std::size_t i, const Word& w) const;
  const std::vector<ActionResult>& star_stages(const Word& v) const;
  double d(std::size_t i, const IrrId& irr) const { return cats_[i]->qdim(irr); }

  std::vector<std::shared_ptr<const ConcreteCategory>> cats_;
  Amalgam amalgam_;
  Mutations mutations_;

  struct Cache;
  std::shared_ptr<Cache> cache_;
};

}  // namespace freeprod
