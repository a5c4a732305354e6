#pragma once

// Concrete factor categories Rep(G) for finite groups G: unitary irreducibles,
// intertwiner bases, standard solutions and traces.

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "freeprod/fusion.hpp"

namespace freeprod {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Kronecker product; the first factor is the outer index.
Matrix kron(const Matrix& a, const Matrix& b);

struct FiniteGroup {
  std::string name;
  std::size_t order = 0;
  std::vector<std::string> labels;
  std::vector<std::vector<std::size_t>> mul;  // mul[g][h] = gh
  std::size_t identity = 0;
  std::vector<std::size_t> inv;
};

/// Checks closure, associativity, identity and inverses of a full table.
/// Throws StructuralError.
FiniteGroup make_group(std::string name, std::vector<std::string> labels, const std::vector<std::size_t>& flat_table);

FiniteGroup cyclic_group(std::size_t n);
FiniteGroup symmetric_group_3();

struct UnitaryRep {
  std::string label;
  std::size_t dim = 0;
  std::vector<Matrix> matrices;  // indexed by group element
};

/// Characters g^m -> exp(2 pi i k m / n), labelled "1", "g", "g2", ...
std::vector<UnitaryRep> cyclic_irreps(std::size_t n);
/// "triv", "sgn" and the 2-dimensional "std".
std::vector<UnitaryRep> s3_irreps();

/// A 1-cell of the concrete category: a tensor product of irreducibles,
/// with units removed.  The empty object is the unit.
using Object = std::vector<IrrId>;

class ConcreteCategory {
 public:
  struct Options {
    bool complete = false;
    double tolerance = 1e-10;
  };

  /// Throws StructuralError for non-homomorphisms, non-unitary or reducible
  /// reps, isomorphic pairs, a missing trivial rep, a missing conjugate, or a
  /// set not closed under tensor products; and under `complete`, when the
  /// squared dimensions do not add up to the group order.
  static std::shared_ptr<const ConcreteCategory> build(FiniteGroup group, std::vector<UnitaryRep> reps,
                                                       Options options);
  static std::shared_ptr<const ConcreteCategory> build(FiniteGroup group, std::vector<UnitaryRep> reps) {
    return build(std::move(group), std::move(reps), Options{});
  }

  const CategorySpec& spec() const { return spec_; }
  const FiniteGroup& group() const { return group_; }
  const std::string& name() const { return name_; }
  const UnitaryRep& rep(const IrrId& irr) const;
  /// Irreducibles in canonical label order.
  const std::vector<IrrId>& irreducibles() const { return irrs_; }
  const IrrId& unit() const { return unit_; }
  const IrrId& dual(const IrrId& irr) const { return spec_.dual(irr); }
  double qdim(const IrrId& irr) const { return spec_.qdim(irr); }

  Object normalize(const Object& x) const;
  Object object(const IrrId& irr) const { return normalize({irr}); }
  std::size_t carrier_dim(const Object& x) const;
  Matrix rep_matrix(const Object& x, std::size_t g) const;

  /// Basis of (X, pi) = intertwiners carrier(pi) -> carrier(X), orthonormal
  /// for <V, W> = Tr(W* V), so that V* V = d(pi)^{-1}.
  const std::vector<Matrix>& basis(const Object& x, const IrrId& pi) const;

  /// s: C -> carrier(a) (x) carrier(a-bar) and t: C -> carrier(a-bar) (x) carrier(a).
  const Matrix& s(const IrrId& irr) const;
  const Matrix& t(const IrrId& irr) const;

  Complex categorical_trace(const IrrId& irr, const Matrix& T) const;

  /// Dimension of the space of intertwiners carrier(y) -> carrier(x).
  std::size_t hom_dim(const Object& x, const Object& y) const;

 private:
  ConcreteCategory() = default;

  std::string name_;
  FiniteGroup group_;
  std::map<IrrId, UnitaryRep, LabelLess> reps_;
  std::vector<IrrId> irrs_;
  IrrId unit_;
  CategorySpec spec_;
  std::map<IrrId, Matrix> s_;
  std::map<IrrId, Matrix> t_;

  struct Cache;
  std::shared_ptr<Cache> cache_;
};

/// Intertwiners between two explicit families of matrices over the same
/// group: all V with X(g) V = V Y(g).  Orthonormal for Tr(W* V); the seeding
/// order of the Gram-Schmidt pass is row-major over matrix entries.
std::vector<Matrix> intertwiners(const std::vector<Matrix>& x, const std::vector<Matrix>& y, double tolerance = 1e-8);

std::vector<Matrix> intertwiner_basis(const ConcreteCategory& cat, const Object& x, const IrrId& pi);

Complex categorical_trace(const ConcreteCategory& cat, const IrrId& irr, const Matrix& T);

/// Built-in categories: "Z1".."Z6" and "S3".
std::shared_ptr<const ConcreteCategory> builtin_category(const std::string& name);

}  // namespace freeprod
