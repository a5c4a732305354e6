#pragma once

// Fusion data of a rigid C*-2-category at the Grothendieck level: 0-cells,
// irreducible 1-cells with endpoints, duals, units, fusion multiplicities and
// quantum dimensions.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

#include "freeprod/errors.hpp"

namespace freeprod {

using ZeroCell = std::string;
using IrrId = std::string;
using Rational = boost::rational<std::int64_t>;

/// Natural ordering of labels: runs of digits compare numerically, so that
/// "f2" < "f10".  Ties fall back to plain lexicographic order.
struct LabelLess {
  bool operator()(std::string_view a, std::string_view b) const;
};

int compare_labels(std::string_view a, std::string_view b);

/// Formal direct sum of irreducibles sharing the endpoints (source, target).
struct Bundle {
  ZeroCell source;
  ZeroCell target;
  std::map<IrrId, std::uint64_t, LabelLess> terms;

  bool empty() const { return terms.empty(); }
  std::uint64_t operator[](const IrrId& irr) const;
  void add(const IrrId& irr, std::uint64_t mult);

  friend bool operator==(const Bundle&, const Bundle&) = default;
};

std::string to_string(const Bundle& bundle);

/// Everything a spec knows about one irreducible.
struct IrrInfo {
  IrrId label;
  ZeroCell source;
  ZeroCell target;
  IrrId dual;
  double qdim = 1.0;
  std::optional<Rational> exact_qdim;
  /// Number of fusion steps from the generators needed to reach this
  /// irreducible; finite specs report 0 for everything.
  std::size_t rank = 0;
};

/// The oracle behind a CategorySpec.  Implementations must be immutable and
/// thread-safe; CategorySpec adds memoization on top.
class FusionSource {
 public:
  virtual ~FusionSource() = default;

  virtual std::vector<ZeroCell> zero_cells() const = 0;
  /// True when irreducibles(depth) does not depend on depth.
  virtual bool finite() const = 0;
  /// All irreducibles of rank <= depth, in canonical order.
  virtual std::vector<IrrId> irreducibles(std::size_t depth) const = 0;
  /// nullopt for labels the spec does not know.
  virtual std::optional<IrrInfo> info(const IrrId& irr) const = 0;
  virtual std::optional<IrrId> unit(const ZeroCell& cell) const = 0;
  /// Decomposition of a (x) b.  Only called for composable pairs.
  virtual Bundle fuse(const IrrId& a, const IrrId& b) const = 0;

  virtual bool exact() const { return false; }
  virtual double tolerance() const { return 1e-9; }
  virtual std::string name() const { return "spec"; }
};

/// Immutable, cheaply copyable handle on fusion data.  Queries are memoized;
/// concurrent queries are safe.
class CategorySpec {
 public:
  CategorySpec() = default;
  explicit CategorySpec(std::shared_ptr<const FusionSource> source);

  const FusionSource& source() const { return *source_; }
  std::shared_ptr<const FusionSource> source_ptr() const { return source_; }

  std::vector<ZeroCell> zero_cells() const { return source_->zero_cells(); }
  bool has_cell(const ZeroCell& cell) const;
  bool finite() const { return source_->finite(); }
  bool exact() const { return source_->exact(); }
  double tolerance() const { return source_->tolerance(); }
  std::string name() const { return source_->name(); }

  std::vector<IrrId> irreducibles(std::size_t depth = 0) const;
  bool contains(const IrrId& irr) const;
  /// Throws LookupError for unknown labels.
  const IrrInfo& info(const IrrId& irr) const;

  const ZeroCell& source_cell(const IrrId& irr) const { return info(irr).source; }
  const ZeroCell& target_cell(const IrrId& irr) const { return info(irr).target; }
  const IrrId& dual(const IrrId& irr) const { return info(irr).dual; }
  double qdim(const IrrId& irr) const { return info(irr).qdim; }
  std::optional<Rational> exact_qdim(const IrrId& irr) const { return info(irr).exact_qdim; }
  std::size_t rank(const IrrId& irr) const { return info(irr).rank; }

  /// Throws StructuralError when the cell has no unit.
  IrrId unit(const ZeroCell& cell) const;
  bool is_unit(const IrrId& irr) const;

  /// a (x) b; throws CompositionError unless target(a) = source(b).
  const Bundle& fuse(const IrrId& a, const IrrId& b) const;
  std::uint64_t multiplicity(const IrrId& a, const IrrId& b, const IrrId& c) const;

 private:
  struct Memo;
  std::shared_ptr<const FusionSource> source_;
  std::shared_ptr<Memo> memo_;
};

// ---------------------------------------------------------------------------
// Finite specs given by explicit tables.

struct FusionEntry {
  IrrId left;
  IrrId right;
  std::map<IrrId, std::uint64_t, LabelLess> result;
};

struct FusionTable {
  std::string name = "spec";
  bool exact = false;
  double tolerance = 1e-9;
  std::vector<ZeroCell> zero_cells;
  std::vector<IrrInfo> irreducibles;  // declaration order is kept
  std::map<ZeroCell, IrrId> units;
  std::vector<FusionEntry> fusion;
};

/// Builds a finite spec.  Throws StructuralError on dangling labels,
/// duplicate labels, missing units or non-composable fusion entries.
CategorySpec make_table_spec(FusionTable table);

/// Reads the table back out of a finite spec (irreducibles, nonzero fusion).
FusionTable to_table(const CategorySpec& spec);

// ---------------------------------------------------------------------------
// Operations.

struct Violation {
  std::string check;
  std::string witness;
};

struct ValidationReport {
  std::size_t depth = 0;
  std::size_t irreducibles_checked = 0;
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

/// Checks the rigid fusion-category axioms on all irreducibles of rank <= depth.
/// Throws StructuralError for malformed specs.
ValidationReport validate(const CategorySpec& spec, std::size_t search_depth);

Bundle fuse_pair(const CategorySpec& spec, const IrrId& a, const IrrId& b);

/// Bilinear extension of fuse_pair.
Bundle tensor(const CategorySpec& spec, const Bundle& x, const Bundle& y);

Bundle single(const CategorySpec& spec, const IrrId& irr);

Bundle dual(const CategorySpec& spec, const Bundle& x);

std::uint64_t hom_dim(const Bundle& x, const Bundle& y);

/// Left fold of fuse_pair over a composable sequence.  The empty sequence
/// needs `cell` and yields its unit.
Bundle decompose_tensor(const CategorySpec& spec, const std::vector<IrrId>& seq,
                        const std::optional<ZeroCell>& cell = std::nullopt);

/// Right-to-left fold; equal to decompose_tensor by associativity.
Bundle decompose_tensor_right(const CategorySpec& spec, const std::vector<IrrId>& seq);

double bundle_qdim(const CategorySpec& spec, const Bundle& x);
std::optional<Rational> bundle_exact_qdim(const CategorySpec& spec, const Bundle& x);

}  // namespace freeprod
