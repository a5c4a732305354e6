#pragma once

// Words over an amalgamated family of factor categories.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "freeprod/fusion.hpp"

namespace freeprod {

/// Index of a glued 0-cell inside an Amalgam.
using CellId = std::uint32_t;

struct Letter {
  std::size_t factor = 0;  // 0-based
  IrrId irr;

  friend bool operator==(const Letter&, const Letter&) = default;
};

/// A composable sequence of letters with explicit endpoints.  Units and
/// adjacent letters of the same factor are allowed; see is_reduced.
struct Word {
  std::vector<Letter> letters;
  CellId source = 0;
  CellId target = 0;

  std::size_t size() const { return letters.size(); }
  bool empty() const { return letters.empty(); }

  friend bool operator==(const Word&, const Word&) = default;
};

using GeneralWord = Word;
/// Same representation; produced only by functions that guarantee
/// alternation and non-unit letters.
using ReducedWord = Word;

/// Canonical order: length, then letters pointwise by (factor, label), then
/// endpoints.
bool operator<(const Word& a, const Word& b);

/// One element of the shared set S and where it lands in each factor.
struct SharedCell {
  std::string name;
  std::map<std::size_t, ZeroCell> injections;  // factor -> 0-cell
};

class Amalgam {
 public:
  Amalgam() = default;
  /// Throws ArgumentError when an injection is not injective or names an
  /// unknown 0-cell, or when gluing identifies two 0-cells of one factor.
  explicit Amalgam(std::vector<CategorySpec> factors, std::vector<SharedCell> shared = {});

  std::size_t size() const { return factors_.size(); }
  const CategorySpec& factor(std::size_t i) const;
  const std::vector<CategorySpec>& factors() const { return factors_; }
  const std::vector<SharedCell>& shared() const { return shared_; }

  std::size_t cell_count() const { return cells_.size(); }
  const std::string& cell_name(CellId c) const;
  /// Throws LookupError.
  CellId cell_id(const std::string& name) const;
  std::optional<CellId> find_cell(const std::string& name) const;

  /// The canonical map phi_i; throws LookupError.
  CellId glue(std::size_t i, const ZeroCell& cell) const;
  /// Preimage of a glued cell in factor i, if any.
  std::optional<ZeroCell> local_cell(std::size_t i, CellId c) const;

  CellId letter_source(const Letter& l) const;
  CellId letter_target(const Letter& l) const;
  bool is_unit_letter(const Letter& l) const;

  /// Non-unit irreducibles of factor i leaving glued cell c, rank <= depth.
  const std::vector<IrrId>& letters_from(std::size_t i, CellId c, std::size_t depth) const;

 private:
  struct Cell {
    std::string name;
    std::map<std::size_t, ZeroCell> members;
  };
  std::vector<CategorySpec> factors_;
  std::vector<SharedCell> shared_;
  std::vector<Cell> cells_;
  std::vector<std::map<ZeroCell, CellId>> glue_;
  mutable std::map<std::tuple<std::size_t, CellId, std::size_t>, std::vector<IrrId>> letter_cache_;
  mutable std::shared_ptr<std::mutex> cache_mutex_ = std::make_shared<std::mutex>();
};

Word empty_word(CellId cell);
Word single_letter(const Amalgam& am, std::size_t factor, const IrrId& irr);

/// Checks composability and fills in the endpoints of a nonempty letter
/// sequence.  Throws CompositionError.
Word make_word(const Amalgam& am, std::vector<Letter> letters);

Word concat(const Word& a, const Word& b);
Word dual_word(const Amalgam& am, const Word& w);
Word tail(const Amalgam& am, const Word& w);

/// The word [alpha]_i : w.  Throws PreconditionError when w starts with a
/// letter of factor i, CompositionError on mismatched endpoints.
Word left_cons(const Amalgam& am, std::size_t i, const IrrId& alpha, const Word& w);
/// The mirror w : [alpha]_i.
Word right_cons(const Amalgam& am, const Word& w, std::size_t i, const IrrId& alpha);

bool is_reduced(const Amalgam& am, const Word& v);

/// Sum over letters of max(1, factor rank).
std::size_t word_rank(const Amalgam& am, const Word& w);

constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

/// All reduced words of type (a, b) with at most max_len letters whose
/// factor ranks are <= irr_depth, in canonical order.
std::vector<Word> enumerate_reduced(const Amalgam& am, CellId a, CellId b, std::size_t max_len,
                                    std::size_t irr_depth);

/// All composable words of type (a, b) with at most max_len letters, any
/// factor order, ranks <= irr_depth; unit letters only when with_units.
std::vector<Word> enumerate_general(const Amalgam& am, CellId a, CellId b, std::size_t max_len,
                                    std::size_t irr_depth, bool with_units = false);

/// "[f1@1][g@2]" with 1-based factor indices; "()@a" for the empty word.
std::string to_string(const Amalgam& am, const Word& w);
/// Throws ParseError on syntax, LookupError on unknown labels or cells,
/// CompositionError on mismatched endpoints.
Word parse_word(const Amalgam& am, const std::string& text);

}  // namespace freeprod
