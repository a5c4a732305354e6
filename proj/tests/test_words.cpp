#include <doctest.h>

#include <algorithm>
#include <set>

#include "freeprod/free_fusion.hpp"
#include "freeprod/rep_groups.hpp"
#include "freeprod/tlj.hpp"
#include "freeprod/words.hpp"
#include "oracles.hpp"

using namespace freeprod;

namespace {

Amalgam s3_z2() {
  return Amalgam({builtin_category("S3")->spec(), builtin_category("Z2")->spec()},
                 {SharedCell{"a", {{0, "a"}, {1, "a"}}}});
}

Amalgam pointed_pair() {
  const auto p = pointed_tlj({2.5, 0});
  return Amalgam({p.ambient, p.ambient}, {SharedCell{"c", {{0, "b"}, {1, "a"}}}});
}

std::set<std::string> names(const Amalgam& am, const std::vector<Word>& ws) {
  std::set<std::string> out;
  for (const auto& w : ws) out.insert(to_string(am, w));
  return out;
}

}  // namespace

TEST_CASE("literals round-trip") {
  const Amalgam am = s3_z2();
  for (const std::string text : {"[std@1][g@2]", "[sgn@1]", "()@a", "[g@2][std@1][g@2]", "[std@1][std@1]"}) {
    CHECK(to_string(am, parse_word(am, text)) == text);
  }
  const Word w = parse_word(am, "[std@1][g@2]");
  CHECK(w.size() == 2);
  CHECK(w.letters[0] == Letter{0, "std"});
  CHECK(w.letters[1] == Letter{1, "g"});
}

TEST_CASE("malformed literals") {
  const Amalgam am = s3_z2();
  CHECK_THROWS_AS(parse_word(am, "[std@1"), ParseError);
  CHECK_THROWS_AS(parse_word(am, "std@1"), ParseError);
  CHECK_THROWS_AS(parse_word(am, "[std@x]"), ParseError);
  CHECK_THROWS_AS(parse_word(am, "[foo@1]"), LookupError);
  CHECK_THROWS_AS(parse_word(am, "[g@3]"), LookupError);
  CHECK_THROWS_AS(parse_word(am, "()@zz"), LookupError);
  const Amalgam pp = pointed_pair();
  CHECK_THROWS_AS(parse_word(pp, "[f1_ab@1][f1_ba@2]"), CompositionError);
}

TEST_CASE("amalgam cells and gluing") {
  const Amalgam pp = pointed_pair();
  CHECK(pp.cell_count() == 3);
  CHECK(pp.glue(0, "b") == pp.glue(1, "a"));
  CHECK(pp.glue(0, "a") != pp.glue(1, "b"));
  CHECK(pp.cell_name(pp.glue(1, "a")) == "b@1");
  CHECK(pp.cell_name(pp.glue(1, "b")) == "b@2");
  CHECK_FALSE(pp.find_cell("nope").has_value());
  CHECK_FALSE(pp.local_cell(1, pp.glue(0, "a")).has_value());
  const auto p = pointed_tlj({2.5, 0});
  CHECK_THROWS_AS(Amalgam({p.ambient}, {SharedCell{"x", {{0, "zz"}}}}), ArgumentError);
  CHECK_THROWS_AS(Amalgam({p.ambient, p.ambient}, {SharedCell{"x", {{0, "a"}, {1, "a"}}}, SharedCell{"y", {{0, "b"}, {1, "a"}}}}),
                  ArgumentError);
}

TEST_CASE("reducedness and rank") {
  const Amalgam am = s3_z2();
  CHECK(is_reduced(am, parse_word(am, "[std@1][g@2][sgn@1]")));
  CHECK_FALSE(is_reduced(am, parse_word(am, "[std@1][std@1]")));
  CHECK_FALSE(is_reduced(am, parse_word(am, "[triv@1]")));
  CHECK(is_reduced(am, empty_word(0)));
  CHECK(word_rank(am, parse_word(am, "[std@1][g@2]")) == 2);
  const Amalgam t({tlj_spec({2.5, 0})}, {});
  CHECK(word_rank(t, parse_word(t, "[f3@1]")) == 3);
}

TEST_CASE("cons, concat, tail and duals") {
  const Amalgam am = s3_z2();
  const Word w = parse_word(am, "[g@2][std@1]");
  CHECK(to_string(am, left_cons(am, 0, "sgn", w)) == "[sgn@1][g@2][std@1]");
  CHECK_THROWS_AS(left_cons(am, 1, "g", w), PreconditionError);
  CHECK(to_string(am, right_cons(am, w, 1, "g")) == "[g@2][std@1][g@2]");
  CHECK_THROWS_AS(right_cons(am, w, 0, "sgn"), PreconditionError);
  CHECK(to_string(am, tail(am, w)) == "[std@1]");
  CHECK(concat(w, parse_word(am, "[g@2]")) == parse_word(am, "[g@2][std@1][g@2]"));

  const Amalgam pp = pointed_pair();
  const Word u = parse_word(pp, "[f1_ab@1][f1_ab@2]");
  CHECK(to_string(pp, dual_word(pp, u)) == "[f1_ba@2][f1_ba@1]");
  CHECK(dual_word(pp, dual_word(pp, u)) == u);
}

TEST_CASE("canonical order is by length first") {
  const Amalgam am = s3_z2();
  const auto ws = enumerate_reduced(am, 0, 0, 3, kUnbounded);
  CHECK(std::is_sorted(ws.begin(), ws.end()));
  CHECK(ws.front().empty());
  for (std::size_t k = 1; k < ws.size(); ++k) CHECK(ws[k - 1].size() <= ws[k].size());
}

TEST_CASE("enumeration agrees with a brute-force generator") {
  const Amalgam am = s3_z2();
  const auto brute = oracle::all_words(am, 0, 4, kUnbounded, false);
  CHECK(names(am, enumerate_general(am, 0, 0, 4, kUnbounded)) == names(am, brute));
  const auto brute_units = oracle::all_words(am, 0, 3, kUnbounded, true);
  CHECK(names(am, enumerate_general(am, 0, 0, 3, kUnbounded, true)) == names(am, brute_units));

  std::vector<Word> reduced;
  std::copy_if(brute.begin(), brute.end(), std::back_inserter(reduced), [&](const Word& w) { return is_reduced(am, w); });
  CHECK(names(am, enumerate_reduced(am, 0, 0, 4, kUnbounded)) == names(am, reduced));

  const Amalgam pp = pointed_pair();
  const CellId a = pp.glue(0, "a");
  std::size_t total = 0;
  for (CellId b = 0; b < pp.cell_count(); ++b) total += enumerate_general(pp, a, b, 3, 2).size();
  CHECK(total == oracle::all_words(pp, a, 3, 2, false).size());
}

TEST_CASE("labels may themselves be word literals") {
  const Amalgam inner = s3_z2();
  const CategorySpec fp = free_product_spec(inner);
  const Amalgam outer({fp, builtin_category("Z3")->spec()}, {SharedCell{"a", {{0, "a"}, {1, "a"}}}});
  const std::string text = "[[std@1][g@2]@1][g@2]";
  const Word w = parse_word(outer, text);
  CHECK(w.letters[0].irr == "[std@1][g@2]");
  CHECK(to_string(outer, w) == text);
  CHECK_THROWS_AS(parse_word(outer, "[[std@1][g@2]@1"), ParseError);
}
