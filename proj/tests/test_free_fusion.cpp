#include <doctest.h>

#include "freeprod/free_fusion.hpp"
#include "freeprod/rep_groups.hpp"
#include "freeprod/tlj.hpp"
#include "oracles.hpp"

using namespace freeprod;

namespace {

Amalgam glued(std::vector<CategorySpec> specs) {
  SharedCell s{"a", {}};
  for (std::size_t i = 0; i < specs.size(); ++i) s.injections[i] = specs[i].zero_cells().front();
  return Amalgam(std::move(specs), {s});
}

Amalgam rep(const char* x, const char* y) { return glued({builtin_category(x)->spec(), builtin_category(y)->spec()}); }

std::map<std::string, std::uint64_t> listing(const Amalgam& am, const FreeDecomposition& d) {
  std::map<std::string, std::uint64_t> m;
  for (const auto& [w, n] : d.terms) m[to_string(am, w)] = n;
  return m;
}

}  // namespace

TEST_CASE("small decompositions") {
  const Amalgam z = rep("Z2", "Z2");
  CHECK(listing(z, decompose_word(z, parse_word(z, "[g@1][g@1]"))) == std::map<std::string, std::uint64_t>{{"()@a", 1}});

  const Amalgam s = rep("S3", "Z2");
  CHECK(listing(s, decompose_word(s, parse_word(s, "[std@1][std@1]"))) ==
        std::map<std::string, std::uint64_t>{{"()@a", 1}, {"[sgn@1]", 1}, {"[std@1]", 1}});
  CHECK(listing(s, decompose_word(s, parse_word(s, "[std@1][g@2][g@2][std@1]"))) ==
        std::map<std::string, std::uint64_t>{{"()@a", 1}, {"[sgn@1]", 1}, {"[std@1]", 1}});
  CHECK(listing(s, decompose_word(s, parse_word(s, "[triv@1][g@2]"))) == std::map<std::string, std::uint64_t>{{"[g@2]", 1}});

  const Amalgam t = glued({tlj_spec({2.5, 0}), tlj_spec({3.0, 0})});
  const Word r = parse_word(t, "[f1@1][f1@2][f1@1]");
  CHECK(listing(t, decompose_word(t, r)) == std::map<std::string, std::uint64_t>{{"[f1@1][f1@2][f1@1]", 1}});
  CHECK(word_qdim(t, r) == doctest::Approx(2.5 * 3.0 * 2.5));
}

TEST_CASE("hom dimensions between words") {
  const Amalgam s = rep("S3", "Z2");
  const Word v = parse_word(s, "[std@1][std@1]");
  CHECK(hom_dim_words(s, v, v) == 3);
  CHECK(hom_dim_words(s, v, empty_word(0)) == 1);
  CHECK(hom_dim_words(s, parse_word(s, "[std@1][g@2]"), parse_word(s, "[g@2][std@1]")) == 0);
  CHECK(mult_in_word(s, parse_word(s, "[sgn@1]"), v) == 1);
}

TEST_CASE("bounds") {
  const Amalgam t = glued({tlj_spec({2.5, 0}), tlj_spec({3.0, 0})});
  const Word v = parse_word(t, "[f2@1][f2@1]");
  CHECK_THROWS_AS(decompose_word(t, v, Bound{kUnbounded, 2}), BoundError);
  CHECK(decompose_word(t, v, Bound{kUnbounded, 4}).terms.size() == 3);
  CHECK(Bound{1, kUnbounded}.admits(t, parse_word(t, "[f5@1]")));
  CHECK_FALSE(Bound{1, kUnbounded}.admits(t, parse_word(t, "[f1@1][f1@2]")));
}

TEST_CASE("property: the dynamic program equals exhaustive rewriting") {
  const Amalgam t = glued({tlj_spec({2.2, 0}), tlj_spec({2.0, 0}), tlj_spec({4.0, 0})});
  oracle::Rewriter rw{t, {}};
  for (const auto& v : oracle::all_words(t, 0, 4, 2, true)) CHECK(listing(t, decompose_word(t, v)) == rw(v));
}

TEST_CASE("property: Frobenius reciprocity for words") {
  const Amalgam s = rep("S3", "Z3");
  const auto words = enumerate_general(s, 0, 0, 2, kUnbounded);
  for (const auto& u : words) {
    for (const auto& v : words) {
      for (const auto& w : words) {
        // (uv, w) = (v, u-bar w)
        CHECK(hom_dim_words(s, concat(u, v), w) == hom_dim_words(s, v, concat(dual_word(s, u), w)));
      }
    }
  }
}

TEST_CASE("property: reduced words are pairwise non-isomorphic irreducibles") {
  const Amalgam s = rep("Z3", "Z2");
  const auto reduced = enumerate_reduced(s, 0, 0, 4, kUnbounded);
  for (const auto& w : reduced) {
    for (const auto& w2 : reduced) CHECK(hom_dim_words(s, w, w2) == (w == w2 ? 1u : 0u));
  }
}

TEST_CASE("the free product as a spec satisfies the fusion axioms") {
  const Amalgam s = rep("S3", "Z2");
  const CategorySpec fp = free_product_spec(s);
  CHECK_FALSE(fp.finite());
  CHECK(validate(fp, 3).ok());
  CHECK(fp.fuse("[std@1]", "[std@1]").terms.size() == 3);
  CHECK(fp.dual("[std@1][g@2]") == "[g@2][std@1]");
  CHECK(underlying_amalgam(fp) != nullptr);
  CHECK(underlying_amalgam(s.factor(0)) == nullptr);
}

TEST_CASE("pointed specs") {
  const PointedSpec p = pointed_tlj({2.5, 0});
  CHECK(box_dims(p, 0) == std::vector<std::uint64_t>{1});
  CHECK(box_dims(p, 4) == oracle::ballot_end_dims(4));

  PointedSpec bad = p;
  bad.b = "a";
  CHECK_THROWS_AS(check_pointed(bad), ArgumentError);
  bad = p;
  bad.point = Bundle{"a", "b", {}};
  CHECK_THROWS_AS(check_pointed(bad), ArgumentError);

  const PointedSpec fc = free_compose(p, pointed_tlj({3.0, 0}));
  CHECK_NOTHROW(check_pointed(fc));
  CHECK(box_dims(fc, 4) == std::vector<std::uint64_t>{1, 1, 3, 12, 55});

  const auto verdict = nondegenerate(p, 3);
  CHECK(verdict.nondegenerate);
  CHECK(verdict.unreached.empty());
}

TEST_CASE("property: Fuss-Catalan for free compositions of several TLJ pairs") {
  for (const auto& [d1, d2] : {std::pair{2.0, 3.0}, std::pair{3.5, 2.5}, std::pair{4.0, 4.0}}) {
    const PointedSpec fc = free_compose(pointed_tlj({d1, 0}), pointed_tlj({d2, 0}));
    const auto dims = box_dims(fc, 5);
    for (std::size_t n = 0; n < dims.size(); ++n) CHECK(dims[n] == oracle::fuss_catalan(n));
  }
}
