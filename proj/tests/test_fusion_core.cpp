#include <doctest.h>

#include "freeprod/fusion.hpp"
#include "freeprod/rep_groups.hpp"

using namespace freeprod;

namespace {

IrrInfo irr(const std::string& label, const std::string& dual, double qdim) {
  IrrInfo i;
  i.label = label;
  i.source = "x";
  i.target = "x";
  i.dual = dual;
  i.qdim = qdim;
  return i;
}

// Rep(Z3) written out by hand.
FusionTable z3_table() {
  FusionTable t;
  t.name = "Z3";
  t.zero_cells = {"x"};
  t.units = {{"x", "1"}};
  t.irreducibles = {irr("1", "1", 1), irr("g", "g2", 1), irr("g2", "g", 1)};
  const std::vector<std::string> l{"1", "g", "g2"};
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) t.fusion.push_back({l[a], l[b], {{l[(a + b) % 3], 1}}});
  }
  return t;
}

}  // namespace

TEST_CASE("labels compare naturally") {
  CHECK(compare_labels("f2", "f10") < 0);
  CHECK(compare_labels("f10", "f2") > 0);
  CHECK(compare_labels("g", "g2") < 0);
  CHECK(compare_labels("a", "a") == 0);
  CHECK(LabelLess{}("f9_ab", "f10_aa"));
}

TEST_CASE("a hand-written table validates") {
  const CategorySpec spec = make_table_spec(z3_table());
  const auto report = validate(spec, 4);
  CHECK(report.ok());
  CHECK(report.irreducibles_checked == 3);
  CHECK(spec.unit("x") == "1");
  CHECK(spec.fuse("g", "g") == Bundle{"x", "x", {{"g2", 1}}});
  CHECK(spec.dual("g") == "g2");
  CHECK_THROWS_AS(spec.info("h"), LookupError);
}

TEST_CASE("a broken dual involution is a violation naming the irreducible") {
  FusionTable t = z3_table();
  t.irreducibles[2].dual = "g2";
  const auto report = validate(make_table_spec(t), 4);
  REQUIRE_FALSE(report.ok());
  bool named = false;
  for (const auto& v : report.violations) named = named || (v.check == "dual-involution" && v.witness.find("g") != std::string::npos);
  CHECK(named);
}

TEST_CASE("malformed tables are structural errors") {
  FusionTable dangling = z3_table();
  dangling.fusion.push_back({"g", "h", {{"1", 1}}});
  CHECK_THROWS_AS(make_table_spec(dangling), StructuralError);

  FusionTable no_unit = z3_table();
  no_unit.units.clear();
  CHECK_THROWS_AS(make_table_spec(no_unit), StructuralError);

  FusionTable dup = z3_table();
  dup.irreducibles.push_back(irr("g", "g2", 1));
  CHECK_THROWS_AS(make_table_spec(dup), StructuralError);
}

TEST_CASE("multiplicities that break associativity are reported") {
  FusionTable t = z3_table();
  for (auto& e : t.fusion) {
    if (e.left == "g" && e.right == "g") e.result = {{"1", 1}};
  }
  CHECK_FALSE(validate(make_table_spec(t), 4).ok());
}

TEST_CASE("to_table reads a finite spec back") {
  const CategorySpec spec = make_table_spec(z3_table());
  const FusionTable back = to_table(spec);
  CHECK(back.irreducibles.size() == 3);
  CHECK(back.fusion.size() == 9);
  CHECK(make_table_spec(back).fuse("g2", "g2") == spec.fuse("g2", "g2"));
}

TEST_CASE("bundles: tensor, dual, hom and qdim") {
  const CategorySpec spec = builtin_category("S3")->spec();
  const Bundle std2 = tensor(spec, single(spec, "std"), single(spec, "std"));
  CHECK(std2 == Bundle{"a", "a", {{"triv", 1}, {"sgn", 1}, {"std", 1}}});
  CHECK(bundle_qdim(spec, std2) == doctest::Approx(4.0));
  CHECK(hom_dim(std2, std2) == 3);
  CHECK(dual(spec, single(spec, "sgn")) == single(spec, "sgn"));
  CHECK(bundle_exact_qdim(spec, std2) == Rational(4));
  CHECK_THROWS_AS(decompose_tensor(spec, {}), Error);
  CHECK(decompose_tensor(spec, {}, std::string("a")) == single(spec, "triv"));
}

TEST_CASE("property: left and right folds agree and qdim is multiplicative") {
  const CategorySpec spec = builtin_category("S3")->spec();
  const std::vector<IrrId> labels{"triv", "sgn", "std"};
  for (const auto& a : labels) {
    for (const auto& b : labels) {
      for (const auto& c : labels) {
        const std::vector<IrrId> seq{a, b, c};
        const Bundle l = decompose_tensor(spec, seq);
        CHECK(l == decompose_tensor_right(spec, seq));
        CHECK(bundle_qdim(spec, l) == doctest::Approx(spec.qdim(a) * spec.qdim(b) * spec.qdim(c)));
      }
    }
  }
}

TEST_CASE("property: Frobenius reciprocity N_ab^c = N_{c,b-bar}^a") {
  for (const char* name : {"S3", "Z4", "Z6"}) {
    const CategorySpec spec = builtin_category(name)->spec();
    for (const auto& a : spec.irreducibles()) {
      for (const auto& b : spec.irreducibles()) {
        for (const auto& c : spec.irreducibles()) {
          CHECK(spec.multiplicity(a, b, c) == spec.multiplicity(c, spec.dual(b), a));
        }
      }
    }
  }
}
