#include <doctest.h>

#include "freeprod/documents.hpp"
#include "freeprod/tlj.hpp"

using namespace freeprod;

namespace {

const char* kZ2 = R"({
  "name": "Z2",
  "exact": true,
  "zero_cells": ["x"],
  "irreducibles": [
    {"label": "1", "source": "x", "target": "x", "dual": "1", "qdim": 1},
    {"label": "s", "source": "x", "target": "x", "dual": "s", "qdim": "1/1"}
  ],
  "units": {"x": "1"},
  "fusion": [
    {"left": "1", "right": "1", "result": {"1": 1}},
    {"left": "1", "right": "s", "result": {"s": 1}},
    {"left": "s", "right": "1", "result": {"s": 1}},
    {"left": "s", "right": "s", "result": {"1": 1}}
  ]
})";

std::string parse_error(const std::string& text) {
  try {
    table_from_json(parse_json(text, "test"));
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("spec documents parse and validate") {
  const CategorySpec spec = spec_from_text(kZ2);
  CHECK(spec.name() == "Z2");
  CHECK(spec.exact());
  CHECK(validate(spec, 3).ok());
  CHECK(spec.fuse("s", "s") == Bundle{"x", "x", {{"1", 1}}});
}

TEST_CASE("spec documents round-trip byte for byte") {
  const Json once = table_to_json(table_from_json(parse_json(kZ2, "test")));
  const std::string text = once.dump(2);
  CHECK(table_to_json(table_from_json(parse_json(text, "again"))).dump(2) == text);
  CHECK(spec_to_json(spec_from_text(text)).dump(2) == text);
}

TEST_CASE("parse errors name the field") {
  CHECK(parse_error("{") .find("test") != std::string::npos);
  CHECK(parse_error(R"({"irreducibles": []})").find("zero_cells") != std::string::npos);
  Json doc = parse_json(kZ2, "test");
  doc["irreducibles"][1]["dual"] = 7;
  CHECK(parse_error(doc.dump()).find("irreducibles[1].dual") != std::string::npos);
  doc = parse_json(kZ2, "test");
  doc["irreducibles"][0]["qdim"] = "1/0";
  CHECK(parse_error(doc.dump()).find("irreducibles[0].qdim") != std::string::npos);
  doc = parse_json(kZ2, "test");
  doc["fusion"][0]["result"]["1"] = -1;
  CHECK_FALSE(parse_error(doc.dump()).empty());
}

TEST_CASE("pointed documents") {
  Json doc = parse_json(kZ2, "test");
  CHECK_FALSE(has_point(doc));
  doc["point"] = Json{{"a", "x"}, {"b", "x"}, {"terms", Json{{"s", 1}}}};
  CHECK(has_point(doc));
  // a = b is not a pointed 2-category.
  CHECK_THROWS_AS(pointed_from_json(doc), ArgumentError);
}

TEST_CASE("group and representation documents") {
  const Json g = parse_json(R"({"name": "Z2", "order": 2, "labels": ["e", "s"], "table": [[0, 1], [1, 0]]})", "g");
  const FiniteGroup group = group_from_json(g);
  CHECK(group.order == 2);
  CHECK(group.inv[1] == 1);
  const Json r = parse_json(R"({"irreps": [{"label": "1", "matrices": [[[1]], [[1]]]},
                                           {"label": "s", "matrices": [[[1]], [[[-1, 0]]]]}]})",
                            "r");
  const auto reps = reps_from_json(r, 2);
  CHECK(reps.size() == 2);
  CHECK(reps[1].matrices[1](0, 0) == Complex(-1.0, 0.0));
  CHECK_NOTHROW(ConcreteCategory::build(group, reps));
  CHECK_THROWS_AS(reps_from_json(r, 3), ParseError);
  CHECK_THROWS_AS(group_from_json(parse_json(R"({"order": 2, "table": [[0, 1]]})", "g")), ParseError);
}

TEST_CASE("reports round-trip, infinite deviations as null") {
  VerificationReport rep{"A*B", 3, 7, {}};
  rep.checks.push_back({"first", "first-tag", "2 instances", 1e-17, 1e-10, true});
  rep.checks.push_back({"second", "second-tag", "1 instance", std::numeric_limits<double>::infinity(), 1e-10, false});
  const Json j = report_to_json(rep);
  CHECK(j["pass"] == false);
  CHECK(j["checks"][1]["max_deviation"].is_null());
  const VerificationReport back = report_from_json(j);
  CHECK(back.checks.size() == 2);
  CHECK(std::isinf(back.checks[1].max_deviation));
  CHECK(report_to_json(back).dump(2) == j.dump(2));
}

TEST_CASE("decomposition documents") {
  const Amalgam am({tlj_spec({3.0, 0})}, {});
  const Word v = parse_word(am, "[f1@1][f1@1]");
  const Json j = decomposition_to_json(am, v, decompose_word(am, v));
  CHECK(j["terms"].size() == 2);
  CHECK(j["qdim"]["conserved"] == true);
  CHECK(j["qdim"]["word"].get<double>() == doctest::Approx(9.0));
}
