#pragma once

// JSON documents: category specs, group and representation files,
// decompositions and verification reports.

#include <string>
#include <vector>

#include <json.hpp>

#include "freeprod/free_fusion.hpp"
#include "freeprod/rep_groups.hpp"
#include "freeprod/verify.hpp"

namespace freeprod {

using Json = nlohmann::ordered_json;

/// Spec document:
///   {"name", "exact", "tolerance", "zero_cells": [...],
///    "irreducibles": [{"label", "source", "target", "dual", "qdim"}],
///    "units": {cell: label},
///    "fusion": [{"left", "right", "result": {label: mult}}]}
/// "name", "exact" and "tolerance" are optional.  qdim is a number, or a
/// string "p/q" in exact specs.  An optional "point": {"a", "b", "terms"}
/// makes the spec pointed.  Throws ParseError naming the offending field.
FusionTable table_from_json(const Json& doc);
Json table_to_json(const FusionTable& table);

CategorySpec spec_from_text(const std::string& text);
/// Finite specs only.
Json spec_to_json(const CategorySpec& spec);

bool has_point(const Json& doc);
PointedSpec pointed_from_json(const Json& doc);

/// Group document: {"name", "order", "labels": [...], "table": [[...], ...]}
/// where table[g][h] is the index of gh.
FiniteGroup group_from_json(const Json& doc);
/// Representation document: {"irreps": [{"label", "matrices": [M_0, ...]}]}
/// with one matrix per group element, each a list of rows of entries; an
/// entry is a number or a pair [re, im].
std::vector<UnitaryRep> reps_from_json(const Json& doc, std::size_t order);

Json decomposition_to_json(const Amalgam& am, const Word& v, const FreeDecomposition& d);

/// Infinite deviations are written as null.
Json report_to_json(const VerificationReport& report);
VerificationReport report_from_json(const Json& doc);

/// Parses JSON text; throws ParseError with the position.
Json parse_json(const std::string& text, const std::string& origin);
std::string read_file(const std::string& path);

}  // namespace freeprod
