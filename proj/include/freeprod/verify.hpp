#pragma once

// Batch verification of the realization: unitarity of the structure maps,
// module and commutant coherence, the bridge to the fusion layer, extension
// of 2-cells, assembly relations and the laws of the universal functor.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "freeprod/realization.hpp"

namespace freeprod {

struct CheckResult {
  std::string identity;
  std::string tag;
  std::string instance;  // instance count and the worst instance
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

struct VerificationReport {
  std::string amalgam;
  std::size_t depth = 0;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  bool ok() const;
  /// nullptr when absent.
  const CheckResult* find(const std::string& tag) const;
};

struct VerifyOptions {
  std::size_t depth = 3;
  std::uint64_t seed = 20240601;
  /// Replaces every per-check tolerance when set.
  std::optional<double> tolerance;
};

/// Check groups, usable one at a time.
enum class CheckGroup {
  factors,     // conjugate equations, standardness, completeness
  unitarity,   // structure maps are unitary
  coherence,   // module and commutant diagrams
  grading,     // bridge to the fusion layer, strictness of word actions
  extension,   // vacuum components, extension dimension, full faithfulness
  assembly,    // assembly relations
  functor,     // laws of the universal functor
};

std::vector<CheckGroup> all_check_groups();
std::string to_string(CheckGroup g);

VerificationReport verify_suite(const FreeRealization& r, const VerifyOptions& options = {});
VerificationReport verify_groups(const FreeRealization& r, const std::vector<CheckGroup>& groups,
                                 const VerifyOptions& options = {});

/// Tolerance defaults: construction-level identities and diagram chases.
inline constexpr double kExactTolerance = 1e-10;
inline constexpr double kDiagramTolerance = 1e-8;

}  // namespace freeprod
