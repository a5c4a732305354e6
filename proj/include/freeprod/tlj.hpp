#pragma once

// Temperley-Lieb-Jones fusion data in the generic regime delta >= 2.

#include <cstddef>

#include "freeprod/free_fusion.hpp"
#include "freeprod/fusion.hpp"

namespace freeprod {

struct TljParams {
  double delta = 2.0;
  std::size_t level_hint = 0;
};

/// S_n(delta): S_0 = 1, S_1 = delta, S_{n+1} = delta S_n - S_{n-1}.
double chebyshev_dim(double delta, std::size_t n);

/// One 0-cell "a", irreducibles f0, f1, ... (lazy; rank of f_n is n).
/// Exact when delta is an integer.  Throws ParameterError for delta < 2.
CategorySpec tlj_spec(const TljParams& params);

/// Two 0-cells a, b.  Irreducibles f<n>_<xy>: even n on aa and bb, odd n on
/// ab and ba.  The point is f1_ab.
PointedSpec pointed_tlj(const TljParams& params);

}  // namespace freeprod
