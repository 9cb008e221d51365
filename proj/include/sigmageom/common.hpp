//
// sigmageom: geometry from a world function alone
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <cstdint>

namespace sigmageom {

// Default tolerances. Predicates are scale-normalized as documented at
// each call site; these are the knobs the CLI exposes.
inline constexpr double kRelTol   = 1e-9;   // relative tolerance for algebraic predicates
inline constexpr double kRankTol  = 1e-7;   // threshold on Hadamard-normalized Gram determinants
inline constexpr double kSolveTol = 1e-8;   // accepted residual for equivalence solves
inline constexpr double kEigRelTol = 1e-9;  // eigenvalue positivity margin, relative to max |g_ik|
inline constexpr double kZeroTol  = 1e-12;  // absolute floor when normalizing by near-zero diagonals

}  // namespace sigmageom
