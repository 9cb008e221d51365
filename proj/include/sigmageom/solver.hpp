//
// sigmageom: geometry from a world function alone
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sigmageom/algebra.hpp"
#include "sigmageom/common.hpp"
#include "sigmageom/point.hpp"
#include "sigmageom/world_function.hpp"

namespace sigmageom {

struct SolverOptions {
  std::optional<Box> box;       // search region; defaults to the inflated bounding
                                // box of the problem's given points
  int starts = 512;             // multi-start budget (low-discrepancy placement)
  std::uint64_t seed = 0;
  double tol_solve = kSolveTol; // acceptance threshold on normalized residuals
  double dedup_radius = 0.0;    // 0 -> 1e-4 * box diameter
  int max_iterations = 120;
  int workers = 1;
};

enum class SolutionClass { empty, unique, discrete, continuum };

const char* to_string(SolutionClass c);

struct Solution {
  Point point;
  double residual = 0.0;  // max |normalized equation residual|, re-evaluated
  int nullity = 0;        // Jacobian null directions at the solution
  int branch = -1;        // sum solves: index of the R branch that produced it
};

struct SearchMeta {
  std::uint64_t seed = 0;
  int starts = 0;
  Box box;
  double dedup_radius = 0.0;
  double tol_solve = kSolveTol;
};

/// Clustered result of an equivalence-equation solve. `solutions` holds the
/// cluster representatives, lexicographically ordered, every one within
/// tol_solve on re-evaluation and pairwise farther apart than dedup_radius.
struct SolutionSet {
  std::vector<Solution> solutions;
  SolutionClass classification = SolutionClass::empty;
  int est_dim = 0;               // continuum only: manifold dimension estimate
  bool budget_exhausted = false; // no start converged
  SearchMeta meta;
};

nlohmann::json to_json(const SolutionSet& s);

/// Residual map r(x) for a least-squares search; writes n_equations entries.
using ResidualFn = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

/// Multi-start damped Gauss-Newton on an arbitrary residual system, with
/// dedup clustering and continuum detection (Jacobian numerical nullity
/// plus confirmation re-solves along null directions). The workhorse under
/// every equivalence solve and the continuity check.
SolutionSet least_squares_multistart(const ResidualFn& residual, int n_equations,
                                     const Box& box, const SolverOptions& opts);

/// All Q1 in the box with P0P1 = Q0Q1 in the two-equation squared form.
SolutionSet solve_equal(const Point& p0, const Point& p1, const Point& q0,
                        const WorldFunction& g, const SolverOptions& opts = {});

struct SumResult {
  SolutionSet r;   // S0R = P0P1
  SolutionSet s1;  // RS1 = Q0Q1, union over R branches, tagged by branch
};

/// Vector sum via the two-stage transport construction.
SumResult solve_sum(const SegVector& v, const SegVector& w, const Point& s0,
                    const WorldFunction& g, const SolverOptions& opts = {});

/// S1 with S0S1 = alpha * P0P1 in squared form; alpha = 0 short-circuits to
/// S1 = S0 since the sign factor is undefined there.
SolutionSet solve_scale(const SegVector& v, double alpha, const Point& s0,
                        const WorldFunction& g, const SolverOptions& opts = {});

struct OriginIndependenceReport {
  bool all_equal = false;            // every branch pair matched
  std::vector<std::vector<bool>> pairwise;  // [i][j]: sum at S0 (branch i) equals sum at S0' (branch j)
  SumResult at_s0;
  SumResult at_s0_prime;
};

/// Does the sum of v and w depend on the chosen origin? Multivariant sums
/// produce the full pairwise equality matrix over branch combinations.
OriginIndependenceReport origin_independence_check(const SegVector& v, const SegVector& w,
                                                   const Point& s0, const Point& s0_prime,
                                                   const WorldFunction& g,
                                                   const SolverOptions& opts = {});

/// Frame-mediated equality: (v . O->S_k) = (w . O->S_k) for every frame
/// point, each comparison scale-normalized.
bool equality_in_frame(const SegVector& v, const SegVector& w, const Frame& frame,
                       const WorldFunction& g, double tol = kRelTol);

struct EqualityComparison {
  bool sigma_equal = false;
  std::vector<bool> frame_equal;
  bool frames_agree = true;  // all frames delivered the same verdict
};

/// Puts the two-equation equality and the frame-mediated equality side by
/// side; disagreement between frames is the frame-dependence witness.
EqualityComparison compare_equality_definitions(const SegVector& v, const SegVector& w,
                                                const std::vector<Frame>& frames,
                                                const WorldFunction& g, double tol = kRelTol);

}  // namespace sigmageom
