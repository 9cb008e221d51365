//
// sigmageom: geometry from a world function alone
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sigmageom/common.hpp"
#include "sigmageom/point.hpp"
#include "sigmageom/world_function.hpp"

namespace sigmageom {

/// Triangle-equality membership of R in the segment between P0 and P1.
/// signed_residual < 0 means R is inside the hollow of the segment surface,
/// > 0 outside; |signed_residual| <= tol_seg is membership.
struct MembershipResult {
  bool member = false;
  double residual = 0.0;         // |signed_residual|
  double signed_residual = 0.0;  // sqrt(2s(P0,R)) + sqrt(2s(P1,R)) - sqrt(2s(P0,P1))
};

MembershipResult segment_membership(const Point& p0, const Point& p1, const Point& r,
                                    const WorldFunction& g, double tol_seg);

struct TubeSample {
  double tau = 0.0;          // arc parameter along the chord, in (0, l)
  double rho_emp = 0.0;      // measured transverse radius of the segment surface
  double rho_formula = 0.0;  // closed-form reference where defined
  bool formula_defined = false;
  bool missing = false;      // no membership sign change on the probe range
};

struct TubeProfile {
  Point p0, p1;
  double length = 0.0;  // sqrt(2 sigma(P0,P1))
  std::vector<TubeSample> samples;

  std::string to_csv() const;  // columns tau,rho_emp,rho_formula
};

struct TubeOptions {
  int tau_samples = 50;
  int directions = 8;       // transverse rays averaged per tau
  double tol_seg = 0.0;     // 0 -> 1e-9 * length
  double probe_max = 0.0;   // 0 -> 10 * sqrt(l*d/2), falling back to 0.05*l
  int workers = 1;
};

/// Measures the segment-tube radius by bisecting the signed membership
/// residual along chart-transverse rays from the chord, and tabulates the
/// reference radius formula alongside.
TubeProfile tube_profile(const Point& p0, const Point& p1, const WorldFunction& g,
                         const TubeOptions& opts = {});

struct StraightSetOptions {
  int samples = 4000;        // draws; each is polished onto the set and filtered
  std::uint64_t seed = 0;
  double tol = kRelTol;      // collinearity acceptance, scale-normalized
  int knn = 15;              // neighborhood size for the local rank estimate
  double pca_threshold = 0.2;  // relative singular-value cutoff
  int min_accepted = 50;
  int workers = 1;
};

struct StraightSetResult {
  std::vector<Point> accepted;
  std::optional<int> local_dim;  // median local PCA rank; empty if too few samples
  std::vector<int> neighborhood_ranks;
};

/// Samples the set of points R with P0R collinear to P0P1 inside the box and
/// estimates its local dimension from k-nearest-neighbor clouds.
StraightSetResult straight_set(const Point& p0, const Point& p1, const WorldFunction& g,
                               const Box& box, const StraightSetOptions& opts = {});

struct CoverageReport {
  double ball_radius = 0.0;
  double covered_fraction = 0.0;
  double overlap_fraction = 0.0;  // mean covering-segment count minus coverage
  int samples = 0;
  double tol_seg = 0.0;
  double center_min_residual = 0.0;  // min membership residual of the center over the family
  std::uint64_t seed = 0;
};

nlohmann::json to_json(const CoverageReport& r);

struct BallOptions {
  int samples = 10000;
  double tol_seg = kRelTol;
  std::uint64_t seed = 0;
  int workers = 1;
};

/// Monte Carlo coverage of the ball by the family of vertical chords
/// parameterized over the disc: a point is covered when some family segment
/// holds it within tol_seg membership; covering segments are counted as
/// distinct residual minima over the family parameters.
CoverageReport ball_coverage(double ball_radius, const WorldFunction& g,
                             const BallOptions& opts = {});

/// Minimum membership residual of a single point over the chord family;
/// the per-point primitive behind ball_coverage.
double family_min_residual(const Point& p, double ball_radius, const WorldFunction& g,
                           int* covering_count = nullptr, double tol_seg = kRelTol);

}  // namespace sigmageom
