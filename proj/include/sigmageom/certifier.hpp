//
// sigmageom: geometry from a world function alone
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sigmageom/algebra.hpp"
#include "sigmageom/common.hpp"
#include "sigmageom/point.hpp"
#include "sigmageom/solver.hpp"
#include "sigmageom/world_function.hpp"

namespace sigmageom {

struct CertifyOptions {
  Box domain;                     // sampled region of the chart
  int samples = 2000;             // tuples per candidate dimension
  int linearity_pairs = 2000;
  int continuity_targets = 12;
  int starts = 256;               // multi-start budget inside the continuity check
  double tol_rank = kRankTol;
  double tol_eig_rel = kEigRelTol;
  double tol_solve = kSolveTol;
  double tol_linearity = kRelTol;
  std::uint64_t seed = 0;
  int workers = 1;
  int frame_sweep = 1;            // >1 repeats the frame-based checks on extra frames
};

/// Dimension scan: largest n whose n-point Gram determinants do not all
/// vanish while the (n+1)-point ones do. `dim` empty means no candidate
/// separated cleanly inside the scanned range (a non-Euclidean signal).
struct DimensionScan {
  std::optional<int> dim;
  Frame frame;                 // maximizing tuple at the detected (or fallback) rank
  std::vector<double> max_normalized_det;  // index k-1: max |F^_k| over samples
  double vanish_residual = 0.0;            // max |F^_{n+1}| (the quantity required to vanish)
};

DimensionScan detect_dimension(const WorldFunction& g, const Box& domain, int samples,
                               std::uint64_t seed, double tol_rank = kRankTol, int workers = 1);

struct ResidualReport {
  double max_residual = 0.0;
  double mean_residual = 0.0;
  std::vector<Point> worst_witness;
};

/// Quadratic-expansion check: sigma against the frame metric applied to
/// covariant coordinate differences, on sampled point pairs.
ResidualReport check_linearity(const WorldFunction& g, const Frame& frame, const Box& domain,
                               int pairs, std::uint64_t seed, int workers = 1);

struct EigenReport {
  Eigen::VectorXd eigenvalues;
  int n_positive = 0;
  int n_negative = 0;
  bool pass = false;
  double worst_residual = 0.0;  // max(0, -lambda_min) / max|g_ik|
};

EigenReport check_positivity(const WorldFunction& g, const Frame& frame,
                             double tol_eig_rel = kEigRelTol);

struct UniquenessReport {
  int targets = 0;
  int unique_targets = 0;
  int empty_targets = 0;
  int multivalued_targets = 0;
  bool undetermined = false;    // solver budget ran out on some target
  double worst_residual = 0.0;  // worst accepted solution residual
  std::vector<Point> worst_witness;
};

/// Solves the frame-coordinate system for sampled targets and counts
/// solution clusters; exactly one per target is the Euclidean behavior.
UniquenessReport check_continuity(const WorldFunction& g, const Frame& frame, const Box& domain,
                                  int targets, const SolverOptions& solver_opts);

struct ConditionResult {
  bool pass = false;
  double worst_residual = 0.0;
  std::vector<Point> witness;
  std::string note;
};

/// Aggregated pass/fail of the four Euclidean-structure conditions on a
/// sampled domain. A pass certifies consistency at the sampled scale only,
/// which the report states explicitly.
struct CertificationReport {
  std::optional<int> detected_dim;
  std::map<std::string, ConditionResult> conditions;  // keys "I".."IV"
  std::uint64_t seed = 0;
  int samples = 0;
  std::string scope = "consistency at the sampled scale; not a universal proof";

  bool all_pass() const;
  bool undetermined() const;
};

nlohmann::json to_json(const CertificationReport& r);

CertificationReport certify(const WorldFunction& g, const CertifyOptions& opts);

}  // namespace sigmageom
