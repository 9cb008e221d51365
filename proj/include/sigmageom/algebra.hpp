//
// sigmageom: geometry from a world function alone
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <Eigen/Core>
#include <vector>

#include "sigmageom/common.hpp"
#include "sigmageom/point.hpp"
#include "sigmageom/world_function.hpp"

namespace sigmageom {

/// (P0P1 . Q0Q1) = sigma(P0,Q1) + sigma(P1,Q0) - sigma(P0,Q0) - sigma(P1,Q1).
/// The only scalar product available once the world function is all there is.
double scalar_product(const SegVector& v, const SegVector& w, const WorldFunction& g);

enum class CausalType { positive, null, negative };

const char* to_string(CausalType t);

/// Squared norm 2*sigma(origin,end) with its sign class. The squared value is
/// the primitive; taking a square root of a negative-norm vector is never
/// required anywhere in the library.
struct CausalNorm {
  double norm_squared = 0.0;
  CausalType causal_type = CausalType::null;
};

CausalNorm norm(const SegVector& v, const WorldFunction& g, double tol_zero = kZeroTol);

/// Pairwise scalar products of the vectors base->points[i].
struct GramMatrix {
  Point base;
  std::vector<Point> points;
  Eigen::MatrixXd entries;  // symmetric by construction
};

GramMatrix gram_matrix(const Point& base, const std::vector<Point>& points,
                       const WorldFunction& g);

/// Raw determinant plus a Hadamard-style normalization by the diagonal,
/// which removes the length^(2n) scale so one threshold works everywhere.
struct GramDeterminant {
  double raw = 0.0;
  double normalized = 0.0;
};

GramDeterminant gram_determinant(const GramMatrix& gm, double tol_zero = kZeroTol);
GramDeterminant gram_determinant(const Point& base, const std::vector<Point>& points,
                                 const WorldFunction& g, double tol_zero = kZeroTol);

/// (v.w)^2 == |v|^2 |w|^2 within tol, scale-normalized. In non-Euclidean
/// geometries this admits vectors that are not chart-proportional.
bool is_collinear(const SegVector& v, const SegVector& w, const WorldFunction& g,
                  double tol = kRelTol);

/// Signed residual h = (v.w)^2 - |v|^2 |w|^2 and the scale used by the
/// predicate; exposed for samplers that chase the zero set itself.
double collinearity_residual(const SegVector& v, const SegVector& w, const WorldFunction& g,
                             double* scale = nullptr);

/// Equality in the squared form: (v.w) = |v|^2 and |v|^2 = |w|^2, which
/// stays real for negative-norm vectors and coincides with the length form
/// whenever both norms are nonnegative.
bool is_equal(const SegVector& v, const SegVector& w, const WorldFunction& g,
              double tol = kRelTol);

/// x_i(P) = (base->basis_i . base->P): covariant coordinates in the frame.
Eigen::VectorXd covariant_coordinates(const Point& p, const Frame& frame,
                                      const WorldFunction& g);

struct MetricTensors {
  Eigen::MatrixXd covariant;      // g_ik = frame Gram matrix
  Eigen::MatrixXd contravariant;  // its inverse
};

MetricTensors metric_tensors(const Frame& frame, const WorldFunction& g);

/// Angle from the cosine relation; defined only between positive-norm
/// vectors. Cosines beyond 1 + kRelTol are an error, smaller excess is
/// clamped as roundoff.
double angle_between(const SegVector& v, const SegVector& w, const WorldFunction& g);

/// Normalized Gram determinant of the frame; used as the degeneracy gate
/// everywhere a frame is consumed.
double frame_degeneracy(const Frame& frame, const WorldFunction& g);

}  // namespace sigmageom
