//
// sigmageom: geometry from a world function alone
// SPDX-License-Identifier: Apache-2.0
//
#include "sigmageom/algebra.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sigmageom {

namespace {

void check_dims(const SegVector& v, const SegVector& w, const WorldFunction& g) {
  if (v.dim() != g.chart_dim() || w.dim() != g.chart_dim())
    throw std::invalid_argument("scalar_product: chart dimension mismatch");
}

}  // namespace

double scalar_product(const SegVector& v, const SegVector& w, const WorldFunction& g) {
  check_dims(v, w, g);
  const auto& p0 = v.origin.coords;
  const auto& p1 = v.end.coords;
  const auto& q0 = w.origin.coords;
  const auto& q1 = w.end.coords;
  return g.sigma(p0, q1) + g.sigma(p1, q0) - g.sigma(p0, q0) - g.sigma(p1, q1);
}

const char* to_string(CausalType t) {
  switch (t) {
    case CausalType::positive: return "positive";
    case CausalType::null: return "null";
    case CausalType::negative: return "negative";
  }
  return "unknown";
}

CausalNorm norm(const SegVector& v, const WorldFunction& g, double tol_zero) {
  const double n2 = 2.0 * g(v.origin, v.end);
  CausalType t = CausalType::null;
  if (n2 > tol_zero) t = CausalType::positive;
  else if (n2 < -tol_zero) t = CausalType::negative;
  return {n2, t};
}

GramMatrix gram_matrix(const Point& base, const std::vector<Point>& points,
                       const WorldFunction& g) {
  if (points.empty()) throw std::invalid_argument("gram_matrix: empty point list");
  const int n = static_cast<int>(points.size());
  if (base.dim() != g.chart_dim())
    throw std::invalid_argument("gram_matrix: base dimension mismatch");

  std::vector<double> sigma_base(n);
  for (int i = 0; i < n; ++i) {
    if (points[i].dim() != g.chart_dim())
      throw std::invalid_argument("gram_matrix: point dimension mismatch");
    sigma_base[i] = g.sigma(base.coords, points[i].coords);
  }

  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = 2.0 * sigma_base[i];
    for (int k = i + 1; k < n; ++k) {
      const double e = sigma_base[i] + sigma_base[k] - g.sigma(points[i].coords, points[k].coords);
      m(i, k) = e;
      m(k, i) = e;
    }
  }
  return {base, points, std::move(m)};
}

GramDeterminant gram_determinant(const GramMatrix& gm, double tol_zero) {
  const double raw = gm.entries.determinant();
  double denom = 1.0;
  for (Eigen::Index i = 0; i < gm.entries.rows(); ++i)
    denom *= std::max(std::abs(gm.entries(i, i)), tol_zero);
  return {raw, raw / denom};
}

GramDeterminant gram_determinant(const Point& base, const std::vector<Point>& points,
                                 const WorldFunction& g, double tol_zero) {
  return gram_determinant(gram_matrix(base, points, g), tol_zero);
}

double collinearity_residual(const SegVector& v, const SegVector& w, const WorldFunction& g,
                             double* scale) {
  const double vw = scalar_product(v, w, g);
  const double v2 = 2.0 * g(v.origin, v.end);
  const double w2 = 2.0 * g(w.origin, w.end);
  if (scale) *scale = std::max({1.0, vw * vw, std::abs(v2 * w2)});
  return vw * vw - v2 * w2;
}

bool is_collinear(const SegVector& v, const SegVector& w, const WorldFunction& g, double tol) {
  double scale = 1.0;
  const double h = collinearity_residual(v, w, g, &scale);
  return std::abs(h) <= tol * scale;
}

bool is_equal(const SegVector& v, const SegVector& w, const WorldFunction& g, double tol) {
  const double vw = scalar_product(v, w, g);
  const double v2 = 2.0 * g(v.origin, v.end);
  const double w2 = 2.0 * g(w.origin, w.end);
  const double s1 = std::max({1.0, std::abs(vw), std::abs(v2)});
  const double s2 = std::max({1.0, std::abs(v2), std::abs(w2)});
  return std::abs(vw - v2) <= tol * s1 && std::abs(v2 - w2) <= tol * s2;
}

double frame_degeneracy(const Frame& frame, const WorldFunction& g) {
  return std::abs(gram_determinant(frame.origin, frame.basis, g).normalized);
}

Eigen::VectorXd covariant_coordinates(const Point& p, const Frame& frame,
                                      const WorldFunction& g) {
  if (frame.size() == 0) throw std::invalid_argument("covariant_coordinates: empty frame");
  if (frame_degeneracy(frame, g) <= kRankTol)
    throw std::invalid_argument("covariant_coordinates: degenerate frame");
  Eigen::VectorXd x(frame.size());
  const SegVector to_p{frame.origin, p};
  for (int i = 0; i < frame.size(); ++i)
    x[i] = scalar_product(SegVector{frame.origin, frame.basis[i]}, to_p, g);
  return x;
}

MetricTensors metric_tensors(const Frame& frame, const WorldFunction& g) {
  const GramMatrix gm = gram_matrix(frame.origin, frame.basis, g);
  if (std::abs(gram_determinant(gm).normalized) <= kRankTol)
    throw std::invalid_argument("metric_tensors: singular covariant tensor");
  Eigen::MatrixXd inv = gm.entries.inverse();
  return {gm.entries, std::move(inv)};
}

double angle_between(const SegVector& v, const SegVector& w, const WorldFunction& g) {
  const CausalNorm nv = norm(v, g);
  const CausalNorm nw = norm(w, g);
  if (nv.causal_type != CausalType::positive || nw.causal_type != CausalType::positive)
    throw std::domain_error("angle_between: angle requires positive-norm operands");
  const double c = scalar_product(v, w, g) / std::sqrt(nv.norm_squared * nw.norm_squared);
  if (std::abs(c) > 1.0 + kRelTol)
    throw std::domain_error("angle_between: cosine out of range beyond roundoff");
  return std::acos(std::clamp(c, -1.0, 1.0));
}

}  // namespace sigmageom
