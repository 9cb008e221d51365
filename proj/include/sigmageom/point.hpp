//
// sigmageom: geometry from a world function alone
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <Eigen/Core>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace sigmageom {

/// A location given by chart coordinates. The chart dimension is the
/// coordinate count; it is unrelated to the geometric dimension a world
/// function may turn out to have.
struct Point {
  Eigen::VectorXd coords;

  Point() = default;
  explicit Point(Eigen::VectorXd c) : coords(std::move(c)) { validate(); }
  Point(std::initializer_list<double> c)
      : coords(Eigen::Map<const Eigen::VectorXd>(c.begin(),
                                                 static_cast<Eigen::Index>(c.size()))) {
    validate();
  }

  int dim() const { return static_cast<int>(coords.size()); }

  void validate() const {
    if (coords.size() == 0) throw std::invalid_argument("Point: empty coordinate list");
    if (!coords.allFinite()) throw std::invalid_argument("Point: non-finite coordinate");
  }
};

/// Ordered pair of points; the only vector-like object available when the
/// world function is the sole structure.
struct SegVector {
  Point origin;
  Point end;

  SegVector() = default;
  SegVector(Point o, Point e) : origin(std::move(o)), end(std::move(e)) {
    if (origin.dim() != end.dim())
      throw std::invalid_argument("SegVector: origin/end chart dimension mismatch");
  }

  int dim() const { return origin.dim(); }
  Eigen::VectorXd chart_offset() const { return end.coords - origin.coords; }
};

/// An origin plus basis points, the raw material for coordinates and
/// metric tensors.
struct Frame {
  Point origin;
  std::vector<Point> basis;

  int dim() const { return origin.dim(); }
  int size() const { return static_cast<int>(basis.size()); }
};

/// Axis-aligned sampling box in chart coordinates.
struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  Box() = default;
  Box(Eigen::VectorXd l, Eigen::VectorXd h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo.size() != hi.size() || lo.size() == 0)
      throw std::invalid_argument("Box: bound size mismatch");
    if ((hi - lo).minCoeff() < 0) throw std::invalid_argument("Box: hi < lo");
  }

  static Box cube(int dim, double lo_v, double hi_v) {
    return Box(Eigen::VectorXd::Constant(dim, lo_v), Eigen::VectorXd::Constant(dim, hi_v));
  }

  /// Bounding box of the given points, inflated about its center. Axes with
  /// zero extent are opened up to `min_half_width` so the box stays usable
  /// as a search region.
  static Box around(const std::vector<Point>& pts, double inflate = 3.0,
                    double min_half_width = 1.0);

  int dim() const { return static_cast<int>(lo.size()); }
  double diameter() const { return (hi - lo).norm(); }
  bool contains(const Eigen::VectorXd& x, double slack = 0.0) const {
    return (x.array() >= lo.array() - slack).all() && (x.array() <= hi.array() + slack).all();
  }
  Eigen::VectorXd clamp(Eigen::VectorXd x) const {
    return x.cwiseMax(lo).cwiseMin(hi);
  }
};

inline Box Box::around(const std::vector<Point>& pts, double inflate, double min_half_width) {
  if (pts.empty()) throw std::invalid_argument("Box::around: no points");
  Eigen::VectorXd lo = pts.front().coords, hi = pts.front().coords;
  for (const auto& p : pts) {
    lo = lo.cwiseMin(p.coords);
    hi = hi.cwiseMax(p.coords);
  }
  Eigen::VectorXd center = 0.5 * (lo + hi);
  Eigen::VectorXd half = (0.5 * inflate * (hi - lo)).cwiseMax(min_half_width);
  return Box(center - half, center + half);
}

}  // namespace sigmageom
