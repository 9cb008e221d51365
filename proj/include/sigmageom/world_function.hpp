//
// sigmageom: geometry from a world function alone
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <functional>
#include <map>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "sigmageom/point.hpp"

namespace sigmageom {

/// A named evaluator sigma(P, Q) -> half squared distance. This is the whole
/// geometry: every other quantity in the library is computed from calls to
/// this function and nothing else.
///
/// Evaluators are pure and stateless; concurrent evaluation is safe.
class WorldFunction {
 public:
  using Evaluator = std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>;

  WorldFunction(std::string name, int chart_dim, std::map<std::string, double> params,
                Evaluator eval)
      : name_(std::move(name)),
        chart_dim_(chart_dim),
        params_(std::move(params)),
        eval_(std::move(eval)) {
    if (chart_dim_ < 1) throw std::invalid_argument("WorldFunction: chart_dim must be >= 1");
  }

  const std::string& name() const { return name_; }
  int chart_dim() const { return chart_dim_; }
  const std::map<std::string, double>& params() const { return params_; }

  /// Raw evaluation on coordinate vectors (hot path, sizes assumed checked).
  double sigma(const Eigen::VectorXd& p, const Eigen::VectorXd& q) const { return eval_(p, q); }

  double operator()(const Point& p, const Point& q) const {
    if (p.dim() != chart_dim_ || q.dim() != chart_dim_)
      throw std::invalid_argument("WorldFunction: point dimension does not match chart");
    return eval_(p.coords, q.coords);
  }

 private:
  std::string name_;
  int chart_dim_;
  std::map<std::string, double> params_;
  Evaluator eval_;
};

/// sigma_E(x, x') = 1/2 sum_i (x_i - x'_i)^2.
WorldFunction make_euclidean(int m);

/// sigma_M(x, x') = 1/2 [ (x_0 - x'_0)^2 - sum_{i>=1} (x_i - x'_i)^2 ];
/// coordinate 0 is timelike, so m >= 2.
WorldFunction make_minkowski(int m);

/// sigma = sigma_M + sgn(sigma_M) * d, with sgn(0) = 0 so the diagonal
/// stays zero. d > 0, units of length^2.
WorldFunction make_deformed_minkowski(int m, double d);

/// sigma = sigma_E - d where sigma_E >= 2d, else sigma_E / 2. Continuous at
/// the seam and zero on the diagonal. d > 0, units of length^2.
WorldFunction make_deformed_euclidean(int m, double d);

/// Builds a geometry from a descriptor record
/// { "name": "euclidean"|"minkowski"|"deformed_minkowski"|"deformed_euclidean",
///   "dim": m, "d": optional }.
WorldFunction world_function_from_descriptor(const nlohmann::json& descriptor);

}  // namespace sigmageom
