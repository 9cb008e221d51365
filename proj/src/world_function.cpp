//
// sigmageom: geometry from a world function alone
// SPDX-License-Identifier: Apache-2.0
//
#include "sigmageom/world_function.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace sigmageom {

namespace {

double squared_offset(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  return (p - q).squaredNorm();
}

double minkowski_interval(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  const double dt = p[0] - q[0];
  double spatial = 0.0;
  for (Eigen::Index i = 1; i < p.size(); ++i) {
    const double di = p[i] - q[i];
    spatial += di * di;
  }
  return 0.5 * (dt * dt - spatial);
}

}  // namespace

WorldFunction make_euclidean(int m) {
  if (m < 1) throw std::invalid_argument("make_euclidean: dimension must be >= 1");
  return WorldFunction("euclidean", m, {},
                       [](const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
                         return 0.5 * squared_offset(p, q);
                       });
}

WorldFunction make_minkowski(int m) {
  if (m < 2) throw std::invalid_argument("make_minkowski: need at least one spacelike direction");
  return WorldFunction("minkowski", m, {}, minkowski_interval);
}

WorldFunction make_deformed_minkowski(int m, double d) {
  if (m < 2) throw std::invalid_argument("make_deformed_minkowski: dimension must be >= 2");
  if (!(d > 0.0)) throw std::invalid_argument("make_deformed_minkowski: d must be > 0");
  return WorldFunction("deformed_minkowski", m, {{"d", d}},
                       [d](const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
                         const double s = minkowski_interval(p, q);
                         if (s > 0.0) return s + d;
                         if (s < 0.0) return s - d;
                         return 0.0;  // sgn(0) = 0 keeps sigma(P,P) = 0
                       });
}

WorldFunction make_deformed_euclidean(int m, double d) {
  if (m < 1) throw std::invalid_argument("make_deformed_euclidean: dimension must be >= 1");
  if (!(d > 0.0)) throw std::invalid_argument("make_deformed_euclidean: d must be > 0");
  return WorldFunction("deformed_euclidean", m, {{"d", d}},
                       [d](const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
                         const double se = 0.5 * squared_offset(p, q);
                         return se >= 2.0 * d ? se - d : 0.5 * se;
                       });
}

WorldFunction world_function_from_descriptor(const nlohmann::json& descriptor) {
  if (!descriptor.is_object()) throw std::invalid_argument("geometry descriptor must be an object");
  if (!descriptor.contains("name") || !descriptor["name"].is_string())
    throw std::invalid_argument("geometry descriptor: missing \"name\"");
  if (!descriptor.contains("dim") || !descriptor["dim"].is_number_integer())
    throw std::invalid_argument("geometry descriptor: missing integer \"dim\"");
  const std::string name = descriptor["name"].get<std::string>();
  const int m = descriptor["dim"].get<int>();

  auto need_d = [&]() {
    if (!descriptor.contains("d") || !descriptor["d"].is_number())
      throw std::invalid_argument("geometry descriptor: \"" + name + "\" requires \"d\"");
    return descriptor["d"].get<double>();
  };

  if (name == "euclidean") return make_euclidean(m);
  if (name == "minkowski") return make_minkowski(m);
  if (name == "deformed_minkowski") return make_deformed_minkowski(m, need_d());
  if (name == "deformed_euclidean") return make_deformed_euclidean(m, need_d());
  throw std::invalid_argument("geometry descriptor: unknown name \"" + name + "\"");
}

}  // namespace sigmageom
