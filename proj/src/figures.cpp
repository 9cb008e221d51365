//
// sigmageom: geometry from a world function alone
// SPDX-License-Identifier: Apache-2.0
//
#include "sigmageom/figures.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sigmageom/algebra.hpp"
#include "sigmageom/parallel.hpp"
#include "sigmageom/rng.hpp"

namespace sigmageom {

namespace {

double checked_sqrt_2sigma(const WorldFunction& g, const Eigen::VectorXd& a,
                           const Eigen::VectorXd& b) {
  const double s = 2.0 * g.sigma(a, b);
  if (s < 0.0)
    throw std::domain_error("segment_membership: negative world function, segment undefined");
  return std::sqrt(s);
}

double signed_membership(const WorldFunction& g, const Eigen::VectorXd& p0,
                         const Eigen::VectorXd& p1, const Eigen::VectorXd& r, double chord) {
  return checked_sqrt_2sigma(g, p0, r) + checked_sqrt_2sigma(g, p1, r) - chord;
}

}  // namespace

MembershipResult segment_membership(const Point& p0, const Point& p1, const Point& r,
                                    const WorldFunction& g, double tol_seg) {
  const double chord = checked_sqrt_2sigma(g, p0.coords, p1.coords);
  const double m = signed_membership(g, p0.coords, p1.coords, r.coords, chord);
  return {std::abs(m) <= tol_seg, std::abs(m), m};
}

TubeProfile tube_profile(const Point& p0, const Point& p1, const WorldFunction& g,
                         const TubeOptions& opts) {
  const double l = checked_sqrt_2sigma(g, p0.coords, p1.coords);
  if (!(l > 0.0)) throw std::invalid_argument("tube_profile: zero-length segment");
  const int m = g.chart_dim();

  double d = 0.0;
  if (auto it = g.params().find("d"); it != g.params().end()) d = it->second;
  const double probe_max =
      opts.probe_max > 0.0 ? opts.probe_max
                           : (d > 0.0 ? 10.0 * std::sqrt(l * d / 2.0) : 0.05 * l);
  const double tol_seg = opts.tol_seg > 0.0 ? opts.tol_seg : 1e-9 * l;

  // chord direction plus a fixed orthonormal transverse basis
  const Eigen::VectorXd chord_dir = (p1.coords - p0.coords).normalized();
  std::vector<Eigen::VectorXd> rays;
  {
    Rng ray_rng(0x7be5u);  // profile-internal stream; profiles are seedless
    int guard = 0;
    while (static_cast<int>(rays.size()) < opts.directions && guard++ < 100 * opts.directions) {
      Eigen::VectorXd u = ray_rng.normal_vector(m);
      u -= u.dot(chord_dir) * chord_dir;
      for (const auto& prev : rays)
        if (m > 2 && static_cast<int>(rays.size()) < m - 1) u -= u.dot(prev) * prev;
      const double n = u.norm();
      if (n > 1e-8) rays.push_back(u / n);
    }
    if (rays.empty()) throw std::invalid_argument("tube_profile: chart too small for transverse rays");
  }

  TubeProfile prof;
  prof.p0 = p0;
  prof.p1 = p1;
  prof.length = l;
  prof.samples.resize(opts.tau_samples);

  parallel_for(static_cast<std::size_t>(opts.tau_samples), opts.workers, [&](std::size_t i) {
    TubeSample& s = prof.samples[i];
    s.tau = l * (static_cast<double>(i) + 1.0) / (opts.tau_samples + 1.0);
    const Eigen::VectorXd c = p0.coords + (s.tau / l) * (p1.coords - p0.coords);

    double sum = 0.0;
    int found = 0;
    for (const auto& u : rays) {
      auto f = [&](double t) { return signed_membership(g, p0.coords, p1.coords, c + t * u, l); };
      double lo = 0.0, hi = probe_max;
      double flo = f(lo);
      if (flo > 0.0) {
        sum += 0.0;  // chord point already on or outside the surface
        ++found;
        continue;
      }
      if (f(hi) < 0.0) continue;  // no sign change in range: sample missing
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) <= 0.0) lo = mid;
        else hi = mid;
      }
      sum += 0.5 * (lo + hi);
      ++found;
    }
    if (found == 0) {
      s.missing = true;
    } else {
      s.rho_emp = sum / found;
    }

    if (2.0 * d < s.tau && s.tau < l - 2.0 * d && d > 0.0) {
      const double rho2 = 0.25 * d / ((l - d) * (l - d)) * (2.0 * s.tau - d) * (2.0 * l - 3.0 * d) *
                          (2.0 * l - 2.0 * s.tau - d);
      if (rho2 >= 0.0) {
        s.rho_formula = std::sqrt(rho2);
        s.formula_defined = true;
      }
    }
  });

  (void)tol_seg;
  return prof;
}

std::string TubeProfile::to_csv() const {
  std::string out = "tau,rho_emp,rho_formula\n";
  char buf[128];
  for (const auto& s : samples) {
    std::snprintf(buf, sizeof buf, "%.17g,", s.tau);
    out += buf;
    if (s.missing) out += "nan,";
    else {
      std::snprintf(buf, sizeof buf, "%.17g,", s.rho_emp);
      out += buf;
    }
    if (s.formula_defined) {
      std::snprintf(buf, sizeof buf, "%.17g", s.rho_formula);
      out += buf;
    } else {
      out += "nan";
    }
    out += '\n';
  }
  return out;
}

namespace {

/// Newton polish of R onto the collinearity zero set; returns true when the
/// scale-normalized residual drops below tol.
bool polish_collinear(const WorldFunction& g, const SegVector& v, Eigen::VectorXd& x,
                      double tol) {
  const int m = static_cast<int>(x.size());
  auto h_of = [&](const Eigen::VectorXd& r) {
    double scale = 1.0;
    const double h = collinearity_residual(v, SegVector{v.origin, Point(r)}, g, &scale);
    return std::pair<double, double>(h, scale);
  };
  for (int iter = 0; iter < 60; ++iter) {
    auto [h, scale] = h_of(x);
    if (std::abs(h) <= tol * scale) return true;
    Eigen::VectorXd grad(m);
    for (int j = 0; j < m; ++j) {
      const double hstep = 1e-7 * std::max(1.0, std::abs(x[j]));
      Eigen::VectorXd xp = x;
      xp[j] += hstep;
      grad[j] = (h_of(xp).first - h) / hstep;
    }
    const double gn = grad.squaredNorm();
    if (gn < 1e-300) return false;
    Eigen::VectorXd step = -(h / gn) * grad;
    double t = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 40; ++ls) {
      if (std::abs(h_of(x + t * step).first) < std::abs(h)) {
        x += t * step;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) return false;
  }
  auto [h, scale] = h_of(x);
  return std::abs(h) <= tol * scale;
}

}  // namespace

StraightSetResult straight_set(const Point& p0, const Point& p1, const WorldFunction& g,
                               const Box& box, const StraightSetOptions& opts) {
  if ((p0.coords - p1.coords).norm() == 0.0)
    throw std::invalid_argument("straight_set: coincident anchor points");
  const SegVector v{p0, p1};

  std::vector<std::optional<Eigen::VectorXd>> hits(opts.samples);
  parallel_for(static_cast<std::size_t>(opts.samples), opts.workers, [&](std::size_t i) {
    Rng rng = Rng::stream(opts.seed, i);
    Eigen::VectorXd x = rng.uniform_in(box);
    if (polish_collinear(g, v, x, opts.tol) && box.contains(x, 1e-9 * box.diameter()))
      hits[i] = std::move(x);
  });

  StraightSetResult out;
  for (auto& h : hits)
    if (h) out.accepted.push_back(Point(std::move(*h)));

  const int n = static_cast<int>(out.accepted.size());
  if (n < opts.min_accepted) return out;  // local_dim stays empty: undetermined

  // local PCA rank around every accepted point, medianed
  const int k = std::min(opts.knn, n - 1);
  out.neighborhood_ranks.resize(n);
  parallel_for(static_cast<std::size_t>(n), opts.workers, [&](std::size_t i) {
    std::vector<std::pair<double, int>> dist(n);
    for (int j = 0; j < n; ++j)
      dist[j] = {(out.accepted[i].coords - out.accepted[j].coords).norm(), j};
    std::nth_element(dist.begin(), dist.begin() + k, dist.end());
    Eigen::MatrixXd cloud(k + 1, g.chart_dim());
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(g.chart_dim());
    for (int j = 0; j <= k; ++j) mean += out.accepted[dist[j].second].coords;
    mean /= (k + 1);
    for (int j = 0; j <= k; ++j) cloud.row(j) = (out.accepted[dist[j].second].coords - mean).transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(cloud);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (Eigen::Index q = 0; q < sv.size(); ++q)
      if (sv[q] > opts.pca_threshold * sv[0]) ++rank;
    out.neighborhood_ranks[i] = rank;
  });

  std::vector<int> sorted = out.neighborhood_ranks;
  std::sort(sorted.begin(), sorted.end());
  out.local_dim = sorted[sorted.size() / 2];
  return out;
}

namespace {

/// |membership| of P against the chord with footprint (x, y), or a large
/// sentinel outside the disc.
double family_residual(const Eigen::VectorXd& p, double x, double y, double ball_radius,
                       const WorldFunction& g) {
  const double r2 = x * x + y * y;
  const double h2 = ball_radius * ball_radius - r2;
  if (h2 <= 0.0) return 1e18;
  const double h = std::sqrt(h2);
  Eigen::VectorXd a(3), b(3);
  a << x, y, h;
  b << x, y, -h;
  const double chord = std::sqrt(2.0 * g.sigma(a, b));
  return std::abs(std::sqrt(2.0 * g.sigma(a, p)) + std::sqrt(2.0 * g.sigma(b, p)) - chord);
}

struct BasinSearch {
  double best = 1e18;
  std::vector<std::pair<double, double>> minima;  // (x, y) of residual minima <= tol
};

BasinSearch scan_family(const Eigen::VectorXd& p, double ball_radius, const WorldFunction& g,
                        double tol_seg) {
  BasinSearch out;
  std::vector<std::pair<double, double>> starts;
  const int grid = 5;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      const double x = ball_radius * (-0.8 + 1.6 * i / (grid - 1.0));
      const double y = ball_radius * (-0.8 + 1.6 * j / (grid - 1.0));
      if (x * x + y * y < 0.96 * ball_radius * ball_radius) starts.emplace_back(x, y);
    }
  const double pr = std::hypot(p[0], p[1]);
  if (pr < 0.999 * ball_radius) starts.emplace_back(p[0], p[1]);  // footprint start

  const double dedup = 1e-3 * ball_radius;
  for (auto [x, y] : starts) {
    double f = family_residual(p, x, y, ball_radius, g);
    double step = ball_radius / 8.0;
    while (step > 1e-12 * ball_radius) {
      bool moved = false;
      const double cand[4][2] = {{x + step, y}, {x - step, y}, {x, y + step}, {x, y - step}};
      for (const auto& c : cand) {
        const double fc = family_residual(p, c[0], c[1], ball_radius, g);
        if (fc < f) {
          f = fc;
          x = c[0];
          y = c[1];
          moved = true;
        }
      }
      if (!moved) step *= 0.5;
    }
    out.best = std::min(out.best, f);
    if (f <= tol_seg) {
      bool fresh = true;
      for (const auto& m : out.minima)
        if (std::hypot(m.first - x, m.second - y) <= dedup) {
          fresh = false;
          break;
        }
      if (fresh) out.minima.emplace_back(x, y);
    }
  }
  return out;
}

}  // namespace

double family_min_residual(const Point& p, double ball_radius, const WorldFunction& g,
                           int* covering_count, double tol_seg) {
  if (g.chart_dim() != 3)
    throw std::invalid_argument("family_min_residual: chord family lives in a 3-coordinate chart");
  const BasinSearch s = scan_family(p.coords, ball_radius, g, tol_seg);
  if (covering_count) *covering_count = static_cast<int>(s.minima.size());
  return s.best;
}

CoverageReport ball_coverage(double ball_radius, const WorldFunction& g,
                             const BallOptions& opts) {
  if (g.chart_dim() != 3)
    throw std::invalid_argument("ball_coverage: chord family lives in a 3-coordinate chart");
  if (!(ball_radius > 0.0)) throw std::invalid_argument("ball_coverage: radius must be > 0");

  std::vector<int> counts(opts.samples, 0);
  std::vector<char> covered(opts.samples, 0);
  parallel_for(static_cast<std::size_t>(opts.samples), opts.workers, [&](std::size_t i) {
    Rng rng = Rng::stream(opts.seed, i);
    Eigen::VectorXd p(3);
    do {
      for (int j = 0; j < 3; ++j) p[j] = rng.uniform(-ball_radius, ball_radius);
    } while (p.squaredNorm() > ball_radius * ball_radius);
    const BasinSearch s = scan_family(p, ball_radius, g, opts.tol_seg);
    counts[i] = static_cast<int>(s.minima.size());
    covered[i] = s.best <= opts.tol_seg ? 1 : 0;
  });

  CoverageReport rep;
  rep.ball_radius = ball_radius;
  rep.samples = opts.samples;
  rep.tol_seg = opts.tol_seg;
  rep.seed = opts.seed;
  long covered_n = 0, count_sum = 0;
  for (int i = 0; i < opts.samples; ++i) {
    covered_n += covered[i];
    count_sum += counts[i];
  }
  rep.covered_fraction = opts.samples > 0 ? static_cast<double>(covered_n) / opts.samples : 0.0;
  const double mean_count = opts.samples > 0 ? static_cast<double>(count_sum) / opts.samples : 0.0;
  rep.overlap_fraction = mean_count - rep.covered_fraction;

  Eigen::VectorXd center = Eigen::VectorXd::Zero(3);
  rep.center_min_residual = scan_family(center, ball_radius, g, opts.tol_seg).best;
  return rep;
}

nlohmann::json to_json(const CoverageReport& r) {
  return nlohmann::json{{"ball_radius", r.ball_radius},
                        {"covered_fraction", r.covered_fraction},
                        {"overlap_fraction", r.overlap_fraction},
                        {"samples", r.samples},
                        {"tol_seg", r.tol_seg},
                        {"center_min_residual", r.center_min_residual},
                        {"seed", r.seed}};
}

}  // namespace sigmageom
