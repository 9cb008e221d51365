//
// sigmageom: geometry from a world function alone
// SPDX-License-Identifier: Apache-2.0
//
#include "sigmageom/solver.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sigmageom/parallel.hpp"
#include "sigmageom/rng.hpp"

namespace sigmageom {

namespace {

struct Converged {
  Eigen::VectorXd x;
  double residual;  // max |r_i|
};

double max_abs(const Eigen::VectorXd& r) { return r.cwiseAbs().maxCoeff(); }

void numeric_jacobian(const ResidualFn& residual, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& r0, Eigen::MatrixXd& jac) {
  Eigen::VectorXd xp = x;
  Eigen::VectorXd rp(r0.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double h = 1e-7 * std::max(1.0, std::abs(x[j]));
    xp[j] = x[j] + h;
    residual(xp, rp);
    jac.col(j) = (rp - r0) / h;
    xp[j] = x[j];
  }
}

/// Damped Gauss-Newton with a min-norm step; iterates until the line search
/// stalls so solutions are polished well past the acceptance threshold
/// (tangent intersections converge linearly and need the extra digits).
std::optional<Converged> refine(const ResidualFn& residual, int n_eq, Eigen::VectorXd x,
                                const SolverOptions& opts) {
  Eigen::VectorXd r(n_eq), r_try(n_eq);
  residual(x, r);
  double f = r.squaredNorm();
  Eigen::MatrixXd jac(n_eq, x.size());

  for (int iter = 0; iter < opts.max_iterations && f > 1e-32; ++iter) {
    numeric_jacobian(residual, x, r, jac);
    Eigen::VectorXd step = jac.completeOrthogonalDecomposition().solve(-r);
    if (!step.allFinite()) break;

    double t = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 45; ++ls) {
      Eigen::VectorXd x_try = x + t * step;
      residual(x_try, r_try);
      const double f_try = r_try.squaredNorm();
      if (std::isfinite(f_try) && f_try < f * (1.0 - 1e-12)) {
        x = std::move(x_try);
        r = r_try;
        f = f_try;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) break;  // stalled at the achievable floor
  }

  const double res = max_abs(r);
  if (!std::isfinite(res) || res > opts.tol_solve) return std::nullopt;
  return Converged{std::move(x), res};
}

struct JacobianRank {
  int nullity = 0;
  Eigen::MatrixXd null_basis;  // columns: directions with negligible singular value
};

JacobianRank jacobian_rank(const ResidualFn& residual, const Eigen::VectorXd& x, int n_eq) {
  Eigen::VectorXd r0(n_eq);
  residual(x, r0);
  Eigen::MatrixXd jac(n_eq, x.size());
  numeric_jacobian(residual, x, r0, jac);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double s_max = sv.size() > 0 ? sv[0] : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > kRankTol * s_max && sv[i] > 0.0) ++rank;
  JacobianRank out;
  out.nullity = static_cast<int>(x.size()) - rank;
  out.null_basis = svd.matrixV().rightCols(out.nullity);
  return out;
}

}  // namespace

const char* to_string(SolutionClass c) {
  switch (c) {
    case SolutionClass::empty: return "empty";
    case SolutionClass::unique: return "unique";
    case SolutionClass::discrete: return "discrete";
    case SolutionClass::continuum: return "continuum";
  }
  return "unknown";
}

SolutionSet least_squares_multistart(const ResidualFn& residual, int n_equations,
                                     const Box& box, const SolverOptions& opts) {
  if (opts.starts < 1) throw std::invalid_argument("least_squares_multistart: starts < 1");
  const int dim = box.dim();
  const double dedup =
      opts.dedup_radius > 0.0 ? opts.dedup_radius : 1e-4 * std::max(box.diameter(), 1e-12);

  // every start is an independent work item with its own placement
  HaltonSequence halton(dim, opts.seed);
  std::vector<std::optional<Converged>> hits(opts.starts);
  parallel_for(static_cast<std::size_t>(opts.starts), opts.workers, [&](std::size_t i) {
    hits[i] = refine(residual, n_equations, halton.point(i, box), opts);
  });

  std::vector<Converged> ok;
  const double slack = 1e-6 * std::max(box.diameter(), 1.0);
  for (auto& h : hits)
    if (h && box.contains(h->x, slack)) ok.push_back(std::move(*h));

  SolutionSet out;
  out.meta = {opts.seed, opts.starts, box, dedup, opts.tol_solve};
  if (ok.empty()) {
    out.classification = SolutionClass::empty;
    out.budget_exhausted = true;
    return out;
  }

  // cluster: best residual first, greedy accept when clear of existing reps
  std::sort(ok.begin(), ok.end(), [](const Converged& a, const Converged& b) {
    if (a.residual != b.residual) return a.residual < b.residual;
    return std::lexicographical_compare(a.x.data(), a.x.data() + a.x.size(), b.x.data(),
                                        b.x.data() + b.x.size());
  });
  std::vector<Converged> reps;
  for (auto& c : ok) {
    bool fresh = true;
    for (const auto& r : reps)
      if ((c.x - r.x).norm() <= dedup) {
        fresh = false;
        break;
      }
    if (fresh) reps.push_back(std::move(c));
  }
  std::sort(reps.begin(), reps.end(), [](const Converged& a, const Converged& b) {
    return std::lexicographical_compare(a.x.data(), a.x.data() + a.x.size(), b.x.data(),
                                        b.x.data() + b.x.size());
  });

  // nullity per representative, then confirmation re-solves along null
  // directions: a tangent intersection has null directions but perturbed
  // re-solves fall straight back, a genuine solution manifold does not.
  bool continuum = false;
  std::vector<int> nullities;
  const double eps = 8.0 * dedup;
  for (auto& rep : reps) {
    const JacobianRank jr = jacobian_rank(residual, rep.x, n_equations);
    nullities.push_back(jr.nullity);
    Solution s;
    s.point = Point(rep.x);
    s.residual = rep.residual;
    s.nullity = jr.nullity;
    out.solutions.push_back(std::move(s));
    if (continuum || jr.nullity == 0) continue;
    for (int k = 0; k < jr.null_basis.cols() && !continuum; ++k) {
      for (double sign : {+1.0, -1.0}) {
        auto re = refine(residual, n_equations, rep.x + sign * eps * jr.null_basis.col(k), opts);
        if (!re) continue;
        const double dist = (re->x - rep.x).norm();
        if (dist > dedup && dist < 64.0 * eps) {
          continuum = true;
          break;
        }
      }
    }
  }

  if (continuum) {
    out.classification = SolutionClass::continuum;
    std::sort(nullities.begin(), nullities.end());
    out.est_dim = nullities[nullities.size() / 2];
  } else {
    out.classification = reps.size() == 1 ? SolutionClass::unique : SolutionClass::discrete;
  }
  return out;
}

namespace {

Box problem_box(const SolverOptions& opts, const std::vector<Point>& pts, double inflate = 3.0,
                double min_half = 1.0) {
  if (opts.box) return *opts.box;
  return Box::around(pts, inflate, min_half);
}

ResidualFn equal_residual(const Point& p0, const Point& p1, const Point& q0,
                          const WorldFunction& g) {
  // constants of the two-equation system; only sigma(P0,Q1), sigma(P1,Q1)
  // and sigma(Q0,Q1) vary with the unknown Q1
  const double target = 2.0 * g(p0, p1);
  const double c_q0 = g(p1, q0) - g(p0, q0);
  const double scale = std::max(1.0, std::abs(target));
  const Eigen::VectorXd a = p0.coords, b = p1.coords, q = q0.coords;
  return [&g, a, b, q, target, c_q0, scale](const Eigen::VectorXd& x, Eigen::VectorXd& r) {
    const double sp = g.sigma(a, x) + c_q0 - g.sigma(b, x);  // (P0P1 . Q0Q1)
    r[0] = (sp - target) / scale;
    r[1] = (2.0 * g.sigma(q, x) - target) / scale;
  };
}

}  // namespace

SolutionSet solve_equal(const Point& p0, const Point& p1, const Point& q0,
                        const WorldFunction& g, const SolverOptions& opts) {
  const Box box = problem_box(opts, {p0, p1, q0});
  return least_squares_multistart(equal_residual(p0, p1, q0, g), 2, box, opts);
}

SumResult solve_sum(const SegVector& v, const SegVector& w, const Point& s0,
                    const WorldFunction& g, const SolverOptions& opts) {
  SumResult out;
  {
    SolverOptions stage = opts;
    if (!stage.box) stage.box = Box::around({v.origin, v.end, s0});
    out.r = solve_equal(v.origin, v.end, s0, g, stage);
  }
  out.s1.meta = out.r.meta;
  out.s1.classification = SolutionClass::empty;
  out.s1.budget_exhausted = out.r.budget_exhausted;

  bool any_continuum = out.r.classification == SolutionClass::continuum;
  int branch = 0;
  std::vector<int> est_dims;
  for (const auto& r_sol : out.r.solutions) {
    SolverOptions stage = opts;
    if (!stage.box) stage.box = Box::around({w.origin, w.end, r_sol.point});
    SolutionSet s1 = solve_equal(w.origin, w.end, r_sol.point, g, stage);
    if (s1.classification == SolutionClass::continuum) {
      any_continuum = true;
      est_dims.push_back(s1.est_dim);
    }
    out.s1.budget_exhausted = out.s1.budget_exhausted || s1.budget_exhausted;
    for (auto& sol : s1.solutions) {
      sol.branch = branch;
      out.s1.solutions.push_back(std::move(sol));
    }
    out.s1.meta = s1.meta;  // meta of the last branch solve
    ++branch;
  }

  if (!out.s1.solutions.empty()) {
    if (any_continuum) {
      out.s1.classification = SolutionClass::continuum;
      if (!est_dims.empty()) {
        std::sort(est_dims.begin(), est_dims.end());
        out.s1.est_dim = est_dims[est_dims.size() / 2];
      }
    } else {
      out.s1.classification =
          out.s1.solutions.size() == 1 ? SolutionClass::unique : SolutionClass::discrete;
    }
  }
  return out;
}

SolutionSet solve_scale(const SegVector& v, double alpha, const Point& s0,
                        const WorldFunction& g, const SolverOptions& opts) {
  if (alpha == 0.0) {
    // sgn(0) is undefined in the defining relations; the zero-scaled vector
    // is the degenerate pair by convention
    SolutionSet out;
    Solution s;
    s.point = s0;
    s.residual = 0.0;
    out.solutions.push_back(std::move(s));
    out.classification = SolutionClass::unique;
    const Box box = problem_box(opts, {v.origin, v.end, s0});
    out.meta = {opts.seed, opts.starts, box,
                opts.dedup_radius > 0 ? opts.dedup_radius : 1e-4 * box.diameter(), opts.tol_solve};
    return out;
  }

  const double amp = std::max(1.0, std::abs(alpha));
  const Box box = problem_box(opts, {v.origin, v.end, s0}, 3.0 * amp, amp);
  const double target = 2.0 * g(v.origin, v.end);
  const double scale = std::max({1.0, std::abs(target), alpha * alpha * std::abs(target)});
  const Eigen::VectorXd a = v.origin.coords, b = v.end.coords, s = s0.coords;
  // constants: sigma(S0,P1) and sigma(S0,P0); sigma(S1,P0), sigma(S1,P1) and
  // sigma(S0,S1) vary with the unknown S1
  const double c_s = g.sigma(s, b) - g.sigma(s, a);
  ResidualFn residual = [&g, a, b, s, alpha, target, scale, c_s](const Eigen::VectorXd& x,
                                                                 Eigen::VectorXd& r) {
    const double sp = c_s + g.sigma(x, a) - g.sigma(x, b);  // (S0S1 . P0P1)
    r[0] = (sp - alpha * target) / scale;
    r[1] = (2.0 * g.sigma(s, x) - alpha * alpha * target) / scale;
  };
  return least_squares_multistart(residual, 2, box, opts);
}

OriginIndependenceReport origin_independence_check(const SegVector& v, const SegVector& w,
                                                   const Point& s0, const Point& s0_prime,
                                                   const WorldFunction& g,
                                                   const SolverOptions& opts) {
  OriginIndependenceReport rep;
  rep.at_s0 = solve_sum(v, w, s0, g, opts);
  rep.at_s0_prime = solve_sum(v, w, s0_prime, g, opts);
  const auto& a = rep.at_s0.s1.solutions;
  const auto& b = rep.at_s0_prime.s1.solutions;
  rep.pairwise.assign(a.size(), std::vector<bool>(b.size(), false));
  bool all = !a.empty() && !b.empty();
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      const bool eq = is_equal(SegVector{s0, a[i].point}, SegVector{s0_prime, b[j].point}, g,
                               std::max(kRelTol, 100.0 * opts.tol_solve));
      rep.pairwise[i][j] = eq;
      all = all && eq;
    }
  rep.all_equal = all;
  return rep;
}

bool equality_in_frame(const SegVector& v, const SegVector& w, const Frame& frame,
                       const WorldFunction& g, double tol) {
  if (frame_degeneracy(frame, g) <= kRankTol)
    throw std::invalid_argument("equality_in_frame: degenerate frame");
  for (const auto& sk : frame.basis) {
    const SegVector leg{frame.origin, sk};
    const double a = scalar_product(v, leg, g);
    const double b = scalar_product(w, leg, g);
    if (std::abs(a - b) > tol * std::max({1.0, std::abs(a), std::abs(b)})) return false;
  }
  return true;
}

EqualityComparison compare_equality_definitions(const SegVector& v, const SegVector& w,
                                                const std::vector<Frame>& frames,
                                                const WorldFunction& g, double tol) {
  if (frames.empty())
    throw std::invalid_argument("compare_equality_definitions: need at least one frame");
  EqualityComparison out;
  out.sigma_equal = is_equal(v, w, g, tol);
  for (const auto& f : frames) out.frame_equal.push_back(equality_in_frame(v, w, f, g, tol));
  out.frames_agree =
      std::all_of(out.frame_equal.begin(), out.frame_equal.end(),
                  [&](bool x) { return x == out.frame_equal.front(); });
  return out;
}

nlohmann::json to_json(const SolutionSet& s) {
  nlohmann::json j;
  j["classification"] = to_string(s.classification);
  if (s.classification == SolutionClass::continuum) j["est_dim"] = s.est_dim;
  if (s.classification == SolutionClass::discrete)
    j["count"] = s.solutions.size();
  j["budget_exhausted"] = s.budget_exhausted;
  nlohmann::json sols = nlohmann::json::array();
  for (const auto& sol : s.solutions) {
    nlohmann::json e;
    e["point"] = std::vector<double>(sol.point.coords.data(),
                                     sol.point.coords.data() + sol.point.coords.size());
    e["residual"] = sol.residual;
    e["nullity"] = sol.nullity;
    if (sol.branch >= 0) e["branch"] = sol.branch;
    sols.push_back(std::move(e));
  }
  j["solutions"] = std::move(sols);
  j["search"] = {{"seed", s.meta.seed},
                 {"starts", s.meta.starts},
                 {"dedup_radius", s.meta.dedup_radius},
                 {"tol_solve", s.meta.tol_solve},
                 {"box_lo", std::vector<double>(s.meta.box.lo.data(),
                                                s.meta.box.lo.data() + s.meta.box.lo.size())},
                 {"box_hi", std::vector<double>(s.meta.box.hi.data(),
                                                s.meta.box.hi.data() + s.meta.box.hi.size())}};
  return j;
}

}  // namespace sigmageom
