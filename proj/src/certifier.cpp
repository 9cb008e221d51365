//
// sigmageom: geometry from a world function alone
// SPDX-License-Identifier: Apache-2.0
//
#include "sigmageom/certifier.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sigmageom/parallel.hpp"
#include "sigmageom/rng.hpp"

namespace sigmageom {

namespace {

std::vector<Point> random_tuple(Rng& rng, const Box& box, int count) {
  std::vector<Point> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) pts.push_back(Point(rng.uniform_in(box)));
  return pts;
}

}  // namespace

DimensionScan detect_dimension(const WorldFunction& g, const Box& domain, int samples,
                               std::uint64_t seed, double tol_rank, int workers) {
  if (samples < 10) throw std::invalid_argument("detect_dimension: need >= 10 samples per rank");
  const int m = g.chart_dim();
  const int k_max = m + 1;

  struct RankScan {
    double best = 0.0;
    std::vector<Point> best_tuple;
  };
  std::vector<RankScan> scans(k_max);

  for (int k = 1; k <= k_max; ++k) {
    std::vector<double> dets(samples);
    std::vector<std::vector<Point>> tuples(samples);
    parallel_for(static_cast<std::size_t>(samples), workers, [&](std::size_t i) {
      Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(k) * 1000003ULL + i);
      auto pts = random_tuple(rng, domain, k + 1);
      const Point base = pts.front();
      pts.erase(pts.begin());
      dets[i] = std::abs(gram_determinant(base, pts, g).normalized);
      tuples[i] = std::move(pts);
      tuples[i].insert(tuples[i].begin(), base);
    });
    RankScan& sc = scans[k - 1];
    for (int i = 0; i < samples; ++i) {
      if (dets[i] > sc.best) {
        sc.best = dets[i];
        sc.best_tuple = tuples[i];
      }
    }
  }

  DimensionScan out;
  for (int k = 1; k <= k_max; ++k) out.max_normalized_det.push_back(scans[k - 1].best);

  int n = 0;
  for (int k = 1; k <= k_max; ++k)
    if (scans[k - 1].best > tol_rank) n = k;

  auto tuple_to_frame = [](const std::vector<Point>& tuple) {
    Frame f;
    f.origin = tuple.front();
    f.basis.assign(tuple.begin() + 1, tuple.end());
    return f;
  };

  if (n == 0 || n == k_max) {
    // either everything is degenerate or the rank never stops growing
    // inside the chart scan: no clean separation
    const int fallback = std::max(1, std::min(n == 0 ? 1 : m, m));
    if (!scans[fallback - 1].best_tuple.empty())
      out.frame = tuple_to_frame(scans[fallback - 1].best_tuple);
    out.vanish_residual = scans[k_max - 1].best;
    return out;
  }

  out.dim = n;
  out.frame = tuple_to_frame(scans[n - 1].best_tuple);
  out.vanish_residual = scans[n].best;  // max |F^_{n+1}|, needed to vanish
  return out;
}

ResidualReport check_linearity(const WorldFunction& g, const Frame& frame, const Box& domain,
                               int pairs, std::uint64_t seed, int workers) {
  if (frame_degeneracy(frame, g) <= kRankTol)
    throw std::invalid_argument("check_linearity: degenerate frame");
  const MetricTensors mt = metric_tensors(frame, g);

  std::vector<double> residuals(pairs);
  std::vector<std::pair<Point, Point>> samples(pairs);
  parallel_for(static_cast<std::size_t>(pairs), workers, [&](std::size_t i) {
    Rng rng = Rng::stream(seed ^ 0x11c9dc5ULL, i);
    const Point p(rng.uniform_in(domain));
    const Point q(rng.uniform_in(domain));
    const Eigen::VectorXd dx = covariant_coordinates(p, frame, g) - covariant_coordinates(q, frame, g);
    const double predicted = 0.5 * dx.dot(mt.contravariant * dx);
    const double actual = g(p, q);
    residuals[i] = std::abs(actual - predicted) / std::max(1.0, std::abs(actual));
    samples[i] = {p, q};
  });

  ResidualReport rep;
  double sum = 0.0;
  int worst = 0;
  for (int i = 0; i < pairs; ++i) {
    sum += residuals[i];
    if (residuals[i] > rep.max_residual) {
      rep.max_residual = residuals[i];
      worst = i;
    }
  }
  rep.mean_residual = pairs > 0 ? sum / pairs : 0.0;
  if (pairs > 0) rep.worst_witness = {samples[worst].first, samples[worst].second};
  return rep;
}

EigenReport check_positivity(const WorldFunction& g, const Frame& frame, double tol_eig_rel) {
  if (frame_degeneracy(frame, g) <= kRankTol)
    throw std::invalid_argument("check_positivity: degenerate frame");
  const GramMatrix gm = gram_matrix(frame.origin, frame.basis, g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gm.entries);
  EigenReport rep;
  rep.eigenvalues = es.eigenvalues();
  const double scale = gm.entries.cwiseAbs().maxCoeff();
  const double tol_eig = tol_eig_rel * std::max(scale, 1e-300);
  for (Eigen::Index i = 0; i < rep.eigenvalues.size(); ++i) {
    if (rep.eigenvalues[i] > tol_eig) ++rep.n_positive;
    else if (rep.eigenvalues[i] < -tol_eig) ++rep.n_negative;
  }
  rep.pass = rep.n_positive == rep.eigenvalues.size();
  rep.worst_residual = std::max(0.0, -rep.eigenvalues.minCoeff()) / std::max(scale, 1e-300);
  return rep;
}

UniquenessReport check_continuity(const WorldFunction& g, const Frame& frame, const Box& domain,
                                  int targets, const SolverOptions& solver_opts) {
  if (frame_degeneracy(frame, g) <= kRankTol)
    throw std::invalid_argument("check_continuity: degenerate frame");
  const int n = frame.size();

  UniquenessReport rep;
  rep.targets = targets;

  // search box: the domain, padded so boundary targets stay solvable
  Eigen::VectorXd pad = 0.25 * (domain.hi - domain.lo);
  Box search(domain.lo - pad, domain.hi + pad);

  for (int t = 0; t < targets; ++t) {
    // feasible target: coordinates of a point actually in the domain
    Rng rng = Rng::stream(solver_opts.seed ^ 0xC0FFEEULL, static_cast<std::uint64_t>(t));
    const Point generator(rng.uniform_in(domain));
    const Eigen::VectorXd y = covariant_coordinates(generator, frame, g);

    double scale = 1.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(y[i]));
    ResidualFn residual = [&g, &frame, &y, n, scale](const Eigen::VectorXd& x, Eigen::VectorXd& r) {
      const Point p{Eigen::VectorXd(x)};
      const SegVector to_p{frame.origin, p};
      for (int i = 0; i < n; ++i) {
        const double c = scalar_product(SegVector{frame.origin, frame.basis[i]}, to_p, g);
        r[i] = (c - y[i]) / scale;
      }
    };

    SolverOptions opts = solver_opts;
    opts.seed = solver_opts.seed + 7919ULL * static_cast<std::uint64_t>(t);
    SolutionSet sols = least_squares_multistart(residual, n, search, opts);

    if (sols.budget_exhausted) {
      rep.undetermined = true;
      ++rep.empty_targets;
      continue;
    }
    switch (sols.classification) {
      case SolutionClass::unique: ++rep.unique_targets; break;
      case SolutionClass::empty: ++rep.empty_targets; break;
      default: ++rep.multivalued_targets; break;
    }
    for (const auto& s : sols.solutions) {
      if (s.residual > rep.worst_residual) {
        rep.worst_residual = s.residual;
        rep.worst_witness = {generator, s.point};
      }
    }
  }
  return rep;
}

bool CertificationReport::all_pass() const {
  if (conditions.empty()) return false;
  for (const auto& [k, v] : conditions)
    if (!v.pass) return false;
  return true;
}

bool CertificationReport::undetermined() const {
  return !detected_dim.has_value() ||
         (conditions.count("IV") && conditions.at("IV").note.find("undetermined") != std::string::npos);
}

CertificationReport certify(const WorldFunction& g, const CertifyOptions& opts) {
  CertificationReport report;
  report.seed = opts.seed;
  report.samples = opts.samples;

  // I: dimension
  const DimensionScan scan =
      detect_dimension(g, opts.domain, opts.samples, opts.seed, opts.tol_rank, opts.workers);
  report.detected_dim = scan.dim;
  {
    ConditionResult c;
    c.pass = scan.dim.has_value();
    c.worst_residual = scan.vanish_residual;
    if (!scan.frame.basis.empty()) {
      c.witness.push_back(scan.frame.origin);
      for (const auto& p : scan.frame.basis) c.witness.push_back(p);
    }
    if (!c.pass)
      c.note = "no rank separated cleanly: higher Gram determinants do not vanish";
    report.conditions["I"] = std::move(c);
  }

  if (scan.frame.basis.empty()) {
    ConditionResult skipped;
    skipped.pass = false;
    skipped.note = "skipped: no usable frame";
    report.conditions["II"] = skipped;
    report.conditions["III"] = skipped;
    report.conditions["IV"] = skipped;
    return report;
  }

  // frames: the maximizing tuple, optionally swept over extra random frames
  std::vector<Frame> frames{scan.frame};
  for (int f = 1; f < opts.frame_sweep; ++f) {
    Rng rng = Rng::stream(opts.seed ^ 0xF4A7ULL, static_cast<std::uint64_t>(f));
    for (int attempt = 0; attempt < 64; ++attempt) {
      Frame cand;
      cand.origin = Point(rng.uniform_in(opts.domain));
      for (int i = 0; i < scan.frame.size(); ++i) cand.basis.push_back(Point(rng.uniform_in(opts.domain)));
      if (frame_degeneracy(cand, g) > opts.tol_rank) {
        frames.push_back(std::move(cand));
        break;
      }
    }
  }

  // II: linear structure
  {
    ConditionResult c;
    c.pass = true;
    for (const auto& fr : frames) {
      const ResidualReport rr =
          check_linearity(g, fr, opts.domain, opts.linearity_pairs, opts.seed, opts.workers);
      if (rr.max_residual > c.worst_residual) {
        c.worst_residual = rr.max_residual;
        c.witness = rr.worst_witness;
      }
      c.pass = c.pass && rr.max_residual <= opts.tol_linearity;
    }
    report.conditions["II"] = std::move(c);
  }

  // III: eigenvalue signs of the frame metric
  {
    ConditionResult c;
    c.pass = true;
    for (const auto& fr : frames) {
      const EigenReport er = check_positivity(g, fr, opts.tol_eig_rel);
      if (er.worst_residual >= c.worst_residual) {
        c.worst_residual = er.worst_residual;
        c.note = std::to_string(er.n_positive) + " positive / " + std::to_string(er.n_negative) +
                 " negative eigenvalues";
      }
      c.pass = c.pass && er.pass;
    }
    const auto& fr = frames.front();
    c.witness.push_back(fr.origin);
    for (const auto& p : fr.basis) c.witness.push_back(p);
    report.conditions["III"] = std::move(c);
  }

  // IV: unique solvability of the coordinate system
  {
    ConditionResult c;
    c.pass = true;
    SolverOptions sopts;
    sopts.starts = opts.starts;
    sopts.seed = opts.seed;
    sopts.tol_solve = opts.tol_solve;
    sopts.workers = opts.workers;
    for (const auto& fr : frames) {
      const UniquenessReport ur =
          check_continuity(g, fr, opts.domain, opts.continuity_targets, sopts);
      c.pass = c.pass && ur.unique_targets == ur.targets && !ur.undetermined;
      if (ur.worst_residual > c.worst_residual) {
        c.worst_residual = ur.worst_residual;
        c.witness = ur.worst_witness;
      }
      if (ur.undetermined) c.note = "undetermined: solver budget exhausted on some target";
      else if (ur.multivalued_targets > 0)
        c.note = std::to_string(ur.multivalued_targets) + " of " + std::to_string(ur.targets) +
                 " targets multivalued";
      else if (ur.empty_targets > 0)
        c.note = std::to_string(ur.empty_targets) + " of " + std::to_string(ur.targets) +
                 " targets unsolved";
    }
    report.conditions["IV"] = std::move(c);
  }

  return report;
}

nlohmann::json to_json(const CertificationReport& r) {
  nlohmann::json j;
  if (r.detected_dim) j["detected_dim"] = *r.detected_dim;
  else j["detected_dim"] = "undetermined";
  nlohmann::json conds;
  for (const auto& [name, c] : r.conditions) {
    nlohmann::json cj;
    cj["pass"] = c.pass;
    cj["residual"] = c.worst_residual;
    if (!c.note.empty()) cj["note"] = c.note;
    nlohmann::json wit = nlohmann::json::array();
    for (const auto& p : c.witness)
      wit.push_back(std::vector<double>(p.coords.data(), p.coords.data() + p.coords.size()));
    cj["witness"] = std::move(wit);
    conds[name] = std::move(cj);
  }
  j["conditions"] = std::move(conds);
  j["seed"] = r.seed;
  j["samples"] = r.samples;
  j["scope"] = r.scope;
  return j;
}

}  // namespace sigmageom
