#pragma once

// Independent brute-force verifiers backing the test suite and `cdt check`.
// Nothing in the analysis path may call into this header; oracles exist to
// disagree with the analysis when it is wrong.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "cdt/canonical_v.hpp"
#include "cdt/error.hpp"

namespace cdt {

using ScalarFn = std::function<double(const Vec&)>;

inline double default_fd_step(const Vec& point) {
  return 1e-6 * std::max(1.0, point.cwiseAbs().maxCoeff());
}

namespace detail {
inline double fd_eval(const ScalarFn& fn, const Vec& x) {
  const double v = fn(x);
  require(std::isfinite(v), ErrorCode::StencilLeftDomain, "stencil point left the domain");
  return v;
}
}  // namespace detail

// Central differences, O(h^2) truncation.
inline Vec fd_grad(const ScalarFn& fn, const Vec& point, double h = 0.0) {
  if (h <= 0.0) h = default_fd_step(point);
  Vec g(point.size());
  Vec e = point;
  for (int i = 0; i < point.size(); ++i) {
    e(i) = point(i) + h;
    const double up = detail::fd_eval(fn, e);
    e(i) = point(i) - h;
    const double dn = detail::fd_eval(fn, e);
    e(i) = point(i);
    g(i) = (up - dn) / (2.0 * h);
  }
  return g;
}

inline Mat fd_hess(const ScalarFn& fn, const Vec& point, double h = 0.0) {
  if (h <= 0.0) h = 1e-4 * std::max(1.0, point.cwiseAbs().maxCoeff());
  const int n = static_cast<int>(point.size());
  Mat H(n, n);
  const double f0 = detail::fd_eval(fn, point);
  Vec e = point;
  for (int i = 0; i < n; ++i) {
    e(i) = point(i) + h;
    const double up = detail::fd_eval(fn, e);
    e(i) = point(i) - h;
    const double dn = detail::fd_eval(fn, e);
    e(i) = point(i);
    H(i, i) = (up - 2.0 * f0 + dn) / (h * h);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Vec y = point;
      y(i) += h; y(j) += h;
      const double pp = detail::fd_eval(fn, y);
      y(j) -= 2.0 * h;
      const double pm = detail::fd_eval(fn, y);
      y(i) -= 2.0 * h;
      const double mm = detail::fd_eval(fn, y);
      y(j) += 2.0 * h;
      const double mp = detail::fd_eval(fn, y);
      H(i, j) = H(j, i) = (pp - pm - mp + mm) / (4.0 * h * h);
    }
  }
  return H;
}

enum class ProbeVerdict { LocalMin, LocalMax, Neither, Inconclusive };

inline const char* to_string(ProbeVerdict v) {
  switch (v) {
    case ProbeVerdict::LocalMin: return "LocalMin";
    case ProbeVerdict::LocalMax: return "LocalMax";
    case ProbeVerdict::Neither: return "Neither";
    case ProbeVerdict::Inconclusive: return "Inconclusive";
  }
  return "Unknown";
}

struct ProbeResult {
  ProbeVerdict verdict = ProbeVerdict::Inconclusive;
  Vec ascent_witness;   // point with fn > fn(center), empty if none found
  Vec descent_witness;  // point with fn < fn(center), empty if none found
};

// Testing definition of "local extremum": strict comparison against all points
// on a shrinking sequence of sphere grids. Directions are drawn from a fixed
// seed so acceptance runs are reproducible.
inline ProbeResult grid_extremum_probe(const ScalarFn& fn, const Vec& center,
                                       std::vector<double> radii = {1e-2, 1e-3, 1e-4},
                                       int directions = 200) {
  const int n = static_cast<int>(center.size());
  std::mt19937 rng(0xCD7u);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vec> dirs;
  dirs.reserve(static_cast<size_t>(directions));
  if (n == 1) {
    dirs.push_back(Vec::Constant(1, 1.0));
    dirs.push_back(Vec::Constant(1, -1.0));
  } else {
    for (int k = 0; k < directions; ++k) {
      Vec d(n);
      for (int i = 0; i < n; ++i) d(i) = gauss(rng);
      const double nrm = d.norm();
      if (nrm < 1e-12) { --k; continue; }
      dirs.push_back(d / nrm);
    }
  }

  const double f0 = fn(center);
  require(std::isfinite(f0), ErrorCode::StencilLeftDomain, "probe center not in domain");
  ProbeResult out;
  bool all_above = true, all_below = true;
  for (double r : radii) {
    for (const Vec& d : dirs) {
      const double fv = fn(center + r * d);
      if (!std::isfinite(fv)) continue;  // stepped outside dom f; ignore that direction
      if (fv > f0) {
        all_below = false;
        if (out.ascent_witness.size() == 0) out.ascent_witness = center + r * d;
      } else if (fv < f0) {
        all_above = false;
        if (out.descent_witness.size() == 0) out.descent_witness = center + r * d;
      } else {
        all_above = all_below = false;  // exact tie: neither strict verdict can hold
      }
    }
  }
  if (all_above)
    out.verdict = ProbeVerdict::LocalMin;
  else if (all_below)
    out.verdict = ProbeVerdict::LocalMax;
  else if (out.ascent_witness.size() > 0 && out.descent_witness.size() > 0)
    out.verdict = ProbeVerdict::Neither;
  else
    out.verdict = ProbeVerdict::Inconclusive;
  return out;
}

// sup { <y, sigma> - V(y) } by coarse grid search over a box followed by
// local refinement. Guaranteed <= true conjugate + refinement bound.
inline double numeric_conjugate(const CanonicalFunction& v, const Vec& sigma,
                                double box_halfwidth = 20.0, int steps = 41) {
  check_dim(v, sigma, "numeric_conjugate");
  const int m = v.m;
  const auto score = [&](const Vec& y) {
    const double val = v_value(v, y);
    return std::isfinite(val) ? y.dot(sigma) - val : -kInf;
  };

  Vec best;
  double best_score = -kInf;
  // coarse pass
  {
    std::vector<int> idx(static_cast<size_t>(m), 0);
    Vec y(m);
    const double lo = -box_halfwidth, step = 2.0 * box_halfwidth / (steps - 1);
    bool done = false;
    while (!done) {
      for (int i = 0; i < m; ++i) y(i) = lo + idx[static_cast<size_t>(i)] * step;
      const double sc = score(y);
      if (sc > best_score) { best_score = sc; best = y; }
      int i = 0;
      for (; i < m; ++i) {
        if (++idx[static_cast<size_t>(i)] < steps) break;
        idx[static_cast<size_t>(i)] = 0;
      }
      done = (i == m);
    }
  }
  require(best_score > -kInf, ErrorCode::EmptySearchRegion, "dom V does not meet the search box");

  // refinement: re-grid an 11^m stencil around the incumbent, halving the radius
  double radius = 2.0 * box_halfwidth / (steps - 1);
  const int rsteps = 11;
  for (int pass = 0; pass < 60 && radius > 1e-13; ++pass) {
    const Vec center = best;
    std::vector<int> idx(static_cast<size_t>(m), 0);
    Vec y(m);
    bool done = false;
    while (!done) {
      for (int i = 0; i < m; ++i)
        y(i) = center(i) - radius + 2.0 * radius * idx[static_cast<size_t>(i)] / (rsteps - 1);
      const double sc = score(y);
      if (sc > best_score) { best_score = sc; best = y; }
      int i = 0;
      for (; i < m; ++i) {
        if (++idx[static_cast<size_t>(i)] < rsteps) break;
        idx[static_cast<size_t>(i)] = 0;
      }
      done = (i == m);
    }
    radius *= 0.5;
  }
  return best_score;
}

}  // namespace cdt
