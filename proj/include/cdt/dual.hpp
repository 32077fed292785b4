#pragma once

// Region classification of sigma, the dual function D with derivatives, and a
// damped-Newton critical-point solver for D.
//
// D(sigma) = Xi(x, sigma) with A(sigma) x = b(sigma); finite exactly on
// S_col = Y_col n dom V*. On the singular-but-consistent part S_col \ S_0 the
// value is computed through a minimum-norm solve; derivatives are not offered
// there.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <optional>
#include <utility>

#include "cdt/complementary.hpp"
#include "cdt/error.hpp"
#include "cdt/quadratic.hpp"

namespace cdt {

struct Tolerances {
  double critical = 1e-8;   // inf-norm stationarity threshold, library-wide
  double psd_rel = 1e-10;   // relative eigenvalue band for (semi)definiteness calls
  double col_resid = 1e-8;  // relative residual for b(sigma) in Im A(sigma)
  double band = 1e-6;       // decision band around the spectral threshold 1
};

struct RegionLabel {
  bool in_dom_vstar = false;
  bool in_Y0 = false;         // det A(sigma) != 0
  bool in_Yplus = false;      // A(sigma) positive definite
  bool in_Yminus = false;     // A(sigma) negative definite
  bool in_Ycol = false;       // b(sigma) in Im A(sigma)
  bool in_Ycol_plus = false;  // in_Ycol and A(sigma) >= 0
  bool in_Ycol_minus = false; // in_Ycol and A(sigma) <= 0
  // Some eigenvalue sits inside the +-psd_rel*||A||_2 band: strict/non-strict
  // definiteness calls are unreliable and downstream verdicts go Indeterminate.
  bool definiteness_boundary = false;
  double lambda_min = kNaN;
  double lambda_max = kNaN;

  bool in_Splus() const { return in_dom_vstar && in_Yplus; }
  bool in_Sminus() const { return in_dom_vstar && in_Yminus; }
  bool in_Scol() const { return in_dom_vstar && in_Ycol; }
  bool in_S0() const { return in_dom_vstar && in_Y0; }
  bool in_Scol_plus() const { return in_dom_vstar && in_Ycol_plus; }
  bool in_Scol_minus() const { return in_dom_vstar && in_Ycol_minus; }
};

namespace detail {

// One eigendecomposition of A(sigma) feeds classification, the linear solve,
// and the Hessian inverse applications.
struct SigmaAnalysis {
  Assembled asmb;
  Eigen::SelfAdjointEigenSolver<Mat> eig;
  RegionLabel label;
  Vec x;                 // minimum-norm solution of A(sigma) x = b(sigma)
  double residual = 0.0; // ||A x - b||_inf
  int neg_count = 0;     // eigenvalues below -tol (the region-type signature)
  double zero_tol = 0.0;
};

inline SigmaAnalysis analyze_sigma(const ProblemInstance& p, const Vec& sigma,
                                   const Tolerances& tol = {}) {
  SigmaAnalysis s;
  s.asmb = assemble(p, sigma);
  s.eig.compute(s.asmb.A);
  const Vec& lam = s.eig.eigenvalues();
  const double amax = lam.cwiseAbs().maxCoeff();
  const double cut = tol.psd_rel * amax;
  s.zero_tol = cut;

  RegionLabel& r = s.label;
  r.lambda_min = lam.minCoeff();
  r.lambda_max = lam.maxCoeff();
  r.in_dom_vstar = in_dom_vstar(p.v, sigma);
  double abs_min = lam.cwiseAbs().minCoeff();
  r.in_Y0 = abs_min > cut;
  r.definiteness_boundary = abs_min <= cut;
  r.in_Yplus = r.lambda_min > cut;
  r.in_Yminus = r.lambda_max < -cut;
  const bool psd = r.lambda_min >= -cut;
  const bool nsd = r.lambda_max <= cut;
  for (int i = 0; i < lam.size(); ++i)
    if (lam(i) < -cut) ++s.neg_count;

  // minimum-norm solve through the same eigendecomposition
  const Vec bt = s.eig.eigenvectors().transpose() * s.asmb.b;
  Vec xt = Vec::Zero(lam.size());
  for (int i = 0; i < lam.size(); ++i)
    if (std::abs(lam(i)) > cut) xt(i) = bt(i) / lam(i);
  s.x = s.eig.eigenvectors() * xt;
  s.residual = (s.asmb.A * s.x - s.asmb.b).cwiseAbs().maxCoeff();
  r.in_Ycol = s.residual <= tol.col_resid * (1.0 + s.asmb.b.cwiseAbs().maxCoeff());
  r.in_Ycol_plus = r.in_Ycol && psd;
  r.in_Ycol_minus = r.in_Ycol && nsd;
  return s;
}

}  // namespace detail

inline RegionLabel classify_sigma(const ProblemInstance& p, const Vec& sigma,
                                  const Tolerances& tol = {}) {
  return detail::analyze_sigma(p, sigma, tol).label;
}

// x(sigma): the unique solution when det A(sigma) != 0, the minimum-norm
// solution otherwise. Throws NotInYcol when b(sigma) leaves Im A(sigma).
inline Vec solve_x_of_sigma(const ProblemInstance& p, const Vec& sigma,
                            const Tolerances& tol = {}) {
  auto s = detail::analyze_sigma(p, sigma, tol);
  require(s.label.in_Ycol, ErrorCode::NotInYcol, "b(sigma) not in Im A(sigma)");
  return s.x;
}

// NaN off Y_col ("undefined"), -inf on Y_col \ dom V*, finite exactly on S_col.
inline double d_value(const ProblemInstance& p, const Vec& sigma, const Tolerances& tol = {}) {
  auto s = detail::analyze_sigma(p, sigma, tol);
  if (!s.label.in_Ycol) return kNaN;
  return xi_value(p, s.x, sigma);
}

namespace detail {

inline void check_dual_smooth_point(const ProblemInstance& p, const SigmaAnalysis& s,
                                    const Vec& sigma) {
  require(s.label.in_dom_vstar, ErrorCode::BoundaryOrOutsideDomain, "sigma not in dom V*");
  require(s.label.in_Y0, ErrorCode::BoundaryOrOutsideDomain, "A(sigma) singular: sigma not in S0");
  if (p.v.kind != VKind::IndicatorCone)
    require(in_int_dom_vstar(p.v, sigma), ErrorCode::BoundaryOrOutsideDomain,
            "sigma not in int(dom V*)");
}

}  // namespace detail

// grad D(sigma) = q(x(sigma)) - grad V*(sigma) on S_0 n int(dom V*).
// For IndicatorCone V* vanishes identically on Gamma_J and this reduces to
// q(x(sigma)); it is accepted on all of S_0 n Gamma_J (the gradient of the
// smooth representative D_L, one-sided at the boundary of Gamma_J).
inline Vec d_grad(const ProblemInstance& p, const Vec& sigma, const Tolerances& tol = {}) {
  auto s = detail::analyze_sigma(p, sigma, tol);
  detail::check_dual_smooth_point(p, s, sigma);
  if (p.v.kind == VKind::IndicatorCone) return eval_q(p, s.x);
  return eval_q(p, s.x) - v_conj_grad(p.v, sigma);
}

// <v, hess D(sigma) v> = -<A_v x - b_v, A(sigma)^{-1}(A_v x - b_v)> - <v, hess V*(sigma) v>
// with A_v = sum v_j A_j, b_v = sum v_j b_j. In matrix form -G^T A^{-1} G - hess V*
// where G has columns A_i x(sigma) - b_i. For IndicatorCone the conjugate term
// vanishes on int Gamma_J.
inline Mat d_hess(const ProblemInstance& p, const Vec& sigma, const Tolerances& tol = {}) {
  auto s = detail::analyze_sigma(p, sigma, tol);
  detail::check_dual_smooth_point(p, s, sigma);
  Mat G(p.n, p.m);
  for (int i = 1; i <= p.m; ++i) G.col(i - 1) = p.q(i).grad(s.x);
  // A^{-1} G via the eigendecomposition already at hand
  const Mat Gt = s.eig.eigenvectors().transpose() * G;
  const Mat AinvG =
      s.eig.eigenvectors() * s.eig.eigenvalues().cwiseInverse().asDiagonal() * Gt;
  Mat h = -G.transpose() * AinvG;
  h = 0.5 * (h + h.transpose()).eval();
  if (p.v.kind == VKind::IndicatorCone) {
    require(in_int_dom_vstar(p.v, sigma), ErrorCode::BoundaryOrOutsideDomain,
            "sigma not in int Gamma_J");
    return h;
  }
  return h - v_conj_hess(p.v, sigma);
}

struct DualPoint {
  Vec sigma;
  RegionLabel region;
  std::optional<Vec> x_of_sigma;  // present iff sigma in Y_col
  double d_value = kNaN;          // finite iff sigma in S_col
};

inline DualPoint make_dual_point(const ProblemInstance& p, const Vec& sigma,
                                 const Tolerances& tol = {}) {
  auto s = detail::analyze_sigma(p, sigma, tol);
  DualPoint d;
  d.sigma = sigma;
  d.region = s.label;
  if (s.label.in_Ycol) {
    d.x_of_sigma = s.x;
    d.d_value = xi_value(p, s.x, sigma);
  }
  return d;
}

enum class NewtonStatus { Converged, SingularHessian, LeftRegion, MaxIterations, Stalled };

inline const char* to_string(NewtonStatus s) {
  switch (s) {
    case NewtonStatus::Converged: return "Converged";
    case NewtonStatus::SingularHessian: return "SingularHessian";
    case NewtonStatus::LeftRegion: return "LeftRegion";
    case NewtonStatus::MaxIterations: return "MaxIterations";
    case NewtonStatus::Stalled: return "Stalled";
  }
  return "Unknown";
}

struct NewtonOptions {
  int max_iterations = 100;
  double grad_tol = 1e-10;  // inf-norm of grad D at success
  int max_halvings = 40;
  Tolerances tol;
  std::function<void(int iter, const Vec& sigma, double grad_norm)> trace;
};

struct NewtonResult {
  NewtonStatus status = NewtonStatus::Stalled;
  Vec sigma;
  int iterations = 0;
  double grad_norm = kInf;
  std::optional<DualPoint> point;  // populated on convergence
};

// Solves grad D = 0 inside int S_0 n int(dom V*) by damped Newton steps.
// Globalization is backtracking on ||grad D|| decrease only; every accepted
// iterate must keep the inertia signature of A(sigma) (same connected
// region-type) and stay strictly inside the domain.
inline NewtonResult newton_critical_point(const ProblemInstance& p, const Vec& sigma0,
                                          const NewtonOptions& opts = {}) {
  require(sigma0.size() == p.m, ErrorCode::DimensionMismatch, "sigma0 must have length m");
  require(in_int_dom_vstar(p.v, sigma0), ErrorCode::PreconditionFailed,
          "sigma0 not in int(dom V*)");
  auto a0 = detail::analyze_sigma(p, sigma0, opts.tol);
  require(a0.label.in_Y0, ErrorCode::PreconditionFailed, "sigma0 not in S0");
  const int signature = a0.neg_count;

  const auto region_ok = [&](const Vec& s, detail::SigmaAnalysis& out) {
    if (!in_int_dom_vstar(p.v, s)) return false;
    out = detail::analyze_sigma(p, s, opts.tol);
    return out.label.in_Y0 && out.neg_count == signature;
  };

  NewtonResult res;
  res.sigma = sigma0;
  Vec grad = d_grad(p, sigma0, opts.tol);
  res.grad_norm = grad.cwiseAbs().maxCoeff();

  for (int it = 0; it <= opts.max_iterations; ++it) {
    if (opts.trace) opts.trace(it, res.sigma, res.grad_norm);
    if (res.grad_norm <= opts.grad_tol) {
      res.status = NewtonStatus::Converged;
      res.iterations = it;
      res.point = make_dual_point(p, res.sigma, opts.tol);
      return res;
    }
    if (it == opts.max_iterations) break;

    const Mat H = d_hess(p, res.sigma, opts.tol);
    Eigen::FullPivLU<Mat> lu(H);
    if (!lu.isInvertible()) {
      res.status = NewtonStatus::SingularHessian;
      res.iterations = it;
      return res;
    }
    const Vec step = lu.solve(-grad);

    double t = 1.0;
    bool accepted = false;
    bool saw_region_violation = false;
    for (int h = 0; h <= opts.max_halvings; ++h, t *= 0.5) {
      const Vec cand = res.sigma + t * step;
      detail::SigmaAnalysis sc;
      if (!region_ok(cand, sc)) {
        saw_region_violation = true;
        continue;
      }
      Vec gc = p.v.kind == VKind::IndicatorCone ? eval_q(p, sc.x)
                                                : Vec(eval_q(p, sc.x) - v_conj_grad(p.v, cand));
      const double gn = gc.cwiseAbs().maxCoeff();
      if (gn < res.grad_norm) {
        res.sigma = cand;
        grad = std::move(gc);
        res.grad_norm = gn;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      res.status = saw_region_violation ? NewtonStatus::LeftRegion : NewtonStatus::Stalled;
      res.iterations = it;
      return res;
    }
  }
  res.status = NewtonStatus::MaxIterations;
  res.iterations = opts.max_iterations;
  return res;
}

}  // namespace cdt
