#pragma once

// The total complementary function Xi(x, sigma) = q_0(x) + <q(x), sigma> - V*(sigma),
// the primal f = q_0 + V o q, and their first/second derivatives.

#include <Eigen/Dense>

#include <cmath>

#include "cdt/canonical_v.hpp"
#include "cdt/error.hpp"
#include "cdt/quadratic.hpp"

namespace cdt {

struct PrimalPoint {
  Vec x;
  bool in_X0 = false;  // q(x) in int(dom V)
};

inline PrimalPoint make_primal_point(const ProblemInstance& p, const Vec& x) {
  return PrimalPoint{x, in_int_dom_v(p.v, eval_q(p, x))};
}

// Xi is quadratic in x and concave in sigma; -inf off dom V*.
inline double xi_value(const ProblemInstance& p, const Vec& x, const Vec& sigma) {
  const double vs = v_conjugate(p.v, sigma);
  if (!std::isfinite(vs)) return -kInf;
  return lagrangian(p, x, sigma) - vs;
}

inline double f_value(const ProblemInstance& p, const Vec& x) {
  const double vv = v_value(p.v, eval_q(p, x));
  if (!std::isfinite(vv)) return kInf;
  return p.q(0).value(x) + vv;
}

namespace detail {
inline void check_smooth_primal(const ProblemInstance& p, const Vec& x) {
  require(p.v.smoothness() != SmoothnessClass::Gamma, ErrorCode::UnsupportedForKind,
          "f is not differentiable for indicator kinds");
  require(in_int_dom_v(p.v, eval_q(p, x)), ErrorCode::NotInX0, "x not in X0");
}
}  // namespace detail

// grad f(x) = A_0 x - b_0 + sum_i dV/dy_i(q(x)) (A_i x - b_i)
inline Vec f_grad(const ProblemInstance& p, const Vec& x) {
  require(x.size() == p.n, ErrorCode::DimensionMismatch, "f_grad: x must have length n");
  detail::check_smooth_primal(p, x);
  const Vec w = v_grad(p.v, eval_q(p, x));
  Vec g = p.q(0).grad(x);
  for (int i = 1; i <= p.m; ++i) g += w(i - 1) * p.q(i).grad(x);
  return g;
}

// hess f(x) = A(grad V(q(x))) + M hess V(q(x)) M^T with M = [A_1 x - b_1, ...].
inline Mat f_hess(const ProblemInstance& p, const Vec& x) {
  require(x.size() == p.n, ErrorCode::DimensionMismatch, "f_hess: x must have length n");
  detail::check_smooth_primal(p, x);
  const Vec y = eval_q(p, x);
  const Vec w = v_grad(p.v, y);
  Mat h = p.q(0).A;
  Mat M(p.n, p.m);
  for (int i = 1; i <= p.m; ++i) {
    h += w(i - 1) * p.q(i).A;
    M.col(i - 1) = p.q(i).grad(x);
  }
  h += M * v_hess(p.v, y) * M.transpose();
  return h;
}

inline Vec xi_grad_x(const ProblemInstance& p, const Vec& x, const Vec& sigma) {
  const Assembled a = assemble(p, sigma);
  require(x.size() == p.n, ErrorCode::DimensionMismatch, "xi_grad_x: x must have length n");
  return a.A * x - a.b;
}

// hess_xx Xi = A(sigma), independent of x.
inline Mat xi_hess_xx(const ProblemInstance& p, const Vec& sigma) {
  return assemble(p, sigma).A;
}

inline Vec xi_grad_sigma(const ProblemInstance& p, const Vec& x, const Vec& sigma) {
  require(x.size() == p.n, ErrorCode::DimensionMismatch, "xi_grad_sigma: x must have length n");
  return eval_q(p, x) - v_conj_grad(p.v, sigma);
}

struct CriticalResidual {
  double r_x = kInf;      // ||A(sigma) x - b(sigma)||_inf
  double r_sigma = kInf;  // ||q(x) - grad V*(sigma)||_inf (pair-check violation for cones)

  bool critical(double tol = 1e-8) const { return r_x <= tol && r_sigma <= tol; }
};

// For smooth kinds sigma must lie in int(dom V*). For IndicatorCone the
// sigma-residual is the largest violation of the subdifferential conditions
// y_j = 0 (j in J), y_j <= 0, sigma_j >= 0, y_j sigma_j = 0 (j off J).
inline CriticalResidual critical_pair_residual(const ProblemInstance& p, const Vec& x,
                                               const Vec& sigma) {
  CriticalResidual r;
  r.r_x = xi_grad_x(p, x, sigma).cwiseAbs().maxCoeff();
  if (p.v.kind == VKind::IndicatorCone) {
    const Vec y = eval_q(p, x);
    double worst = 0.0;
    for (int j = 1; j <= p.m; ++j) {
      const double yj = y(j - 1), sj = sigma(j - 1);
      if (p.v.in_J(j)) {
        worst = std::max(worst, std::abs(yj));
      } else {
        worst = std::max({worst, yj, -sj, std::abs(yj * sj)});
      }
    }
    r.r_sigma = std::max(worst, 0.0);
  } else {
    require(in_int_dom_vstar(p.v, sigma), ErrorCode::BoundaryOrOutsideDomain,
            "sigma not in int(dom V*)");
    r.r_sigma = xi_grad_sigma(p, x, sigma).cwiseAbs().maxCoeff();
  }
  return r;
}

}  // namespace cdt
