#pragma once

// The indicator-cone specialization V = V_J: the problem of minimizing (or
// maximizing) q_0 over X_J, the Lagrangian dual D_L, and J-LKKT certificates.
// Certificates carry the full chain of numbers so external auditors can
// re-verify them without this library.

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "cdt/dual.hpp"
#include "cdt/error.hpp"
#include "cdt/quadratic.hpp"

namespace cdt {

struct ConeProblem {
  ProblemInstance base;  // base.v.kind == IndicatorCone

  const std::vector<int>& J() const { return base.v.cone_J; }
  bool in_J(int j1based) const { return base.v.in_J(j1based); }
};

inline ConeProblem make_cone_problem(ProblemInstance p) {
  require(p.v.kind == VKind::IndicatorCone, ErrorCode::UnsupportedForKind,
          "cone duality requires an IndicatorCone canonical function");
  return ConeProblem{std::move(p)};
}

// X_J = {x | q_j(x) = 0 on J, q_j(x) <= 0 off J}.
inline bool feasible_x(const ConeProblem& cp, const Vec& x, double tol = 1e-8) {
  const Vec y = eval_q(cp.base, x);
  for (int j = 1; j <= cp.base.m; ++j) {
    if (cp.in_J(j)) {
      if (std::abs(y(j - 1)) > tol) return false;
    } else if (y(j - 1) > tol) {
      return false;
    }
  }
  return true;
}

// D_L(sigma) = L(x, sigma) with A(sigma) x = b(sigma); finite iff sigma in Y_col.
inline double dl_value(const ProblemInstance& p, const Vec& sigma, const Tolerances& tol = {}) {
  auto s = detail::analyze_sigma(p, sigma, tol);
  if (!s.label.in_Ycol) return kNaN;
  return lagrangian(p, s.x, sigma);
}

struct DualityChain {
  double q0_x = kNaN;  // q_0(xbar)
  double L = kNaN;     // L(xbar, sigmabar)
  double D_L = kNaN;   // D_L(sigmabar)

  double max_gap() const {
    return std::max(std::abs(q0_x - L), std::abs(L - D_L));
  }
};

struct Certificate {
  enum class Type { GlobalMin, GlobalMax } type = Type::GlobalMin;
  bool unique = false;  // strict definiteness of A(sigmabar)
  DualityChain chain;
  double lambda_min = kNaN, lambda_max = kNaN;  // spectrum extremes of A(sigmabar)
};

struct LkktResult {
  bool lkkt_ok = false;
  std::vector<std::string> violations;
  DualityChain chain;  // populated when lkkt_ok
  RegionLabel region;
  std::optional<Certificate> certificate;
};

namespace detail {

inline double complementarity_tol(double s, double q, double base) {
  return base * (1.0 + std::abs(s)) * (1.0 + std::abs(q));
}

// Shared body of the min/max J-LKKT checks; `sign` is +1 for Corollary-style
// minimization (sigma_j >= 0 off J) and -1 for maximization (sigma_j <= 0).
inline LkktResult check_j_lkkt_impl(const ConeProblem& cp, const Vec& x, const Vec& sigma,
                                    int sign, const Tolerances& tol) {
  const ProblemInstance& p = cp.base;
  LkktResult out;
  auto s = analyze_sigma(p, sigma, tol);
  out.region = s.label;

  const double r_x = (s.asmb.A * x - s.asmb.b).cwiseAbs().maxCoeff();
  if (r_x > tol.critical)
    out.violations.push_back("grad_x L(xbar, sigmabar) nonzero: |r|_inf = " + std::to_string(r_x));

  const Vec y = eval_q(p, x);
  for (int j = 1; j <= p.m; ++j) {
    const double qj = y(j - 1), sj = sigma(j - 1);
    if (cp.in_J(j)) {
      if (std::abs(qj) > tol.critical)
        out.violations.push_back("q_" + std::to_string(j) + "(xbar) != 0");
    } else {
      if (sign * sj < -tol.critical)
        out.violations.push_back("sigma_" + std::to_string(j) +
                                 (sign > 0 ? " < 0" : " > 0"));
      if (qj > tol.critical)
        out.violations.push_back("q_" + std::to_string(j) + "(xbar) > 0 (infeasible)");
      if (std::abs(sj * qj) > complementarity_tol(sj, qj, tol.critical))
        out.violations.push_back("complementarity fails at index " + std::to_string(j));
    }
  }
  out.lkkt_ok = out.violations.empty();
  if (!out.lkkt_ok) return out;

  out.chain.q0_x = p.q(0).value(x);
  out.chain.L = lagrangian(p, x, sigma);
  out.chain.D_L = dl_value(p, sigma, tol);

  const double cut = s.zero_tol;
  const bool psd = s.label.lambda_min >= -cut;
  const bool nsd = s.label.lambda_max <= cut;
  if (sign > 0 && psd) {
    Certificate c;
    c.type = Certificate::Type::GlobalMin;
    c.unique = s.label.in_Yplus;
    c.chain = out.chain;
    c.lambda_min = s.label.lambda_min;
    c.lambda_max = s.label.lambda_max;
    out.certificate = c;
  } else if (sign < 0 && nsd) {
    Certificate c;
    c.type = Certificate::Type::GlobalMax;
    c.unique = s.label.in_Yminus;
    c.chain = out.chain;
    c.lambda_min = s.label.lambda_min;
    c.lambda_max = s.label.lambda_max;
    out.certificate = c;
  }
  return out;
}

}  // namespace detail

// J-LKKT point of L: grad_x L = 0, sigma_j >= 0, q_j(x) <= 0 and
// sigma_j q_j(x) = 0 off J, q_j(x) = 0 on J. With A(sigmabar) >= 0 this
// certifies a global minimum of q_0 on X_J (unique when A(sigmabar) > 0).
inline LkktResult check_j_lkkt(const ConeProblem& cp, const Vec& x, const Vec& sigma,
                               const Tolerances& tol = {}) {
  return detail::check_j_lkkt_impl(cp, x, sigma, +1, tol);
}

// Mirror statement for maximizing q_0 on X_J: sigma_j <= 0 off J and
// A(sigmabar) <= 0 certify a global maximum (unique when A(sigmabar) < 0).
inline LkktResult check_j_lkkt_max(const ConeProblem& cp, const Vec& x, const Vec& sigma,
                                   const Tolerances& tol = {}) {
  return detail::check_j_lkkt_impl(cp, x, sigma, -1, tol);
}

struct EqualityDualityReport {
  DualityChain chain;
  RegionLabel region;
  std::optional<Certificate> min_certificate;  // present when A(sigmabar) >= 0
  std::optional<Certificate> max_certificate;  // present when A(sigmabar) <= 0
};

// J = {1..m}: both corollaries at once for a critical point of L.
inline EqualityDualityReport equality_duality(const ConeProblem& cp, const Vec& x,
                                              const Vec& sigma, const Tolerances& tol = {}) {
  const ProblemInstance& p = cp.base;
  require(static_cast<int>(cp.J().size()) == p.m, ErrorCode::PreconditionFailed,
          "equality_duality requires J = {1..m}");
  auto s = detail::analyze_sigma(p, sigma, tol);
  const double r_x = (s.asmb.A * x - s.asmb.b).cwiseAbs().maxCoeff();
  const double r_s = eval_q(p, x).cwiseAbs().maxCoeff();
  require(r_x <= tol.critical && r_s <= tol.critical, ErrorCode::NotCritical,
          "(xbar, sigmabar) is not a critical point of L");

  EqualityDualityReport out;
  out.region = s.label;
  out.chain.q0_x = p.q(0).value(x);
  out.chain.L = lagrangian(p, x, sigma);
  out.chain.D_L = dl_value(p, sigma, tol);

  const double cut = s.zero_tol;
  if (s.label.lambda_min >= -cut) {
    Certificate c;
    c.type = Certificate::Type::GlobalMin;
    c.unique = s.label.in_Yplus;
    c.chain = out.chain;
    c.lambda_min = s.label.lambda_min;
    c.lambda_max = s.label.lambda_max;
    out.min_certificate = c;
  }
  if (s.label.lambda_max <= cut) {
    Certificate c;
    c.type = Certificate::Type::GlobalMax;
    c.unique = s.label.in_Yminus;
    c.chain = out.chain;
    c.lambda_min = s.label.lambda_min;
    c.lambda_max = s.label.lambda_max;
    out.max_certificate = c;
  }
  return out;
}

}  // namespace cdt
