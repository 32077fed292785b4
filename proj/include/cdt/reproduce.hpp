#pragma once

// Canned artifacts behind `cdt reproduce`: the 1-D anti-triality witness
// (a concave objective over [-1,1] whose dual minimizes where the primal
// maximizes), the double-well, and a 2-D trust-region style ball constraint.

#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>

#include "cdt/cone_duality.hpp"
#include "cdt/dual.hpp"
#include "cdt/oracle.hpp"
#include "cdt/problem_io.hpp"
#include "cdt/triality.hpp"

namespace cdt {

// n = m = 1, V = indicator of R_-, q_0 = -x^2/2 + x, q_1 = (x^2 - 1)/2.
// f = q_0 on [-1, 1]; D(sigma) = (1/(1-sigma) - sigma)/2 on [0,1) u (1,inf).
inline ProblemDocument example1_problem() {
  ProblemDocument doc;
  QuadraticForm q0{Mat::Constant(1, 1, -1.0), Vec::Constant(1, -1.0), 0.0};
  QuadraticForm q1{Mat::Constant(1, 1, 1.0), Vec::Zero(1), -0.5};
  doc.instance = make_problem(1, 1, {q0, q1}, make_indicator_cone(1, {}));
  doc.seeds = {Vec::Constant(1, 0.5)};
  return doc;
}

// n = m = 1, V(y) = y^2/2: f(x) = -x^2/2 + (x^2/2 - 1)^2/2 with minima at +-2
// and a local max at 0. The smooth surrogate used in place of the indicator.
inline ProblemDocument doublewell_problem() {
  ProblemDocument doc;
  QuadraticForm q0{Mat::Constant(1, 1, -1.0), Vec::Zero(1), 0.0};
  QuadraticForm q1{Mat::Constant(1, 1, 1.0), Vec::Zero(1), -1.0};
  doc.instance = make_problem(1, 1, {q0, q1}, make_quadratic_diag(Vec::Ones(1)));
  doc.seeds = {Vec::Constant(1, -0.5), Vec::Constant(1, 0.0), Vec::Constant(1, 0.5)};
  return doc;
}

// n = 2, one ball constraint, indefinite objective: minimize
// q_0 = (-2 x1^2 + x2^2)/2 - x1 - x2 over ||x||^2 <= 1.0625. The KKT pair is
// sigma = 3, x = (1, 0.25), on the boundary, with A(sigma) = diag(1, 4) > 0.
inline ProblemDocument trustregion_problem() {
  ProblemDocument doc;
  Mat A0(2, 2);
  A0 << -2.0, 0.0, 0.0, 1.0;
  QuadraticForm q0{A0, Vec::Ones(2), 0.0};
  QuadraticForm q1{Mat::Identity(2, 2), Vec::Zero(2), -0.53125};
  doc.instance = make_problem(2, 1, {q0, q1}, make_indicator_cone(1, {}));
  return doc;
}

struct ReproduceResult {
  bool pass = true;
  std::string text;
};

namespace detail {

struct Reporter {
  std::ostringstream out;
  bool pass = true;

  void claim(const std::string& s) { out << "claim: " << s << "\n"; }
  void evidence(const std::string& s, bool ok) {
    out << "  " << (ok ? "ok  " : "FAIL") << " " << s << "\n";
    pass = pass && ok;
  }
  ReproduceResult finish() {
    out << (pass ? "PASS" : "FAIL") << "\n";
    return ReproduceResult{pass, out.str()};
  }
};

inline std::string num(double x) {
  std::ostringstream s;
  s << std::setprecision(12) << x;
  return s.str();
}

}  // namespace detail

inline ReproduceResult reproduce_example1(const Tolerances& tol = {}) {
  detail::Reporter rep;
  const ProblemInstance p = example1_problem().instance;

  rep.claim("D(sigma) = (1/(1-sigma) - sigma)/2 at 100 points of [0, 0.99]");
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double s = 0.99 * k / 99.0;
    const double want = 0.5 * (1.0 / (1.0 - s) - s);
    worst = std::max(worst, std::abs(d_value(p, Vec::Constant(1, s), tol) - want));
  }
  rep.evidence("max |D - formula| = " + detail::num(worst), worst <= 1e-12);

  rep.claim("xbar = 1 maximizes f on [-1, 1] (grid step 1e-4)");
  double best_x = 0.0, best_f = -kInf;
  for (int k = 0; k <= 20000; ++k) {
    const double x = -1.0 + 1e-4 * k;
    const double fx = f_value(p, Vec::Constant(1, x));
    if (fx > best_f) { best_f = fx; best_x = x; }
  }
  rep.evidence("argmax f = " + detail::num(best_x) + ", f = " + detail::num(best_f),
               std::abs(best_x - 1.0) <= 1e-12 && std::abs(best_f - 0.5) <= 1e-12);

  rep.claim("sigmabar = 0 minimizes D on [0, 1) (grid step 1e-4 up to 1 - 1e-3)");
  double best_s = 1.0, best_d = kInf;
  for (int k = 0;; ++k) {
    const double s = 1e-4 * k;
    if (s > 1.0 - 1e-3) break;
    const double ds = d_value(p, Vec::Constant(1, s), tol);
    if (ds < best_d) { best_d = ds; best_s = s; }
  }
  rep.evidence("argmin D = " + detail::num(best_s) + ", D = " + detail::num(best_d),
               std::abs(best_s) <= 1e-12 && std::abs(best_d - 0.5) <= 1e-12);

  rep.claim("Corollary-2 global max certificate at (xbar, sigmabar) = (1, 0)");
  const auto cp = make_cone_problem(p);
  const auto lk = check_j_lkkt_max(cp, Vec::Ones(1), Vec::Zero(1), tol);
  const bool cert_ok = lk.lkkt_ok && lk.certificate &&
                       lk.certificate->type == Certificate::Type::GlobalMax &&
                       lk.certificate->unique && lk.chain.max_gap() <= 1e-10;
  rep.evidence("q0(1) = L = D_L = " + detail::num(lk.chain.q0_x) +
                   " (gap " + detail::num(lk.chain.max_gap()) + "), unique global max",
               cert_ok);

  rep.claim("double-min / double-max duality fail here: f maxed at 1, D minimized at 0");
  rep.evidence("pair (1, 0) is critical for L yet is a primal max / dual min",
               std::abs(best_x - 1.0) <= 1e-12 && std::abs(best_s) <= 1e-12);
  return rep.finish();
}

inline ReproduceResult reproduce_doublewell(const Tolerances& tol = {}) {
  detail::Reporter rep;
  const ProblemDocument doc = doublewell_problem();
  const ProblemInstance& p = doc.instance;

  rep.claim("Newton from seeds -0.5, 0, 0.5 reaches the S^- critical point sigma = -1");
  NewtonOptions opts;
  opts.tol = tol;
  bool all = true;
  for (const Vec& seed : doc.seeds) {
    const auto res = newton_critical_point(p, seed, opts);
    const bool ok = res.status == NewtonStatus::Converged &&
                    std::abs(res.sigma(0) + 1.0) <= 1e-9;
    all = all && ok;
    rep.evidence("seed " + detail::num(seed(0)) + " -> " + to_string(res.status) +
                     " at sigma = " + detail::num(res.sigma(0)) + " in " +
                     std::to_string(res.iterations) + " iterations",
                 ok);
  }

  rep.claim("at (0, -1): A(sigma) < 0, H = 0, both points are local strict maxima");
  const auto neg = analyze_pair(p, Vec::Zero(1), Vec::Constant(1, -1.0), tol);
  rep.evidence("branch " + std::string(to_string(neg.branch)) + ", x: " +
                   to_string(neg.x_verdict) + ", sigma: " + to_string(neg.sigma_verdict),
               neg.branch == Branch::SaddleNegDef &&
                   neg.x_verdict == Verdict::LocalStrictMax &&
                   neg.sigma_verdict == Verdict::LocalStrictMax);

  rep.claim("the pairs (+-2, 1) are critical with A(1) = 0 >= 0: global minima of f");
  for (double xb : {2.0, -2.0}) {
    const auto psd = analyze_pair(p, Vec::Constant(1, xb), Vec::Ones(1), tol);
    const double gap = std::max(std::abs(psd.f_at_x - psd.xi_at_pair),
                                std::abs(psd.xi_at_pair - psd.d_at_sigma));
    rep.evidence("x = " + detail::num(xb) + ": " + to_string(psd.x_verdict) +
                     ", f = Xi = D = " + detail::num(psd.f_at_x) + " (gap " +
                     detail::num(gap) + ")",
                 psd.x_verdict == Verdict::GlobalMin && gap <= 1e-8);
  }

  rep.claim("grid over [-3, 3] confirms min f = -1.5 at +-2 (step 1e-3)");
  double best_f = kInf, best_x = 0.0;
  for (int k = 0; k <= 6000; ++k) {
    const double x = -3.0 + 1e-3 * k;
    const double fx = f_value(p, Vec::Constant(1, x));
    if (fx < best_f) { best_f = fx; best_x = x; }
  }
  rep.evidence("grid min " + detail::num(best_f) + " at x = " + detail::num(best_x),
               std::abs(best_f + 1.5) <= 1e-5 && std::abs(std::abs(best_x) - 2.0) <= 1e-3);
  return rep.finish();
}

inline ReproduceResult reproduce_trustregion(const Tolerances& tol = {}) {
  detail::Reporter rep;
  const ProblemInstance p = trustregion_problem().instance;
  const auto cp = make_cone_problem(p);
  Vec xbar(2);
  xbar << 1.0, 0.25;
  const Vec sbar = Vec::Constant(1, 3.0);

  rep.claim("(x, sigma) = ((1, 0.25), 3) is a J-LKKT point with A(sigma) > 0");
  const auto lk = check_j_lkkt(cp, xbar, sbar, tol);
  const bool cert_ok =
      lk.lkkt_ok && lk.certificate && lk.certificate->type == Certificate::Type::GlobalMin &&
      lk.certificate->unique && lk.chain.max_gap() <= 1e-10;
  rep.evidence("certificate q0 = L = D_L = " + detail::num(lk.chain.q0_x) + " (gap " +
                   detail::num(lk.chain.max_gap()) + ")",
               cert_ok);

  rep.claim("exhaustive polar grid over the ball matches the certified minimum");
  const double radius = std::sqrt(2.0 * 0.53125);
  double grid_min = kInf;
  Vec x(2);
  for (int ir = 0; ir <= 400; ++ir) {
    const double r = radius * ir / 400.0;
    for (int ia = 0; ia < 720; ++ia) {
      const double th = 2.0 * M_PI * ia / 720.0;
      x << r * std::cos(th), r * std::sin(th);
      grid_min = std::min(grid_min, p.q(0).value(x));
    }
  }
  rep.evidence("grid min " + detail::num(grid_min) + " vs certificate " +
                   detail::num(lk.chain.q0_x),
               grid_min >= lk.chain.q0_x - 1e-9 && grid_min <= lk.chain.q0_x + 0.05);
  return rep.finish();
}

inline ReproduceResult reproduce(const std::string& name, const Tolerances& tol = {}) {
  if (name == "example1") return reproduce_example1(tol);
  if (name == "doublewell") return reproduce_doublewell(tol);
  if (name == "trustregion") return reproduce_trustregion(tol);
  fail(ErrorCode::ParseError, "unknown reproduction '" + name +
                                  "' (expected example1, doublewell or trustregion)");
}

}  // namespace cdt
