#pragma once

// Verdict engine for critical pairs of Xi. The positive-semidefinite branch
// certifies global min-max duality; the negative-definite branch factorizes
// -A(sigmabar) = E^T E, hess V(q(xbar)) = F^T F and classifies both points
// through the spectrum of H = J F^T against the threshold 1.

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <sstream>
#include <string>

#include "cdt/complementary.hpp"
#include "cdt/cone_duality.hpp"
#include "cdt/dual.hpp"
#include "cdt/error.hpp"
#include "cdt/spectral.hpp"

namespace cdt {

struct TrialityFactorization {
  Mat E;               // E^T E = -A(sigmabar)
  Mat F;               // F^T F = hess V(q(xbar))
  Mat J;               // columns d_i = E^{-T}(A_i xbar - b_i)
  Mat H;               // H = J F^T
  SpectralSummary spectra;

  Vec d(int i1based) const { return J.col(i1based - 1); }
};

enum class Branch { MinMax_PSD, MinMax_PD, SaddleNegDef, NotApplicable };

enum class Verdict {
  GlobalMin,
  UniqueGlobalMin,
  GlobalMax,
  LocalStrictMax,
  LocalStrictMin,
  NotLocalExtremum,
  InconclusiveNecessaryOnly,
  Indeterminate,
};

inline const char* to_string(Branch b) {
  switch (b) {
    case Branch::MinMax_PSD: return "MinMax_PSD";
    case Branch::MinMax_PD: return "MinMax_PD";
    case Branch::SaddleNegDef: return "SaddleNegDef";
    case Branch::NotApplicable: return "NotApplicable";
  }
  return "Unknown";
}

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::GlobalMin: return "GlobalMin";
    case Verdict::UniqueGlobalMin: return "UniqueGlobalMin";
    case Verdict::GlobalMax: return "GlobalMax";
    case Verdict::LocalStrictMax: return "LocalStrictMax";
    case Verdict::LocalStrictMin: return "LocalStrictMin";
    case Verdict::NotLocalExtremum: return "NotLocalExtremum";
    case Verdict::InconclusiveNecessaryOnly: return "InconclusiveNecessaryOnly";
    case Verdict::Indeterminate: return "Indeterminate";
  }
  return "Unknown";
}

struct TrialityReport {
  Vec x, sigma;
  RegionLabel region;
  Branch branch = Branch::NotApplicable;
  Verdict x_verdict = Verdict::Indeterminate;
  Verdict sigma_verdict = Verdict::Indeterminate;
  std::string justification;
  bool nonsingular_f_hess = false;  // det hess f(xbar) != 0, the (A3) analog
  double f_at_x = kNaN;
  double xi_at_pair = kNaN;
  double d_at_sigma = kNaN;
  std::optional<TrialityFactorization> factorization;
  std::optional<Certificate> cone_certificate;
};

namespace detail {

inline bool pair_is_critical(const ProblemInstance& p, const Vec& x, const Vec& sigma,
                             const Tolerances& tol, std::string* why) {
  if (p.v.kind == VKind::IndicatorCone) {
    const double r_x = xi_grad_x(p, x, sigma).cwiseAbs().maxCoeff();
    if (r_x > tol.critical) {
      if (why) *why = "grad_x Xi nonzero (r_x = " + std::to_string(r_x) + ")";
      return false;
    }
    if (!v_subdifferential_pair_check(p.v, eval_q(p, x), sigma, tol.critical)) {
      if (why) *why = "q(xbar) not in dV*(sigmabar)";
      return false;
    }
    return true;
  }
  if (!in_int_dom_vstar(p.v, sigma)) {
    if (why) *why = "sigmabar not in int(dom V*)";
    return false;
  }
  const auto r = critical_pair_residual(p, x, sigma);
  if (!r.critical(tol.critical)) {
    if (why)
      *why = "not a critical pair (r_x = " + std::to_string(r.r_x) +
             ", r_sigma = " + std::to_string(r.r_sigma) + ")";
    return false;
  }
  return true;
}

inline bool f_hess_nonsingular(const ProblemInstance& p, const Vec& x) {
  if (p.v.smoothness() != SmoothnessClass::GammaSC2) return false;
  const Mat h = f_hess(p, x);
  Eigen::SelfAdjointEigenSolver<Mat> eig(h);
  const double amax = eig.eigenvalues().cwiseAbs().maxCoeff();
  if (amax == 0.0) return false;
  return eig.eigenvalues().cwiseAbs().minCoeff() > 1e-8 * amax;
}

inline void fill_chain(const ProblemInstance& p, TrialityReport& rep, const Tolerances& tol) {
  rep.f_at_x = f_value(p, rep.x);
  rep.xi_at_pair = xi_value(p, rep.x, rep.sigma);
  rep.d_at_sigma = d_value(p, rep.sigma, tol);
}

}  // namespace detail

// Propositions 1 and 2: critical pair with A(sigmabar) >= 0. xbar is a global
// minimizer of f (unique when A(sigmabar) > 0) and sigmabar maximizes D over
// S_col^+, with f(xbar) = Xi(xbar, sigmabar) = D(sigmabar).
inline TrialityReport verdict_psd(const ProblemInstance& p, const Vec& x, const Vec& sigma,
                                  const Tolerances& tol = {}) {
  std::string why;
  require(detail::pair_is_critical(p, x, sigma, tol, &why), ErrorCode::PreconditionFailed, why);
  auto s = detail::analyze_sigma(p, sigma, tol);
  require(s.label.in_dom_vstar, ErrorCode::PreconditionFailed, "sigmabar not in dom V*");
  require(s.label.lambda_min >= -s.zero_tol, ErrorCode::PreconditionFailed,
          "A(sigmabar) not positive semidefinite");

  TrialityReport rep;
  rep.x = x;
  rep.sigma = sigma;
  rep.region = s.label;
  rep.branch = s.label.in_Yplus ? Branch::MinMax_PD : Branch::MinMax_PSD;
  rep.x_verdict = s.label.in_Yplus ? Verdict::UniqueGlobalMin : Verdict::GlobalMin;
  rep.sigma_verdict = Verdict::GlobalMax;
  rep.nonsingular_f_hess = detail::f_hess_nonsingular(p, x);
  detail::fill_chain(p, rep, tol);

  std::ostringstream j;
  j << (p.v.kind == VKind::IndicatorCone ? "Prop. 1" : "Prop. 2")
    << ": A(sigmabar) >= 0 (lambda_min = " << s.label.lambda_min
    << "); f = Xi = D chain gap = "
    << std::max(std::abs(rep.f_at_x - rep.xi_at_pair), std::abs(rep.xi_at_pair - rep.d_at_sigma));
  if (s.label.in_Yplus) j << "; A(sigmabar) > 0: unique global solution";
  rep.justification = j.str();
  return rep;
}

// E, F, d_i, H at a negative-definite critical pair.
inline TrialityFactorization factorize(const ProblemInstance& p, const Vec& x, const Vec& sigma,
                                       const Tolerances& tol = {}) {
  require(p.v.smoothness() == SmoothnessClass::GammaSC2, ErrorCode::NotGammaSC2,
          "factorization requires a twice differentiable canonical function");
  require(in_int_dom_v(p.v, eval_q(p, x)), ErrorCode::NotInX0, "xbar not in X0");
  auto s = detail::analyze_sigma(p, sigma, tol);
  require(s.label.in_Yminus, ErrorCode::NotNegativeDefinite,
          "A(sigmabar) not negative definite");
  std::string why;
  require(detail::pair_is_critical(p, x, sigma, tol, &why), ErrorCode::NotCritical, why);

  TrialityFactorization f;
  // -A = L L^T, take E = L^T so that E^T E = -A.
  Eigen::LLT<Mat> lltA((-s.asmb.A).eval());
  require(lltA.info() == Eigen::Success, ErrorCode::NotNegativeDefinite,
          "Cholesky of -A(sigmabar) failed");
  f.E = Mat(lltA.matrixL()).transpose();

  const Mat vh = v_hess(p.v, eval_q(p, x));
  Eigen::LLT<Mat> lltV(vh);
  require(lltV.info() == Eigen::Success, ErrorCode::NotGammaSC2,
          "hess V(q(xbar)) not positive definite");
  f.F = Mat(lltV.matrixL()).transpose();

  // d_i solves E^T d_i = A_i xbar - b_i; E^T is the lower factor L.
  f.J.resize(p.n, p.m);
  for (int i = 1; i <= p.m; ++i)
    f.J.col(i - 1) = lltA.matrixL().solve(p.q(i).grad(x));
  f.H = f.J * f.F.transpose();
  f.spectra = spectral_summary(f.H);
  return f;
}

namespace detail {

// One side of Prop. 5 / Cor. 1: compare the spectrum of the relevant Gram
// operator (HH^T for f at xbar, H^T H for D at sigmabar) with 1.
inline Verdict classify_side(double lmin, double lmax, double band, std::string& note) {
  const bool max_sufficient = lmax < 1.0 - band;   // strict: local strict max
  const bool min_sufficient = lmin > 1.0 + band;   // strict: local strict min
  const bool max_excluded = lmax > 1.0 + band;     // necessary condition for max fails
  const bool min_excluded = lmin < 1.0 - band;     // necessary condition for min fails
  if (max_sufficient) {
    note = "spectrum < 1";
    return Verdict::LocalStrictMax;
  }
  if (min_sufficient) {
    note = "spectrum > 1";
    return Verdict::LocalStrictMin;
  }
  if (max_excluded && min_excluded) {
    note = "indefinite second order form";
    return Verdict::NotLocalExtremum;
  }
  if (max_excluded || min_excluded) {
    note = max_excluded ? "not a local max; min end inside the decision band"
                        : "not a local min; max end inside the decision band";
    return Verdict::InconclusiveNecessaryOnly;
  }
  note = "spectrum inside the decision band";
  return Verdict::Indeterminate;
}

}  // namespace detail

// Prop. 5 and Cor. 1 at a critical pair with A(sigmabar) < 0.
inline TrialityReport verdict_negdef(const ProblemInstance& p, const Vec& x, const Vec& sigma,
                                     const Tolerances& tol = {}) {
  TrialityFactorization f = factorize(p, x, sigma, tol);
  auto s = detail::analyze_sigma(p, sigma, tol);

  TrialityReport rep;
  rep.x = x;
  rep.sigma = sigma;
  rep.region = s.label;
  rep.branch = Branch::SaddleNegDef;
  rep.nonsingular_f_hess = detail::f_hess_nonsingular(p, x);
  detail::fill_chain(p, rep, tol);

  const double lmin_Q = f.spectra.q_eigenvalues(0);
  const double lmin_R = f.spectra.r_eigenvalues(0);
  const double top = f.spectra.alpha;  // = beta

  std::string note_x, note_s;
  rep.x_verdict = detail::classify_side(lmin_Q, top, tol.band, note_x);
  rep.sigma_verdict = detail::classify_side(lmin_R, f.spectra.beta, tol.band, note_s);

  std::ostringstream j;
  j << "Prop. 5: lambda(HH^T) in [" << lmin_Q << ", " << top << "], lambda(H^T H) in ["
    << lmin_R << ", " << f.spectra.beta << "]; xbar: " << note_x << "; sigmabar: " << note_s;
  if (rep.x_verdict == Verdict::LocalStrictMin && p.m > p.n)
    j << "; Prop. 5(ii): m > n so sigmabar cannot be a local extremum";
  if (rep.sigma_verdict == Verdict::LocalStrictMin && p.m < p.n)
    j << "; Prop. 5(iii): m < n so xbar cannot be a local extremum";
  if (p.m == p.n && rep.sigma_verdict == Verdict::LocalStrictMin) {
    Mat G(p.n, p.m);
    for (int i = 1; i <= p.m; ++i) G.col(i - 1) = p.q(i).grad(x);
    Eigen::JacobiSVD<Mat> svd(G);
    const double smax = svd.singularValues()(0);
    const bool basis = smax > 0.0 && svd.singularValues().minCoeff() > 1e-8 * smax;
    if (basis) j << "; Prop. 5(iv): {A_i xbar - b_i} is a basis, double-min holds";
  }
  if (rep.nonsingular_f_hess) {
    j << "; Cor. 1(a)";
    if (p.m == p.n) j << " and 1(b)";
    j << ": det hess f(xbar) != 0, verdicts are equivalences";
  }
  rep.justification = j.str();
  rep.factorization = std::move(f);
  return rep;
}

// Dispatch on the region of sigmabar. PSD regions go through Propositions 1-2;
// strictly negative definite regions through Prop. 5 (smooth kinds) or the
// Corollary-2 certificate path (indicator kinds); anything else is reported,
// not guessed.
inline TrialityReport analyze_pair(const ProblemInstance& p, const Vec& x, const Vec& sigma,
                                   const Tolerances& tol = {}) {
  auto s = detail::analyze_sigma(p, sigma, tol);
  TrialityReport rep;
  rep.x = x;
  rep.sigma = sigma;
  rep.region = s.label;

  std::string why;
  if (!s.label.in_dom_vstar) {
    rep.justification = "sigmabar outside dom V*: no branch applies";
    return rep;
  }
  if (!detail::pair_is_critical(p, x, sigma, tol, &why)) {
    rep.justification = why;
    detail::fill_chain(p, rep, tol);
    return rep;
  }
  if (s.label.lambda_min >= -s.zero_tol) return verdict_psd(p, x, sigma, tol);
  if (s.label.in_Yminus) {
    if (p.v.smoothness() == SmoothnessClass::GammaSC2) return verdict_negdef(p, x, sigma, tol);
    // Indicator kinds: try the global max certificate of Corollary 2.
    auto lk = check_j_lkkt_max(make_cone_problem(p), x, sigma, tol);
    rep.branch = Branch::SaddleNegDef;
    detail::fill_chain(p, rep, tol);
    if (lk.certificate) {
      rep.x_verdict = Verdict::GlobalMax;
      rep.cone_certificate = lk.certificate;
      rep.justification =
          "Cor. 2: A(sigmabar) < 0 with J-LKKT(max) certificate: xbar maximizes q_0 on X_J";
      // grad D(sigmabar) = q(xbar) on S^-; when it vanishes, convexity of
      // D on S_col^- (sublinear V) makes sigmabar a global minimizer there.
      if (eval_q(p, x).cwiseAbs().maxCoeff() <= tol.critical) {
        rep.sigma_verdict = Verdict::GlobalMin;
        rep.justification +=
            "; q(xbar) = 0 and D is convex on S_col^-: sigmabar minimizes D there";
      } else {
        rep.sigma_verdict = Verdict::Indeterminate;
        rep.justification += "; q(xbar) != 0: no verdict for sigmabar on S_col^-";
      }
    } else {
      rep.justification = "A(sigmabar) < 0 but the Cor. 2 sign conditions fail";
      for (const auto& v : lk.violations) rep.justification += "; " + v;
    }
    return rep;
  }
  rep.justification = "A(sigmabar) indefinite or singular non-PSD: no triality branch applies";
  detail::fill_chain(p, rep, tol);
  return rep;
}

}  // namespace cdt
