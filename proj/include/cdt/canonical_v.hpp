#pragma once

// Catalog of canonical functions V with closed-form conjugates, gradients,
// Hessians and domain predicates. The catalog is closed: five kinds, each
// with an exact conjugate. Arbitrary user-supplied V is not supported.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cdt/error.hpp"

namespace cdt {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Positivity/simplex boundaries are excluded from "interior" predicates by
// this margin; Legendre-type calculus is only used at interior points.
inline constexpr double kDomainMargin = 1e-12;

enum class VKind {
  QuadraticDiag,      // V(y) = 1/2 sum beta_k y_k^2
  Exponential,        // V(y) = sum exp(y_k)
  ExpPlusQuad,        // V(y) = sum_{k<=p} exp(y_k) + 1/2 sum_{k>p} beta_k y_k^2
  LogSumExpPlusQuad,  // V(y) = (1/b) log(1 + sum_{k<=p} exp(b y_k)) + quad tail
  IndicatorCone,      // V = indicator of C_J
};

enum class SmoothnessClass { Gamma, GammaSC, GammaSC2 };

inline const char* to_string(VKind k) {
  switch (k) {
    case VKind::QuadraticDiag: return "QuadraticDiag";
    case VKind::Exponential: return "Exponential";
    case VKind::ExpPlusQuad: return "ExpPlusQuad";
    case VKind::LogSumExpPlusQuad: return "LogSumExpPlusQuad";
    case VKind::IndicatorCone: return "IndicatorCone";
  }
  return "Unknown";
}

inline const char* to_string(SmoothnessClass s) {
  switch (s) {
    case SmoothnessClass::Gamma: return "Gamma";
    case SmoothnessClass::GammaSC: return "GammaSC";
    case SmoothnessClass::GammaSC2: return "GammaSC2";
  }
  return "Unknown";
}

struct CanonicalFunction {
  VKind kind = VKind::QuadraticDiag;
  int m = 0;

  // Kind-specific parameters.
  Vec beta;                  // QuadraticDiag: size m. Exp/LSE tails: size m - p.
  double beta_scale = 1.0;   // LogSumExpPlusQuad scale.
  int p = 0;                 // split index: components 1..p are the exp/lse block
  std::vector<int> cone_J;   // IndicatorCone equality set, 1-based, sorted

  SmoothnessClass smoothness() const {
    return kind == VKind::IndicatorCone ? SmoothnessClass::Gamma
                                        : SmoothnessClass::GammaSC2;
  }

  bool in_J(int j1based) const {
    return std::binary_search(cone_J.begin(), cone_J.end(), j1based);
  }
};

// ---- factories ----

inline CanonicalFunction make_quadratic_diag(const Vec& beta) {
  require(beta.size() > 0, ErrorCode::DimensionMismatch, "beta must be nonempty");
  require((beta.array() > 0.0).all(), ErrorCode::PreconditionFailed, "beta_k > 0 required");
  CanonicalFunction v;
  v.kind = VKind::QuadraticDiag;
  v.m = static_cast<int>(beta.size());
  v.beta = beta;
  v.p = 0;
  return v;
}

inline CanonicalFunction make_exponential(int m) {
  require(m > 0, ErrorCode::DimensionMismatch, "m must be positive");
  CanonicalFunction v;
  v.kind = VKind::Exponential;
  v.m = m;
  v.p = m;
  return v;
}

inline CanonicalFunction make_exp_plus_quad(int m, int p, const Vec& beta_tail) {
  require(m > 0, ErrorCode::DimensionMismatch, "m must be positive");
  require(p >= 0 && p <= m, ErrorCode::PreconditionFailed, "0 <= p <= m required");
  require(beta_tail.size() == m - p, ErrorCode::DimensionMismatch, "beta tail size must be m - p");
  require((beta_tail.array() > 0.0).all(), ErrorCode::PreconditionFailed, "beta_k > 0 required");
  CanonicalFunction v;
  v.kind = VKind::ExpPlusQuad;
  v.m = m;
  v.p = p;
  v.beta = beta_tail;
  return v;
}

inline CanonicalFunction make_log_sum_exp(int m, int p, double beta_scale, const Vec& beta_tail) {
  require(m > 0, ErrorCode::DimensionMismatch, "m must be positive");
  require(p >= 0 && p <= m, ErrorCode::PreconditionFailed, "0 <= p <= m required");
  require(beta_scale > 0.0, ErrorCode::PreconditionFailed, "beta > 0 required");
  require(beta_tail.size() == m - p, ErrorCode::DimensionMismatch, "beta tail size must be m - p");
  require((beta_tail.array() > 0.0).all(), ErrorCode::PreconditionFailed, "beta_k > 0 required");
  CanonicalFunction v;
  v.kind = VKind::LogSumExpPlusQuad;
  v.m = m;
  v.p = p;
  v.beta_scale = beta_scale;
  v.beta = beta_tail;
  return v;
}

inline CanonicalFunction make_indicator_cone(int m, std::vector<int> J) {
  require(m > 0, ErrorCode::DimensionMismatch, "m must be positive");
  std::sort(J.begin(), J.end());
  J.erase(std::unique(J.begin(), J.end()), J.end());
  for (int j : J)
    require(j >= 1 && j <= m, ErrorCode::PreconditionFailed, "J must be a subset of {1..m}");
  CanonicalFunction v;
  v.kind = VKind::IndicatorCone;
  v.m = m;
  v.cone_J = std::move(J);
  return v;
}

// ---- domain predicates ----

inline void check_dim(const CanonicalFunction& v, const Vec& y, const char* what) {
  require(y.size() == v.m, ErrorCode::DimensionMismatch, std::string(what) + ": expected length m");
}

inline bool in_dom_v(const CanonicalFunction& v, const Vec& y) {
  check_dim(v, y, "in_dom_v");
  if (v.kind != VKind::IndicatorCone) return true;
  for (int j = 1; j <= v.m; ++j) {
    double yj = y(j - 1);
    if (v.in_J(j)) {
      if (std::abs(yj) > kDomainMargin) return false;
    } else {
      if (yj > kDomainMargin) return false;
    }
  }
  return true;
}

inline bool in_int_dom_v(const CanonicalFunction& v, const Vec& y) {
  check_dim(v, y, "in_int_dom_v");
  if (v.kind != VKind::IndicatorCone) return true;
  if (!v.cone_J.empty()) return false;  // equality constraints kill the interior
  return (y.array() < -kDomainMargin).all();
}

inline bool in_dom_vstar(const CanonicalFunction& v, const Vec& s) {
  check_dim(v, s, "in_dom_vstar");
  switch (v.kind) {
    case VKind::QuadraticDiag:
      return true;
    case VKind::Exponential:
    case VKind::ExpPlusQuad:
      return (s.head(v.p).array() >= -kDomainMargin).all();
    case VKind::LogSumExpPlusQuad:
      return (s.head(v.p).array() >= -kDomainMargin).all() &&
             s.head(v.p).sum() <= 1.0 + kDomainMargin;
    case VKind::IndicatorCone:
      for (int j = 1; j <= v.m; ++j)
        if (!v.in_J(j) && s(j - 1) < -kDomainMargin) return false;
      return true;
  }
  return false;
}

inline bool in_int_dom_vstar(const CanonicalFunction& v, const Vec& s) {
  check_dim(v, s, "in_int_dom_vstar");
  switch (v.kind) {
    case VKind::QuadraticDiag:
      return true;
    case VKind::Exponential:
    case VKind::ExpPlusQuad:
      return (s.head(v.p).array() > kDomainMargin).all();
    case VKind::LogSumExpPlusQuad:
      return (s.head(v.p).array() > kDomainMargin).all() &&
             s.head(v.p).sum() < 1.0 - kDomainMargin;
    case VKind::IndicatorCone:
      for (int j = 1; j <= v.m; ++j)
        if (!v.in_J(j) && s(j - 1) <= kDomainMargin) return false;
      return true;
  }
  return false;
}

// ---- values ----

inline double v_value(const CanonicalFunction& v, const Vec& y) {
  check_dim(v, y, "v_value");
  switch (v.kind) {
    case VKind::QuadraticDiag:
      return 0.5 * (v.beta.array() * y.array().square()).sum();
    case VKind::Exponential:
    case VKind::ExpPlusQuad: {
      double val = y.head(v.p).array().exp().sum();
      for (int k = v.p; k < v.m; ++k) val += 0.5 * v.beta(k - v.p) * y(k) * y(k);
      return val;
    }
    case VKind::LogSumExpPlusQuad: {
      const double b = v.beta_scale;
      // stabilized log(1 + sum exp(b y_k))
      double mx = 0.0;
      for (int k = 0; k < v.p; ++k) mx = std::max(mx, b * y(k));
      double acc = std::exp(-mx);
      for (int k = 0; k < v.p; ++k) acc += std::exp(b * y(k) - mx);
      double val = (std::log(acc) + mx) / b;
      for (int k = v.p; k < v.m; ++k) val += 0.5 * v.beta(k - v.p) * y(k) * y(k);
      return val;
    }
    case VKind::IndicatorCone:
      return in_dom_v(v, y) ? 0.0 : kInf;
  }
  return kNaN;
}

namespace detail {
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }  // 0 log 0 := 0
}

inline double v_conjugate(const CanonicalFunction& v, const Vec& s) {
  check_dim(v, s, "v_conjugate");
  if (!in_dom_vstar(v, s)) return kInf;
  switch (v.kind) {
    case VKind::QuadraticDiag:
      return 0.5 * (s.array().square() / v.beta.array()).sum();
    case VKind::Exponential:
    case VKind::ExpPlusQuad: {
      double val = 0.0;
      for (int k = 0; k < v.p; ++k) val += detail::xlogx(std::max(s(k), 0.0)) - std::max(s(k), 0.0);
      for (int k = v.p; k < v.m; ++k) val += 0.5 * s(k) * s(k) / v.beta(k - v.p);
      return val;
    }
    case VKind::LogSumExpPlusQuad: {
      const double b = v.beta_scale;
      double sum = 0.0, acc = 0.0;
      for (int k = 0; k < v.p; ++k) {
        double sk = std::max(s(k), 0.0);
        sum += sk;
        acc += detail::xlogx(sk);
      }
      acc += detail::xlogx(std::max(1.0 - sum, 0.0));
      double val = acc / b;
      for (int k = v.p; k < v.m; ++k) val += 0.5 * s(k) * s(k) / v.beta(k - v.p);
      return val;
    }
    case VKind::IndicatorCone:
      return 0.0;
  }
  return kNaN;
}

// ---- derivatives (interior points only) ----

namespace detail {

inline void check_interior_v(const CanonicalFunction& v, const Vec& y) {
  require(v.kind != VKind::IndicatorCone, ErrorCode::UnsupportedForKind,
          "IndicatorCone has no smooth calculus");
  require(in_int_dom_v(v, y), ErrorCode::BoundaryOrOutsideDomain, "y not in int(dom V)");
}

inline void check_interior_vstar(const CanonicalFunction& v, const Vec& s) {
  require(v.kind != VKind::IndicatorCone, ErrorCode::UnsupportedForKind,
          "IndicatorCone has no smooth conjugate calculus");
  require(in_int_dom_vstar(v, s), ErrorCode::BoundaryOrOutsideDomain,
          "sigma not in int(dom V*)");
}

// softmax weights pi_k = exp(b y_k) / (1 + sum_j exp(b y_j)), stabilized
inline Vec lse_weights(const CanonicalFunction& v, const Vec& y) {
  const double b = v.beta_scale;
  double mx = 0.0;
  for (int k = 0; k < v.p; ++k) mx = std::max(mx, b * y(k));
  double denom = std::exp(-mx);
  Vec w(v.p);
  for (int k = 0; k < v.p; ++k) {
    w(k) = std::exp(b * y(k) - mx);
    denom += w(k);
  }
  return w / denom;
}

}  // namespace detail

inline Vec v_grad(const CanonicalFunction& v, const Vec& y) {
  check_dim(v, y, "v_grad");
  detail::check_interior_v(v, y);
  Vec g(v.m);
  switch (v.kind) {
    case VKind::QuadraticDiag:
      g = v.beta.array() * y.array();
      break;
    case VKind::Exponential:
    case VKind::ExpPlusQuad:
      for (int k = 0; k < v.p; ++k) g(k) = std::exp(y(k));
      for (int k = v.p; k < v.m; ++k) g(k) = v.beta(k - v.p) * y(k);
      break;
    case VKind::LogSumExpPlusQuad: {
      g.head(v.p) = detail::lse_weights(v, y);
      for (int k = v.p; k < v.m; ++k) g(k) = v.beta(k - v.p) * y(k);
      break;
    }
    case VKind::IndicatorCone:
      break;  // unreachable
  }
  return g;
}

inline Mat v_hess(const CanonicalFunction& v, const Vec& y) {
  check_dim(v, y, "v_hess");
  detail::check_interior_v(v, y);
  Mat h = Mat::Zero(v.m, v.m);
  switch (v.kind) {
    case VKind::QuadraticDiag:
      h.diagonal() = v.beta;
      break;
    case VKind::Exponential:
    case VKind::ExpPlusQuad:
      for (int k = 0; k < v.p; ++k) h(k, k) = std::exp(y(k));
      for (int k = v.p; k < v.m; ++k) h(k, k) = v.beta(k - v.p);
      break;
    case VKind::LogSumExpPlusQuad: {
      const Vec w = detail::lse_weights(v, y);
      // b * (diag(pi) - pi pi^T); positive definite because sum pi < 1
      h.topLeftCorner(v.p, v.p) = v.beta_scale * (Mat(w.asDiagonal()) - w * w.transpose());
      for (int k = v.p; k < v.m; ++k) h(k, k) = v.beta(k - v.p);
      break;
    }
    case VKind::IndicatorCone:
      break;
  }
  return h;
}

inline Vec v_conj_grad(const CanonicalFunction& v, const Vec& s) {
  check_dim(v, s, "v_conj_grad");
  detail::check_interior_vstar(v, s);
  Vec g(v.m);
  switch (v.kind) {
    case VKind::QuadraticDiag:
      g = s.array() / v.beta.array();
      break;
    case VKind::Exponential:
    case VKind::ExpPlusQuad:
      for (int k = 0; k < v.p; ++k) g(k) = std::log(s(k));
      for (int k = v.p; k < v.m; ++k) g(k) = s(k) / v.beta(k - v.p);
      break;
    case VKind::LogSumExpPlusQuad: {
      const double rest = 1.0 - s.head(v.p).sum();
      for (int k = 0; k < v.p; ++k) g(k) = std::log(s(k) / rest) / v.beta_scale;
      for (int k = v.p; k < v.m; ++k) g(k) = s(k) / v.beta(k - v.p);
      break;
    }
    case VKind::IndicatorCone:
      break;
  }
  return g;
}

inline Mat v_conj_hess(const CanonicalFunction& v, const Vec& s) {
  check_dim(v, s, "v_conj_hess");
  detail::check_interior_vstar(v, s);
  Mat h = Mat::Zero(v.m, v.m);
  switch (v.kind) {
    case VKind::QuadraticDiag:
      h.diagonal() = v.beta.cwiseInverse();
      break;
    case VKind::Exponential:
    case VKind::ExpPlusQuad:
      for (int k = 0; k < v.p; ++k) h(k, k) = 1.0 / s(k);
      for (int k = v.p; k < v.m; ++k) h(k, k) = 1.0 / v.beta(k - v.p);
      break;
    case VKind::LogSumExpPlusQuad: {
      const double rest = 1.0 - s.head(v.p).sum();
      for (int j = 0; j < v.p; ++j)
        for (int k = 0; k < v.p; ++k)
          h(j, k) = ((j == k ? 1.0 / s(j) : 0.0) + 1.0 / rest) / v.beta_scale;
      for (int k = v.p; k < v.m; ++k) h(k, k) = 1.0 / v.beta(k - v.p);
      break;
    }
    case VKind::IndicatorCone:
      break;
  }
  return h;
}

// Set-valued check sigma in dV_J(y), equivalently y in dV_J*(sigma):
// y_j = 0 on J, and y_j <= 0, sigma_j >= 0, y_j sigma_j = 0 off J.
inline bool v_subdifferential_pair_check(const CanonicalFunction& v, const Vec& y, const Vec& s,
                                         double tol = 1e-9) {
  check_dim(v, y, "v_subdifferential_pair_check");
  check_dim(v, s, "v_subdifferential_pair_check");
  require(v.kind == VKind::IndicatorCone, ErrorCode::UnsupportedForKind,
          "pair check is defined for IndicatorCone only");
  for (int j = 1; j <= v.m; ++j) {
    double yj = y(j - 1), sj = s(j - 1);
    if (v.in_J(j)) {
      if (std::abs(yj) > tol) return false;
    } else {
      if (yj > tol || sj < -tol || std::abs(yj * sj) > tol) return false;
    }
  }
  return true;
}

}  // namespace cdt
