#pragma once

// Quadratic data (A_i, b_i, c_i) for i = 0..m and the sigma-affine assembly
// A(sigma) = sum sigma_k A_k (sigma_0 := 1), likewise b, c. Dense storage,
// desk scale (n, m <= 64).

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include "cdt/canonical_v.hpp"
#include "cdt/error.hpp"

namespace cdt {

// One q(x) = 1/2 <x, A x> - <b, x> + c with A symmetric.
struct QuadraticForm {
  Mat A;
  Vec b;
  double c = 0.0;

  double value(const Vec& x) const { return 0.5 * x.dot(A * x) - b.dot(x) + c; }
  Vec grad(const Vec& x) const { return A * x - b; }
};

// The problem f = q_0 + V(q_1, ..., q_m).
struct ProblemInstance {
  int n = 0;
  int m = 0;
  std::vector<QuadraticForm> quadratics;  // size m + 1, index 0 = objective part
  CanonicalFunction v;

  const QuadraticForm& q(int i) const { return quadratics[static_cast<size_t>(i)]; }
};

// Symmetrizes each A_i as (A + A^T)/2; asymmetry beyond 1e-8 inf-norm is rejected.
inline ProblemInstance make_problem(int n, int m, std::vector<QuadraticForm> quadratics,
                                    CanonicalFunction v) {
  require(n > 0 && m > 0, ErrorCode::DimensionMismatch, "n and m must be positive");
  require(static_cast<int>(quadratics.size()) == m + 1, ErrorCode::DimensionMismatch,
          "expected m + 1 quadratic forms");
  require(v.m == m, ErrorCode::DimensionMismatch, "canonical function dimension must equal m");
  for (auto& q : quadratics) {
    require(q.A.rows() == n && q.A.cols() == n && q.b.size() == n, ErrorCode::DimensionMismatch,
            "all quadratics must share dimension n");
    const double asym = (q.A - q.A.transpose()).cwiseAbs().maxCoeff();
    require(asym <= 1e-8, ErrorCode::AsymmetricInput, "A_i asymmetric beyond tolerance");
    q.A = 0.5 * (q.A + q.A.transpose()).eval();
  }
  ProblemInstance p;
  p.n = n;
  p.m = m;
  p.quadratics = std::move(quadratics);
  p.v = std::move(v);
  return p;
}

// q(x) = (q_1(x), ..., q_m(x))^T.
inline Vec eval_q(const ProblemInstance& p, const Vec& x) {
  require(x.size() == p.n, ErrorCode::DimensionMismatch, "eval_q: x must have length n");
  Vec out(p.m);
  for (int i = 1; i <= p.m; ++i) out(i - 1) = p.q(i).value(x);
  return out;
}

struct Assembled {
  Mat A;
  Vec b;
  double c = 0.0;
};

inline Assembled assemble(const ProblemInstance& p, const Vec& sigma) {
  require(sigma.size() == p.m, ErrorCode::DimensionMismatch, "assemble: sigma must have length m");
  Assembled out;
  out.A = p.q(0).A;
  out.b = p.q(0).b;
  out.c = p.q(0).c;
  for (int k = 1; k <= p.m; ++k) {
    const double s = sigma(k - 1);
    out.A += s * p.q(k).A;
    out.b += s * p.q(k).b;
    out.c += s * p.q(k).c;
  }
  return out;
}

// L(x, sigma) = q_0(x) + <q(x), sigma>.
inline double lagrangian(const ProblemInstance& p, const Vec& x, const Vec& sigma) {
  require(x.size() == p.n, ErrorCode::DimensionMismatch, "lagrangian: x must have length n");
  require(sigma.size() == p.m, ErrorCode::DimensionMismatch, "lagrangian: sigma must have length m");
  return p.q(0).value(x) + eval_q(p, x).dot(sigma);
}

}  // namespace cdt
