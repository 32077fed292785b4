#pragma once

// Shared test helpers: deterministic random instances and the
// reverse-engineering construction that plants a critical pair (xbar,
// sigmabar) with a prescribed definiteness of A(sigmabar).

#include <random>
#include <vector>

#include "cdt/cdt.hpp"

namespace cdt_test {

using namespace cdt;

using Rng = std::mt19937;

inline double runif(Rng& rng, double lo = -1.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Vec rand_vec(Rng& rng, int n, double scale = 1.0) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = scale * runif(rng);
  return v;
}

inline Mat rand_sym(Rng& rng, int n, double scale = 1.0) {
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = scale * runif(rng);
  return 0.5 * (a + a.transpose()).eval();
}

// SPD with eigenvalues in [lo, hi].
inline Mat rand_spd(Rng& rng, int n, double lo = 0.5, double hi = 2.0) {
  const Mat g = rand_sym(rng, n);
  Eigen::SelfAdjointEigenSolver<Mat> eig(g);
  Vec lam(n);
  for (int i = 0; i < n; ++i) lam(i) = runif(rng, lo, hi);
  return eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
}

inline CanonicalFunction rand_gamma_sc2(Rng& rng, int m) {
  switch (static_cast<int>(std::uniform_int_distribution<int>(0, 3)(rng))) {
    case 0: {
      Vec beta(m);
      for (int i = 0; i < m; ++i) beta(i) = runif(rng, 0.5, 2.0);
      return make_quadratic_diag(beta);
    }
    case 1:
      return make_exponential(m);
    case 2: {
      const int p = std::uniform_int_distribution<int>(0, m)(rng);
      Vec beta(m - p);
      for (int i = 0; i < m - p; ++i) beta(i) = runif(rng, 0.5, 2.0);
      return make_exp_plus_quad(m, p, beta);
    }
    default: {
      const int p = std::uniform_int_distribution<int>(1, m)(rng);
      Vec beta(m - p);
      for (int i = 0; i < m - p; ++i) beta(i) = runif(rng, 0.5, 2.0);
      return make_log_sum_exp(m, p, runif(rng, 0.5, 2.0), beta);
    }
  }
}

struct PlantedPair {
  ProblemInstance p;
  Vec xbar;
  Vec sigmabar;
};

// Draw the constraint quadratics and xbar first, read off
// sigmabar = grad V(q(xbar)), then choose A_0 so that A(sigmabar) equals a
// prescribed matrix P and b_0 so that A(sigmabar) xbar = b(sigmabar).
inline PlantedPair plant_critical_pair(Rng& rng, int n, int m, const CanonicalFunction& v,
                                       const Mat& target_A) {
  std::vector<QuadraticForm> qs(static_cast<size_t>(m + 1));
  for (int k = 1; k <= m; ++k) {
    qs[static_cast<size_t>(k)].A = rand_sym(rng, n);
    qs[static_cast<size_t>(k)].b = rand_vec(rng, n);
    qs[static_cast<size_t>(k)].c = runif(rng);
  }
  const Vec xbar = rand_vec(rng, n);

  Vec y(m);
  for (int k = 1; k <= m; ++k) y(k - 1) = qs[static_cast<size_t>(k)].value(xbar);
  const Vec sigmabar = v_grad(v, y);

  Mat A0 = target_A;
  Vec b0 = target_A * xbar;
  for (int k = 1; k <= m; ++k) {
    A0 -= sigmabar(k - 1) * qs[static_cast<size_t>(k)].A;
    b0 -= sigmabar(k - 1) * qs[static_cast<size_t>(k)].b;
  }
  qs[0] = QuadraticForm{A0, b0, runif(rng)};

  PlantedPair out;
  out.p = make_problem(n, m, std::move(qs), v);
  out.xbar = xbar;
  out.sigmabar = sigmabar;
  return out;
}

inline PlantedPair plant_pd_pair(Rng& rng, int n, int m) {
  const auto v = rand_gamma_sc2(rng, m);
  return plant_critical_pair(rng, n, m, v, rand_spd(rng, n));
}

inline PlantedPair plant_nd_pair(Rng& rng, int n, int m) {
  const auto v = rand_gamma_sc2(rng, m);
  return plant_critical_pair(rng, n, m, v, (-rand_spd(rng, n)).eval());
}

// m = 1 < n = 2: the pair ((1, 0), -1) is critical, sigmabar is a strict
// local min of D, and hess f(xbar) has eigenvalues 0.75 and -0.25.
inline ProblemInstance wide_saddle_instance() {
  QuadraticForm q0{0.75 * Mat::Identity(2, 2), (Vec(2) << -0.25, 0.0).finished(), 0.0};
  QuadraticForm q1{Mat::Identity(2, 2), Vec::Zero(2), -1.5};
  return make_problem(2, 1, {q0, q1}, make_quadratic_diag(Vec::Ones(1)));
}

inline double rel_err(const Vec& got, const Vec& want) {
  return (got - want).cwiseAbs().maxCoeff() / std::max(1.0, want.cwiseAbs().maxCoeff());
}

inline double rel_err(const Mat& got, const Mat& want) {
  return (got - want).cwiseAbs().maxCoeff() / std::max(1.0, want.cwiseAbs().maxCoeff());
}

}  // namespace cdt_test
