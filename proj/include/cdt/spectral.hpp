#pragma once

// Spectra of Q = H H^T and R = H^T H for a linear map H: R^m -> R^n, with the
// extreme Rayleigh values of phi(x) = ||H^T x||^2 and psi(y) = ||H y||^2.
// All spectra come from symmetric eigensolvers on Q and R; the operators are
// symmetric PSD and numerical symmetry is enforced by construction.

#include <Eigen/Dense>

#include <cmath>
#include <optional>

#include "cdt/canonical_v.hpp"
#include "cdt/error.hpp"

namespace cdt {

struct SpectralSummary {
  double alpha = 0.0;  // lambda_max(Q) = max of phi on the unit sphere
  double beta = 0.0;   // lambda_max(R) = max of psi on the unit sphere
  std::optional<double> gamma;  // min positive eigenvalue of Q; absent iff H = 0
  std::optional<double> delta;  // min positive eigenvalue of R; absent iff H = 0
  int rank = 0;
  int ker_Q_dim = 0;  // = n - rank
  int ker_R_dim = 0;  // = m - rank
  Vec q_eigenvalues;  // ascending
  Vec r_eigenvalues;  // ascending
  Vec alpha_witness;  // unit x with Q x = alpha x
};

inline SpectralSummary spectral_summary(const Mat& H) {
  const int n = static_cast<int>(H.rows());
  const int m = static_cast<int>(H.cols());
  Mat Q = H * H.transpose();
  Mat R = H.transpose() * H;
  Q = 0.5 * (Q + Q.transpose()).eval();
  R = 0.5 * (R + R.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Mat> eq(Q), er(R);
  SpectralSummary s;
  s.q_eigenvalues = eq.eigenvalues().cwiseMax(0.0);
  s.r_eigenvalues = er.eigenvalues().cwiseMax(0.0);
  s.alpha = s.q_eigenvalues(n - 1);
  s.beta = s.r_eigenvalues(m - 1);
  s.alpha_witness = eq.eigenvectors().col(n - 1);

  const double cut = 1e-10 * std::max(1.0, std::max(s.alpha, s.beta));
  int rank = 0;
  for (int i = 0; i < n; ++i)
    if (s.q_eigenvalues(i) > cut) ++rank;
  s.rank = rank;
  s.ker_Q_dim = n - rank;
  s.ker_R_dim = m - rank;

  if (rank > 0) {
    double gq = kInf, dr = kInf;
    for (int i = 0; i < n; ++i)
      if (s.q_eigenvalues(i) > cut) gq = std::min(gq, s.q_eigenvalues(i));
    for (int i = 0; i < m; ++i)
      if (s.r_eigenvalues(i) > cut) dr = std::min(dr, s.r_eigenvalues(i));
    s.gamma = gq;
    s.delta = dr;
  }
  return s;
}

struct KernelImageFlags {
  bool im_H_full = false;      // Im H = R^n, i.e. ker Q = {0}
  bool ker_H_trivial = false;  // ker H = {0}, i.e. ker R = {0}
};

inline KernelImageFlags kernel_image_flags(const Mat& H) {
  const auto s = spectral_summary(H);
  return KernelImageFlags{s.ker_Q_dim == 0, s.ker_R_dim == 0};
}

}  // namespace cdt
