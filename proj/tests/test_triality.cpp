#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace cdt;
using cdt_test::Rng;

namespace {

// n = m = 1 instance with -A(sigmabar) = 4 and hess V = 9 at the planted pair
// (xbar, sigmabar) = (0.5, -2).
ProblemInstance scalar_factor_instance() {
  QuadraticForm q0{Mat::Constant(1, 1, -2.0), Vec::Constant(1, -2.0), 0.0};
  QuadraticForm q1{Mat::Constant(1, 1, 1.0), Vec::Zero(1), -2.0 / 9.0 - 0.125};
  return make_problem(1, 1, {q0, q1}, make_quadratic_diag(Vec::Constant(1, 9.0)));
}

// Unit-sphere equality constraint: minimize |x|^2/2 - <b0, x> on |x| = 1.
ProblemInstance sphere_instance() {
  QuadraticForm q0{Mat::Identity(2, 2), (Vec(2) << 0.6, 0.8).finished(), 0.0};
  QuadraticForm q1{Mat::Identity(2, 2), Vec::Zero(2), -0.5};
  return make_problem(2, 1, {q0, q1}, make_indicator_cone(1, {1}));
}

Verdict fd_side_verdict(const Mat& hess, double margin = 1e-7) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(hess);
  const double lo = eig.eigenvalues().minCoeff(), hi = eig.eigenvalues().maxCoeff();
  const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  if (hi < -margin * scale) return Verdict::LocalStrictMax;
  if (lo > margin * scale) return Verdict::LocalStrictMin;
  if (hi > margin * scale && lo < -margin * scale) return Verdict::NotLocalExtremum;
  return Verdict::Indeterminate;
}

}  // namespace

TEST_CASE("factorize", "[triality]") {
  SECTION("scalar: E = 2, F = 3, H = 3 d_1") {
    const auto p = scalar_factor_instance();
    const Vec xbar = Vec::Constant(1, 0.5), sbar = Vec::Constant(1, -2.0);
    REQUIRE(critical_pair_residual(p, xbar, sbar).critical());
    const auto f = factorize(p, xbar, sbar);
    CHECK(f.E(0, 0) == 2.0);
    CHECK(f.F(0, 0) == 3.0);
    CHECK(f.d(1)(0) == 0.25);  // (A_1 xbar - b_1) / 2
    CHECK(f.H(0, 0) == 0.75);
  }

  SECTION("A_i xbar = b_i for all i gives H = 0") {
    const auto dw = doublewell_problem().instance;
    const auto f = factorize(dw, Vec::Zero(1), Vec::Constant(1, -1.0));
    CHECK(f.H(0, 0) == 0.0);
    CHECK(f.spectra.alpha == 0.0);
  }

  SECTION("factorization residuals on planted pairs") {
    Rng rng(61);
    for (int t = 0; t < 10; ++t) {
      auto pp = cdt_test::plant_nd_pair(rng, 3, 2);
      const auto f = factorize(pp.p, pp.xbar, pp.sigmabar);
      const Mat A = assemble(pp.p, pp.sigmabar).A;
      CHECK((f.E.transpose() * f.E + A).cwiseAbs().maxCoeff() <=
            1e-9 * (1.0 + A.cwiseAbs().maxCoeff()));
      const Mat vh = v_hess(pp.p.v, eval_q(pp.p, pp.xbar));
      CHECK((f.F.transpose() * f.F - vh).cwiseAbs().maxCoeff() <=
            1e-9 * (1.0 + vh.cwiseAbs().maxCoeff()));
      for (int i = 1; i <= 2; ++i)
        CHECK((f.E.transpose() * f.d(i) - pp.p.q(i).grad(pp.xbar)).cwiseAbs().maxCoeff() <=
              1e-9);
    }
  }

  SECTION("error paths") {
    const auto p1 = example1_problem().instance;
    CHECK_THROWS_MATCHES(factorize(p1, Vec::Ones(1), Vec::Zero(1)), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == ErrorCode::NotGammaSC2;
                         }));
    Rng rng(62);
    auto pd = cdt_test::plant_pd_pair(rng, 2, 2);
    CHECK_THROWS_MATCHES(factorize(pd.p, pd.xbar, pd.sigmabar), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == ErrorCode::NotNegativeDefinite;
                         }));
    auto nd = cdt_test::plant_nd_pair(rng, 2, 2);
    CHECK_THROWS_MATCHES(
        factorize(nd.p, nd.xbar + Vec::Ones(2), nd.sigmabar), Error,
        Catch::Matchers::Predicate<Error>(
            [](const Error& e) { return e.code() == ErrorCode::NotCritical; }));
  }
}

TEST_CASE("verdict_psd", "[triality]") {
  SECTION("Example 1 has a PD critical pair at sigma = 2, x = -1") {
    // grad D(2) = q_1(x(2)) = q_1(-1) = 0, so (x(2), 2) is critical and
    // A(2) = 1 > 0: the min-max branch applies and f(-1) = -3/2 is the
    // global minimum of f on [-1, 1].
    const auto p = example1_problem().instance;
    const Vec xbar = solve_x_of_sigma(p, Vec::Constant(1, 2.0));
    CHECK(xbar(0) == -1.0);
    const auto rep = verdict_psd(p, xbar, Vec::Constant(1, 2.0));
    CHECK(rep.branch == Branch::MinMax_PD);
    CHECK(rep.x_verdict == Verdict::UniqueGlobalMin);
    CHECK(rep.sigma_verdict == Verdict::GlobalMax);
    CHECK(std::abs(rep.f_at_x + 1.5) <= 1e-12);
    CHECK(std::abs(rep.xi_at_pair + 1.5) <= 1e-12);
    CHECK(std::abs(rep.d_at_sigma + 1.5) <= 1e-12);

    double grid_min = kInf;
    for (int k = 0; k <= 2000; ++k)
      grid_min = std::min(grid_min, f_value(p, Vec::Constant(1, -1.0 + 1e-3 * k)));
    CHECK(std::abs(grid_min + 1.5) <= 1e-5);
  }

  SECTION("planted PD pairs: chain equality to 1e-10") {
    Rng rng(63);
    for (int t = 0; t < 10; ++t) {
      auto pp = cdt_test::plant_pd_pair(rng, 3, 2);
      const auto rep = verdict_psd(pp.p, pp.xbar, pp.sigmabar);
      CHECK(rep.branch == Branch::MinMax_PD);
      CHECK(rep.x_verdict == Verdict::UniqueGlobalMin);
      const double scale = std::max(1.0, std::abs(rep.f_at_x));
      CHECK(std::abs(rep.f_at_x - rep.xi_at_pair) <= 1e-10 * scale);
      CHECK(std::abs(rep.xi_at_pair - rep.d_at_sigma) <= 1e-10 * scale);
    }
  }

  SECTION("equality-constrained sphere instance matches the sphere grid") {
    const auto p = sphere_instance();
    const Vec xbar = (Vec(2) << 0.6, 0.8).finished();
    const auto rep = verdict_psd(p, xbar, Vec::Zero(1));
    CHECK(rep.x_verdict == Verdict::UniqueGlobalMin);
    CHECK(std::abs(rep.f_at_x + 0.5) <= 1e-12);
    double grid_min = kInf;
    for (int k = 0; k < 100000; ++k) {
      const double th = 2.0 * M_PI * k / 100000;
      grid_min = std::min(grid_min, p.q(0).value((Vec(2) << std::cos(th), std::sin(th)).finished()));
    }
    CHECK(grid_min >= rep.f_at_x - 1e-9);
    CHECK(grid_min <= rep.f_at_x + 1e-8);
  }

  SECTION("Prop. 1 sampling: no sampled point beats the certified pair") {
    Rng rng(64);
    auto pp = cdt_test::plant_pd_pair(rng, 3, 2);
    const auto rep = verdict_psd(pp.p, pp.xbar, pp.sigmabar);
    for (int t = 0; t < 1000; ++t)
      CHECK(f_value(pp.p, pp.xbar + cdt_test::rand_vec(rng, 3, 3.0)) >= rep.f_at_x - 1e-9);
    int hit = 0;
    for (int t = 0; t < 2000 && hit < 100; ++t) {
      const Vec s = pp.sigmabar + cdt_test::rand_vec(rng, 2, 0.3);
      if (!classify_sigma(pp.p, s).in_Scol_plus()) continue;
      ++hit;
      CHECK(d_value(pp.p, s) <= rep.d_at_sigma + 1e-9);
    }
    CHECK(hit == 100);
  }

  SECTION("precondition failures carry the violated clause") {
    const auto p = example1_problem().instance;
    // (1, 0) is critical but A(0) = -1 is not PSD
    CHECK_THROWS_MATCHES(verdict_psd(p, Vec::Ones(1), Vec::Zero(1)), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == ErrorCode::PreconditionFailed &&
                                  std::string(e.what()).find("positive semidefinite") !=
                                      std::string::npos;
                         }));
    CHECK_THROWS_AS(verdict_psd(p, Vec::Zero(1), Vec::Constant(1, 2.0)), Error);
  }
}

TEST_CASE("verdict_negdef", "[triality]") {
  SECTION("double-well inner pair: double-max, matching finite differences") {
    const auto dw = doublewell_problem().instance;
    const auto rep = verdict_negdef(dw, Vec::Zero(1), Vec::Constant(1, -1.0));
    CHECK(rep.branch == Branch::SaddleNegDef);
    CHECK(rep.x_verdict == Verdict::LocalStrictMax);
    CHECK(rep.sigma_verdict == Verdict::LocalStrictMax);
    CHECK(rep.nonsingular_f_hess);

    const auto fn_f = [&](const Vec& z) { return f_value(dw, z); };
    const auto fn_d = [&](const Vec& s) { return d_value(dw, s); };
    CHECK(fd_side_verdict(fd_hess(fn_f, Vec::Zero(1))) == Verdict::LocalStrictMax);
    CHECK(fd_side_verdict(fd_hess(fn_d, Vec::Constant(1, -1.0))) == Verdict::LocalStrictMax);
  }

  SECTION("m = 1 < n = 2: dual strict min, primal saddle") {
    const auto p = cdt_test::wide_saddle_instance();
    const Vec xbar = (Vec(2) << 1.0, 0.0).finished();
    const Vec sbar = Vec::Constant(1, -1.0);
    REQUIRE(critical_pair_residual(p, xbar, sbar).critical());
    const auto rep = verdict_negdef(p, xbar, sbar);
    CHECK(rep.sigma_verdict == Verdict::LocalStrictMin);
    CHECK(rep.x_verdict == Verdict::NotLocalExtremum);
    REQUIRE(rep.factorization);
    CHECK(std::abs(rep.factorization->spectra.beta - 4.0) <= 1e-10);

    // the probe finds both an ascent and a descent direction for f at xbar
    const auto pr = grid_extremum_probe([&](const Vec& z) { return f_value(p, z); }, xbar);
    CHECK(pr.verdict == ProbeVerdict::Neither);
    CHECK(pr.ascent_witness.size() == 2);
    CHECK(pr.descent_witness.size() == 2);
    // and sigmabar is a strict local min of D
    const auto prd =
        grid_extremum_probe([&](const Vec& s) { return d_value(p, s); }, sbar);
    CHECK(prd.verdict == ProbeVerdict::LocalMin);
  }

  SECTION("spectral classification agrees with direct Hessians (r-n2f, r-n2pd)") {
    Rng rng(65);
    int decided = 0;
    for (int t = 0; t < 40; ++t) {
      const int n = 1 + static_cast<int>(rng() % 3);
      const int m = 1 + static_cast<int>(rng() % 3);
      auto pp = cdt_test::plant_nd_pair(rng, n, m);
      const auto rep = verdict_negdef(pp.p, pp.xbar, pp.sigmabar);
      REQUIRE(rep.factorization);
      const auto& sp = rep.factorization->spectra;
      const double bandgap =
          std::min({std::abs(sp.alpha - 1.0), std::abs(sp.q_eigenvalues(0) - 1.0),
                    std::abs(sp.r_eigenvalues(0) - 1.0)});
      if (bandgap <= 1e-6) continue;  // inside the decision band: Indeterminate by design
      ++decided;
      CHECK(rep.x_verdict == fd_side_verdict(f_hess(pp.p, pp.xbar)));
      CHECK(rep.sigma_verdict == fd_side_verdict(d_hess(pp.p, pp.sigmabar)));
    }
    CHECK(decided >= 35);
  }

  SECTION("Cor. 1(a): local-max status transfers between f and D") {
    Rng rng(66);
    for (int t = 0; t < 25; ++t) {
      auto pp = cdt_test::plant_nd_pair(rng, 2, 2);
      const auto rep = verdict_negdef(pp.p, pp.xbar, pp.sigmabar);
      if (!rep.nonsingular_f_hess) continue;
      const bool f_max = fd_side_verdict(f_hess(pp.p, pp.xbar)) == Verdict::LocalStrictMax;
      const bool d_max =
          fd_side_verdict(d_hess(pp.p, pp.sigmabar)) == Verdict::LocalStrictMax;
      CHECK(f_max == d_max);
      if (rep.x_verdict == Verdict::LocalStrictMax ||
          rep.sigma_verdict == Verdict::LocalStrictMax) {
        CHECK(rep.x_verdict == rep.sigma_verdict);
      }
    }
  }
}

TEST_CASE("analyze_pair dispatch", "[triality]") {
  SECTION("Example 1 anti-triality pair routes to the cone certificate") {
    const auto p = example1_problem().instance;
    const auto rep = analyze_pair(p, Vec::Ones(1), Vec::Zero(1));
    CHECK(rep.branch == Branch::SaddleNegDef);
    CHECK(rep.x_verdict == Verdict::GlobalMax);
    CHECK(rep.sigma_verdict == Verdict::GlobalMin);
    REQUIRE(rep.cone_certificate);
    CHECK(rep.cone_certificate->type == Certificate::Type::GlobalMax);
  }

  SECTION("non-critical pairs are reported, not judged") {
    const auto dw = doublewell_problem().instance;
    const auto rep = analyze_pair(dw, Vec::Constant(1, 0.3), Vec::Constant(1, -0.4));
    CHECK(rep.branch == Branch::NotApplicable);
    CHECK(rep.x_verdict == Verdict::Indeterminate);
  }

  SECTION("PSD pairs route to the min-max branch") {
    const auto dw = doublewell_problem().instance;
    const auto rep = analyze_pair(dw, Vec::Constant(1, 2.0), Vec::Ones(1));
    CHECK(rep.branch == Branch::MinMax_PSD);  // A(1) = 0 is singular PSD
    CHECK(rep.x_verdict == Verdict::GlobalMin);
  }
}
