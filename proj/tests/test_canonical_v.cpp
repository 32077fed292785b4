#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace cdt;
using cdt_test::Rng;

namespace {

std::vector<CanonicalFunction> gamma_sc2_catalog(int m) {
  Vec beta(m);
  for (int i = 0; i < m; ++i) beta(i) = 0.5 + i;
  std::vector<CanonicalFunction> out;
  out.push_back(make_quadratic_diag(beta));
  out.push_back(make_exponential(m));
  if (m >= 2) {
    out.push_back(make_exp_plus_quad(m, 1, beta.tail(m - 1)));
    out.push_back(make_log_sum_exp(m, 1, 1.5, beta.tail(m - 1)));
  }
  out.push_back(make_log_sum_exp(m, m, 2.0, Vec(0)));
  return out;
}

// interior point of dom V* for each kind
Vec interior_sigma(const CanonicalFunction& v, Rng& rng) {
  Vec s = cdt_test::rand_vec(rng, v.m);
  if (v.kind == VKind::Exponential || v.kind == VKind::ExpPlusQuad) {
    for (int k = 0; k < v.p; ++k) s(k) = 0.2 + std::abs(s(k));
  } else if (v.kind == VKind::LogSumExpPlusQuad) {
    for (int k = 0; k < v.p; ++k) s(k) = 0.05 + 0.5 * std::abs(s(k)) / v.m;
    const double total = s.head(v.p).sum();
    if (total >= 0.9) s.head(v.p) *= 0.9 / total;
  }
  return s;
}

}  // namespace

TEST_CASE("catalog values", "[canonical_v]") {
  CHECK(v_value(make_indicator_cone(1, {}), Vec::Constant(1, -1.0)) == 0.0);
  CHECK(v_value(make_indicator_cone(1, {}), Vec::Constant(1, 0.1)) == kInf);
  CHECK(v_value(make_quadratic_diag(Vec::Constant(1, 2.0)), Vec::Constant(1, 3.0)) == 9.0);
  CHECK(v_value(make_exp_plus_quad(1, 1, Vec(0)), Vec::Zero(1)) == 1.0);
}

TEST_CASE("catalog conjugates", "[canonical_v]") {
  CHECK(v_conjugate(make_indicator_cone(1, {}), Vec::Constant(1, -0.1)) == kInf);
  CHECK(v_conjugate(make_indicator_cone(1, {}), Vec::Constant(1, 5.0)) == 0.0);

  SECTION("QuadraticDiag beta=2 at sigma=4 -> 4, against the sup oracle") {
    const auto v = make_quadratic_diag(Vec::Constant(1, 2.0));
    const Vec s = Vec::Constant(1, 4.0);
    CHECK(v_conjugate(v, s) == 4.0);
    CHECK(std::abs(numeric_conjugate(v, s) - 4.0) <= 1e-6);
  }

  SECTION("Exponential at sigma=1 -> -1, against the sup oracle") {
    const auto v = make_exponential(1);
    const Vec s = Vec::Ones(1);
    CHECK(v_conjugate(v, s) == -1.0);
    CHECK(std::abs(numeric_conjugate(v, s) + 1.0) <= 1e-6);
  }

  SECTION("boundary limit 0 log 0 = 0") {
    const auto v = make_exponential(2);
    Vec s(2);
    s << 0.0, 1.0;
    CHECK(v_conjugate(v, s) == -1.0);
    CHECK_FALSE(in_int_dom_vstar(v, s));
    CHECK(in_dom_vstar(v, s));
  }
}

TEST_CASE("catalog derivatives", "[canonical_v]") {
  SECTION("QuadraticDiag") {
    const auto v = make_quadratic_diag(Vec::Constant(1, 2.0));
    CHECK(v_grad(v, Vec::Constant(1, 3.0))(0) == 6.0);
    CHECK(v_hess(v, Vec::Constant(1, 3.0))(0, 0) == 2.0);
  }

  SECTION("Exponential conjugate gradient inverts the gradient") {
    const auto v = make_exponential(1);
    CHECK(v_conj_grad(v, Vec::Ones(1))(0) == 0.0);
    Rng rng(21);
    for (int t = 0; t < 10; ++t) {
      const Vec s = Vec::Constant(1, 0.1 + std::abs(cdt_test::runif(rng)) * 3.0);
      CHECK(std::abs(v_grad(v, v_conj_grad(v, s))(0) - s(0)) <= 1e-12);
    }
  }

  SECTION("hess V*(sigma) hess V(grad V*(sigma)) = I for every GammaSC2 kind") {
    Rng rng(22);
    for (int m : {1, 3}) {
      for (const auto& v : gamma_sc2_catalog(m)) {
        const Vec s = interior_sigma(v, rng);
        const Mat prod = v_conj_hess(v, s) * v_hess(v, v_conj_grad(v, s));
        CHECK((prod - Mat::Identity(m, m)).cwiseAbs().maxCoeff() <= 1e-8);
      }
    }
  }

  SECTION("error paths") {
    const auto cone = make_indicator_cone(2, {1});
    CHECK_THROWS_AS(v_grad(cone, Vec::Zero(2)), Error);
    const auto ev = make_exponential(1);
    CHECK_THROWS_AS(v_conj_grad(ev, Vec::Zero(1)), Error);  // boundary of dom V*
    CHECK_THROWS_AS(v_conj_grad(ev, Vec::Constant(1, -1.0)), Error);
  }
}

TEST_CASE("subdifferential pair check", "[canonical_v]") {
  const auto v0 = make_indicator_cone(1, {});
  CHECK(v_subdifferential_pair_check(v0, Vec::Zero(1), Vec::Constant(1, 5.0)));
  CHECK(v_subdifferential_pair_check(v0, Vec::Constant(1, -1.0), Vec::Zero(1)));
  CHECK_FALSE(v_subdifferential_pair_check(v0, Vec::Constant(1, -1.0), Vec::Constant(1, 2.0)));

  const auto v1 = make_indicator_cone(1, {1});
  CHECK_FALSE(v_subdifferential_pair_check(v1, Vec::Constant(1, 0.3), Vec::Constant(1, -7.0)));
  CHECK(v_subdifferential_pair_check(v1, Vec::Zero(1), Vec::Constant(1, -7.0)));

  CHECK_THROWS_AS(
      v_subdifferential_pair_check(make_exponential(1), Vec::Zero(1), Vec::Zero(1)), Error);
}

TEST_CASE("Fenchel-Young and Legendre bijection", "[canonical_v]") {
  Rng rng(23);
  for (int m : {1, 2, 3}) {
    for (const auto& v : gamma_sc2_catalog(m)) {
      for (int t = 0; t < 10; ++t) {
        const Vec y = cdt_test::rand_vec(rng, m, 1.5);
        const Vec s = interior_sigma(v, rng);
        // inequality everywhere on the sampled domain
        CHECK(v_value(v, y) + v_conjugate(v, s) >= y.dot(s) - 1e-10);
        // equality on the gradient graph
        const Vec sy = v_grad(v, y);
        CHECK(std::abs(v_value(v, y) + v_conjugate(v, sy) - y.dot(sy)) <= 1e-8);
        // bijection
        CHECK((v_conj_grad(v, sy) - y).cwiseAbs().maxCoeff() <= 1e-8);
      }
    }
  }
}

TEST_CASE("closed-form conjugates match the numeric sup oracle", "[canonical_v]") {
  Rng rng(24);
  for (int m : {1, 2}) {
    for (const auto& v : gamma_sc2_catalog(m)) {
      for (int t = 0; t < 3; ++t) {
        const Vec s = interior_sigma(v, rng);
        const double exact = v_conjugate(v, s);
        CHECK(std::abs(numeric_conjugate(v, s) - exact) <=
              1e-6 * std::max(1.0, std::abs(exact)));
      }
    }
  }
  // cone kinds: conjugate is 0 on Gamma_J
  const auto cone = make_indicator_cone(2, {2});
  Vec s(2);
  s << 0.7, -0.4;  // sigma_2 free because 2 is an equality index
  CHECK(v_conjugate(cone, s) == 0.0);
  CHECK(std::abs(numeric_conjugate(cone, s)) <= 1e-6);
}

TEST_CASE("hess V positive definite on sampled interior points", "[canonical_v]") {
  Rng rng(25);
  for (int m : {1, 2, 4}) {
    for (const auto& v : gamma_sc2_catalog(m)) {
      for (int t = 0; t < 10; ++t) {
        const Vec y = cdt_test::rand_vec(rng, m, 2.0);
        Eigen::SelfAdjointEigenSolver<Mat> eig(v_hess(v, y));
        CHECK(eig.eigenvalues().minCoeff() > 0.0);
      }
    }
  }
}
