#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace cdt;

TEST_CASE("finite differences on quadratics are exact to rounding", "[oracle]") {
  Mat A(2, 2);
  A << 3.0, 1.0, 1.0, 2.0;
  const Vec b = Vec::Ones(2);
  const auto fn = [&](const Vec& x) { return 0.5 * x.dot(A * x) - b.dot(x); };
  Vec x(2);
  x << 0.3, -0.7;
  CHECK((fd_grad(fn, x) - (A * x - b)).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK((fd_hess(fn, x) - A).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("stencil leaving the domain is an error", "[oracle]") {
  const auto fn = [](const Vec& x) { return x(0) >= 0.0 ? x(0) : kNaN; };
  CHECK_THROWS_AS(fd_grad(fn, Vec::Zero(1), 1e-3), Error);
}

TEST_CASE("grid extremum probe", "[oracle]") {
  const auto sq = [](const Vec& x) { return x(0) * x(0); };
  CHECK(grid_extremum_probe(sq, Vec::Zero(1)).verdict == ProbeVerdict::LocalMin);

  const auto nsq = [](const Vec& x) { return -x(0) * x(0); };
  CHECK(grid_extremum_probe(nsq, Vec::Zero(1)).verdict == ProbeVerdict::LocalMax);

  const auto cube = [](const Vec& x) { return x(0) * x(0) * x(0); };
  const auto pr = grid_extremum_probe(cube, Vec::Zero(1));
  CHECK(pr.verdict == ProbeVerdict::Neither);
  CHECK(pr.ascent_witness.size() == 1);
  CHECK(pr.descent_witness.size() == 1);
  CHECK(cube(pr.ascent_witness) > 0.0);
  CHECK(cube(pr.descent_witness) < 0.0);

  // 2-d saddle
  const auto saddle = [](const Vec& x) { return x(0) * x(0) - x(1) * x(1); };
  CHECK(grid_extremum_probe(saddle, Vec::Zero(2)).verdict == ProbeVerdict::Neither);
}

TEST_CASE("numeric conjugate oracle", "[oracle]") {
  CHECK(std::abs(numeric_conjugate(make_quadratic_diag(Vec::Constant(1, 2.0)),
                                   Vec::Constant(1, 4.0)) -
                 4.0) <= 1e-6);
  CHECK(std::abs(numeric_conjugate(make_indicator_cone(1, {}), Vec::Ones(1))) <= 1e-6);
  CHECK(std::abs(numeric_conjugate(make_exponential(1), Vec::Ones(1)) + 1.0) <= 1e-6);
}

TEST_CASE("numeric conjugate with empty search region", "[oracle]") {
  // dom V_{J={1}} = {0}; a 40-point grid over [-20, 20] misses it.
  CHECK_THROWS_AS(numeric_conjugate(make_indicator_cone(1, {1}), Vec::Ones(1), 20.0, 40),
                  Error);
}
