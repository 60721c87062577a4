#include <cmath>

#include "doctest.h"
#include "ripdg/analysis.hpp"

using namespace ripdg;

namespace {
const BoundingBox kUnit{{0.0, 0.0}, {1.0, 1.0}};
}

TEST_CASE("norms of the sine solution") {
  const Mesh m = buildUniformSquares(4, kUnit);
  const DgSpace s(m, 2);
  const ProblemSpec pb = poissonSine();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(s.numDofs());
  CHECK(errorL2(s, zero, pb.exact) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(errorBrokenH1(s, zero, pb.exactGrad) == doctest::Approx(M_PI / std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS(errorL2(s, Eigen::VectorXd::Zero(3), pb.exact));
}

TEST_CASE("interpolated polynomials have zero error") {
  const Mesh m = agglomerate(buildUniformTriangles(8, kUnit), 8, 1);
  const DgSpace s(m, 3);
  auto u = [](Point p) { return 1.0 + p.x * p.y - 2.0 * p.y * p.y * p.y; };
  auto gu = [](Point p) { return Point{p.y, p.x - 6.0 * p.y * p.y}; };
  Eigen::VectorXd c(s.numDofs());
  for (int k = 0; k < m.numElements(); ++k) c.segment(s.offset(k), s.localDim(k)) = s.projectL2(k, 3, u);
  CHECK(errorL2(s, c, u) <= 1e-10);
  CHECK(errorBrokenH1(s, c, gu) <= 1e-9);

  ProblemSpec pb = linearSolution(1.0, kUnit);
  pb.exact = u;
  pb.exactGrad = gu;
  const AssembledSystem sys = assemble(s, pb, MethodConfig{});
  const DgError e = errorDg(s, c, pb, sys.faces);
  CHECK(e.withoutReaction <= 1e-9);
  CHECK(e.withReaction == e.withoutReaction);
}

TEST_CASE("dG error dominates the scaled broken H1 error") {
  const Mesh m = buildUniformSquares(3, kUnit);
  const DgSpace s(m, 2);
  const ProblemSpec pb = linearSolution(4.0, kUnit);
  const AssembledSystem sys = assemble(s, pb, MethodConfig{});
  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(s.numDofs(), -0.3, 0.4);
  const double h1 = errorBrokenH1(s, v, pb.exactGrad);
  const DgError e = errorDg(s, v, pb, sys.faces);
  CHECK(e.withoutReaction >= 2.0 * h1 * (1.0 - 1e-12));

  // The reaction part adds |e|^2 for c = 1.
  const ProblemSpec bl = boundaryLayer(1e-2);
  const AssembledSystem sb = assemble(s, bl, MethodConfig{});
  const DgError eb = errorDg(s, v, bl, sb.faces);
  const double l2 = errorL2(s, v, bl.exact);
  CHECK(eb.withReaction * eb.withReaction ==
        doctest::Approx(eb.withoutReaction * eb.withoutReaction + l2 * l2).epsilon(1e-10));
  CHECK_THROWS(errorDg(s, v, pb, {}));
}

TEST_CASE("convergence rates") {
  CHECK(eoc({1.0, 0.25}, {1.0, 0.5})[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(eoc({1e-1, 1e-3}, {1.0, 0.1})[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(eoc({3.0, 3.0, 3.0}, {1.0, 0.5, 0.25}) == std::vector<double>{0.0, 0.0});
  CHECK_THROWS(eoc({1.0}, {1.0}));
  CHECK_THROWS(eoc({1.0, -1.0}, {1.0, 0.5}));
  const auto r = exponentialRates({std::exp(-2.0), std::exp(-5.0)}, {1.0, 2.0});
  CHECK(r[0] == doctest::Approx(-3.0).epsilon(1e-14));
}

TEST_CASE("error quadrature is converged") {
  const Mesh m = buildUniformSquares(4, kUnit);
  const DgSpace s(m, 2);
  const ProblemSpec pb = poissonSine();
  const AssembledSystem sys = assemble(s, pb, MethodConfig{});
  const Eigen::VectorXd u = solve(sys.stiffness, sys.load).x;
  const double l2 = errorL2(s, u, pb.exact);
  const double h1 = errorBrokenH1(s, u, pb.exactGrad);
  const double dg = errorDg(s, u, pb, sys.faces).withReaction;
  CHECK(std::abs(errorL2(s, u, pb.exact, 4) - l2) < 1e-3 * l2);
  CHECK(std::abs(errorBrokenH1(s, u, pb.exactGrad, 4) - h1) < 1e-3 * h1);
  CHECK(std::abs(errorDg(s, u, pb, sys.faces, 4).withReaction - dg) < 1e-3 * dg);
}
