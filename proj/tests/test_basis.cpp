#include <cmath>
#include <random>

#include "doctest.h"
#include "ripdg/basis.hpp"
#include "ripdg/quadrature.hpp"

using namespace ripdg;

namespace {

double massDefect(const DgSpace& space, int k) {
  const int p = space.degree(k);
  const QuadRule r = elementRule(space.mesh(), k, 2 * p + 2);
  const Eigen::MatrixXd v = space.eval(k, r.nodes);
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(r.weights.data(), r.weights.size());
  const Eigen::MatrixXd m = v.transpose() * w.asDiagonal() * v;
  return (m - Eigen::MatrixXd::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

// Squared L2(K) norm of sum_i c_i phi_i - field.
double l2Defect2(const DgSpace& space, int k, const Eigen::VectorXd& c, const std::function<double(Point)>& field) {
  const QuadRule r = elementRule(space.mesh(), k, 2 * space.degree(k) + 8);
  const Eigen::MatrixXd v = space.eval(k, r.nodes);
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double d = v.row(static_cast<Eigen::Index>(i)).head(c.size()).dot(c) - field(r.nodes[i]);
    s += r.weights[i] * d * d;
  }
  return s;
}

const BoundingBox kUnit{{0.0, 0.0}, {1.0, 1.0}};

}  // namespace

TEST_CASE("local dimension") {
  CHECK(localDim(0) == 1);
  CHECK(localDim(2) == 6);
  CHECK(localDim(30) == 496);
  CHECK(localDim(2, 3) == 10);
}

TEST_CASE("offsets and DoF count") {
  const Mesh m = buildUniformSquares(3, {{-1.0, -1.0}, {1.0, 1.0}});
  std::vector<int> deg(9, 2);
  deg[4] = 30;
  const DgSpace space(m, deg);
  CHECK(space.numDofs() == 544);
  for (int k = 0; k + 1 < m.numElements(); ++k) CHECK(space.offset(k + 1) - space.offset(k) == space.localDim(k));
  CHECK(space.minDegree() == 2);
  CHECK(space.maxDegree() == 30);
  CHECK_THROWS(DgSpace(m, std::vector<int>{1, 2}));
}

TEST_CASE("orthonormality on the test meshes") {
  SUBCASE("p = 30 on a square") {
    const Mesh m = buildUniformSquares(1, kUnit);
    const DgSpace s(m, 30);
    CHECK(massDefect(s, 0) <= 1e-10);
  }
  SUBCASE("polygons") {
    for (const Mesh& m : {buildZigzagNineElement(0.1, 4), buildCenterMergedGrid(),
                          agglomerate(buildUniformTriangles(16, kUnit), 16, 1), buildUniformTriangles(2, kUnit)}) {
      const DgSpace s(m, 6);
      for (int k = 0; k < m.numElements(); ++k) CHECK(massDefect(s, k) <= 1e-10);
    }
  }
  SUBCASE("anisotropic elements up to aspect ratio 1e4") {
    for (const Mesh& m : {buildTwoQuads(1e-4), buildNineElement(1e-4)}) {
      const DgSpace s(m, 8);
      for (int k = 0; k < m.numElements(); ++k) {
        CHECK(s.gramCondition(k) < 1e12);
        CHECK(massDefect(s, k) <= 1e-10);
      }
    }
  }
  SUBCASE("thin polygons") {
    const Mesh m = buildZigzagNineElement(2.8460498941515415e-2, 4);
    const DgSpace s(m, 7);
    for (int k = 0; k < m.numElements(); ++k) {
      CHECK(s.gramCondition(k) < 1e12);
      CHECK(massDefect(s, k) <= 1e-10);
    }
  }
}

TEST_CASE("constant mode") {
  const Mesh m = buildZigzagNineElement(0.2, 2);
  const DgSpace s(m, 3);
  for (int k = 0; k < m.numElements(); ++k) {
    const std::vector<Point> pts{m.element(k).starCenter, m.element(k).bbox.center()};
    Eigen::MatrixXd v, dx, dy;
    s.evalWithGrad(k, pts, v, dx, dy);
    for (int i = 0; i < 2; ++i) {
      CHECK(v(i, 0) == doctest::Approx(1.0 / std::sqrt(m.element(k).area)).epsilon(1e-12));
      CHECK(dx(i, 0) == 0.0);
      CHECK(dy(i, 0) == 0.0);
    }
  }
}

TEST_CASE("p = 1 functions are linearly independent") {
  const Mesh m = buildUniformSquares(1, kUnit);
  const DgSpace s(m, 1);
  const std::vector<Point> pts{{0.1, 0.1}, {0.9, 0.2}, {0.3, 0.8}};
  const Eigen::MatrixXd v = s.eval(0, pts);
  CHECK(v.allFinite());
  CHECK(std::abs(v.determinant()) > 1e-6);
}

TEST_CASE("gradients match central differences") {
  const Mesh m = agglomerate(buildUniformTriangles(8, kUnit), 6, 3);
  const DgSpace s(m, 5);
  std::mt19937_64 rng(7);
  const double h = 1e-6;
  for (int k = 0; k < m.numElements(); ++k) {
    const BoundingBox& b = m.element(k).bbox;
    std::uniform_real_distribution<double> ux(b.lo.x + 2 * h, b.hi.x - 2 * h);
    std::uniform_real_distribution<double> uy(b.lo.y + 2 * h, b.hi.y - 2 * h);
    for (int t = 0; t < 5; ++t) {
      const Point p{ux(rng), uy(rng)};
      const std::vector<Point> pts{p, {p.x + h, p.y}, {p.x - h, p.y}, {p.x, p.y + h}, {p.x, p.y - h}};
      Eigen::MatrixXd v, dx, dy;
      s.evalWithGrad(k, pts, v, dx, dy);
      for (int i = 0; i < s.localDim(k); ++i) {
        const double fx = (v(1, i) - v(2, i)) / (2 * h);
        const double fy = (v(3, i) - v(4, i)) / (2 * h);
        const double scale = std::max({std::abs(dx(0, i)), std::abs(dy(0, i)), 1.0});
        CHECK(std::abs(fx - dx(0, i)) <= 1e-6 * scale);
        CHECK(std::abs(fy - dy(0, i)) <= 1e-6 * scale);
      }
    }
  }
}

TEST_CASE("divergence theorem on polygons") {
  const Mesh m = buildZigzagNineElement(0.15, 3);
  const DgSpace s(m, 4);
  for (int k = 0; k < m.numElements(); ++k) {
    const int nb = s.localDim(k);
    const QuadRule r = elementRule(m, k, 8);
    Eigen::MatrixXd v, dx, dy;
    s.evalWithGrad(k, r.nodes, v, dx, dy);
    const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(r.weights.data(), r.weights.size());
    const Eigen::VectorXd volX = dx.transpose() * w;
    const Eigen::VectorXd volY = dy.transpose() * w;
    Eigen::VectorXd surfX = Eigen::VectorXd::Zero(nb);
    Eigen::VectorXd surfY = Eigen::VectorXd::Zero(nb);
    for (int f : m.element(k).faceIds) {
      const Face& face = m.face(f);
      const double sgn = face.plusElement == k ? 1.0 : -1.0;
      const QuadRule fr = faceRule(face, 8);
      const Eigen::MatrixXd fv = s.eval(k, fr.nodes);
      const Eigen::VectorXd fw = Eigen::Map<const Eigen::VectorXd>(fr.weights.data(), fr.weights.size());
      surfX += sgn * face.unitNormal.x * fv.transpose() * fw;
      surfY += sgn * face.unitNormal.y * fv.transpose() * fw;
    }
    CHECK((volX - surfX).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((volY - surfY).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("L2 projection") {
  const Mesh m = buildUniformSquares(1, kUnit);
  const DgSpace s(m, 4);
  auto x2 = [](Point p) { return p.x * p.x; };

  SUBCASE("x^2 onto linears") {
    const Eigen::VectorXd c = s.projectL2(0, 1, x2);
    CHECK(c.size() == 3);
    CHECK(l2Defect2(s, 0, c, x2) == doctest::Approx(1.0 / 180.0).epsilon(1e-10));
    CHECK(l2Defect2(s, 0, c, [](Point p) { return p.x - 1.0 / 6.0; }) <= 1e-24);
  }
  SUBCASE("polynomials are reproduced") {
    auto cubic = [](Point p) { return 1.0 - 2.0 * p.x * p.y * p.y + p.x * p.x * p.x; };
    CHECK(std::sqrt(l2Defect2(s, 0, s.projectL2(0, 3, cubic), cubic)) <= 1e-10);
  }
  SUBCASE("basis function onto itself") {
    const Mesh z = buildZigzagNineElement(0.2, 2);
    const DgSpace sz(z, 3);
    for (int i = 0; i < sz.localDim(4); ++i) {
      auto phi = [&](Point p) {
        const std::vector<Point> one{p};
        return sz.eval(4, one)(0, i);
      };
      const Eigen::VectorXd c = sz.projectL2(4, 3, phi);
      Eigen::VectorXd e = Eigen::VectorXd::Zero(c.size());
      e(i) = 1.0;
      CHECK((c - e).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
  SUBCASE("truncation equals projection") {
    const Mesh z = agglomerate(buildUniformTriangles(8, kUnit), 4, 5);
    const DgSpace sz(z, 6);
    auto f = [](Point p) { return std::exp(p.x) * std::cos(3.0 * p.y); };
    for (int k = 0; k < z.numElements(); ++k) {
      const Eigen::VectorXd full = sz.projectL2(k, 6, f);
      for (int q = 0; q < 6; ++q) {
        const Eigen::VectorXd low = sz.projectL2(k, q, f);
        CHECK((full.head(low.size()) - low).norm() <= 1e-12);
      }
    }
  }
  CHECK_THROWS(s.projectL2(0, 5, x2));
}
