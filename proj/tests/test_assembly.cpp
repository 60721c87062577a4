#include <omp.h>

#include <cmath>
#include <random>

#include "doctest.h"
#include "ripdg/analysis.hpp"
#include "ripdg/assembly.hpp"
#include "ripdg/quadrature.hpp"

using namespace ripdg;

namespace {

const BoundingBox kUnit{{0.0, 0.0}, {1.0, 1.0}};
const BoundingBox kSym{{-1.0, -1.0}, {1.0, 1.0}};

MethodConfig method(Variant v, double scale = 1.0) {
  MethodConfig c;
  c.variant = v;
  c.penaltyScale = scale;
  return c;
}

double relDiff(const SparseSymMatrix& a, const SparseSymMatrix& b) {
  return (a.toDense() - b.toDense()).cwiseAbs().maxCoeff() / std::max(a.maxAbs(), 1e-300);
}

// Coefficients of v = 1 on every element.
Eigen::VectorXd constantOne(const DgSpace& s) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(s.numDofs());
  for (int k = 0; k < s.mesh().numElements(); ++k) v(s.offset(k)) = std::sqrt(s.mesh().element(k).area);
  return v;
}

double boundarySigmaSum(const Mesh& m, const AssembledSystem& sys) {
  double s = 0.0;
  for (int f = 0; f < m.numFaces(); ++f)
    if (m.face(f).isBoundary()) s += sys.faces[f].weights.sigma * m.face(f).measure;
  return s;
}

}  // namespace

TEST_CASE("method config validation") {
  MethodConfig c;
  CHECK_NOTHROW(c.validate());
  c.theta = 1.5;
  CHECK_THROWS(c.validate());
  c.theta = -1.0;
  c.penaltyScale = 0.0;
  CHECK_THROWS(c.validate());
}

TEST_CASE("parallel assembly matches the serial reference") {
  const Mesh meshes[] = {buildZigzagNineElement(0.1, 2), agglomerate(buildUniformTriangles(8, kUnit), 10, 2),
                         buildCenterMergedGrid()};
  const ProblemSpec problems[] = {boundaryLayer(1e-3), poissonSine(), gaussianPeak(10.0)};
  for (int i = 0; i < 3; ++i) {
    std::vector<int> deg(meshes[i].numElements(), 2);
    deg[0] = 4;
    const DgSpace s(meshes[i], deg);
    for (Variant v : {Variant::IPDG, Variant::RIPDG}) {
      MethodConfig c = method(v);
      c.theta = i == 1 ? -1.0 : 1.0;
      const AssembledSystem par = assemble(s, problems[i], c);
      const AssembledSystem ref = assembleReference(s, problems[i], c);
      CHECK(relDiff(par.stiffness, ref.stiffness) <= 1e-13);
      CHECK(relDiff(par.normMatrix, ref.normMatrix) <= 1e-13);
      CHECK((par.load - ref.load).cwiseAbs().maxCoeff() <= 1e-13 * ref.load.cwiseAbs().maxCoeff());
      CHECK(par.maxSigmaGlobal == doctest::Approx(ref.maxSigmaGlobal).epsilon(1e-14));
      CHECK(par.maxSigmaInterior == doctest::Approx(ref.maxSigmaInterior).epsilon(1e-14));
    }
  }
}

TEST_CASE("assembly is bit-identical across thread counts") {
  const Mesh m = agglomerate(buildUniformTriangles(16, kUnit), 16, 1);
  const DgSpace s(m, 3);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const AssembledSystem one = assemble(s, poissonSine(), method(Variant::RIPDG));
  for (int t : {2, 3, 8}) {
    omp_set_num_threads(t);
    const AssembledSystem many = assemble(s, poissonSine(), method(Variant::RIPDG));
    CHECK(many.stiffness.colIdx() == one.stiffness.colIdx());
    CHECK(many.stiffness.values() == one.stiffness.values());
    CHECK(many.normMatrix.values() == one.normMatrix.values());
    CHECK(many.load == one.load);
  }
  omp_set_num_threads(saved);
}

TEST_CASE("constants only see boundary penalties") {
  for (Variant v : {Variant::IPDG, Variant::RIPDG}) {
    const Mesh m = buildZigzagNineElement(0.2, 2);
    const DgSpace s(m, 2);
    const AssembledSystem sys = assemble(s, linearSolution(1.0, kSym), method(v));
    const Eigen::VectorXd one = constantOne(s);
    const double expected = boundarySigmaSum(m, sys);
    CHECK(one.dot(sys.stiffness * one) == doctest::Approx(expected).epsilon(1e-11));
    CHECK(one.dot(sys.normMatrix * one) == doctest::Approx(expected).epsilon(1e-11));
  }
}

TEST_CASE("linear solutions are reproduced") {
  const Mesh meshes[] = {buildUniformSquares(3, kUnit), agglomerate(buildUniformTriangles(8, kUnit), 12, 4),
                         buildTwoQuads(0.1)};
  for (const Mesh& m : meshes) {
    for (Variant v : {Variant::IPDG, Variant::RIPDG, Variant::RIPDG_DEG}) {
      for (double theta : {1.0, 0.0, -1.0}) {
        const ProblemSpec pb = linearSolution(1.0, kUnit);
        const DgSpace s(m, 1);
        MethodConfig c = method(v);
        c.theta = theta;
        const AssembledSystem sys = assemble(s, pb, c);
        const SolveResult r = solve(sys.stiffness, sys.load);
        CHECK(errorL2(s, r.x, pb.exact) <= 1e-9);
        CHECK(errorBrokenH1(s, r.x, pb.exactGrad) <= 1e-9);
      }
    }
  }
}

TEST_CASE("symmetry and definiteness") {
  const Mesh m = buildUniformSquares(2, kUnit);
  const DgSpace s(m, 1);
  for (Variant v : {Variant::IPDG, Variant::RIPDG}) {
    const AssembledSystem sys = assemble(s, poissonSine(), method(v));
    CHECK(sys.stiffness.asymmetry() <= 1e-12 * sys.stiffness.maxAbs());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sys.stiffness.toDense());
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> en(sys.normMatrix.toDense());
    CHECK(en.eigenvalues().minCoeff() > 0.0);
  }
  MethodConfig c = method(Variant::RIPDG);
  c.theta = 0.0;
  CHECK(assemble(s, poissonSine(), c).stiffness.asymmetry() > 1e-3);
}

TEST_CASE("norm matrix on a bubble") {
  const Mesh m = buildUniformSquares(3, kUnit);
  const DgSpace s(m, 4);
  const int k = 4;
  const BoundingBox b = m.element(k).bbox;
  auto bubble = [&](Point x) { return (x.x - b.lo.x) * (b.hi.x - x.x) * (x.y - b.lo.y) * (b.hi.y - x.y); };
  Eigen::VectorXd v = Eigen::VectorXd::Zero(s.numDofs());
  v.segment(s.offset(k), s.localDim(k)) = s.projectL2(k, 4, bubble);
  const AssembledSystem sys = assemble(s, poissonSine(), method(Variant::RIPDG));
  const double vn = v.dot(sys.normMatrix * v);
  const double vg = v.dot(sys.gradientGram * v);
  // |grad bubble|^2 over a square of side h is h^8 / 45.
  const double h = b.width();
  CHECK(vg == doctest::Approx(std::pow(h, 8) / 45.0).epsilon(1e-10));
  CHECK(std::abs(vn - vg) <= 1e-14 * vg);
}

TEST_CASE("uniform meshes: RIPDG with doubled penalty equals IPDG") {
  const Mesh m = buildUniformSquares(4, kUnit);
  const DgSpace s(m, 2);
  const AssembledSystem ip = assemble(s, poissonSine(), method(Variant::IPDG));
  MethodConfig c = method(Variant::RIPDG, 2.0);
  // The mirrored boundary penalty is tau/2, like the interior faces.
  c.boundaryPenalty = BoundaryPenalty::Mirrored;
  const AssembledSystem rip = assemble(s, poissonSine(), c);
  for (int f = 0; f < m.numFaces(); ++f) {
    if (m.face(f).isBoundary()) continue;
    CHECK(rip.faces[f].weights.wPlus == 0.5);
    CHECK(rip.faces[f].weights.wMinus == 0.5);
  }
  CHECK(relDiff(rip.stiffness, ip.stiffness) <= 1e-12);
}

TEST_CASE("robust penalty never exceeds the face bound") {
  const Mesh meshes[] = {buildZigzagNineElement(0.1, 2), agglomerate(buildUniformTriangles(16, kUnit), 16, 1),
                         buildNineElement(0.01), buildCenterMergedGrid()};
  for (const Mesh& m : meshes) {
    std::vector<int> deg(m.numElements());
    for (int k = 0; k < m.numElements(); ++k) deg[k] = 1 + k % 4;
    const DgSpace s(m, deg);
    const ProblemSpec pb = gaussianPeak(10.0);
    const MethodConfig c = method(Variant::RIPDG);
    for (int f = 0; f < m.numFaces(); ++f) {
      const FaceRecord r = computeFaceRecord(s, pb, c, f);
      const int sides = r.data.boundary ? 1 : 2;
      double lo = 1e300;
      for (int i = 0; i < sides; ++i) {
        const auto& d = r.data.side[i];
        lo = std::min(lo, 4.0 * d.mK * d.cInv * d.cInv * d.aNormSup * d.aNormSup * d.aInvSqrtSup * d.aInvSqrtSup);
      }
      if (!r.data.boundary) {
        CHECK(r.weights.sigma <= lo * (1.0 + 1e-13));
        CHECK(r.weights.sigma <= 0.5 * r.tau * (1.0 + 1e-13));
        CHECK(r.weights.wPlus + r.weights.wMinus == doctest::Approx(1.0).epsilon(1e-15));
      } else {
        CHECK(r.weights.wPlus == 1.0);
        CHECK(r.weights.wMinus == 0.0);
      }
    }
  }
}

TEST_CASE("constant scalar coefficients give exact face data") {
  const Mesh m = buildUniformSquares(2, kUnit);
  const DgSpace s(m, 2);
  ProblemSpec pb = linearSolution(7.0, kUnit);
  const FaceRecord r = computeFaceRecord(s, pb, method(Variant::RIPDG), 0);
  CHECK(r.data.side[0].aNormSup == 7.0);
  CHECK(r.data.side[0].aInvSqrtSup == doctest::Approx(1.0 / std::sqrt(7.0)).epsilon(1e-15));
  CHECK(r.data.side[0].sqrtANormSup == doctest::Approx(std::sqrt(7.0)).epsilon(1e-15));
}

TEST_CASE("degenerate variant") {
  SUBCASE("a = I matches RIPDG") {
    const Mesh m = buildZigzagNineElement(0.1, 2);
    std::vector<int> deg(9, 2);
    deg[4] = 3;
    const DgSpace s(m, deg);
    const ProblemSpec pb = gaussianPeak(10.0);
    const AssembledSystem a = assemble(s, pb, method(Variant::RIPDG_DEG));
    const AssembledSystem b = assemble(s, pb, method(Variant::RIPDG));
    CHECK(relDiff(a.stiffness, b.stiffness) <= 1e-12);
    CHECK((a.load - b.load).cwiseAbs().maxCoeff() <= 1e-12 * b.load.cwiseAbs().maxCoeff());
  }
  SUBCASE("vanishing coefficient on x = 0") {
    const Mesh m = buildUniformSquares(4, kUnit);
    const DgSpace s(m, 2);
    const ProblemSpec pb = degenerateStrip();
    const AssembledSystem sys = assemble(s, pb, method(Variant::RIPDG_DEG));
    int affected = 0;
    for (int f = 0; f < m.numFaces(); ++f) {
      const Face& face = m.face(f);
      if (std::abs(face.a.x) < 1e-15 && std::abs(face.b.x) < 1e-15) {
        ++affected;
        CHECK(sys.faces[f].weights.wPlus == 1.0);
        CHECK(sys.faces[f].weights.wMinus == 0.0);
        CHECK(sys.faces[f].weights.sigma == 0.0);
      }
    }
    CHECK(affected == 4);
    CHECK(sys.stiffness.asymmetry() <= 1e-12 * sys.stiffness.maxAbs());
    // A tensor singular on a whole column is accepted only by the degenerate variant.
    ProblemSpec flat = pb;
    flat.diffusion = [](Point x, int) { return x.x < 0.25 ? Tensor2{0.0, 0.0, 1.0} : Tensor2{1.0, 0.0, 1.0}; };
    CHECK_NOTHROW(assemble(s, flat, method(Variant::RIPDG_DEG)));
    CHECK_THROWS(assemble(s, flat, method(Variant::RIPDG)));
    CHECK_THROWS(assemble(s, flat, method(Variant::IPDG)));
  }
}
