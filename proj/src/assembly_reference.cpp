// Serial reference assembly. Written independently of the block pipeline:
// face terms are built from the jump and weighted-average vectors of the
// concatenated two-sided dof list, and the degenerate projection uses
// DgSpace::projectL2 one basis function at a time.

#include <cmath>
#include <limits>

#include "assembly_internal.hpp"

namespace ripdg {

AssembledSystem assembleReference(const DgSpace& space, const ProblemSpec& problem, const MethodConfig& config) {
  config.validate();
  const Mesh& mesh = space.mesh();
  const int ndof = space.numDofs();
  using Trip = Eigen::Triplet<double>;
  std::vector<Trip> tA, tN, tG, tM;
  Eigen::VectorXd load = Eigen::VectorXd::Zero(ndof);
  const bool degenerate = config.variant == Variant::RIPDG_DEG;

  std::vector<double> invSqrtSup(mesh.numElements());
  std::vector<std::vector<Eigen::VectorXd>> projX(mesh.numElements()), projY(mesh.numElements());
  for (int k = 0; k < mesh.numElements(); ++k) {
    invSqrtSup[k] = detail::elementInvSqrtSup(space, problem, config, k);
    const QuadRule rule = elementRule(mesh, k, detail::volumeExactness(space, config, k));
    Eigen::MatrixXd v, gx, gy;
    space.evalWithGrad(k, rule.nodes, v, gx, gy);
    const int n = space.localDim(k);
    const int off = space.offset(k);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Point x = rule.nodes[q];
      const Tensor2 a = problem.diffusion(x, k);
      detail::checkDiffusion(a, problem.allowSemidefinite && degenerate, x);
      const double c = problem.hasReaction() ? problem.reaction(x) : 0.0;
      const double f = problem.source(x);
      for (int i = 0; i < n; ++i) {
        load[off + i] += rule.weights[q] * f * v(q, i);
        for (int j = 0; j < n; ++j) {
          const Point gi{gx(q, i), gy(q, i)};
          const Point gj{gx(q, j), gy(q, j)};
          const double stiff = rule.weights[q] * dot(a.apply(gj), gi);
          const double mass = rule.weights[q] * c * v(q, i) * v(q, j);
          tA.emplace_back(off + i, off + j, stiff + mass);
          tN.emplace_back(off + i, off + j, stiff);
          tG.emplace_back(off + i, off + j, stiff);
          tM.emplace_back(off + i, off + j, mass);
        }
      }
    }
    if (degenerate && space.degree(k) >= 1) {
      const int q = space.degree(k) - 1;
      for (int j = 0; j < n; ++j) {
        auto component = [&, j](int dir) {
          return [&, j, dir](Point x) {
            Eigen::MatrixXd pv, px, py;
            space.evalWithGrad(k, std::span<const Point>(&x, 1), pv, px, py);
            const Point g = problem.diffusion(x, k).sqrt().apply({px(0, j), py(0, j)});
            return dir == 0 ? g.x : g.y;
          };
        };
        projX[k].push_back(space.projectL2(k, q, component(0), config.quadInc));
        projY[k].push_back(space.projectL2(k, q, component(1), config.quadInc));
      }
    }
  }

  AssembledSystem sys;
  for (int fi = 0; fi < mesh.numFaces(); ++fi) {
    const Face& f = mesh.face(fi);
    const FaceRecord rec = detail::faceRecord(space, problem, config, fi, invSqrtSup);
    sys.faces.push_back(rec);
    const double sigma = rec.weights.sigma;
    const QuadRule rule = faceRule(f, detail::faceExactness(space, config, fi));
    const int sides = f.isBoundary() ? 1 : 2;
    std::vector<int> dofs;
    for (int s = 0; s < sides; ++s) {
      const int k = s == 0 ? f.plusElement : f.minusElement;
      for (int i = 0; i < space.localDim(k); ++i) {
        dofs.push_back(space.offset(k) + i);
      }
    }
    const std::size_t nd = dofs.size();
    Eigen::MatrixXd localA = Eigen::MatrixXd::Zero(nd, nd);
    Eigen::MatrixXd localN = Eigen::MatrixXd::Zero(nd, nd);
    Eigen::VectorXd localB = Eigen::VectorXd::Zero(nd);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Point x = rule.nodes[q];
      // jump[i] = [[phi_i]] . n, avg[i] = {flux(phi_i)}_w . n
      Eigen::VectorXd jump(nd), avg(nd);
      std::size_t idx = 0;
      for (int s = 0; s < sides; ++s) {
        const int k = s == 0 ? f.plusElement : f.minusElement;
        const double sgn = s == 0 ? 1.0 : -1.0;
        const double wgt = s == 0 ? rec.weights.wPlus : rec.weights.wMinus;
        Eigen::MatrixXd v, gx, gy;
        space.evalWithGrad(k, std::span<const Point>(&x, 1), v, gx, gy);
        const Tensor2 a = problem.diffusion(x, k);
        for (int i = 0; i < space.localDim(k); ++i, ++idx) {
          Point flux;
          if (degenerate) {
            Point pi{0.0, 0.0};
            const Eigen::Index m0 = projX[k].empty() ? 0 : projX[k][i].size();
            for (Eigen::Index m = 0; m < m0; ++m) {
              pi.x += projX[k][i][m] * v(0, m);
              pi.y += projY[k][i][m] * v(0, m);
            }
            flux = a.sqrt().apply(pi);
          } else {
            flux = a.apply({gx(0, i), gy(0, i)});
          }
          jump[idx] = sgn * v(0, i);
          avg[idx] = wgt * dot(flux, f.unitNormal);
        }
      }
      const double w = rule.weights[q];
      localA += w * (sigma * jump * jump.transpose() - jump * avg.transpose() -
                     config.theta * avg * jump.transpose());
      localN += w * sigma * jump * jump.transpose();
      if (f.isBoundary()) {
        const double g = problem.boundary(x);
        localB += w * g * (sigma * jump - config.theta * avg);
      }
    }
    for (std::size_t i = 0; i < nd; ++i) {
      load[dofs[i]] += localB[i];
      for (std::size_t j = 0; j < nd; ++j) {
        tA.emplace_back(dofs[i], dofs[j], localA(i, j));
        tN.emplace_back(dofs[i], dofs[j], localN(i, j));
      }
    }
    sys.maxSigmaGlobal = std::max(sys.maxSigmaGlobal, sigma);
    if (!f.isBoundary()) {
      sys.maxSigmaInterior = std::max(sys.maxSigmaInterior, sigma);
      sys.maxTauInterior = std::max(sys.maxTauInterior, rec.tau);
    }
  }
  sys.stiffness = SparseSymMatrix::fromTriplets(ndof, tA);
  sys.normMatrix = SparseSymMatrix::fromTriplets(ndof, tN);
  sys.gradientGram = SparseSymMatrix::fromTriplets(ndof, tG);
  sys.reactionMass = SparseSymMatrix::fromTriplets(ndof, tM);
  sys.load = std::move(load);
  return sys;
}

}  // namespace ripdg
