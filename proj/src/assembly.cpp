#include <algorithm>
#include <exception>
#include <mutex>

#include "assembly_internal.hpp"

namespace ripdg {

namespace {

struct ElementWork {
  Eigen::MatrixXd gradGram;
  Eigen::MatrixXd reaction;
  Eigen::VectorXd load;
  double invSqrtSup = 0.0;
  // Degenerate variant: coefficients of Pi_{p-1}(sqrt(a) grad phi_j) in the
  // first localDim(p-1) basis functions, one column per j.
  Eigen::MatrixXd projX;
  Eigen::MatrixXd projY;
};

struct FaceWork {
  FaceRecord record;
  Eigen::MatrixXd a[2][2];     // stiffness block (test side, trial side)
  Eigen::MatrixXd jump[2][2];  // sigma [[u]].[[v]] block
  Eigen::VectorXd load;        // boundary faces only
};

/// Runs body(i) for i in [0, n) on all threads and rethrows the first exception.
template <class Body>
void parallelFor(int n, Body body) {
  std::exception_ptr error;
  std::mutex mutex;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard lock(mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

ElementWork elementWork(const DgSpace& space, const ProblemSpec& problem, const MethodConfig& config, int k) {
  const QuadRule rule = elementRule(space.mesh(), k, detail::volumeExactness(space, config, k));
  Eigen::MatrixXd v, gx, gy;
  space.evalWithGrad(k, rule.nodes, v, gx, gy);
  const auto nq = static_cast<Eigen::Index>(rule.size());
  const int n = space.localDim(k);
  const bool semidef = problem.allowSemidefinite && config.variant == Variant::RIPDG_DEG;
  const bool degenerate = config.variant == Variant::RIPDG_DEG;

  // Weighted flux rows: (a grad phi) scaled by the quadrature weight.
  Eigen::MatrixXd fx(nq, n), fy(nq, n), wv(nq, n);
  Eigen::MatrixXd sx, sy;  // sqrt(a) grad phi, weighted
  if (degenerate) {
    sx.resize(nq, n);
    sy.resize(nq, n);
  }
  ElementWork w;
  w.load = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd c(nq);
  for (Eigen::Index q = 0; q < nq; ++q) {
    const Point x = rule.nodes[q];
    const double wt = rule.weights[q];
    const Tensor2 a = problem.diffusion(x, k);
    detail::checkDiffusion(a, semidef, x);
    const double lmin = a.eigenvalues().first;
    w.invSqrtSup = lmin > 0.0 ? std::max(w.invSqrtSup, 1.0 / std::sqrt(lmin)) : std::numeric_limits<double>::infinity();
    fx.row(q) = wt * (a.xx * gx.row(q) + a.xy * gy.row(q));
    fy.row(q) = wt * (a.xy * gx.row(q) + a.yy * gy.row(q));
    c[q] = problem.hasReaction() ? wt * problem.reaction(x) : 0.0;
    wv.row(q) = wt * v.row(q);
    w.load += wt * problem.source(x) * v.row(q).transpose();
    if (degenerate) {
      const Tensor2 s = a.sqrt();
      sx.row(q) = wt * (s.xx * gx.row(q) + s.xy * gy.row(q));
      sy.row(q) = wt * (s.xy * gx.row(q) + s.yy * gy.row(q));
    }
  }
  w.invSqrtSup *= config.linfSafety;
  w.gradGram = gx.transpose() * fx + gy.transpose() * fy;
  w.reaction = problem.hasReaction() ? Eigen::MatrixXd(v.transpose() * c.asDiagonal() * v)
                                     : Eigen::MatrixXd::Zero(n, n);
  if (degenerate) {
    const int m = space.degree(k) >= 1 ? ripdg::localDim(space.degree(k) - 1) : 0;
    w.projX = v.leftCols(m).transpose() * sx;
    w.projY = v.leftCols(m).transpose() * sy;
  }
  return w;
}

FaceWork faceWork(const DgSpace& space, const ProblemSpec& problem, const MethodConfig& config, int fi,
                  const std::vector<ElementWork>& elems, const std::vector<double>& invSqrtSup) {
  const Face& f = space.mesh().face(fi);
  FaceWork w;
  w.record = detail::faceRecord(space, problem, config, fi, invSqrtSup);
  const QuadRule rule = faceRule(f, detail::faceExactness(space, config, fi));
  const auto nq = static_cast<Eigen::Index>(rule.size());
  const Eigen::Map<const Eigen::VectorXd> wq(rule.weights.data(), nq);
  const Point n = f.unitNormal;
  const int sides = f.isBoundary() ? 1 : 2;
  const double sign[2] = {1.0, -1.0};
  const double weight[2] = {w.record.weights.wPlus, w.record.weights.wMinus};
  const double sigma = w.record.weights.sigma;
  const double theta = config.theta;

  Eigen::MatrixXd val[2];
  Eigen::MatrixXd flux[2];  // normal component of the flux operand at each node
  for (int s = 0; s < sides; ++s) {
    const int k = s == 0 ? f.plusElement : f.minusElement;
    Eigen::MatrixXd gx, gy;
    space.evalWithGrad(k, rule.nodes, val[s], gx, gy);
    flux[s].resize(nq, val[s].cols());
    if (config.variant == Variant::RIPDG_DEG) {
      const ElementWork& e = elems[k];
      const Eigen::Index m = e.projX.rows();
      const Eigen::MatrixXd px = val[s].leftCols(m) * e.projX;
      const Eigen::MatrixXd py = val[s].leftCols(m) * e.projY;
      for (Eigen::Index q = 0; q < nq; ++q) {
        const Point sn = problem.diffusion(rule.nodes[q], k).sqrt().apply(n);
        flux[s].row(q) = sn.x * px.row(q) + sn.y * py.row(q);
      }
    } else {
      for (Eigen::Index q = 0; q < nq; ++q) {
        const Point an = problem.diffusion(rule.nodes[q], k).apply(n);
        flux[s].row(q) = an.x * gx.row(q) + an.y * gy.row(q);
      }
    }
  }

  for (int s = 0; s < sides; ++s) {
    const Eigen::MatrixXd wvs = wq.asDiagonal() * val[s];
    const Eigen::MatrixXd wfs = wq.asDiagonal() * flux[s];
    for (int t = 0; t < sides; ++t) {
      const Eigen::MatrixXd mass = wvs.transpose() * val[t];
      w.jump[s][t] = (sigma * sign[s] * sign[t]) * mass;
      w.a[s][t] = w.jump[s][t] - (weight[t] * sign[s]) * (wvs.transpose() * flux[t]) -
                  (theta * weight[s] * sign[t]) * (wfs.transpose() * val[t]);
    }
  }
  if (f.isBoundary()) {
    Eigen::VectorXd g(nq);
    for (Eigen::Index q = 0; q < nq; ++q) g[q] = wq[q] * problem.boundary(rule.nodes[q]);
    w.load = sigma * (val[0].transpose() * g) - (theta * weight[0]) * (flux[0].transpose() * g);
  }
  return w;
}

/// Block-CSR pattern: every row of element k holds the dofs of k and of its
/// face neighbours, in ascending element order.
struct BlockPattern {
  std::vector<std::vector<int>> neighbours;  // sorted, includes k
  std::vector<std::vector<int>> blockOffset;  // column offset of each neighbour within a row
  std::vector<int> rowPtr;
  std::vector<int> colIdx;

  int position(int k, int nb) const {
    const auto& list = neighbours[k];
    const auto it = std::lower_bound(list.begin(), list.end(), nb);
    return blockOffset[k][it - list.begin()];
  }
};

BlockPattern buildPattern(const DgSpace& space) {
  const Mesh& mesh = space.mesh();
  BlockPattern pat;
  pat.neighbours.resize(mesh.numElements());
  pat.blockOffset.resize(mesh.numElements());
  for (int k = 0; k < mesh.numElements(); ++k) pat.neighbours[k].push_back(k);
  for (const Face& f : mesh.faces()) {
    if (f.isBoundary()) continue;
    pat.neighbours[f.plusElement].push_back(f.minusElement);
    pat.neighbours[f.minusElement].push_back(f.plusElement);
  }
  pat.rowPtr.assign(1, 0);
  for (int k = 0; k < mesh.numElements(); ++k) {
    auto& list = pat.neighbours[k];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    int width = 0;
    for (int nb : list) {
      pat.blockOffset[k].push_back(width);
      width += space.localDim(nb);
    }
    for (int i = 0; i < space.localDim(k); ++i) {
      for (int nb : list)
        for (int j = 0; j < space.localDim(nb); ++j) pat.colIdx.push_back(space.offset(nb) + j);
      pat.rowPtr.push_back(static_cast<int>(pat.colIdx.size()));
    }
  }
  return pat;
}

}  // namespace

AssembledSystem assemble(const DgSpace& space, const ProblemSpec& problem, const MethodConfig& config) {
  config.validate();
  const Mesh& mesh = space.mesh();
  const int ne = mesh.numElements();
  const int nf = mesh.numFaces();

  std::vector<ElementWork> elems(ne);
  parallelFor(ne, [&](int k) { elems[k] = elementWork(space, problem, config, k); });
  std::vector<double> invSqrtSup(ne);
  for (int k = 0; k < ne; ++k) invSqrtSup[k] = elems[k].invSqrtSup;

  std::vector<FaceWork> faces(nf);
  parallelFor(nf, [&](int f) { faces[f] = faceWork(space, problem, config, f, elems, invSqrtSup); });

  const BlockPattern pat = buildPattern(space);
  const std::size_t nnz = pat.colIdx.size();
  std::vector<double> aVals(nnz, 0.0), nVals(nnz, 0.0), gVals(nnz, 0.0), mVals(nnz, 0.0);
  Eigen::VectorXd load = Eigen::VectorXd::Zero(space.numDofs());

  // Each element writes only its own rows; faces are added in ascending index
  // order, so every entry is summed in the same order for any thread count.
  parallelFor(ne, [&](int k) {
    const int n = space.localDim(k);
    const int self = pat.position(k, k);
    auto addBlock = [&](std::vector<double>& vals, int colOffset, const Eigen::MatrixXd& block) {
      for (int i = 0; i < n; ++i) {
        const int row = pat.rowPtr[space.offset(k) + i] + colOffset;
        for (Eigen::Index j = 0; j < block.cols(); ++j) vals[row + j] += block(i, j);
      }
    };
    addBlock(aVals, self, elems[k].gradGram);
    addBlock(aVals, self, elems[k].reaction);
    addBlock(nVals, self, elems[k].gradGram);
    addBlock(gVals, self, elems[k].gradGram);
    addBlock(mVals, self, elems[k].reaction);
    load.segment(space.offset(k), n) += elems[k].load;

    std::vector<int> own(mesh.element(k).faceIds);
    std::sort(own.begin(), own.end());
    own.erase(std::unique(own.begin(), own.end()), own.end());
    for (int fi : own) {
      if (fi < 0) continue;
      const Face& f = mesh.face(fi);
      const FaceWork& fw = faces[fi];
      const int s = f.plusElement == k ? 0 : 1;
      for (int t = 0; t < (f.isBoundary() ? 1 : 2); ++t) {
        const int nb = t == 0 ? f.plusElement : f.minusElement;
        const int offset = pat.position(k, nb);
        addBlock(aVals, offset, fw.a[s][t]);
        addBlock(nVals, offset, fw.jump[s][t]);
      }
      if (f.isBoundary()) load.segment(space.offset(k), n) += fw.load;
    }
  });

  AssembledSystem sys;
  const int ndof = space.numDofs();
  sys.stiffness = SparseSymMatrix(ndof, pat.rowPtr, pat.colIdx, std::move(aVals));
  sys.normMatrix = SparseSymMatrix(ndof, pat.rowPtr, pat.colIdx, std::move(nVals));
  sys.gradientGram = SparseSymMatrix(ndof, pat.rowPtr, pat.colIdx, std::move(gVals));
  sys.reactionMass = SparseSymMatrix(ndof, pat.rowPtr, pat.colIdx, std::move(mVals));
  sys.load = std::move(load);
  sys.faces.reserve(nf);
  for (int f = 0; f < nf; ++f) {
    const FaceRecord& r = faces[f].record;
    sys.faces.push_back(r);
    sys.maxSigmaGlobal = std::max(sys.maxSigmaGlobal, r.weights.sigma);
    if (!mesh.face(f).isBoundary()) {
      sys.maxSigmaInterior = std::max(sys.maxSigmaInterior, r.weights.sigma);
      sys.maxTauInterior = std::max(sys.maxTauInterior, r.tau);
    }
  }
  return sys;
}

}  // namespace ripdg
