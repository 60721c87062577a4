#include "ripdg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

namespace ripdg {

SparseSymMatrix::SparseSymMatrix(int n, std::vector<int> rowPtr, std::vector<int> colIdx, std::vector<double> values)
    : n_(n), rowPtr_(std::move(rowPtr)), colIdx_(std::move(colIdx)), values_(std::move(values)) {
  if (static_cast<int>(rowPtr_.size()) != n_ + 1 || colIdx_.size() != values_.size() ||
      rowPtr_.back() != static_cast<int>(colIdx_.size())) {
    throw std::invalid_argument("SparseSymMatrix: inconsistent CSR arrays");
  }
}

SparseSymMatrix SparseSymMatrix::fromTriplets(int n, const std::vector<Eigen::Triplet<double>>& triplets) {
  std::vector<std::map<int, double>> rows(n);
  for (const auto& t : triplets) {
    if (t.row() < 0 || t.row() >= n || t.col() < 0 || t.col() >= n) {
      throw std::out_of_range("SparseSymMatrix::fromTriplets: index out of range");
    }
    rows[t.row()][t.col()] += t.value();
    rows[t.col()].try_emplace(t.row(), 0.0);
  }
  std::vector<int> rowPtr{0};
  std::vector<int> cols;
  std::vector<double> vals;
  for (const auto& row : rows) {
    for (const auto& [c, v] : row) {
      cols.push_back(c);
      vals.push_back(v);
    }
    rowPtr.push_back(static_cast<int>(cols.size()));
  }
  return SparseSymMatrix(n, std::move(rowPtr), std::move(cols), std::move(vals));
}

SparseSymMatrix SparseSymMatrix::fromDense(const Eigen::MatrixXd& a, double dropTol) {
  if (a.rows() != a.cols()) throw std::invalid_argument("SparseSymMatrix::fromDense: matrix must be square");
  std::vector<Eigen::Triplet<double>> t;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (std::abs(a(i, j)) > dropTol) t.emplace_back(static_cast<int>(i), static_cast<int>(j), a(i, j));
  return fromTriplets(static_cast<int>(a.rows()), t);
}

double SparseSymMatrix::coeff(int i, int j) const {
  const auto first = colIdx_.begin() + rowPtr_[i];
  const auto last = colIdx_.begin() + rowPtr_[i + 1];
  const auto it = std::lower_bound(first, last, j);
  return it != last && *it == j ? values_[it - colIdx_.begin()] : 0.0;
}

void SparseSymMatrix::multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  y.resize(n_);
#pragma omp parallel for schedule(static) if (n_ > 20000)
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    for (int k = rowPtr_[i]; k < rowPtr_[i + 1]; ++k) s += values_[k] * x[colIdx_[k]];
    y[i] = s;
  }
}

Eigen::VectorXd SparseSymMatrix::operator*(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y;
  multiply(x, y);
  return y;
}

Eigen::VectorXd SparseSymMatrix::diagonal() const {
  Eigen::VectorXd d(n_);
  for (int i = 0; i < n_; ++i) d[i] = coeff(i, i);
  return d;
}

Eigen::MatrixXd SparseSymMatrix::toDense() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int k = rowPtr_[i]; k < rowPtr_[i + 1]; ++k) a(i, colIdx_[k]) = values_[k];
  return a;
}

Eigen::SparseMatrix<double> SparseSymMatrix::toEigen() const {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(values_.size());
  for (int i = 0; i < n_; ++i)
    for (int k = rowPtr_[i]; k < rowPtr_[i + 1]; ++k) t.emplace_back(i, colIdx_[k], values_[k]);
  Eigen::SparseMatrix<double> m(n_, n_);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

double SparseSymMatrix::maxAbs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double SparseSymMatrix::asymmetry() const {
  double m = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int k = rowPtr_[i]; k < rowPtr_[i + 1]; ++k) m = std::max(m, std::abs(values_[k] - coeff(colIdx_[k], i)));
  return m;
}

SparseSymMatrix SparseSymMatrix::permuted(const std::vector<int>& perm) const {
  if (static_cast<int>(perm.size()) != n_) throw std::invalid_argument("permuted: wrong permutation size");
  std::vector<int> inv(n_);
  for (int i = 0; i < n_; ++i) inv[perm[i]] = i;
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(values_.size());
  for (int i = 0; i < n_; ++i)
    for (int k = rowPtr_[i]; k < rowPtr_[i + 1]; ++k) t.emplace_back(inv[i], inv[colIdx_[k]], values_[k]);
  return fromTriplets(n_, t);
}

SparseSymMatrix SparseSymMatrix::added(const SparseSymMatrix& other, double scale) const {
  if (other.n_ != n_) throw std::invalid_argument("added: dimension mismatch");
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(values_.size() + other.values_.size());
  for (int i = 0; i < n_; ++i) {
    for (int k = rowPtr_[i]; k < rowPtr_[i + 1]; ++k) t.emplace_back(i, colIdx_[k], values_[k]);
    for (int k = other.rowPtr_[i]; k < other.rowPtr_[i + 1]; ++k)
      t.emplace_back(i, other.colIdx_[k], scale * other.values_[k]);
  }
  return fromTriplets(n_, t);
}

namespace {

SolveResult solveDense(const SparseSymMatrix& a, const Eigen::VectorXd& b, double tol) {
  const Eigen::MatrixXd dense = a.toDense();
  Eigen::LDLT<Eigen::MatrixXd> ldlt(dense);
  if (ldlt.info() != Eigen::Success) throw std::runtime_error("solve: LDL^T factorisation failed");
  const Eigen::VectorXd d = ldlt.vectorD();
  if ((d.array() <= 0.0).any()) {
    throw std::runtime_error("solve: matrix is not positive definite (non-positive pivot in LDL^T)");
  }
  SolveResult r;
  r.method = "ldlt";
  r.x = ldlt.solve(b);
  const double bnorm = std::max(b.norm(), 1e-300);
  Eigen::VectorXd res = b - dense * r.x;
  r.relResidual = res.norm() / bnorm;
  // A few sweeps of iterative refinement.
  for (int it = 0; it < 3 && r.relResidual > 0.1 * tol; ++it) {
    r.x += ldlt.solve(res);
    res = b - dense * r.x;
    r.relResidual = res.norm() / bnorm;
    r.iterations = it + 1;
  }
  return r;
}

SolveResult solveCg(const SparseSymMatrix& a, const Eigen::VectorXd& b, double tol) {
  const int n = a.rows();
  const Eigen::VectorXd diag = a.diagonal();
  if ((diag.array() <= 0.0).any()) throw std::runtime_error("solve: CG needs a positive diagonal");
  const Eigen::VectorXd dinv = diag.cwiseInverse();
  SolveResult r;
  r.method = "cg";
  r.x = Eigen::VectorXd::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) return r;
  Eigen::VectorXd res = b;
  Eigen::VectorXd z = dinv.cwiseProduct(res);
  Eigen::VectorXd p = z;
  Eigen::VectorXd ap(n);
  double rz = res.dot(z);
  const int maxIt = std::max(1000, 20 * n);
  for (int it = 1; it <= maxIt; ++it) {
    a.multiply(p, ap);
    const double pap = p.dot(ap);
    if (!(pap > 0.0)) {
      throw std::runtime_error("solve: CG breakdown (p^T A p <= 0) at iteration " + std::to_string(it));
    }
    const double alpha = rz / pap;
    r.x += alpha * p;
    res -= alpha * ap;
    r.iterations = it;
    r.relResidual = res.norm() / bnorm;
    if (r.relResidual <= tol) {
      // The recursive residual drifts from b - Ax near machine precision;
      // replace it and continue if the true residual is not there yet.
      res = b - a * r.x;
      r.relResidual = res.norm() / bnorm;
      if (r.relResidual <= tol) break;
    }
    z = dinv.cwiseProduct(res);
    const double rzNew = res.dot(z);
    p = z + (rzNew / rz) * p;
    rz = rzNew;
  }
  // Report the true residual, not the recursively updated one.
  r.relResidual = (b - a * r.x).norm() / bnorm;
  if (r.relResidual > tol * 10.0) {
    throw std::runtime_error("solve: CG did not converge after " + std::to_string(r.iterations) +
                             " iterations (relative residual " + std::to_string(r.relResidual) + ")");
  }
  return r;
}

SolveResult solveSparseDirect(const SparseSymMatrix& a, const Eigen::VectorXd& b, double tol) {
  SolveResult r;
  r.method = "sparse-ldlt";
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(a.toEigen());
  if (ldlt.info() != Eigen::Success) throw std::runtime_error("solve: sparse LDL^T factorisation failed");
  if ((ldlt.vectorD().array() <= 0.0).any()) throw std::runtime_error("solve: matrix is not positive definite");
  const double bnorm = b.norm();
  r.x = ldlt.solve(b);
  if (bnorm == 0.0) return r;
  Eigen::VectorXd res = b - a * r.x;
  r.relResidual = res.norm() / bnorm;
  for (int it = 0; it < 3 && r.relResidual > tol; ++it) {
    r.x += ldlt.solve(res);
    res = b - a * r.x;
    r.relResidual = res.norm() / bnorm;
    r.iterations = it + 1;
  }
  return r;
}

// Nonsymmetric systems (theta != 1) by LU with partial pivoting.
SolveResult solveLu(const SparseSymMatrix& a, const Eigen::VectorXd& b, double tol) {
  SolveResult r;
  const double bnorm = std::max(b.norm(), 1e-300);
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply;
  Eigen::PartialPivLU<Eigen::MatrixXd> dense;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> sparse;
  if (a.rows() <= kDenseLimit) {
    r.method = "lu";
    dense.compute(a.toDense());
    apply = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return dense.solve(x); };
  } else {
    r.method = "sparse-lu";
    Eigen::SparseMatrix<double> m = a.toEigen();
    m.makeCompressed();
    sparse.compute(m);
    if (sparse.info() != Eigen::Success) throw std::runtime_error("solve: sparse LU factorisation failed");
    apply = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return sparse.solve(x); };
  }
  r.x = apply(b);
  Eigen::VectorXd res = b - a * r.x;
  r.relResidual = res.norm() / bnorm;
  for (int it = 0; it < 3 && r.relResidual > 0.1 * tol; ++it) {
    r.x += apply(res);
    res = b - a * r.x;
    r.relResidual = res.norm() / bnorm;
    r.iterations = it + 1;
  }
  if (!r.x.allFinite()) throw std::runtime_error("solve: singular matrix in LU factorisation");
  return r;
}

bool isSymmetric(const SparseSymMatrix& a) { return a.asymmetry() <= 1e-13 * a.maxAbs(); }

/// Largest |Ritz value| of a symmetric operator by Lanczos with full
/// reorthogonalisation; stops when the residual bound drops below tol.
template <class Apply>
double lanczosMaxAbs(int n, Apply apply, double tol, int& iterations) {
  const int maxSteps = std::min(n, 400);
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = dist(rng);
  v.normalize();

  Eigen::MatrixXd basis(n, maxSteps);
  std::vector<double> alpha;
  std::vector<double> beta;
  Eigen::VectorXd w(n);
  double estimate = 0.0;
  for (int j = 0; j < maxSteps; ++j) {
    basis.col(j) = v;
    apply(v, w);
    alpha.push_back(v.dot(w));
    // Full reorthogonalisation, two passes.
    for (int pass = 0; pass < 2; ++pass) w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
    const double b = w.norm();

    const int m = j + 1;
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t);
    const Eigen::VectorXd& theta = eig.eigenvalues();
    const int idx = std::abs(theta[0]) > std::abs(theta[m - 1]) ? 0 : m - 1;
    estimate = std::abs(theta[idx]);
    const double residual = b * std::abs(eig.eigenvectors()(m - 1, idx));
    iterations = m;
    if (residual <= tol * estimate || b <= 1e-14 * estimate || m == n) break;
    beta.push_back(b);
    v = w / b;
  }
  return estimate;
}

}  // namespace

SolveResult solve(const SparseSymMatrix& a, const Eigen::VectorXd& b, double tol, SolverChoice choice) {
  if (b.size() != a.rows()) throw std::invalid_argument("solve: dimension mismatch");
  if (!isSymmetric(a)) {
    if (choice == SolverChoice::CG) throw std::invalid_argument("solve: CG needs a symmetric matrix");
    return solveLu(a, b, tol);
  }
  const bool dense = choice == SolverChoice::Dense || (choice == SolverChoice::Auto && a.rows() <= kDenseLimit);
  if (dense) return solveDense(a, b, tol);
  return choice == SolverChoice::CG ? solveCg(a, b, tol) : solveSparseDirect(a, b, tol);
}

ConditionResult conditionNumber2(const SparseSymMatrix& a, CondMethod method, double tol) {
  ConditionResult r;
  const int n = a.rows();
  if (n == 0) throw std::invalid_argument("conditionNumber2: empty matrix");
  const bool dense = method == CondMethod::Dense || (method == CondMethod::Auto && n <= kDenseLimit);
  if (!isSymmetric(a)) {
    // Nonsymmetric: ratio of extreme singular values.
    if (n > kDenseLimit || method == CondMethod::Lanczos) {
      throw std::invalid_argument("conditionNumber2: Lanczos needs a symmetric matrix");
    }
    r.method = "dense-svd";
    Eigen::BDCSVD<Eigen::MatrixXd> svd(a.toDense());
    r.lambdaMin = svd.singularValues().minCoeff();
    r.lambdaMax = svd.singularValues().maxCoeff();
  } else if (dense) {
    r.method = "dense";
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a.toDense(), Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = eig.eigenvalues().cwiseAbs();
    r.lambdaMin = ev.minCoeff();
    r.lambdaMax = ev.maxCoeff();
  } else {
    r.method = "lanczos";
    int itMax = 0;
    int itMin = 0;
    r.lambdaMax = lanczosMaxAbs(
        n, [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { a.multiply(x, y); }, tol, itMax);
    // Smallest |lambda| from the largest |lambda| of the inverse.
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(a.toEigen());
    if (ldlt.info() != Eigen::Success) throw std::runtime_error("conditionNumber2: factorisation failed");
    const double invMax = lanczosMaxAbs(
        n, [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = ldlt.solve(x); }, tol, itMin);
    r.lambdaMin = 1.0 / invMax;
    r.iterations = itMax + itMin;
  }
  if (!(r.lambdaMin > 1e-300)) throw std::runtime_error("conditionNumber2: matrix is singular");
  r.cond = r.lambdaMax / r.lambdaMin;
  return r;
}

Eigen::VectorXd generalizedEigenvalues(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(a, b, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw std::runtime_error("generalizedEigenvalues: B is not positive definite");
  return eig.eigenvalues();
}

}  // namespace ripdg
