#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace ripdg {

/// Square sparse matrix in compressed-row form with sorted, unique column
/// indices per row and a structurally symmetric pattern. Values need not be
/// symmetric (theta != 1).
class SparseSymMatrix {
 public:
  SparseSymMatrix() = default;
  SparseSymMatrix(int n, std::vector<int> rowPtr, std::vector<int> colIdx, std::vector<double> values);

  /// Duplicates are summed; the pattern is symmetrised with explicit zeros.
  static SparseSymMatrix fromTriplets(int n, const std::vector<Eigen::Triplet<double>>& triplets);
  static SparseSymMatrix fromDense(const Eigen::MatrixXd& a, double dropTol = 0.0);

  int rows() const { return n_; }
  std::size_t nonZeros() const { return values_.size(); }
  const std::vector<int>& rowPtr() const { return rowPtr_; }
  const std::vector<int>& colIdx() const { return colIdx_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  double coeff(int i, int j) const;
  Eigen::VectorXd operator*(const Eigen::VectorXd& x) const;
  void multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
  Eigen::VectorXd diagonal() const;
  Eigen::MatrixXd toDense() const;
  Eigen::SparseMatrix<double> toEigen() const;

  double maxAbs() const;
  /// max |a_ij - a_ji|.
  double asymmetry() const;
  /// Same pattern, values a_{perm[i], perm[j]}.
  SparseSymMatrix permuted(const std::vector<int>& perm) const;
  /// this + scale * other (same dimension; pattern is the union).
  SparseSymMatrix added(const SparseSymMatrix& other, double scale = 1.0) const;

 private:
  int n_ = 0;
  std::vector<int> rowPtr_{0};
  std::vector<int> colIdx_;
  std::vector<double> values_;
};

enum class SolverChoice { Auto, Dense, SparseDirect, CG };

struct SolveResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double relResidual = 0.0;
  std::string method;
};

/// Auto: dense LDL^T for n <= 4000, else sparse LDL^T, both with iterative
/// refinement. CG is Jacobi-preconditioned and only used when requested.
/// Nonsymmetric matrices (theta != 1) always go to LU.
SolveResult solve(const SparseSymMatrix& a, const Eigen::VectorXd& b, double tol = 1e-12,
                  SolverChoice choice = SolverChoice::Auto);

enum class CondMethod { Auto, Dense, Lanczos };

struct ConditionResult {
  double lambdaMin = 0.0;  // smallest |lambda|
  double lambdaMax = 0.0;  // largest |lambda|
  double cond = 0.0;
  int iterations = 0;
  std::string method;
};

/// 2-norm condition number. Symmetric matrices use eigenvalues; nonsymmetric
/// ones (dense path only) use singular values.
ConditionResult conditionNumber2(const SparseSymMatrix& a, CondMethod method = CondMethod::Auto, double tol = 1e-6);

/// Eigenvalues (ascending) of A v = lambda B v for symmetric A and SPD B.
Eigen::VectorXd generalizedEigenvalues(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

inline constexpr int kDenseLimit = 4000;

}  // namespace ripdg
