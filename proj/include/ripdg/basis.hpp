#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ripdg/mesh.hpp"

namespace ripdg {

/// Dimension of the total-degree-p polynomial space in d variables.
int localDim(int p, int d = 2);

/// Element-wise orthonormal total-degree polynomial basis.
///
/// On each element the raw functions are products of L2-normalised Legendre
/// polynomials on the bounding box, listed by degree q and, within a degree,
/// as x^q, x^{q-1} y, ..., y^q. Two modified Gram-Schmidt sweeps in the
/// element L2 inner product then give phi = psi * C with C upper triangular,
/// so the first localDim(q) functions span the degree-q polynomials.
class DgSpace {
 public:
  DgSpace(const Mesh& mesh, std::vector<int> degrees);
  DgSpace(const Mesh& mesh, int uniformDegree);

  const Mesh& mesh() const { return *mesh_; }
  int degree(int k) const { return degrees_[k]; }
  const std::vector<int>& degrees() const { return degrees_; }
  int localDim(int k) const { return ripdg::localDim(degrees_[k]); }
  int offset(int k) const { return offsets_[k]; }
  int numDofs() const { return offsets_.back(); }
  int minDegree() const;
  int maxDegree() const;

  /// [#points x localDim] basis values.
  Eigen::MatrixXd eval(int k, std::span<const Point> points) const;
  /// Values and both partial derivatives.
  void evalWithGrad(int k, std::span<const Point> points, Eigen::MatrixXd& values, Eigen::MatrixXd& dx,
                    Eigen::MatrixXd& dy) const;

  /// 2-norm condition number of the raw Legendre Gram matrix of element k.
  double gramCondition(int k) const { return gramCondition_[k]; }
  /// Upper-triangular change of basis from raw Legendre to orthonormal functions.
  const Eigen::MatrixXd& coefficients(int k) const { return coeff_[k]; }

  /// Coefficients of the L2(K) projection of `field` onto degree q <= p_K,
  /// integrated with exactness 2 p_K + extraDegree.
  Eigen::VectorXd projectL2(int k, int q, const std::function<double(Point)>& field, int extraDegree = 6) const;

  /// Evaluate sum_i coeffs[i] phi_i at p.
  double evalFunction(int k, std::span<const double> coeffs, Point p) const;

 private:
  void rawEval(int k, std::span<const Point> points, Eigen::MatrixXd* values, Eigen::MatrixXd* dx,
               Eigen::MatrixXd* dy) const;
  void orthonormalize(int k);

  const Mesh* mesh_;
  std::vector<int> degrees_;
  std::vector<int> offsets_;
  std::vector<Eigen::MatrixXd> coeff_;
  std::vector<double> gramCondition_;
};

}  // namespace ripdg
