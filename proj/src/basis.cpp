#include "ripdg/basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "ripdg/quadrature.hpp"

namespace ripdg {

int localDim(int p, int d) {
  if (p < 0) throw std::invalid_argument("localDim: negative degree");
  // binomial(p + d, d)
  long long r = 1;
  for (int i = 1; i <= d; ++i) r = r * (p + i) / i;
  return static_cast<int>(r);
}

DgSpace::DgSpace(const Mesh& mesh, std::vector<int> degrees) : mesh_(&mesh), degrees_(std::move(degrees)) {
  if (static_cast<int>(degrees_.size()) != mesh.numElements()) {
    throw std::invalid_argument("DgSpace: one degree per element required");
  }
  offsets_.assign(1, 0);
  for (int p : degrees_) {
    if (p < 0) throw std::invalid_argument("DgSpace: negative degree");
    offsets_.push_back(offsets_.back() + ripdg::localDim(p));
  }
  coeff_.resize(degrees_.size());
  gramCondition_.resize(degrees_.size());
  for (int k = 0; k < mesh.numElements(); ++k) orthonormalize(k);
}

DgSpace::DgSpace(const Mesh& mesh, int uniformDegree)
    : DgSpace(mesh, std::vector<int>(mesh.numElements(), uniformDegree)) {}

int DgSpace::minDegree() const { return *std::min_element(degrees_.begin(), degrees_.end()); }
int DgSpace::maxDegree() const { return *std::max_element(degrees_.begin(), degrees_.end()); }

void DgSpace::rawEval(int k, std::span<const Point> points, Eigen::MatrixXd* values, Eigen::MatrixXd* dx,
                      Eigen::MatrixXd* dy) const {
  const int p = degrees_[k];
  const int n = ripdg::localDim(p);
  const BoundingBox& box = mesh_->element(k).bbox;
  const Point c = box.center();
  const double hx = box.width();
  const double hy = box.height();
  const auto np = static_cast<Eigen::Index>(points.size());
  if (values) values->resize(np, n);
  if (dx) dx->resize(np, n);
  if (dy) dy->resize(np, n);

  std::vector<double> lx(p + 1), ly(p + 1), dlx(p + 1), dly(p + 1);
  // Normalised Legendre values and x-derivatives on an interval of width h.
  auto legendre = [p](double xi, double h, std::vector<double>& v, std::vector<double>& dv) {
    std::vector<double> P(p + 1), dP(p + 1);
    P[0] = 1.0;
    dP[0] = 0.0;
    if (p >= 1) {
      P[1] = xi;
      dP[1] = 1.0;
    }
    for (int a = 1; a < p; ++a) {
      P[a + 1] = ((2.0 * a + 1.0) * xi * P[a] - a * P[a - 1]) / (a + 1.0);
      dP[a + 1] = dP[a - 1] + (2.0 * a + 1.0) * P[a];
    }
    for (int a = 0; a <= p; ++a) {
      const double s = std::sqrt((2.0 * a + 1.0) / h);
      v[a] = s * P[a];
      dv[a] = s * dP[a] * 2.0 / h;
    }
  };

  for (Eigen::Index r = 0; r < np; ++r) {
    legendre(2.0 * (points[r].x - c.x) / hx, hx, lx, dlx);
    legendre(2.0 * (points[r].y - c.y) / hy, hy, ly, dly);
    int col = 0;
    for (int q = 0; q <= p; ++q) {
      for (int a = q; a >= 0; --a, ++col) {
        const int b = q - a;
        if (values) (*values)(r, col) = lx[a] * ly[b];
        if (dx) (*dx)(r, col) = dlx[a] * ly[b];
        if (dy) (*dy)(r, col) = lx[a] * dly[b];
      }
    }
  }
}

void DgSpace::orthonormalize(int k) {
  const int p = degrees_[k];
  const int n = ripdg::localDim(p);
  const QuadRule rule = elementRule(*mesh_, k, 2 * p);
  Eigen::MatrixXd psi;
  rawEval(k, rule.nodes, &psi, nullptr, nullptr);
  const Eigen::Map<const Eigen::VectorXd> w(rule.weights.data(), static_cast<Eigen::Index>(rule.weights.size()));
  Eigen::MatrixXd s = w.cwiseSqrt().asDiagonal() * psi;

  const Eigen::MatrixXd gram = s.transpose() * s;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues().minCoeff();
  gramCondition_[k] = lmin > 0.0 ? eig.eigenvalues().maxCoeff() / lmin : std::numeric_limits<double>::infinity();

  Eigen::MatrixXd c = Eigen::MatrixXd::Identity(n, n);
  for (int j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i < j; ++i) {
        const double r = s.col(i).dot(s.col(j));
        s.col(j) -= r * s.col(i);
        c.col(j).head(i + 1) -= r * c.col(i).head(i + 1);
      }
    }
    const double nrm = s.col(j).norm();
    if (!(nrm > 0.0)) throw std::runtime_error("DgSpace: basis collapsed during orthonormalisation");
    s.col(j) /= nrm;
    c.col(j).head(j + 1) /= nrm;
  }
  coeff_[k] = std::move(c);
}

Eigen::MatrixXd DgSpace::eval(int k, std::span<const Point> points) const {
  Eigen::MatrixXd raw;
  rawEval(k, points, &raw, nullptr, nullptr);
  return raw * coeff_[k].triangularView<Eigen::Upper>();
}

void DgSpace::evalWithGrad(int k, std::span<const Point> points, Eigen::MatrixXd& values, Eigen::MatrixXd& dx,
                           Eigen::MatrixXd& dy) const {
  Eigen::MatrixXd rv, rx, ry;
  rawEval(k, points, &rv, &rx, &ry);
  const auto c = coeff_[k].triangularView<Eigen::Upper>();
  values = rv * c;
  dx = rx * c;
  dy = ry * c;
}

Eigen::VectorXd DgSpace::projectL2(int k, int q, const std::function<double(Point)>& field, int extraDegree) const {
  if (q < 0 || q > degrees_[k]) throw std::invalid_argument("projectL2: target degree out of range");
  const QuadRule rule = elementRule(*mesh_, k, 2 * degrees_[k] + extraDegree);
  const Eigen::MatrixXd phi = eval(k, rule.nodes);
  Eigen::VectorXd fw(static_cast<Eigen::Index>(rule.size()));
  for (std::size_t i = 0; i < rule.size(); ++i) fw[i] = rule.weights[i] * field(rule.nodes[i]);
  const Eigen::VectorXd full = phi.transpose() * fw;
  return full.head(ripdg::localDim(q));
}

double DgSpace::evalFunction(int k, std::span<const double> coeffs, Point p) const {
  const Eigen::MatrixXd phi = eval(k, std::span<const Point>(&p, 1));
  double v = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) v += coeffs[i] * phi(0, static_cast<Eigen::Index>(i));
  return v;
}

}  // namespace ripdg
