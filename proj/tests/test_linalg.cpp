#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "ripdg/linalg.hpp"

using namespace ripdg;

namespace {

Eigen::MatrixXd randomSpd(int n, std::uint64_t seed, double spread = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd q(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) q(i, j) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(q);
  const Eigen::MatrixXd Q = qr.householderQ();
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d(i) = std::pow(10.0, spread * i / std::max(n - 1, 1));
  return Q * d.asDiagonal() * Q.transpose();
}

// Banded SPD test matrix with a known spread of eigenvalues.
SparseSymMatrix banded(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, 4.0 + 0.01 * i + u(rng));
    for (int k = 1; k <= 3 && i + k < n; ++k) {
      const double v = -0.5 * u(rng);
      t.emplace_back(i, i + k, v);
      t.emplace_back(i + k, i, v);
    }
  }
  return SparseSymMatrix::fromTriplets(n, t);
}

}  // namespace

TEST_CASE("sparse storage") {
  std::vector<Eigen::Triplet<double>> t{{0, 0, 1.0}, {0, 2, 2.0}, {0, 2, 1.0}, {1, 1, 5.0}};
  const SparseSymMatrix a = SparseSymMatrix::fromTriplets(3, t);
  CHECK(a.coeff(0, 2) == 3.0);
  CHECK(a.coeff(2, 0) == 0.0);  // structural zero kept for symmetry of the pattern
  CHECK(a.asymmetry() == 3.0);
  for (int i = 0; i < a.rows(); ++i) {
    CHECK(std::is_sorted(a.colIdx().begin() + a.rowPtr()[i], a.colIdx().begin() + a.rowPtr()[i + 1]));
    for (int p = a.rowPtr()[i]; p < a.rowPtr()[i + 1]; ++p) {
      const int j = a.colIdx()[p];
      const auto b = a.colIdx().begin() + a.rowPtr()[j];
      const auto e = a.colIdx().begin() + a.rowPtr()[j + 1];
      CHECK(std::binary_search(b, e, i));
    }
  }
  const Eigen::MatrixXd d = randomSpd(6, 1);
  CHECK((SparseSymMatrix::fromDense(d).toDense() - d).norm() == 0.0);
  CHECK_THROWS(SparseSymMatrix::fromTriplets(2, {{0, 3, 1.0}}));
}

TEST_CASE("solve: small examples") {
  const SparseSymMatrix id = SparseSymMatrix::fromDense(Eigen::MatrixXd::Identity(5, 5));
  Eigen::VectorXd b(5);
  b << 1, -2, 3, 0.5, 7;
  CHECK((solve(id, b).x - b).norm() == 0.0);

  Eigen::MatrixXd m(2, 2);
  m << 2, 1, 1, 2;
  const SolveResult r = solve(SparseSymMatrix::fromDense(m), Eigen::Vector2d(1, 1));
  CHECK(r.x(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(r.x(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("solve: random SPD and all solver paths") {
  const SparseSymMatrix a = SparseSymMatrix::fromDense(randomSpd(200, 5, 4.0));
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  Eigen::VectorXd b(200);
  for (int i = 0; i < 200; ++i) b(i) = g(rng);
  for (SolverChoice c : {SolverChoice::Auto, SolverChoice::Dense, SolverChoice::SparseDirect, SolverChoice::CG}) {
    const SolveResult r = solve(a, b, 1e-12, c);
    CHECK((a * r.x - b).norm() / b.norm() <= 1e-12);
    CHECK(r.relResidual <= 1e-12);
  }
  Eigen::MatrixXd indefinite = Eigen::MatrixXd::Identity(3, 3);
  indefinite(2, 2) = -1.0;
  CHECK_THROWS(solve(SparseSymMatrix::fromDense(indefinite), Eigen::Vector3d(1, 1, 1), 1e-12, SolverChoice::SparseDirect));
}

TEST_CASE("condition numbers") {
  CHECK(conditionNumber2(SparseSymMatrix::fromDense(Eigen::MatrixXd::Identity(4, 4))).cond ==
        doctest::Approx(1.0).epsilon(1e-14));
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 10.0;
  CHECK(conditionNumber2(SparseSymMatrix::fromDense(d)).cond == doctest::Approx(10.0).epsilon(1e-14));
  CHECK_THROWS(conditionNumber2(SparseSymMatrix::fromDense(Eigen::MatrixXd::Zero(2, 2))));
}

TEST_CASE("Lanczos agrees with the dense eigensolver") {
  for (int n : {500, 900, 1500}) {
    const SparseSymMatrix a = banded(n, n);
    const ConditionResult dense = conditionNumber2(a, CondMethod::Dense);
    const ConditionResult lan = conditionNumber2(a, CondMethod::Lanczos);
    CHECK(lan.method != dense.method);
    CHECK(lan.cond == doctest::Approx(dense.cond).epsilon(1e-4));
    CHECK(lan.lambdaMax == doctest::Approx(dense.lambdaMax).epsilon(1e-4));
  }
}

TEST_CASE("permutation invariance") {
  const SparseSymMatrix a = banded(120, 3);
  std::vector<int> perm(120);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(4));
  const SparseSymMatrix pa = a.permuted(perm);
  Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(120, -1.0, 2.0);
  Eigen::VectorXd pb(120);
  for (int i = 0; i < 120; ++i) pb(i) = b(perm[i]);
  const Eigen::VectorXd x = solve(a, b).x;
  const Eigen::VectorXd px = solve(pa, pb).x;
  for (int i = 0; i < 120; ++i) CHECK(px(i) == doctest::Approx(x(perm[i])).epsilon(1e-12));
  CHECK(conditionNumber2(pa).cond == doctest::Approx(conditionNumber2(a).cond).epsilon(1e-10));
  CHECK(conditionNumber2(pa, CondMethod::Lanczos).cond ==
        doctest::Approx(conditionNumber2(a, CondMethod::Lanczos).cond).epsilon(1e-6));
}

TEST_CASE("generalized eigenvalues") {
  Eigen::MatrixXd a(2, 2), b(2, 2);
  a << 2, 0, 0, 6;
  b << 1, 0, 0, 2;
  const Eigen::VectorXd ev = generalizedEigenvalues(a, b);
  CHECK(ev(0) == doctest::Approx(2.0));
  CHECK(ev(1) == doctest::Approx(3.0));
}
