#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ripdg/assembly.hpp"

namespace ripdg {

/// Extra exactness beyond 2p used by the error functionals.
inline constexpr int kErrorQuadExtra = 6;

double errorL2(const DgSpace& space, const Eigen::VectorXd& u, const ScalarField& exact, int extraDegree = 0);

/// Broken H1 seminorm of u - u_h.
double errorBrokenH1(const DgSpace& space, const Eigen::VectorXd& u, const VectorField& exactGrad,
                     int extraDegree = 0);

struct DgError {
  double withoutReaction = 0.0;  // sqrt(|sqrt(a) grad e|^2 + sum sigma |[[e]]|^2)
  double withReaction = 0.0;     // adds |sqrt(c) e|^2
};

/// dG-norm error. sigma per face comes from `faces`; the exact solution is
/// single valued so its jumps vanish.
DgError errorDg(const DgSpace& space, const Eigen::VectorXd& u, const ProblemSpec& problem,
                const std::vector<FaceRecord>& faces, int extraDegree = 0);

/// Algebraic rates log(e_i/e_{i+1}) / log(m_i/m_{i+1}).
std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& measures);

/// Slopes of log(e) against m (e.g. m = sqrt(DoF) for exponential convergence).
std::vector<double> exponentialRates(const std::vector<double>& errors, const std::vector<double>& measures);

}  // namespace ripdg
