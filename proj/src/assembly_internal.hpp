#pragma once

#include <vector>

#include "ripdg/assembly.hpp"
#include "ripdg/quadrature.hpp"

namespace ripdg::detail {

int volumeExactness(const DgSpace& space, const MethodConfig& config, int k);
int faceExactness(const DgSpace& space, const MethodConfig& config, int face);

/// Throws unless `a` is SPD (PSD when allowSemidefinite).
void checkDiffusion(const Tensor2& a, bool allowSemidefinite, Point x);

/// sup over the element's volume nodes of ||a^{-1/2}||_2 (infinite if singular).
double elementInvSqrtSup(const DgSpace& space, const ProblemSpec& problem, const MethodConfig& config, int k);

FaceRecord faceRecord(const DgSpace& space, const ProblemSpec& problem, const MethodConfig& config, int face,
                      const std::vector<double>& invSqrtSup);

}  // namespace ripdg::detail
