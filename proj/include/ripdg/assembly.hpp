#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ripdg/basis.hpp"
#include "ripdg/flux_weights.hpp"
#include "ripdg/linalg.hpp"
#include "ripdg/problems.hpp"

namespace ripdg {

struct MethodConfig {
  Variant variant = Variant::RIPDG;
  WeightScheme weightScheme = WeightScheme::Arithmetic;  // IPDG only
  double theta = 1.0;
  double penaltyScale = 1.0;
  int quadInc = 3;
  BoundaryPenalty boundaryPenalty = BoundaryPenalty::OneSided;
  /// Treat boxes like polygons: per-face constants on the fan sub-triangles.
  bool notionalBoxSubdivision = false;
  /// Multiplies every sampled L-infinity norm.
  double linfSafety = 1.0;

  void validate() const;
};

struct FaceRecord {
  FaceCoefficientData data;
  FaceWeights weights;  // sigma already includes penaltyScale
  double tau = 0.0;     // unscaled IPDG penalty of the face
};

struct AssembledSystem {
  SparseSymMatrix stiffness;
  Eigen::VectorXd load;
  /// v^T N v = |sqrt(a) grad v|^2 + |sqrt(sigma) [[v]]|^2 (no reaction part).
  SparseSymMatrix normMatrix;
  /// Volume part of N alone: integral of a grad u . grad v.
  SparseSymMatrix gradientGram;
  /// Integral of c u v; empty pattern when the problem has no reaction.
  SparseSymMatrix reactionMass;
  std::vector<FaceRecord> faces;
  double maxSigmaInterior = 0.0;
  double maxSigmaGlobal = 0.0;
  double maxTauInterior = 0.0;
};

/// Multithreaded assembly; output is bit-identical for any thread count.
AssembledSystem assemble(const DgSpace& space, const ProblemSpec& problem, const MethodConfig& config);

/// Independent serial assembly used as a test oracle.
AssembledSystem assembleReference(const DgSpace& space, const ProblemSpec& problem, const MethodConfig& config);

/// Per-face coefficient bounds, inverse constants and weights (shared by both paths).
FaceRecord computeFaceRecord(const DgSpace& space, const ProblemSpec& problem, const MethodConfig& config,
                             int face);

/// m_K and C_inv of one side of a face.
std::pair<int, double> sideInverseConstant(const DgSpace& space, const MethodConfig& config, int face, int side);

}  // namespace ripdg
