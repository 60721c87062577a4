#pragma once

#include <array>
#include <string>

namespace ripdg {

enum class Variant { IPDG, RIPDG, RIPDG_DEG };
enum class WeightScheme { Arithmetic, PlusSided, MinusSided, Diffusion };

/// Penalty on boundary faces for the robust variants.
///  OneSided: zeta_- = 0, so sigma = zeta_+^{-2}.
///  Mirrored: the face is treated as if a copy of the element sat outside,
///            sigma = (2 zeta_+)^{-2}, which is tau_F / 2 as on interior faces.
enum class BoundaryPenalty { OneSided, Mirrored };

std::string toString(Variant v);
std::string toString(WeightScheme s);
std::string toString(BoundaryPenalty b);
Variant parseVariant(const std::string& s);
WeightScheme parseWeightScheme(const std::string& s);
BoundaryPenalty parseBoundaryPenalty(const std::string& s);

/// Coefficient bounds of one side of a face.
struct SideCoefficientData {
  double aNormSup = 0.0;      // sup_F |a n|
  double aInvSqrtSup = 0.0;   // sup_K ||a^{-1/2}||_2
  double sqrtANormSup = 0.0;  // sup_F |sqrt(a) n|
  double sqrtASup = 0.0;      // sup_F ||sqrt(a)||_2, the scale for vanishing tests
  double alphaNormal = 0.0;   // sup_F n^T a n
  int mK = 0;
  double cInv = 0.0;
};

struct FaceCoefficientData {
  std::array<SideCoefficientData, 2> side;
  bool boundary = false;
};

struct FaceWeights {
  double wPlus = 0.0;
  double wMinus = 0.0;
  double sigma = 0.0;
};

/// Squared trace inverse constant (p+1)(p+d)/d |F|/|K| for degree p on a simplex.
double traceInverseBound(int p, double faceMeasure, double elemMeasure, int d = 2);

/// sqrt(p(p+d-1)|F|/(d|K|)); zero for p = 0.
double fluxInverseConstant(int p, double faceMeasure, double elemMeasure, int d = 2);

/// Same formula with |K| replaced by the area of the sub-simplex spanned by the
/// facet and the element's star centre.
double polytopicInverseConstant(int p, double facetMeasure, double subsimplexArea, int d = 2);

/// tau_F = 2 max_* m_* C_*^2 |a n|^2 ||a^{-1}||.
double ipdgPenalty(const FaceCoefficientData& data);

FaceWeights ripdgWeightsAndPenalty(const FaceCoefficientData& data, BoundaryPenalty bp = BoundaryPenalty::OneSided);

/// Threshold below which sqrt(a) n counts as vanishing, relative to sqrtASup.
inline constexpr double kVanishingTol = 1e-14;

FaceWeights degenerateWeightsAndPenalty(const FaceCoefficientData& data,
                                        BoundaryPenalty bp = BoundaryPenalty::OneSided);

/// Classical weight choices; the penalty is always tau_F.
FaceWeights legacyWeights(WeightScheme scheme, const FaceCoefficientData& data);

}  // namespace ripdg
