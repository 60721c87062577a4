#include "ripdg/flux_weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ripdg {

std::string toString(Variant v) {
  switch (v) {
    case Variant::IPDG: return "ipdg";
    case Variant::RIPDG: return "ripdg";
    case Variant::RIPDG_DEG: return "ripdg_deg";
  }
  return "?";
}

std::string toString(WeightScheme s) {
  switch (s) {
    case WeightScheme::Arithmetic: return "arithmetic";
    case WeightScheme::PlusSided: return "plus_sided";
    case WeightScheme::MinusSided: return "minus_sided";
    case WeightScheme::Diffusion: return "diffusion";
  }
  return "?";
}

std::string toString(BoundaryPenalty b) { return b == BoundaryPenalty::OneSided ? "one_sided" : "mirrored"; }

Variant parseVariant(const std::string& s) {
  if (s == "ipdg") return Variant::IPDG;
  if (s == "ripdg") return Variant::RIPDG;
  if (s == "ripdg_deg") return Variant::RIPDG_DEG;
  throw std::invalid_argument("unknown method variant '" + s + "'");
}

WeightScheme parseWeightScheme(const std::string& s) {
  if (s == "arithmetic") return WeightScheme::Arithmetic;
  if (s == "plus_sided") return WeightScheme::PlusSided;
  if (s == "minus_sided") return WeightScheme::MinusSided;
  if (s == "diffusion") return WeightScheme::Diffusion;
  throw std::invalid_argument("unknown weight scheme '" + s + "'");
}

BoundaryPenalty parseBoundaryPenalty(const std::string& s) {
  if (s == "one_sided") return BoundaryPenalty::OneSided;
  if (s == "mirrored") return BoundaryPenalty::Mirrored;
  throw std::invalid_argument("unknown boundary penalty '" + s + "'");
}

double traceInverseBound(int p, double faceMeasure, double elemMeasure, int d) {
  if (!(elemMeasure > 0.0)) throw std::invalid_argument("traceInverseBound: element measure must be positive");
  return (p + 1.0) * (p + d) / d * faceMeasure / elemMeasure;
}

double fluxInverseConstant(int p, double faceMeasure, double elemMeasure, int d) {
  if (!(elemMeasure > 0.0)) throw std::invalid_argument("fluxInverseConstant: element measure must be positive");
  if (p <= 0) return 0.0;
  return std::sqrt(p * (p + d - 1.0) * faceMeasure / (d * elemMeasure));
}

double polytopicInverseConstant(int p, double facetMeasure, double subsimplexArea, int d) {
  return fluxInverseConstant(p, facetMeasure, subsimplexArea, d);
}

double ipdgPenalty(const FaceCoefficientData& data) {
  double tau = 0.0;
  const int sides = data.boundary ? 1 : 2;
  for (int s = 0; s < sides; ++s) {
    const SideCoefficientData& d = data.side[s];
    const double aInv = d.aInvSqrtSup * d.aInvSqrtSup;
    tau = std::max(tau, d.mK * d.cInv * d.cInv * d.aNormSup * d.aNormSup * aInv);
  }
  return 2.0 * tau;
}

namespace {

// zeta = 1 / (2 sqrt(m) C g); infinite when the denominator vanishes.
double zeta(const SideCoefficientData& d, double g) {
  const double denom = 2.0 * std::sqrt(static_cast<double>(d.mK)) * d.cInv * g;
  return denom > 0.0 ? 1.0 / denom : std::numeric_limits<double>::infinity();
}

FaceWeights combine(double zp, double zm, bool boundary, BoundaryPenalty bp) {
  if (boundary) {
    if (std::isinf(zp)) return {1.0, 0.0, 0.0};
    const double z = bp == BoundaryPenalty::OneSided ? zp : 2.0 * zp;
    return {1.0, 0.0, 1.0 / (z * z)};
  }
  if (std::isinf(zp) && std::isinf(zm)) {
    throw std::invalid_argument("robust weights: both sides have an infinite zeta");
  }
  if (std::isinf(zp)) return {1.0, 0.0, 0.0};
  if (std::isinf(zm)) return {0.0, 1.0, 0.0};
  const double sum = zp + zm;
  return {zp / sum, zm / sum, 1.0 / (sum * sum)};
}

}  // namespace

FaceWeights ripdgWeightsAndPenalty(const FaceCoefficientData& data, BoundaryPenalty bp) {
  const auto& p = data.side[0];
  const double zp = zeta(p, p.aNormSup * p.aInvSqrtSup);
  double zm = 0.0;
  if (!data.boundary) {
    const auto& m = data.side[1];
    zm = zeta(m, m.aNormSup * m.aInvSqrtSup);
  }
  return combine(zp, zm, data.boundary, bp);
}

FaceWeights degenerateWeightsAndPenalty(const FaceCoefficientData& data, BoundaryPenalty bp) {
  const int sides = data.boundary ? 1 : 2;
  double scale = 0.0;
  for (int s = 0; s < sides; ++s) scale = std::max(scale, data.side[s].sqrtASup);
  std::array<bool, 2> vanishes{false, false};
  for (int s = 0; s < sides; ++s) vanishes[s] = data.side[s].sqrtANormSup <= kVanishingTol * scale;

  if (data.boundary) {
    if (vanishes[0]) return {1.0, 0.0, 0.0};
    return combine(zeta(data.side[0], data.side[0].sqrtANormSup), 0.0, true, bp);
  }
  if (vanishes[0] && vanishes[1]) return {0.0, 0.0, 0.0};
  if (vanishes[0]) return {1.0, 0.0, 0.0};
  if (vanishes[1]) return {0.0, 1.0, 0.0};
  return combine(zeta(data.side[0], data.side[0].sqrtANormSup), zeta(data.side[1], data.side[1].sqrtANormSup),
                 false, bp);
}

FaceWeights legacyWeights(WeightScheme scheme, const FaceCoefficientData& data) {
  const double tau = ipdgPenalty(data);
  if (data.boundary) return {1.0, 0.0, tau};
  switch (scheme) {
    case WeightScheme::Arithmetic: return {0.5, 0.5, tau};
    case WeightScheme::PlusSided: return {1.0, 0.0, tau};
    case WeightScheme::MinusSided: return {0.0, 1.0, tau};
    case WeightScheme::Diffusion: {
      const double ap = data.side[0].alphaNormal;
      const double am = data.side[1].alphaNormal;
      if (!(ap + am > 0.0)) throw std::invalid_argument("diffusion weights: n^T a n vanishes on both sides");
      return {am / (ap + am), ap / (ap + am), tau};
    }
  }
  return {0.5, 0.5, tau};
}

}  // namespace ripdg
