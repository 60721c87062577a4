#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "assembly_internal.hpp"

namespace ripdg {

void MethodConfig::validate() const {
  if (!(theta >= -1.0 && theta <= 1.0)) throw std::invalid_argument("method.theta must lie in [-1, 1]");
  if (!(penaltyScale > 0.0)) throw std::invalid_argument("method.penaltyScale must be positive");
  if (quadInc < 0) throw std::invalid_argument("method.quadInc must be nonnegative");
  if (!(linfSafety >= 1.0)) throw std::invalid_argument("method.linfSafety must be >= 1");
}

std::pair<int, double> sideInverseConstant(const DgSpace& space, const MethodConfig& config, int face, int side) {
  const Mesh& mesh = space.mesh();
  const Face& f = mesh.face(face);
  const int k = side == 0 ? f.plusElement : f.minusElement;
  const Element& e = mesh.element(k);
  const int p = space.degree(k);
  if (e.kind == ElementKind::Box && !config.notionalBoxSubdivision) {
    return {4, fluxInverseConstant(p, f.measure, e.area)};
  }
  if (e.kind == ElementKind::Simplex) return {e.facetClusterCount, fluxInverseConstant(p, f.measure, e.area)};
  return {e.facetClusterCount, polytopicInverseConstant(p, f.measure, f.subsimplexAreas[side])};
}

FaceRecord computeFaceRecord(const DgSpace& space, const ProblemSpec& problem, const MethodConfig& config,
                             int face) {
  const Face& f = space.mesh().face(face);
  std::vector<double> inv(space.mesh().numElements(), 0.0);
  inv[f.plusElement] = detail::elementInvSqrtSup(space, problem, config, f.plusElement);
  if (!f.isBoundary()) inv[f.minusElement] = detail::elementInvSqrtSup(space, problem, config, f.minusElement);
  return detail::faceRecord(space, problem, config, face, inv);
}

namespace detail {

int volumeExactness(const DgSpace& space, const MethodConfig& config, int k) {
  return 2 * space.degree(k) + config.quadInc;
}

int faceExactness(const DgSpace& space, const MethodConfig& config, int face) {
  const Face& f = space.mesh().face(face);
  const int pp = space.degree(f.plusElement);
  const int pm = f.isBoundary() ? pp : space.degree(f.minusElement);
  // Same-side blocks multiply two traces of the higher degree.
  return 2 * std::max(pp, pm) + config.quadInc;
}

void checkDiffusion(const Tensor2& a, bool allowSemidefinite, Point x) {
  const auto [lmin, lmax] = a.eigenvalues();
  const bool ok = allowSemidefinite ? lmin >= -1e-14 * std::max(1.0, std::abs(lmax)) : lmin > 0.0;
  if (!ok || !std::isfinite(lmax)) {
    std::ostringstream msg;
    msg << "diffusion tensor is not " << (allowSemidefinite ? "positive semidefinite" : "SPD") << " at ("
        << x.x << ", " << x.y << "): eigenvalues " << lmin << ", " << lmax;
    throw std::domain_error(msg.str());
  }
}

double elementInvSqrtSup(const DgSpace& space, const ProblemSpec& problem, const MethodConfig& config, int k) {
  const QuadRule rule = elementRule(space.mesh(), k, volumeExactness(space, config, k));
  double sup = 0.0;
  for (const Point& x : rule.nodes) {
    const double lmin = problem.diffusion(x, k).eigenvalues().first;
    if (!(lmin > 0.0)) return std::numeric_limits<double>::infinity();
    sup = std::max(sup, 1.0 / std::sqrt(lmin));
  }
  return sup * config.linfSafety;
}

FaceRecord faceRecord(const DgSpace& space, const ProblemSpec& problem, const MethodConfig& config, int face,
                      const std::vector<double>& invSqrtSup) {
  const Face& f = space.mesh().face(face);
  const QuadRule rule = faceRule(f, faceExactness(space, config, face));
  FaceRecord rec;
  rec.data.boundary = f.isBoundary();
  const Point n = f.unitNormal;
  for (int s = 0; s < (f.isBoundary() ? 1 : 2); ++s) {
    const int k = s == 0 ? f.plusElement : f.minusElement;
    SideCoefficientData& d = rec.data.side[s];
    for (const Point& x : rule.nodes) {
      const Tensor2 a = problem.diffusion(x, k);
      const Tensor2 sq = a.sqrt();
      d.aNormSup = std::max(d.aNormSup, norm(a.apply(n)));
      d.sqrtANormSup = std::max(d.sqrtANormSup, norm(sq.apply(n)));
      d.sqrtASup = std::max(d.sqrtASup, std::sqrt(std::max(a.eigenvalues().second, 0.0)));
      d.alphaNormal = std::max(d.alphaNormal, dot(n, a.apply(n)));
    }
    d.aNormSup *= config.linfSafety;
    d.sqrtANormSup *= config.linfSafety;
    d.sqrtASup *= config.linfSafety;
    d.alphaNormal *= config.linfSafety;
    d.aInvSqrtSup = invSqrtSup[k];
    const auto [mK, cInv] = sideInverseConstant(space, config, face, s);
    d.mK = mK;
    d.cInv = cInv;
  }

  const double tau = ipdgPenalty(rec.data);
  rec.tau = std::isfinite(tau) ? tau : std::numeric_limits<double>::infinity();
  switch (config.variant) {
    case Variant::IPDG: rec.weights = legacyWeights(config.weightScheme, rec.data); break;
    case Variant::RIPDG: rec.weights = ripdgWeightsAndPenalty(rec.data, config.boundaryPenalty); break;
    case Variant::RIPDG_DEG: rec.weights = degenerateWeightsAndPenalty(rec.data, config.boundaryPenalty); break;
  }
  rec.weights.sigma *= config.penaltyScale;
  return rec;
}

}  // namespace detail

}  // namespace ripdg
