#include "ripdg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ripdg/quadrature.hpp"

namespace ripdg {

namespace {

struct ElementSample {
  QuadRule rule;
  Eigen::VectorXd uh;
  Eigen::VectorXd dx;
  Eigen::VectorXd dy;
};

ElementSample sample(const DgSpace& space, const Eigen::VectorXd& u, int k, int extraDegree) {
  ElementSample s;
  s.rule = elementRule(space.mesh(), k, 2 * space.degree(k) + kErrorQuadExtra + extraDegree);
  Eigen::MatrixXd v, gx, gy;
  space.evalWithGrad(k, s.rule.nodes, v, gx, gy);
  const auto c = u.segment(space.offset(k), space.localDim(k));
  s.uh = v * c;
  s.dx = gx * c;
  s.dy = gy * c;
  return s;
}

// Serial sum in index order so results do not depend on the thread count.
double orderedSum(const std::vector<double>& parts) {
  double s = 0.0;
  for (double p : parts) s += p;
  return s;
}

void checkSize(const DgSpace& space, const Eigen::VectorXd& u) {
  if (u.size() != space.numDofs()) throw std::invalid_argument("error functional: coefficient vector size mismatch");
}

}  // namespace

double errorL2(const DgSpace& space, const Eigen::VectorXd& u, const ScalarField& exact, int extraDegree) {
  checkSize(space, u);
  std::vector<double> part(space.mesh().numElements(), 0.0);
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < space.mesh().numElements(); ++k) {
    const ElementSample s = sample(space, u, k, extraDegree);
    for (std::size_t q = 0; q < s.rule.size(); ++q) {
      const double e = exact(s.rule.nodes[q]) - s.uh[q];
      part[k] += s.rule.weights[q] * e * e;
    }
  }
  return std::sqrt(orderedSum(part));
}

double errorBrokenH1(const DgSpace& space, const Eigen::VectorXd& u, const VectorField& exactGrad, int extraDegree) {
  checkSize(space, u);
  std::vector<double> part(space.mesh().numElements(), 0.0);
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < space.mesh().numElements(); ++k) {
    const ElementSample s = sample(space, u, k, extraDegree);
    for (std::size_t q = 0; q < s.rule.size(); ++q) {
      const Point g = exactGrad(s.rule.nodes[q]);
      const double ex = g.x - s.dx[q];
      const double ey = g.y - s.dy[q];
      part[k] += s.rule.weights[q] * (ex * ex + ey * ey);
    }
  }
  return std::sqrt(orderedSum(part));
}

DgError errorDg(const DgSpace& space, const Eigen::VectorXd& u, const ProblemSpec& problem,
                const std::vector<FaceRecord>& faces, int extraDegree) {
  checkSize(space, u);
  const Mesh& mesh = space.mesh();
  if (static_cast<int>(faces.size()) != mesh.numFaces()) throw std::invalid_argument("errorDg: missing sigma");
  if (!problem.hasExact()) throw std::invalid_argument("errorDg: problem has no exact solution");

  std::vector<double> volume(mesh.numElements(), 0.0);
  std::vector<double> reaction(mesh.numElements(), 0.0);
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < mesh.numElements(); ++k) {
    const ElementSample s = sample(space, u, k, extraDegree);
    for (std::size_t q = 0; q < s.rule.size(); ++q) {
      const Point x = s.rule.nodes[q];
      const Point g = problem.exactGrad(x);
      const Point e{g.x - s.dx[q], g.y - s.dy[q]};
      volume[k] += s.rule.weights[q] * dot(problem.diffusion(x, k).apply(e), e);
      if (problem.hasReaction()) {
        const double ev = problem.exact(x) - s.uh[q];
        reaction[k] += s.rule.weights[q] * problem.reaction(x) * ev * ev;
      }
    }
  }

  std::vector<double> jumps(mesh.numFaces(), 0.0);
#pragma omp parallel for schedule(dynamic)
  for (int fi = 0; fi < mesh.numFaces(); ++fi) {
    const Face& f = mesh.face(fi);
    const double sigma = faces[fi].weights.sigma;
    if (sigma == 0.0) continue;
    const int pp = space.degree(f.plusElement);
    const int pm = f.isBoundary() ? pp : space.degree(f.minusElement);
    const QuadRule rule = faceRule(f, 2 * std::max(pp, pm) + kErrorQuadExtra + extraDegree);
    const Eigen::MatrixXd vp = space.eval(f.plusElement, rule.nodes);
    const Eigen::VectorXd up = vp * u.segment(space.offset(f.plusElement), space.localDim(f.plusElement));
    Eigen::VectorXd um;
    if (!f.isBoundary()) {
      const Eigen::MatrixXd vm = space.eval(f.minusElement, rule.nodes);
      um = vm * u.segment(space.offset(f.minusElement), space.localDim(f.minusElement));
    }
    for (std::size_t q = 0; q < rule.size(); ++q) {
      // [[u - u_h]]: the exact trace cancels on interior faces.
      const double j = f.isBoundary() ? problem.exact(rule.nodes[q]) - up[q] : um[q] - up[q];
      jumps[fi] += rule.weights[q] * sigma * j * j;
    }
  }
  const double vj = orderedSum(volume) + orderedSum(jumps);
  return {std::sqrt(vj), std::sqrt(vj + orderedSum(reaction))};
}

std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& measures) {
  if (errors.size() != measures.size() || errors.size() < 2) {
    throw std::invalid_argument("eoc: need two or more (error, measure) pairs of equal length");
  }
  std::vector<double> rates;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    if (!(errors[i] > 0.0 && errors[i + 1] > 0.0 && measures[i] > 0.0 && measures[i + 1] > 0.0)) {
      throw std::invalid_argument("eoc: inputs must be positive");
    }
    rates.push_back(std::log(errors[i] / errors[i + 1]) / std::log(measures[i] / measures[i + 1]));
  }
  return rates;
}

std::vector<double> exponentialRates(const std::vector<double>& errors, const std::vector<double>& measures) {
  if (errors.size() != measures.size() || errors.size() < 2) {
    throw std::invalid_argument("exponentialRates: need two or more pairs of equal length");
  }
  std::vector<double> rates;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    if (!(errors[i] > 0.0 && errors[i + 1] > 0.0)) throw std::invalid_argument("exponentialRates: errors must be positive");
    rates.push_back((std::log(errors[i + 1]) - std::log(errors[i])) / (measures[i + 1] - measures[i]));
  }
  return rates;
}

}  // namespace ripdg
