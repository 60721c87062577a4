#include "ripdg/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ripdg {

std::pair<double, double> Tensor2::eigenvalues() const {
  const double m = 0.5 * (xx + yy);
  const double r = std::hypot(0.5 * (xx - yy), xy);
  return {m - r, m + r};
}

Tensor2 Tensor2::sqrt() const {
  // sqrt(A) = (A + sqrt(det) I) / sqrt(tr + 2 sqrt(det)) for 2x2 PSD A.
  const double d = std::max(det(), 0.0);
  const double s = std::sqrt(d);
  const double t = std::sqrt(std::max(trace() + 2.0 * s, 0.0));
  if (t == 0.0) return {0.0, 0.0, 0.0};
  if (xy == 0.0) return {std::sqrt(std::max(xx, 0.0)), 0.0, std::sqrt(std::max(yy, 0.0))};
  return {(xx + s) / t, xy / t, (yy + s) / t};
}

ProblemSpec poissonSine() {
  using std::numbers::pi;
  ProblemSpec p;
  p.key = "poisson_sine";
  p.domain = {{0.0, 0.0}, {1.0, 1.0}};
  p.diffusion = [](Point, int) { return Tensor2::scalar(1.0); };
  p.exact = [](Point x) { return std::sin(pi * x.x) * std::sin(pi * x.y); };
  p.exactGrad = [](Point x) {
    return Point{pi * std::cos(pi * x.x) * std::sin(pi * x.y), pi * std::sin(pi * x.x) * std::cos(pi * x.y)};
  };
  p.source = [](Point x) { return 2.0 * pi * pi * std::sin(pi * x.x) * std::sin(pi * x.y); };
  p.boundary = p.exact;
  return p;
}

ProblemSpec boundaryLayer(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("boundaryLayer: eps must be positive");
  const double s = std::sqrt(eps);
  // 1 - cosh(t/s)/cosh(1/s) written with decaying exponentials only.
  auto layer = [s](double t) {
    const double e = std::exp(-2.0 / s);
    return 1.0 - (std::exp((t - 1.0) / s) + std::exp(-(t + 1.0) / s)) / (1.0 + e);
  };
  auto dlayer = [s](double t) {
    const double e = std::exp(-2.0 / s);
    return -(std::exp((t - 1.0) / s) - std::exp(-(t + 1.0) / s)) / (s * (1.0 + e));
  };
  ProblemSpec p;
  p.key = "boundary_layer";
  p.domain = {{-1.0, -1.0}, {1.0, 1.0}};
  p.diffusion = [eps](Point, int) { return Tensor2::scalar(eps); };
  p.reaction = [](Point) { return 1.0; };
  p.exact = [layer](Point x) { return layer(x.x) * layer(x.y); };
  p.exactGrad = [layer, dlayer](Point x) {
    return Point{dlayer(x.x) * layer(x.y), layer(x.x) * dlayer(x.y)};
  };
  p.source = [layer](Point x) {
    const double a = layer(x.x);
    const double b = layer(x.y);
    return a + b - a * b;
  };
  p.boundary = p.exact;
  return p;
}

ProblemSpec gaussianPeak(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("gaussianPeak: alpha must be positive");
  ProblemSpec p;
  p.key = "gaussian_peak";
  p.domain = {{-1.0, -1.0}, {1.0, 1.0}};
  p.diffusion = [](Point, int) { return Tensor2::scalar(1.0); };
  p.exact = [alpha](Point x) { return std::exp(-alpha * dot(x, x)); };
  p.exactGrad = [alpha](Point x) {
    const double u = std::exp(-alpha * dot(x, x));
    return Point{-2.0 * alpha * x.x * u, -2.0 * alpha * x.y * u};
  };
  p.source = [alpha](Point x) {
    const double r2 = dot(x, x);
    return (4.0 * alpha - 4.0 * alpha * alpha * r2) * std::exp(-alpha * r2);
  };
  p.boundary = p.exact;
  return p;
}

ProblemSpec linearSolution(double a, BoundingBox domain) {
  ProblemSpec p;
  p.key = "linear";
  p.domain = domain;
  p.diffusion = [a](Point, int) { return Tensor2::scalar(a); };
  p.exact = [](Point x) { return x.x + 2.0 * x.y; };
  p.exactGrad = [](Point) { return Point{1.0, 2.0}; };
  p.source = [](Point) { return 0.0; };
  p.boundary = p.exact;
  return p;
}

ProblemSpec degenerateStrip() {
  ProblemSpec p;
  p.key = "degenerate_strip";
  p.domain = {{0.0, 0.0}, {1.0, 1.0}};
  p.diffusion = [](Point x, int) { return Tensor2{x.x * x.x, 0.0, 1.0}; };
  p.exact = [](Point x) { return x.y; };
  p.exactGrad = [](Point) { return Point{0.0, 1.0}; };
  p.source = [](Point) { return 0.0; };
  p.boundary = p.exact;
  p.allowSemidefinite = true;
  return p;
}

ProblemSpec makeProblem(const std::string& key, double parameter) {
  if (key == "poisson_sine") return poissonSine();
  if (key == "boundary_layer") return boundaryLayer(parameter);
  if (key == "gaussian_peak") return gaussianPeak(parameter);
  if (key == "linear") return linearSolution(parameter > 0.0 ? parameter : 1.0);
  if (key == "degenerate_strip") return degenerateStrip();
  throw std::invalid_argument("unknown problem key '" + key + "'");
}

}  // namespace ripdg
