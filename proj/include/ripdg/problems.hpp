#pragma once

#include <functional>
#include <string>

#include "ripdg/geometry.hpp"

namespace ripdg {

/// Symmetric 2x2 tensor [[xx, xy], [xy, yy]].
struct Tensor2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  static Tensor2 scalar(double s) { return {s, 0.0, s}; }
  Point apply(Point v) const { return {xx * v.x + xy * v.y, xy * v.x + yy * v.y}; }
  double trace() const { return xx + yy; }
  double det() const { return xx * yy - xy * xy; }
  /// Eigenvalues, ascending.
  std::pair<double, double> eigenvalues() const;
  /// Principal square root of a positive semidefinite tensor.
  Tensor2 sqrt() const;
};

/// Diffusion may depend on the element as well as the point so that
/// element-wise constant coefficients have well-defined one-sided traces.
using DiffusionField = std::function<Tensor2(Point, int element)>;
using ScalarField = std::function<double(Point)>;
using VectorField = std::function<Point(Point)>;

struct ProblemSpec {
  std::string key;
  DiffusionField diffusion;
  ScalarField reaction;  // empty: no reaction term
  ScalarField source;
  ScalarField boundary;
  ScalarField exact;      // optional
  VectorField exactGrad;  // optional
  BoundingBox domain;
  /// The diffusion tensor may be singular (degenerate variant only).
  bool allowSemidefinite = false;

  bool hasReaction() const { return static_cast<bool>(reaction); }
  bool hasExact() const { return static_cast<bool>(exact) && static_cast<bool>(exactGrad); }
};

/// -Delta u = f on (0,1)^2 with u = sin(pi x) sin(pi y).
ProblemSpec poissonSine();

/// -eps Delta u + u = f on (-1,1)^2 with boundary layers of width O(sqrt(eps)).
ProblemSpec boundaryLayer(double eps);

/// -Delta u = f on (-1,1)^2 with u = exp(-alpha r^2).
ProblemSpec gaussianPeak(double alpha);

/// -div(a grad u) = 0 with u = x + 2y and constant scalar a.
ProblemSpec linearSolution(double a = 1.0, BoundingBox domain = {{0.0, 0.0}, {1.0, 1.0}});

/// a = diag(x^2, 1) on (0,1)^2 with u = y, f = 0.
ProblemSpec degenerateStrip();

/// Build a problem from a registry key and its parameter.
ProblemSpec makeProblem(const std::string& key, double parameter);

}  // namespace ripdg
