#pragma once

#include <vector>

#include "ripdg/geometry.hpp"
#include "ripdg/mesh.hpp"

namespace ripdg {

/// Rule on the unit interval [0, 1].
struct LineRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

struct QuadRule {
  std::vector<Point> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [0, 1]; cached, the reference stays valid.
const LineRule& gaussLegendre(int numPoints);

/// Gauss-Legendre rule on [0, 1] exact for polynomials of the given degree.
const LineRule& segmentRule(int exactDegree);

/// Collapsed (Duffy) Gauss rule on the unit triangle {x, y >= 0, x + y <= 1}.
const QuadRule& unitTriangleRule(int exactDegree);

QuadRule triangleRule(const Triangle& t, int exactDegree);
QuadRule boxRule(const BoundingBox& box, int exactDegree);

/// Volume rule of a mesh element: tensor rule on boxes, the triangle itself
/// for plain triangles, otherwise the element's sub-triangulation.
QuadRule elementRule(const Mesh& mesh, int k, int exactDegree);

/// Gauss rule on a face: physical points and weights that sum to |F|.
QuadRule faceRule(const Face& face, int exactDegree);

}  // namespace ripdg
