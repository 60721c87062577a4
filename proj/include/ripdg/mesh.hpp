#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ripdg/geometry.hpp"

namespace ripdg {

enum class ElementKind { Simplex, Box, Polygon };

const char* toString(ElementKind kind);

/// Sentinel neighbour id of a boundary face.
inline constexpr int kBoundary = -1;

struct Element {
  ElementKind kind = ElementKind::Polygon;
  std::vector<int> vertexIds;  // counter-clockwise for a valid mesh
  double area = 0.0;           // signed shoelace area
  BoundingBox bbox;
  Point starCenter;
  /// The fan from starCenter is a valid triangulation of the element.
  bool starShaped = false;
  /// Number of maximal runs of collinear boundary edges (m_K).
  int facetClusterCount = 0;
  /// faceIds[i] is the face on the edge (vertexIds[i], vertexIds[i+1]).
  std::vector<int> faceIds;
  /// Positive-area sub-triangulation: the fan when starShaped, otherwise ear clipping.
  std::vector<Triangle> triangulation;
  /// Index into `triangulation` of the sub-triangle containing each local edge.
  std::vector<int> edgeTriangle;
};

struct Face {
  Point a;
  Point b;
  double measure = 0.0;
  /// Unit normal pointing from the plus to the minus element (outward on the boundary).
  Point unitNormal;
  int plusElement = kBoundary;
  int minusElement = kBoundary;
  /// Local edge index of the face within the plus / minus element.
  std::array<int, 2> localEdge{-1, -1};
  /// Area of the sub-simplex spanned by the face inside the plus / minus element.
  std::array<double, 2> subsimplexAreas{0.0, 0.0};

  bool isBoundary() const { return minusElement == kBoundary; }
  Point midpoint() const { return 0.5 * (a + b); }
};

struct Diagnostic {
  std::string kind;  // orientation, self-intersection, star-shapedness, ...
  int element = -1;
  int face = -1;
  std::string message;
  /// False for elements without a kernel: they are still usable through their
  /// ear-clipped sub-simplices.
  bool fatal = true;
};

/// Immutable polygonal mesh of a rectangular domain. Faces are derived from the
/// element vertex lists: an edge shared by two elements is an interior face,
/// an edge used once is a boundary face.
class Mesh {
 public:
  static Mesh fromPolygons(std::vector<Point> vertices, std::vector<std::vector<int>> elements);

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Element>& elements() const { return elements_; }
  const std::vector<Face>& faces() const { return faces_; }
  const Element& element(int k) const { return elements_[k]; }
  const Face& face(int f) const { return faces_[f]; }
  int numElements() const { return static_cast<int>(elements_.size()); }
  int numFaces() const { return static_cast<int>(faces_.size()); }
  int numInteriorFaces() const;
  int numBoundaryFaces() const;
  const BoundingBox& domain() const { return domain_; }
  std::vector<Point> elementPolygon(int k) const;
  /// Edges that could not be matched consistently (used by more than two elements).
  const std::vector<std::array<int, 2>>& nonManifoldEdges() const { return nonManifold_; }

 private:
  Mesh() = default;

  std::vector<Point> vertices_;
  std::vector<Element> elements_;
  std::vector<Face> faces_;
  BoundingBox domain_;
  std::vector<std::array<int, 2>> nonManifold_;
};

/// Empty iff every mesh, element and face invariant holds.
std::vector<Diagnostic> validate(const Mesh& mesh);

/// The diagnostics of validate() with fatal set.
std::vector<Diagnostic> fatalDiagnostics(const Mesh& mesh);

// Generators -----------------------------------------------------------------

Mesh buildUniformSquares(int n, const BoundingBox& domain);

/// n x n squares, each split along its (lo.x, lo.y)-(hi.x, hi.y) diagonal.
Mesh buildUniformTriangles(int n, const BoundingBox& domain);

/// Layer-adapted tensor mesh of (-1,1)^2 with breakpoints {-1, -1+l, 1-l, 1}.
Mesh buildNineElement(double l);

/// Nine-element mesh whose 12 interior segments are triangular waves of
/// amplitude l/6 with `teeth` full periods each.
Mesh buildZigzagNineElement(double l, int teeth);

/// K1 = (0,1-delta)x(0,1), K2 = (1-delta,1)x(0,1).
Mesh buildTwoQuads(double delta);

/// 6x6 grid of (-1,1)^2 with the middle 2x2 block merged into one element
/// carrying hanging nodes.
Mesh buildCenterMergedGrid();

/// Seeded greedy multi-source BFS agglomeration of a triangulation.
Mesh agglomerate(const Mesh& fine, int targetCount, std::uint64_t seed);

// Serialization ----------------------------------------------------------------

void writeMesh(std::ostream& os, const Mesh& mesh);
Mesh readMesh(std::istream& is);
std::string serializeMesh(const Mesh& mesh);
/// 64-bit FNV-1a checksum of serializeMesh(mesh).
std::uint64_t meshChecksum(const Mesh& mesh);

}  // namespace ripdg
