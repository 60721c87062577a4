#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace ripdg {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point a, Point b) = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }

/// Twice the signed area of the triangle (a, b, c); positive when counter-clockwise.
inline double orient(Point a, Point b, Point c) { return cross(b - a, c - a); }

struct BoundingBox {
  Point lo;
  Point hi;

  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
  double area() const { return width() * height(); }
  Point center() const { return {0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)}; }
  bool contains(Point p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  }
};

BoundingBox boundingBox(std::span<const Point> pts);

/// Shoelace signed area of a closed polygon.
double signedArea(std::span<const Point> polygon);

Point polygonCentroid(std::span<const Point> polygon);

/// Strict interior test; points on the boundary (within tol) are reported outside.
bool strictlyInside(std::span<const Point> polygon, Point p, double tol);

double distanceToSegment(Point p, Point a, Point b);

/// True when the closed segments [a,b] and [c,d] share a point that is not a
/// common endpoint.
bool segmentsIntersectProperly(Point a, Point b, Point c, Point d, double tol);

/// Index pairs of non-adjacent polygon edges that intersect.
std::vector<std::array<int, 2>> selfIntersections(std::span<const Point> polygon, double tol);

using Triangle = std::array<Point, 3>;

/// Greedy ear clipping that always cuts the ear with the largest minimum angle.
/// `edgeOwner[i]` receives the index of the output triangle that contains the
/// polygon edge (i, i+1). Collinear vertices are supported. Throws when the
/// polygon is not simple.
std::vector<Triangle> earClip(std::span<const Point> polygon, std::vector<int>& edgeOwner);

}  // namespace ripdg
