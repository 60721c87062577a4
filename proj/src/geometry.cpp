#include "ripdg/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace ripdg {

BoundingBox boundingBox(std::span<const Point> pts) {
  BoundingBox box{{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()},
                  {std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()}};
  for (const Point& p : pts) {
    box.lo.x = std::min(box.lo.x, p.x);
    box.lo.y = std::min(box.lo.y, p.y);
    box.hi.x = std::max(box.hi.x, p.x);
    box.hi.y = std::max(box.hi.y, p.y);
  }
  return box;
}

double signedArea(std::span<const Point> polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return 0.0;
  // Relative to the first vertex, so small polygons far from the origin keep their digits.
  const Point o = polygon[0];
  double twice = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    twice += cross(polygon[i] - o, polygon[i + 1] - o);
  }
  return 0.5 * twice;
}

Point polygonCentroid(std::span<const Point> polygon) {
  // Accumulate relative to the first vertex to limit cancellation on small
  // elements far from the origin.
  const std::size_t n = polygon.size();
  const Point o = polygon[0];
  double twiceArea = 0.0;
  Point acc{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = polygon[i] - o;
    const Point b = polygon[(i + 1) % n] - o;
    const double c = cross(a, b);
    twiceArea += c;
    acc = acc + c * (a + b);
  }
  return o + (1.0 / (3.0 * twiceArea)) * acc;
}

double distanceToSegment(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

bool strictlyInside(std::span<const Point> polygon, Point p, double tol) {
  const std::size_t n = polygon.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point a = polygon[i];
    const Point b = polygon[j];
    if (distanceToSegment(p, a, b) <= tol) return false;
    if ((a.y > p.y) != (b.y > p.y)) {
      const double xCross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (p.x < xCross) inside = !inside;
    }
  }
  return inside;
}

namespace {

bool onSegment(Point a, Point b, Point p, double tol) { return distanceToSegment(p, a, b) <= tol; }

int sign(double v, double tol) { return v > tol ? 1 : (v < -tol ? -1 : 0); }

}  // namespace

bool segmentsIntersectProperly(Point a, Point b, Point c, Point d, double tol) {
  const double scale = std::max({norm(b - a), norm(d - c), 1e-300});
  const double area_tol = tol * scale;
  const int o1 = sign(orient(a, b, c), area_tol);
  const int o2 = sign(orient(a, b, d), area_tol);
  const int o3 = sign(orient(c, d, a), area_tol);
  const int o4 = sign(orient(c, d, b), area_tol);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && onSegment(a, b, c, tol)) return true;
  if (o2 == 0 && onSegment(a, b, d, tol)) return true;
  if (o3 == 0 && onSegment(c, d, a, tol)) return true;
  if (o4 == 0 && onSegment(c, d, b, tol)) return true;
  return false;
}

std::vector<std::array<int, 2>> selfIntersections(std::span<const Point> polygon, double tol) {
  const int n = static_cast<int>(polygon.size());
  std::vector<std::array<int, 2>> hits;
  for (int i = 0; i < n; ++i) {
    const Point a = polygon[i];
    const Point b = polygon[(i + 1) % n];
    // Adjacent edge folding back onto this one.
    const Point c = polygon[(i + 2) % n];
    if (std::abs(orient(a, b, c)) <= tol * std::max(norm(b - a), norm(c - b)) &&
        dot(b - a, c - b) < 0.0) {
      hits.push_back({i, (i + 1) % n});
    }
    for (int j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segmentsIntersectProperly(a, b, polygon[j], polygon[(j + 1) % n], tol)) {
        hits.push_back({i, j});
      }
    }
  }
  return hits;
}

namespace {

double minAngle(const Triangle& t) {
  double best = std::numeric_limits<double>::max();
  for (int k = 0; k < 3; ++k) {
    const Point u = t[(k + 1) % 3] - t[k];
    const Point v = t[(k + 2) % 3] - t[k];
    const double ang = std::atan2(std::abs(cross(u, v)), dot(u, v));
    best = std::min(best, ang);
  }
  return best;
}

}  // namespace

std::vector<Triangle> earClip(std::span<const Point> polygon, std::vector<int>& edgeOwner) {
  const int n = static_cast<int>(polygon.size());
  if (n < 3) throw std::invalid_argument("earClip: polygon needs at least 3 vertices");
  const BoundingBox box = boundingBox(polygon);
  const double scale = std::max(box.width(), box.height());
  const double tol = 1e-12 * scale;

  std::vector<int> ring(n);
  std::vector<int> edgeLabel(n);  // label of edge ring[i] -> ring[i+1]; -1 for diagonals
  for (int i = 0; i < n; ++i) {
    ring[i] = i;
    edgeLabel[i] = i;
  }
  edgeOwner.assign(n, -1);
  std::vector<Triangle> out;
  out.reserve(n - 2);

  while (ring.size() > 3) {
    const int m = static_cast<int>(ring.size());
    int bestPos = -1;
    double bestQuality = -1.0;
    for (int i = 0; i < m; ++i) {
      const Point a = polygon[ring[(i + m - 1) % m]];
      const Point b = polygon[ring[i]];
      const Point c = polygon[ring[(i + 1) % m]];
      if (orient(a, b, c) <= tol * scale) continue;
      bool blocked = false;
      for (int k = 0; k < m && !blocked; ++k) {
        if (k == i || k == (i + m - 1) % m || k == (i + 1) % m) continue;
        const Point p = polygon[ring[k]];
        if (orient(a, b, p) >= -tol * scale && orient(b, c, p) >= -tol * scale &&
            orient(c, a, p) >= -tol * scale) {
          blocked = true;
        }
      }
      if (blocked) continue;
      const double q = minAngle({a, b, c});
      if (q > bestQuality) {
        bestQuality = q;
        bestPos = i;
      }
    }
    if (bestPos < 0) throw std::runtime_error("earClip: no ear found (polygon not simple)");

    const int prev = (bestPos + m - 1) % m;
    const int triIndex = static_cast<int>(out.size());
    out.push_back({polygon[ring[prev]], polygon[ring[bestPos]], polygon[ring[(bestPos + 1) % m]]});
    if (edgeLabel[prev] >= 0) edgeOwner[edgeLabel[prev]] = triIndex;
    if (edgeLabel[bestPos] >= 0) edgeOwner[edgeLabel[bestPos]] = triIndex;
    edgeLabel[prev] = -1;  // the new diagonal ring[prev] -> ring[bestPos+1]
    ring.erase(ring.begin() + bestPos);
    edgeLabel.erase(edgeLabel.begin() + bestPos);
  }
  const int triIndex = static_cast<int>(out.size());
  out.push_back({polygon[ring[0]], polygon[ring[1]], polygon[ring[2]]});
  for (int i = 0; i < 3; ++i) {
    if (edgeLabel[i] >= 0) edgeOwner[edgeLabel[i]] = triIndex;
  }
  return out;
}

}  // namespace ripdg
