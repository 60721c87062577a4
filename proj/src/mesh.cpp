#include "ripdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ripdg {

const char* toString(ElementKind kind) {
  switch (kind) {
    case ElementKind::Simplex: return "simplex";
    case ElementKind::Box: return "box";
    case ElementKind::Polygon: return "polygon";
  }
  return "?";
}

namespace {

constexpr double kCollinearAngle = 1e-9;
constexpr double kRelTol = 1e-12;

std::vector<int> cornerPositions(std::span<const Point> poly) {
  const int n = static_cast<int>(poly.size());
  std::vector<int> corners;
  for (int i = 0; i < n; ++i) {
    const Point in = poly[i] - poly[(i + n - 1) % n];
    const Point out = poly[(i + 1) % n] - poly[i];
    const double angle = std::atan2(std::abs(cross(in, out)), dot(in, out));
    if (angle > kCollinearAngle) corners.push_back(i);
  }
  return corners;
}

// Rounding in shoelace sums scales with |x| * size, not with the area, so
// small elements far from the origin need an absolute part.
double areaSumTolerance(const Element& e) {
  const double mag = std::max({std::abs(e.bbox.lo.x), std::abs(e.bbox.lo.y), std::abs(e.bbox.hi.x),
                               std::abs(e.bbox.hi.y), 1.0});
  const double n = static_cast<double>(e.vertexIds.size());
  return kRelTol * 10.0 * e.area + 1e-14 * n * mag * std::max(e.bbox.width(), e.bbox.height());
}

bool isStarShapedWrt(std::span<const Point> poly, Point c, double areaTol) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (orient(c, poly[i], poly[(i + 1) % n]) <= areaTol) return false;
  }
  return true;
}

// Kernel of a counter-clockwise polygon: clip it by the inner half-plane of every edge.
std::vector<Point> kernelPolygon(std::span<const Point> poly) {
  std::vector<Point> k(poly.begin(), poly.end());
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n && k.size() >= 3; ++i) {
    const Point a = poly[i];
    const Point b = poly[(i + 1) % n];
    std::vector<Point> next;
    for (std::size_t j = 0; j < k.size(); ++j) {
      const Point p = k[j];
      const Point q = k[(j + 1) % k.size()];
      const double dp = orient(a, b, p);
      const double dq = orient(a, b, q);
      if (dp >= 0.0) next.push_back(p);
      if ((dp >= 0.0) != (dq >= 0.0)) next.push_back(p + (dp / (dp - dq)) * (q - p));
    }
    k = std::move(next);
  }
  if (k.size() < 3) k.clear();
  return k;
}

double boundaryDistance(std::span<const Point> poly, Point c) {
  const std::size_t n = poly.size();
  double d = std::numeric_limits<double>::max();
  for (std::size_t i = 0; i < n; ++i) d = std::min(d, distanceToSegment(c, poly[i], poly[(i + 1) % n]));
  return d;
}

void classify(Element& e, std::span<const Point> poly) {
  const std::vector<int> corners = cornerPositions(poly);
  e.facetClusterCount = std::max<int>(1, static_cast<int>(corners.size()));
  e.kind = ElementKind::Polygon;
  if (corners.size() == 3 && e.area > 0.0) {
    e.kind = ElementKind::Simplex;
  } else if (corners.size() == 4 && e.area > 0.0) {
    const double tol = kRelTol * std::max(e.bbox.width(), e.bbox.height());
    bool onCorners = true;
    for (int c : corners) {
      const Point p = poly[c];
      const bool xOk = std::abs(p.x - e.bbox.lo.x) <= tol || std::abs(p.x - e.bbox.hi.x) <= tol;
      const bool yOk = std::abs(p.y - e.bbox.lo.y) <= tol || std::abs(p.y - e.bbox.hi.y) <= tol;
      onCorners = onCorners && xOk && yOk;
    }
    // The corner test already snaps to the box; this only rejects quads with a dent.
    if (onCorners && std::abs(e.area - e.bbox.area()) <= 1e-8 * e.bbox.area()) {
      e.kind = ElementKind::Box;
    }
  }
}

void locateStarCenter(Element& e, std::span<const Point> poly) {
  const double scale = std::max(e.bbox.width(), e.bbox.height());
  const double areaTol = kRelTol * scale * scale;
  const double lenTol = kRelTol * scale;

  Point first;
  if (e.kind == ElementKind::Box) {
    first = e.bbox.center();
  } else if (e.kind == ElementKind::Simplex) {
    const std::vector<int> c = cornerPositions(poly);
    first = (1.0 / 3.0) * (poly[c[0]] + poly[c[1]] + poly[c[2]]);
  } else {
    first = polygonCentroid(poly);
  }
  if (strictlyInside(poly, first, lenTol) && isStarShapedWrt(poly, first, areaTol)) {
    e.starCenter = first;
    e.starShaped = true;
    return;
  }

  const std::vector<Point> kernel = kernelPolygon(poly);
  if (kernel.size() >= 3 && signedArea(kernel) > areaTol) {
    const Point c = polygonCentroid(kernel);
    if (strictlyInside(poly, c, lenTol) && isStarShapedWrt(poly, c, areaTol)) {
      e.starCenter = c;
      e.starShaped = true;
      return;
    }
  }

  // No usable kernel: use the deepest interior point found on a coarse grid.
  constexpr int kGrid = 64;
  double best = 0.0;
  e.starCenter = first;
  e.starShaped = false;
  for (int j = 0; j < kGrid; ++j) {
    for (int i = 0; i < kGrid; ++i) {
      const Point c{e.bbox.lo.x + (i + 0.5) / kGrid * e.bbox.width(),
                    e.bbox.lo.y + (j + 0.5) / kGrid * e.bbox.height()};
      if (!strictlyInside(poly, c, lenTol)) continue;
      const double dist = boundaryDistance(poly, c);
      if (dist > best) {
        best = dist;
        e.starCenter = c;
      }
    }
  }
}

void triangulate(Element& e, std::span<const Point> poly) {
  const int n = static_cast<int>(poly.size());
  e.triangulation.clear();
  e.edgeTriangle.assign(n, -1);
  if (e.area <= 0.0) return;
  if (e.starShaped) {
    for (int i = 0; i < n; ++i) {
      e.triangulation.push_back({e.starCenter, poly[i], poly[(i + 1) % n]});
      e.edgeTriangle[i] = i;
    }
    return;
  }
  try {
    e.triangulation = earClip(poly, e.edgeTriangle);
  } catch (const std::exception&) {
    e.triangulation.clear();
    e.edgeTriangle.assign(n, -1);
  }
}

double triangleArea(const Triangle& t) { return 0.5 * orient(t[0], t[1], t[2]); }

}  // namespace

Mesh Mesh::fromPolygons(std::vector<Point> vertices, std::vector<std::vector<int>> elements) {
  Mesh mesh;
  mesh.vertices_ = std::move(vertices);
  if (mesh.vertices_.empty() || elements.empty()) {
    throw std::invalid_argument("Mesh::fromPolygons: empty mesh");
  }
  mesh.domain_ = boundingBox(mesh.vertices_);
  if (!(mesh.domain_.width() > 0.0) || !(mesh.domain_.height() > 0.0)) {
    throw std::invalid_argument("Mesh::fromPolygons: degenerate domain");
  }

  mesh.elements_.resize(elements.size());
  std::map<std::pair<int, int>, int> edgeToFace;
  for (std::size_t k = 0; k < elements.size(); ++k) {
    Element& e = mesh.elements_[k];
    e.vertexIds = std::move(elements[k]);
    const int n = static_cast<int>(e.vertexIds.size());
    if (n < 3) throw std::invalid_argument("Mesh::fromPolygons: element with fewer than 3 vertices");
    for (int v : e.vertexIds) {
      if (v < 0 || v >= static_cast<int>(mesh.vertices_.size())) {
        throw std::invalid_argument("Mesh::fromPolygons: vertex index out of range");
      }
    }
    const std::vector<Point> poly = mesh.elementPolygon(static_cast<int>(k));
    e.area = signedArea(poly);
    e.bbox = boundingBox(poly);
    classify(e, poly);
    locateStarCenter(e, poly);
    triangulate(e, poly);

    e.faceIds.assign(n, -1);
    for (int i = 0; i < n; ++i) {
      const int va = e.vertexIds[i];
      const int vb = e.vertexIds[(i + 1) % n];
      const std::pair<int, int> key{std::min(va, vb), std::max(va, vb)};
      auto it = edgeToFace.find(key);
      if (it == edgeToFace.end()) {
        Face f;
        f.a = mesh.vertices_[va];
        f.b = mesh.vertices_[vb];
        const Point d = f.b - f.a;
        f.measure = norm(d);
        f.unitNormal = f.measure > 0.0 ? Point{d.y / f.measure, -d.x / f.measure} : Point{0.0, 0.0};
        f.plusElement = static_cast<int>(k);
        f.localEdge[0] = i;
        edgeToFace.emplace(key, static_cast<int>(mesh.faces_.size()));
        e.faceIds[i] = static_cast<int>(mesh.faces_.size());
        mesh.faces_.push_back(f);
      } else {
        Face& f = mesh.faces_[it->second];
        if (f.minusElement != kBoundary || f.plusElement == static_cast<int>(k)) {
          mesh.nonManifold_.push_back({key.first, key.second});
          continue;
        }
        f.minusElement = static_cast<int>(k);
        f.localEdge[1] = i;
        e.faceIds[i] = it->second;
      }
    }
  }

  for (Face& f : mesh.faces_) {
    for (int s = 0; s < 2; ++s) {
      const int k = s == 0 ? f.plusElement : f.minusElement;
      if (k == kBoundary) continue;
      const Element& e = mesh.elements_[k];
      const int tri = e.edgeTriangle.empty() ? -1 : e.edgeTriangle[f.localEdge[s]];
      f.subsimplexAreas[s] = tri >= 0 ? triangleArea(e.triangulation[tri]) : 0.0;
    }
  }
  return mesh;
}

std::vector<Point> Mesh::elementPolygon(int k) const {
  const Element& e = elements_[k];
  std::vector<Point> poly;
  poly.reserve(e.vertexIds.size());
  for (int v : e.vertexIds) poly.push_back(vertices_[v]);
  return poly;
}

int Mesh::numInteriorFaces() const {
  return static_cast<int>(std::count_if(faces_.begin(), faces_.end(),
                                        [](const Face& f) { return !f.isBoundary(); }));
}

int Mesh::numBoundaryFaces() const { return numFaces() - numInteriorFaces(); }

std::vector<Diagnostic> fatalDiagnostics(const Mesh& mesh) {
  std::vector<Diagnostic> d = validate(mesh);
  std::erase_if(d, [](const Diagnostic& x) { return !x.fatal; });
  return d;
}

std::vector<Diagnostic> validate(const Mesh& mesh) {
  std::vector<Diagnostic> out;
  auto report = [&](std::string kind, int element, int face, std::string msg, bool fatal = true) {
    out.push_back({std::move(kind), element, face, std::move(msg), fatal});
  };

  const BoundingBox& dom = mesh.domain();
  const double domScale = std::max(dom.width(), dom.height());
  double areaSum = 0.0;

  for (int k = 0; k < mesh.numElements(); ++k) {
    const Element& e = mesh.element(k);
    const std::vector<Point> poly = mesh.elementPolygon(k);
    areaSum += e.area;
    const double scale = std::max(e.bbox.width(), e.bbox.height());
    const auto hits = selfIntersections(poly, kRelTol * scale);
    if (!hits.empty()) {
      report("self-intersection", k, -1,
             "edges " + std::to_string(hits[0][0]) + " and " + std::to_string(hits[0][1]) + " intersect");
    }
    if (!(e.area > 0.0)) {
      report("orientation", k, -1, "element area " + std::to_string(e.area) + " is not positive (clockwise?)");
      continue;
    }
    if (!hits.empty()) continue;
    if (e.facetClusterCount < 3) report("facet-count", k, -1, "m_K < 3");
    if (!strictlyInside(poly, e.starCenter, kRelTol * scale)) {
      report("star-center", k, -1, "star center not strictly inside the element");
    }
    if (!e.starShaped) {
      report("star-shapedness", k, -1, "no interior point sees every edge; sub-simplices come from ear clipping",
             false);
    } else {
      for (std::size_t i = 0; i < poly.size(); ++i) {
        if (orient(e.starCenter, poly[i], poly[(i + 1) % poly.size()]) <= 0.0) {
          report("star-shapedness", k, -1, "fan triangle on edge " + std::to_string(i) + " is not positive");
          break;
        }
      }
    }
    double triSum = 0.0;
    bool triOk = !e.triangulation.empty();
    for (const Triangle& t : e.triangulation) {
      const double a = 0.5 * orient(t[0], t[1], t[2]);
      triOk = triOk && a > 0.0;
      triSum += a;
    }
    if (!triOk || std::abs(triSum - e.area) > areaSumTolerance(e)) {
      report("subsimplex", k, -1, "sub-triangulation does not partition the element");
    }
    for (std::size_t i = 0; i < e.faceIds.size(); ++i) {
      if (e.faceIds[i] < 0) report("face-topology", k, -1, "edge " + std::to_string(i) + " has no face");
    }
  }
  if (std::abs(areaSum - dom.area()) > kRelTol * dom.area()) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "sum of element areas " << areaSum << " != domain area " << dom.area();
    report("partition", -1, -1, msg.str());
  }
  for (const auto& edge : mesh.nonManifoldEdges()) {
    report("face-topology", -1, -1,
           "edge (" + std::to_string(edge[0]) + "," + std::to_string(edge[1]) + ") used by more than two elements");
  }

  for (int fi = 0; fi < mesh.numFaces(); ++fi) {
    const Face& f = mesh.face(fi);
    if (!(f.measure > 0.0)) {
      report("face-measure", -1, fi, "face has zero length");
      continue;
    }
    if (std::abs(norm(f.unitNormal) - 1.0) > 1e-14) report("normal", -1, fi, "normal is not unit length");
    for (int s = 0; s < (f.isBoundary() ? 1 : 2); ++s) {
      if (!(f.subsimplexAreas[s] > 0.0)) report("subsimplex", -1, fi, "non-positive sub-simplex area");
    }
    if (f.isBoundary()) {
      const double tol = kRelTol * domScale;
      const bool onLeft = std::abs(f.a.x - dom.lo.x) <= tol && std::abs(f.b.x - dom.lo.x) <= tol;
      const bool onRight = std::abs(f.a.x - dom.hi.x) <= tol && std::abs(f.b.x - dom.hi.x) <= tol;
      const bool onBottom = std::abs(f.a.y - dom.lo.y) <= tol && std::abs(f.b.y - dom.lo.y) <= tol;
      const bool onTop = std::abs(f.a.y - dom.hi.y) <= tol && std::abs(f.b.y - dom.hi.y) <= tol;
      if (!(onLeft || onRight || onBottom || onTop)) {
        report("boundary-face", -1, fi, "boundary face not on the domain boundary");
      }
    } else {
      const Element& m = mesh.element(f.minusElement);
      const int i = f.localEdge[1];
      const Point a = mesh.vertices()[m.vertexIds[i]];
      const Point b = mesh.vertices()[m.vertexIds[(i + 1) % m.vertexIds.size()]];
      const Point d = b - a;
      const Point nMinus{d.y / norm(d), -d.x / norm(d)};
      if (std::abs(dot(nMinus, f.unitNormal) + 1.0) > 1e-12) {
        report("normal", f.minusElement, fi, "outward normals of the two sides are not antiparallel");
      }
    }
  }

  // Per-element sum of sub-simplex areas over its faces (fan elements only:
  // an ear-clipping triangle may host two faces).
  std::vector<double> subSum(mesh.numElements(), 0.0);
  for (const Face& f : mesh.faces()) {
    subSum[f.plusElement] += f.subsimplexAreas[0];
    if (!f.isBoundary()) subSum[f.minusElement] += f.subsimplexAreas[1];
  }
  for (int k = 0; k < mesh.numElements(); ++k) {
    const Element& e = mesh.element(k);
    if (e.starShaped && e.area > 0.0 && std::abs(subSum[k] - e.area) > areaSumTolerance(e)) {
      report("subsimplex", k, -1, "sub-simplex areas do not sum to the element area");
    }
  }
  return out;
}

}  // namespace ripdg
