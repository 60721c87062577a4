#include <stdexcept>

#include "ripdg/mesh.hpp"

namespace ripdg {

namespace {

void checkDomain(const BoundingBox& domain) {
  if (!(domain.width() > 0.0) || !(domain.height() > 0.0)) {
    throw std::invalid_argument("degenerate domain (zero width or height)");
  }
}

std::vector<Point> gridVertices(int n, const BoundingBox& domain) {
  std::vector<Point> v;
  v.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      // Pin the last coordinate to the domain edge so the tiling is exact.
      const double x = i == n ? domain.hi.x : domain.lo.x + domain.width() * i / n;
      const double y = j == n ? domain.hi.y : domain.lo.y + domain.height() * j / n;
      v.push_back({x, y});
    }
  }
  return v;
}

// Polyline of a tensor-mesh segment from `from` to `to`, excluding endpoints,
// displaced by a zero-mean triangular wave along `offsetDir`.
std::vector<Point> waveInterior(Point from, Point to, Point offsetDir, double amplitude, int teeth) {
  std::vector<Point> pts;
  for (int j = 0; j < teeth; ++j) {
    for (double frac : {0.25, 0.75}) {
      const double t = (j + frac) / teeth;
      const double off = frac < 0.5 ? amplitude : -amplitude;
      pts.push_back(from + t * (to - from) + off * offsetDir);
    }
  }
  return pts;
}

/// Nine-element tensor mesh; interior segments become waves when teeth > 0.
Mesh buildTensorNine(double l, int teeth) {
  if (!(l > 0.0 && l < 1.0)) throw std::invalid_argument("nine-element mesh: l must lie in (0,1)");
  const double b[4] = {-1.0, -1.0 + l, 1.0 - l, 1.0};
  const double amplitude = l / 6.0;

  std::vector<Point> vertices;
  auto grid = [](int i, int j) { return 4 * j + i; };
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) vertices.push_back({b[i], b[j]});

  // Interior polyline vertex ids of horizontal segment (i, j) on y = b[j] and
  // vertical segment (i, j) on x = b[i].
  std::vector<int> horiz[3][4];
  std::vector<int> vert[4][3];
  auto addWave = [&](Point from, Point to, Point dir) {
    std::vector<int> ids;
    if (teeth <= 0) return ids;
    for (const Point& p : waveInterior(from, to, dir, amplitude, teeth)) {
      ids.push_back(static_cast<int>(vertices.size()));
      vertices.push_back(p);
    }
    return ids;
  };
  // Segments of length l touch a corner element. Their half period (l/8 for
  // four teeth) is shorter than the amplitude, so next to the interior grid
  // vertex they must bend away from the corner element, or the two arms of
  // the corner element cross each other there. First offset is +dir, last
  // is -dir.
  auto phase = [](bool shortSegment, bool junctionAtEnd, double away) {
    if (!shortSegment) return 1.0;
    return junctionAtEnd ? -away : away;
  };
  for (int j = 1; j <= 2; ++j)
    for (int i = 0; i < 3; ++i) {
      const double s = phase(i != 1, i == 0, j == 1 ? 1.0 : -1.0);
      horiz[i][j] = addWave({b[i], b[j]}, {b[i + 1], b[j]}, {0.0, s});
    }
  for (int i = 1; i <= 2; ++i)
    for (int j = 0; j < 3; ++j) {
      const double s = phase(j != 1, j == 0, i == 1 ? 1.0 : -1.0);
      vert[i][j] = addWave({b[i], b[j]}, {b[i], b[j + 1]}, {s, 0.0});
    }

  std::vector<std::vector<int>> elements;
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) {
      std::vector<int> poly;
      poly.push_back(grid(i, j));
      poly.insert(poly.end(), horiz[i][j].begin(), horiz[i][j].end());
      poly.push_back(grid(i + 1, j));
      poly.insert(poly.end(), vert[i + 1][j].begin(), vert[i + 1][j].end());
      poly.push_back(grid(i + 1, j + 1));
      poly.insert(poly.end(), horiz[i][j + 1].rbegin(), horiz[i][j + 1].rend());
      poly.push_back(grid(i, j + 1));
      poly.insert(poly.end(), vert[i][j].rbegin(), vert[i][j].rend());
      elements.push_back(std::move(poly));
    }
  }
  return Mesh::fromPolygons(std::move(vertices), std::move(elements));
}

}  // namespace

Mesh buildUniformSquares(int n, const BoundingBox& domain) {
  if (n < 1) throw std::invalid_argument("buildUniformSquares: n must be >= 1");
  checkDomain(domain);
  std::vector<std::vector<int>> elements;
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
  return Mesh::fromPolygons(gridVertices(n, domain), std::move(elements));
}

Mesh buildUniformTriangles(int n, const BoundingBox& domain) {
  if (n < 1) throw std::invalid_argument("buildUniformTriangles: n must be >= 1");
  checkDomain(domain);
  std::vector<std::vector<int>> elements;
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      elements.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return Mesh::fromPolygons(gridVertices(n, domain), std::move(elements));
}

Mesh buildNineElement(double l) { return buildTensorNine(l, 0); }

Mesh buildZigzagNineElement(double l, int teeth) {
  if (teeth < 1) throw std::invalid_argument("buildZigzagNineElement: teeth must be >= 1");
  // Beyond four teeth the half period on the length-l segments drops below
  // the amplitude l/6 and the two waves bounding a corner element intersect.
  if (teeth > 4) throw std::invalid_argument("buildZigzagNineElement: teeth must be <= 4 for amplitude l/6");
  return buildTensorNine(l, teeth);
}

Mesh buildTwoQuads(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("buildTwoQuads: delta must lie in (0,1)");
  std::vector<Point> v{{0.0, 0.0}, {1.0 - delta, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0 - delta, 1.0}, {1.0, 1.0}};
  return Mesh::fromPolygons(std::move(v), {{0, 1, 4, 3}, {1, 2, 5, 4}});
}

Mesh buildCenterMergedGrid() {
  constexpr int n = 6;
  const std::vector<Point> all = gridVertices(n, {{-1.0, -1.0}, {1.0, 1.0}});
  auto id = [](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::vector<int>> elements;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if ((i == 2 || i == 3) && (j == 2 || j == 3)) {
        if (i == 2 && j == 2) {
          elements.push_back({id(2, 2), id(3, 2), id(4, 2), id(4, 3), id(4, 4), id(3, 4), id(2, 4), id(2, 3)});
        }
        continue;
      }
      elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  // Drop the now unused grid vertex at the centre.
  const int dropped = id(3, 3);
  std::vector<Point> vertices;
  for (int k = 0; k < static_cast<int>(all.size()); ++k)
    if (k != dropped) vertices.push_back(all[k]);
  for (auto& e : elements)
    for (int& v : e)
      if (v > dropped) --v;
  return Mesh::fromPolygons(std::move(vertices), std::move(elements));
}

}  // namespace ripdg
