#include "ripdg/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <utility>

namespace ripdg {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

LineRule computeGaussLegendre(int n) {
  LineRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(n, x).second;
    // Map [-1, 1] -> [0, 1] with ascending nodes.
    rule.nodes[n - 1 - i] = 0.5 * (x + 1.0);
    rule.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

template <class Rule, class Make>
const Rule& cached(std::map<int, std::unique_ptr<Rule>>& cache, std::shared_mutex& mutex, int key, Make make) {
  {
    std::shared_lock lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
  }
  auto rule = std::make_unique<Rule>(make(key));
  std::unique_lock lock(mutex);
  auto [it, inserted] = cache.emplace(key, std::move(rule));
  return *it->second;
}

}  // namespace

const LineRule& gaussLegendre(int numPoints) {
  if (numPoints < 1) throw std::invalid_argument("gaussLegendre: need at least one point");
  static std::map<int, std::unique_ptr<LineRule>> cache;
  static std::shared_mutex mutex;
  return cached(cache, mutex, numPoints, computeGaussLegendre);
}

const LineRule& segmentRule(int exactDegree) {
  if (exactDegree < 0) throw std::invalid_argument("segmentRule: negative degree");
  return gaussLegendre(exactDegree / 2 + 1);
}

const QuadRule& unitTriangleRule(int exactDegree) {
  if (exactDegree < 0) throw std::invalid_argument("unitTriangleRule: negative degree");
  static std::map<int, std::unique_ptr<QuadRule>> cache;
  static std::shared_mutex mutex;
  return cached(cache, mutex, exactDegree, [](int q) {
    // x = s, y = (1 - s) t; the Jacobian (1 - s) raises the degree in s by one.
    const LineRule& rs = gaussLegendre((q + 1) / 2 + 1);
    const LineRule& rt = gaussLegendre(q / 2 + 1);
    QuadRule rule;
    for (std::size_t i = 0; i < rs.nodes.size(); ++i) {
      const double s = rs.nodes[i];
      for (std::size_t j = 0; j < rt.nodes.size(); ++j) {
        rule.nodes.push_back({s, (1.0 - s) * rt.nodes[j]});
        rule.weights.push_back(rs.weights[i] * rt.weights[j] * (1.0 - s));
      }
    }
    return rule;
  });
}

QuadRule triangleRule(const Triangle& t, int exactDegree) {
  const QuadRule& ref = unitTriangleRule(exactDegree);
  const Point e1 = t[1] - t[0];
  const Point e2 = t[2] - t[0];
  const double jac = std::abs(cross(e1, e2));
  QuadRule rule;
  rule.nodes.reserve(ref.size());
  rule.weights.reserve(ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    rule.nodes.push_back(t[0] + ref.nodes[i].x * e1 + ref.nodes[i].y * e2);
    rule.weights.push_back(ref.weights[i] * jac);
  }
  return rule;
}

QuadRule boxRule(const BoundingBox& box, int exactDegree) {
  const LineRule& r = segmentRule(exactDegree);
  QuadRule rule;
  const double w = box.width();
  const double h = box.height();
  for (std::size_t j = 0; j < r.nodes.size(); ++j) {
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      rule.nodes.push_back({box.lo.x + w * r.nodes[i], box.lo.y + h * r.nodes[j]});
      rule.weights.push_back(w * h * r.weights[i] * r.weights[j]);
    }
  }
  return rule;
}

QuadRule elementRule(const Mesh& mesh, int k, int exactDegree) {
  const Element& e = mesh.element(k);
  if (e.kind == ElementKind::Box) return boxRule(e.bbox, exactDegree);
  if (e.vertexIds.size() == 3) {
    const auto& v = mesh.vertices();
    return triangleRule({v[e.vertexIds[0]], v[e.vertexIds[1]], v[e.vertexIds[2]]}, exactDegree);
  }
  if (e.triangulation.empty()) {
    throw std::runtime_error("elementRule: element " + std::to_string(k) + " has no valid sub-triangulation");
  }
  QuadRule rule;
  for (const Triangle& t : e.triangulation) {
    QuadRule part = triangleRule(t, exactDegree);
    rule.nodes.insert(rule.nodes.end(), part.nodes.begin(), part.nodes.end());
    rule.weights.insert(rule.weights.end(), part.weights.begin(), part.weights.end());
  }
  return rule;
}

QuadRule faceRule(const Face& face, int exactDegree) {
  const LineRule& r = segmentRule(exactDegree);
  QuadRule rule;
  rule.nodes.reserve(r.nodes.size());
  rule.weights.reserve(r.nodes.size());
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    rule.nodes.push_back(face.a + r.nodes[i] * (face.b - face.a));
    rule.weights.push_back(r.weights[i] * face.measure);
  }
  return rule;
}

}  // namespace ripdg
