#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

#include "ripdg/mesh.hpp"

namespace ripdg {

namespace {

std::vector<int> growRegions(const Mesh& fine, int targetCount, std::uint64_t seed) {
  const int n = fine.numElements();
  std::mt19937_64 rng(seed);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int i = 0; i < targetCount; ++i) {
    const int j = i + static_cast<int>(rng() % static_cast<std::uint64_t>(n - i));
    std::swap(order[i], order[j]);
  }

  std::vector<int> region(n, -1);
  std::vector<std::deque<int>> frontier(targetCount);
  for (int r = 0; r < targetCount; ++r) {
    region[order[r]] = r;
    frontier[r].push_back(order[r]);
  }
  bool active = true;
  while (active) {
    active = false;
    for (int r = 0; r < targetCount; ++r) {
      if (frontier[r].empty()) continue;
      active = true;
      const int k = frontier[r].front();
      frontier[r].pop_front();
      for (int f : fine.element(k).faceIds) {
        const Face& face = fine.face(f);
        if (face.isBoundary()) continue;
        const int nb = face.plusElement == k ? face.minusElement : face.plusElement;
        if (region[nb] < 0) {
          region[nb] = r;
          frontier[r].push_back(nb);
        }
      }
    }
  }
  if (std::find(region.begin(), region.end(), -1) != region.end()) {
    throw std::runtime_error("agglomerate: fine mesh dual graph is disconnected");
  }
  return region;
}

/// Boundary loop of one region as fine vertex ids, or nullopt when the region
/// boundary is not a single simple loop (pinch vertex or hole).
std::optional<std::vector<int>> regionLoop(const Mesh& fine, const std::vector<int>& region, int r) {
  std::map<int, int> next;  // directed boundary edges, counter-clockwise
  std::size_t edgeCount = 0;
  for (int k = 0; k < fine.numElements(); ++k) {
    if (region[k] != r) continue;
    const Element& e = fine.element(k);
    const int m = static_cast<int>(e.vertexIds.size());
    for (int i = 0; i < m; ++i) {
      const Face& face = fine.face(e.faceIds[i]);
      const int other = face.plusElement == k ? face.minusElement : face.plusElement;
      if (other != kBoundary && region[other] == r) continue;
      const int a = e.vertexIds[i];
      if (!next.emplace(a, e.vertexIds[(i + 1) % m]).second) return std::nullopt;
      ++edgeCount;
    }
  }
  if (next.empty()) return std::nullopt;
  std::vector<int> loop;
  const int start = next.begin()->first;  // smallest vertex id
  int v = start;
  do {
    loop.push_back(v);
    auto it = next.find(v);
    if (it == next.end() || loop.size() > edgeCount) return std::nullopt;
    v = it->second;
  } while (v != start);
  if (loop.size() != edgeCount) return std::nullopt;
  return loop;
}

}  // namespace

Mesh agglomerate(const Mesh& fine, int targetCount, std::uint64_t seed) {
  const int n = fine.numElements();
  if (targetCount < 1 || targetCount > n) {
    throw std::invalid_argument("agglomerate: targetCount must lie in [1, #elements]");
  }
  for (const Element& e : fine.elements()) {
    if (e.vertexIds.size() != 3) throw std::invalid_argument("agglomerate: fine mesh must be a triangulation");
  }

  constexpr int kMaxAttempts = 64;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const std::vector<int> region = growRegions(fine, targetCount, seed + static_cast<std::uint64_t>(attempt));

    // Number regions by their smallest fine element so that the identity
    // agglomeration reproduces the input order.
    std::vector<int> firstElement(targetCount, n);
    for (int k = 0; k < n; ++k) firstElement[region[k]] = std::min(firstElement[region[k]], k);
    std::vector<int> byFirst(targetCount);
    std::iota(byFirst.begin(), byFirst.end(), 0);
    std::sort(byFirst.begin(), byFirst.end(), [&](int a, int b) { return firstElement[a] < firstElement[b]; });

    std::vector<std::vector<int>> loops;
    bool ok = true;
    for (int r : byFirst) {
      auto loop = regionLoop(fine, region, r);
      if (!loop) {
        ok = false;
        break;
      }
      loops.push_back(std::move(*loop));
    }
    if (!ok) continue;

    std::vector<int> remap(fine.vertices().size(), -1);
    for (const auto& loop : loops)
      for (int v : loop) remap[v] = 0;
    std::vector<Point> vertices;
    for (std::size_t v = 0; v < remap.size(); ++v) {
      if (remap[v] < 0) continue;
      remap[v] = static_cast<int>(vertices.size());
      vertices.push_back(fine.vertices()[v]);
    }
    for (auto& loop : loops)
      for (int& v : loop) v = remap[v];
    return Mesh::fromPolygons(std::move(vertices), std::move(loops));
  }
  throw std::runtime_error("agglomerate: no admissible partition after " + std::to_string(kMaxAttempts) +
                           " seeds (every attempt produced a region with a hole or pinch vertex)");
}

}  // namespace ripdg
