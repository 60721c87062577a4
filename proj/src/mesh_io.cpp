#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ripdg/mesh.hpp"

namespace ripdg {

namespace {

std::string formatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void writeMesh(std::ostream& os, const Mesh& mesh) {
  os << "DGMESH 1\n";
  os << "V " << mesh.vertices().size() << '\n';
  for (const Point& p : mesh.vertices()) os << formatDouble(p.x) << ' ' << formatDouble(p.y) << '\n';
  os << "E " << mesh.numElements() << '\n';
  for (const Element& e : mesh.elements()) {
    os << e.vertexIds.size();
    for (int v : e.vertexIds) os << ' ' << v;
    os << '\n';
  }
}

Mesh readMesh(std::istream& is) {
  std::string tag;
  int version = 0;
  if (!(is >> tag >> version) || tag != "DGMESH" || version != 1) {
    throw std::runtime_error("readMesh: missing 'DGMESH 1' header");
  }
  std::size_t nv = 0;
  if (!(is >> tag >> nv) || tag != "V") throw std::runtime_error("readMesh: expected 'V <n>'");
  std::vector<Point> vertices(nv);
  for (Point& p : vertices) {
    if (!(is >> p.x >> p.y)) throw std::runtime_error("readMesh: truncated vertex block");
  }
  std::size_t ne = 0;
  if (!(is >> tag >> ne) || tag != "E") throw std::runtime_error("readMesh: expected 'E <m>'");
  std::vector<std::vector<int>> elements(ne);
  for (auto& e : elements) {
    std::size_t k = 0;
    if (!(is >> k)) throw std::runtime_error("readMesh: truncated element block");
    e.resize(k);
    for (int& v : e) {
      if (!(is >> v)) throw std::runtime_error("readMesh: truncated element block");
    }
  }
  return Mesh::fromPolygons(std::move(vertices), std::move(elements));
}

std::string serializeMesh(const Mesh& mesh) {
  std::ostringstream os;
  writeMesh(os, mesh);
  return os.str();
}

std::uint64_t meshChecksum(const Mesh& mesh) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : serializeMesh(mesh)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace ripdg
