#include "ldg/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace ldg {

namespace {

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

void orient_ccw(const std::vector<Point>& v, std::array<int, 3>& t) {
  if (cross(v[t[1]] - v[t[0]], v[t[2]] - v[t[0]]) < 0.0) std::swap(t[1], t[2]);
}

}  // namespace

std::size_t Mesh::num_interior_edges() const {
  return static_cast<std::size_t>(
      std::count_if(edges.begin(), edges.end(), [](const Edge& e) { return !e.is_boundary(); }));
}

std::size_t Mesh::num_boundary_edges() const { return edges.size() - num_interior_edges(); }

double Mesh::signed_area(std::size_t t) const {
  const auto& tri = triangles[t];
  return 0.5 * cross(vertices[tri[1]] - vertices[tri[0]], vertices[tri[2]] - vertices[tri[0]]);
}

double Mesh::diameter(std::size_t t) const {
  const auto& tri = triangles[t];
  double d = 0.0;
  for (int i = 0; i < 3; ++i)
    d = std::max(d, (vertices[tri[(i + 1) % 3]] - vertices[tri[i]]).norm());
  return d;
}

long Mesh::euler_characteristic() const {
  return static_cast<long>(vertices.size()) - static_cast<long>(edges.size()) +
         static_cast<long>(triangles.size());
}

void classify_edges(Mesh& m) {
  m.edges.clear();
  m.triangle_edges.assign(m.triangles.size(), {-1, -1, -1});
  std::unordered_map<std::uint64_t, int> lookup;
  lookup.reserve(3 * m.triangles.size());

  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    const auto& tri = m.triangles[t];
    for (int i : tri) {
      if (i < 0 || static_cast<std::size_t>(i) >= m.vertices.size())
        throw std::invalid_argument("triangle " + std::to_string(t) + " references vertex " +
                                    std::to_string(i) + " out of range");
    }
    if (!(m.signed_area(t) > 0.0))
      throw std::invalid_argument("triangle " + std::to_string(t) + " is not counterclockwise");

    for (int s = 0; s < 3; ++s) {
      const int a = tri[s];
      const int b = tri[(s + 1) % 3];
      auto [it, inserted] = lookup.try_emplace(edge_key(a, b), static_cast<int>(m.edges.size()));
      if (inserted) {
        Edge e;
        e.vertices = {a, b};
        e.triangles = {static_cast<int>(t), -1};
        e.sides = {s, -1};
        const Point d = m.vertices[b] - m.vertices[a];
        e.length = d.norm();
        e.normal = Point(d.y(), -d.x()) / e.length;
        m.edges.push_back(e);
      } else {
        Edge& e = m.edges[it->second];
        if (e.triangles[1] != -1)
          throw std::invalid_argument("non-conforming mesh: side (" + std::to_string(a) + ", " +
                                      std::to_string(b) + ") shared by more than two triangles");
        e.triangles[1] = static_cast<int>(t);
        e.sides[1] = s;
        e.kind = EdgeKind::interior;
      }
      m.triangle_edges[t][s] = it->second;
    }
  }

  m.h = 0.0;
  for (std::size_t t = 0; t < m.triangles.size(); ++t) m.h = std::max(m.h, m.diameter(t));
}

Mesh build_square_mesh(int n) {
  if (n < 1) throw std::invalid_argument("build_square_mesh: n must be >= 1");
  Mesh m;
  m.vertices.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      m.vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);

  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  m.triangles.reserve(static_cast<std::size_t>(2 * n * n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      // lower-left to upper-right diagonal
      m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  classify_edges(m);
  return m;
}

Mesh build_annulus_mesh(double r_in, double r_out, int n_seg, int n_rings) {
  if (!(r_in > 0.0) || !(r_in < r_out))
    throw std::invalid_argument("build_annulus_mesh: need 0 < r_in < r_out");
  if (n_seg < 8) throw std::invalid_argument("build_annulus_mesh: n_seg must be >= 8");
  if (n_rings < 2) throw std::invalid_argument("build_annulus_mesh: n_rings must be >= 2");

  Mesh m;
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> offset(static_cast<std::size_t>(n_rings));
  for (int j = 0; j < n_rings; ++j) {
    const double r = j == n_rings - 1 ? r_out : r_in + j * (r_out - r_in) / (n_rings - 1);
    offset[j] = (j % 2) ? 0.5 : 0.0;
    for (int i = 0; i < n_seg; ++i) {
      const double phi = two_pi * (i + offset[j]) / n_seg;
      m.vertices.emplace_back(r * std::cos(phi), r * std::sin(phi));
    }
  }

  auto id = [n_seg](int ring, int i) { return ring * n_seg + ((i % n_seg) + n_seg) % n_seg; };
  for (int j = 0; j + 1 < n_rings; ++j) {
    for (int i = 0; i < n_seg; ++i) {
      const int a0 = id(j, i), a1 = id(j, i + 1);
      const int b0 = id(j + 1, i), b1 = id(j + 1, i + 1);
      std::array<int, 3> t1, t2;
      if (offset[j + 1] > offset[j]) {
        t1 = {a0, a1, b0};
        t2 = {a1, b1, b0};
      } else {
        t1 = {b0, b1, a0};
        t2 = {b1, a1, a0};
      }
      orient_ccw(m.vertices, t1);
      orient_ccw(m.vertices, t2);
      m.triangles.push_back(t1);
      m.triangles.push_back(t2);
    }
  }
  classify_edges(m);
  return m;
}

Mesh refine_uniform(const Mesh& m) {
  if (m.triangle_edges.size() != m.triangles.size())
    throw std::invalid_argument("refine_uniform: mesh edges are not classified");

  Mesh fine;
  fine.level = m.level + 1;
  fine.vertices = m.vertices;
  fine.vertices.reserve(m.vertices.size() + m.edges.size());
  std::vector<int> midpoint(m.edges.size());
  for (std::size_t e = 0; e < m.edges.size(); ++e) {
    const auto& ed = m.edges[e];
    midpoint[e] = static_cast<int>(fine.vertices.size());
    fine.vertices.push_back(0.5 * (m.vertices[ed.vertices[0]] + m.vertices[ed.vertices[1]]));
  }

  fine.triangles.reserve(4 * m.triangles.size());
  fine.parent_map.reserve(4 * m.triangles.size());
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    const auto& v = m.triangles[t];
    const auto& te = m.triangle_edges[t];
    const int m01 = midpoint[te[0]], m12 = midpoint[te[1]], m20 = midpoint[te[2]];
    fine.triangles.push_back({v[0], m01, m20});
    fine.triangles.push_back({m01, v[1], m12});
    fine.triangles.push_back({m20, m12, v[2]});
    fine.triangles.push_back({m01, m12, m20});
    for (int c = 0; c < 4; ++c) fine.parent_map.push_back(static_cast<int>(t));
  }
  classify_edges(fine);
  return fine;
}

namespace {

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& tok, int line) {
  double x = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw std::runtime_error("ldgmesh line " + std::to_string(line) + ": bad number '" + tok + "'");
  return x;
}

struct LineReader {
  std::istream& is;
  int line = 0;
  std::vector<std::string> next() {
    std::string s;
    while (std::getline(is, s)) {
      ++line;
      std::istringstream ss(s);
      std::vector<std::string> tok;
      for (std::string t; ss >> t;) tok.push_back(t);
      if (!tok.empty()) return tok;
    }
    throw std::runtime_error("ldgmesh: unexpected end of input after line " + std::to_string(line));
  }
};

std::size_t expect_count(LineReader& r, const char* keyword) {
  auto tok = r.next();
  if (tok.size() != 2 || tok[0] != keyword)
    throw std::runtime_error("ldgmesh line " + std::to_string(r.line) + ": expected '" + keyword +
                             " <count>'");
  return static_cast<std::size_t>(std::stoul(tok[1]));
}

}  // namespace

void write_mesh(std::ostream& os, const Mesh& m) {
  os << "ldgmesh 1\n";
  os << "vertices " << m.vertices.size() << '\n';
  for (const auto& p : m.vertices) os << format_double(p.x()) << ' ' << format_double(p.y()) << '\n';
  os << "triangles " << m.triangles.size() << '\n';
  for (const auto& t : m.triangles) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

Mesh read_mesh(std::istream& is) {
  LineReader r{is};
  auto header = r.next();
  if (header.size() != 2 || header[0] != "ldgmesh" || header[1] != "1")
    throw std::runtime_error("ldgmesh: missing 'ldgmesh 1' header");

  Mesh m;
  const std::size_t nv = expect_count(r, "vertices");
  m.vertices.reserve(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    auto tok = r.next();
    if (tok.size() != 2)
      throw std::runtime_error("ldgmesh line " + std::to_string(r.line) + ": expected 'x y'");
    m.vertices.emplace_back(parse_double(tok[0], r.line), parse_double(tok[1], r.line));
  }
  const std::size_t nt = expect_count(r, "triangles");
  m.triangles.reserve(nt);
  for (std::size_t i = 0; i < nt; ++i) {
    auto tok = r.next();
    if (tok.size() != 3)
      throw std::runtime_error("ldgmesh line " + std::to_string(r.line) + ": expected 'i j k'");
    m.triangles.push_back({std::stoi(tok[0]), std::stoi(tok[1]), std::stoi(tok[2])});
  }
  classify_edges(m);
  return m;
}

void write_mesh_file(const std::string& path, const Mesh& m) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_mesh(os, m);
  if (!os) throw std::runtime_error("write failed for '" + path + "'");
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  return read_mesh(is);
}

}  // namespace ldg
