#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace ldg {

using Point = Eigen::Vector2d;

enum class EdgeKind { interior, boundary };

/// A side of the triangulation.
///
/// For an interior edge `triangles[0]` is T+ (the lower triangle index) and
/// `normal` points from T+ into T-. For a boundary edge `triangles[1] == -1`
/// and `normal` is the outward normal. `vertices` is ordered counterclockwise
/// as seen from T+.
struct Edge {
  std::array<int, 2> vertices{};
  EdgeKind kind = EdgeKind::boundary;
  std::array<int, 2> triangles{-1, -1};
  /// Local side index inside each adjacent triangle (side i joins local
  /// vertices i and i+1 mod 3).
  std::array<int, 2> sides{-1, -1};
  Point normal = Point::Zero();
  double length = 0.0;

  bool is_boundary() const { return kind == EdgeKind::boundary; }
};

struct Mesh {
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<Edge> edges;
  /// Edge index of each local side of each triangle.
  std::vector<std::array<int, 3>> triangle_edges;
  double h = 0.0;
  int level = 0;
  /// child triangle -> parent triangle; empty on an unrefined mesh.
  std::vector<int> parent_map;

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_triangles() const { return triangles.size(); }
  std::size_t num_edges() const { return edges.size(); }
  std::size_t num_interior_edges() const;
  std::size_t num_boundary_edges() const;

  double signed_area(std::size_t t) const;
  double diameter(std::size_t t) const;
  /// Euler characteristic V - E + T.
  long euler_characteristic() const;
};

Mesh build_square_mesh(int n);

/// Ring-based polygonal annulus. `n_rings` counts vertex rings, so
/// `n_rings == 2` means a single layer of triangles between the circles.
Mesh build_annulus_mesh(double r_in, double r_out, int n_seg, int n_rings = 2);

/// Red refinement: every triangle is split at its edge midpoints into four
/// similar children. Child 3 is the middle triangle.
Mesh refine_uniform(const Mesh& m);

/// Rebuilds `edges`, `triangle_edges` and `h` from `triangles`.
/// Throws std::invalid_argument on a non-conforming triangulation.
void classify_edges(Mesh& m);

/// Mesh I/O in the plain-text "ldgmesh 1" format.
void write_mesh(std::ostream& os, const Mesh& m);
Mesh read_mesh(std::istream& is);
void write_mesh_file(const std::string& path, const Mesh& m);
Mesh read_mesh_file(const std::string& path);

}  // namespace ldg
