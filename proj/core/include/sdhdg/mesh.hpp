#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sdhdg {

// Two-subdomain unit square: viscous flow region on top (x2 > 1/2),
// porous region below (x2 < 1/2), coupled across the line x2 = 1/2.
enum class Region : std::uint8_t { Stokes = 0, Darcy = 1 };

enum class FaceClass : std::uint8_t {
  InteriorS = 0,  // interior to the top region
  InteriorD = 1,  // interior to the bottom region
  Interface = 2,  // on x2 = 1/2, one cell on each side
  GammaS = 3,     // outer boundary of the top region
  GammaD = 4,     // outer boundary of the bottom region
};

struct Face {
  std::array<int, 2> v{-1, -1};     // vertex ids, v[0] < v[1]; face parameter runs v[0] -> v[1]
  std::array<int, 2> cell{-1, -1};  // adjacent cells; for Interface faces cell[0] is the Stokes cell
  FaceClass cls = FaceClass::InteriorS;
};

struct Mesh2D {
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 3>> cells;  // counterclockwise vertex triples
  std::vector<Region> cell_region;
  std::vector<Face> faces;
  std::vector<std::array<int, 3>> cell_faces;  // local face i sits opposite local vertex i
  std::vector<double> h_cell;                  // cell diameter (longest edge)
  int n = 0;                                   // cells-per-side of the generating grid
  double h_max = 0.0;

  int num_cells() const { return static_cast<int>(cells.size()); }
  int num_faces() const { return static_cast<int>(faces.size()); }
  int num_vertices() const { return static_cast<int>(vertices.size()); }

  bool face_on_region(int face, Region r) const;  // face lies in the closure of region r
  double face_length(int face) const;
  Eigen::Vector2d face_midpoint(int face) const;
  // Unit normal of `face` pointing out of `cell` (cell must be adjacent).
  Eigen::Vector2d outward_normal(int face, int cell) const;

  int count_faces(FaceClass cls) const;
  int count_cells(Region r) const;
};

// Structured triangulation of [0,1]^2 with 2*n^2 congruent-split cells; n must be
// even and >= 2 so the interface line x2 = 1/2 is a mesh line. Optional seeded
// vertex perturbation of up to `perturb * h` moves interior vertices freely and
// interface vertices along the interface line; boundary vertices stay put.
Mesh2D build_structured_mesh(int n, double perturb = 0.0, std::uint64_t seed = 0);

// Recomputes face adjacency and classes from vertices/cells/cell_region.
void classify_faces(Mesh2D& mesh);

// Consistency checks (Euler relation, orientation, region geometry). Throws on failure.
void validate_mesh(const Mesh2D& mesh);

std::string mesh_to_json(const Mesh2D& mesh);
Mesh2D mesh_from_json(const std::string& text);
void save_mesh(const Mesh2D& mesh, const std::string& path);
Mesh2D load_mesh(const std::string& path);

}  // namespace sdhdg
