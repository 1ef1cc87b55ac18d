#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <set>

#include "sdhdg/mesh.hpp"

using namespace sdhdg;

namespace {

double cell_area(const Mesh2D& mesh, int c) {
  const auto& t = mesh.cells[c];
  const Eigen::Vector2d a = mesh.vertices[t[0]], b = mesh.vertices[t[1]],
                        d = mesh.vertices[t[2]];
  return 0.5 * ((b - a).x() * (d - a).y() - (b - a).y() * (d - a).x());
}

}  // namespace

TEST_CASE("structured mesh counts") {
  const Mesh2D m2 = build_structured_mesh(2);
  CHECK_EQ(m2.num_cells(), 8);
  CHECK_EQ(m2.num_vertices(), 9);
  CHECK_EQ(m2.count_cells(Region::Stokes), 4);
  CHECK_EQ(m2.count_cells(Region::Darcy), 4);
  CHECK_EQ(m2.count_faces(FaceClass::Interface), 2);

  const Mesh2D m4 = build_structured_mesh(4);
  CHECK_EQ(m4.num_cells(), 32);
  CHECK_EQ(m4.num_vertices(), 25);
  CHECK_EQ(m4.num_faces(), 56);
  CHECK_EQ(m4.count_faces(FaceClass::Interface), 4);
  CHECK_EQ(m4.count_faces(FaceClass::GammaS), 8);
  CHECK_EQ(m4.count_faces(FaceClass::GammaD), 8);
  CHECK_EQ(m4.count_faces(FaceClass::InteriorS), 18);
  CHECK_EQ(m4.count_faces(FaceClass::InteriorD), 18);

  // Euler relation for a planar triangulation of a disk-like domain
  CHECK_EQ(m4.num_vertices() - m4.num_faces() + m4.num_cells(), 1);
}

TEST_CASE("geometry invariants") {
  for (int n : {2, 4, 6}) {
    const Mesh2D mesh = build_structured_mesh(n);
    double area = 0.0;
    for (int c = 0; c < mesh.num_cells(); ++c) {
      const double a = cell_area(mesh, c);
      CHECK(a > 0.0);  // counterclockwise
      area += a;

      // longest edge is the recorded diameter
      double longest = 0.0;
      for (int i = 0; i < 3; ++i) {
        const Eigen::Vector2d d = mesh.vertices[mesh.cells[c][(i + 1) % 3]] -
                                  mesh.vertices[mesh.cells[c][i]];
        longest = std::max(longest, d.norm());
      }
      CHECK(mesh.h_cell[c] == doctest::Approx(longest).epsilon(1e-14));

      // closed boundary: sum of length-weighted outward normals vanishes
      Eigen::Vector2d flux = Eigen::Vector2d::Zero();
      for (int f = 0; f < 3; ++f) {
        const int face = mesh.cell_faces[c][f];
        flux += mesh.face_length(face) * mesh.outward_normal(face, c);
      }
      CHECK(flux.norm() <= 1e-12);
    }
    CHECK(area == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mesh.h_max == doctest::Approx(std::sqrt(2.0) / n).epsilon(1e-14));
  }
}

TEST_CASE("face classification") {
  const Mesh2D mesh = build_structured_mesh(4);
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& fc = mesh.faces[f];
    CHECK(fc.v[0] < fc.v[1]);
    const double y0 = mesh.vertices[fc.v[0]].y(), y1 = mesh.vertices[fc.v[1]].y();
    switch (fc.cls) {
      case FaceClass::Interface:
        CHECK(y0 == doctest::Approx(0.5));
        CHECK(y1 == doctest::Approx(0.5));
        CHECK(mesh.cell_region[fc.cell[0]] == Region::Stokes);
        CHECK(mesh.cell_region[fc.cell[1]] == Region::Darcy);
        break;
      case FaceClass::InteriorS:
        CHECK(mesh.cell_region[fc.cell[0]] == Region::Stokes);
        CHECK(mesh.cell_region[fc.cell[1]] == Region::Stokes);
        break;
      case FaceClass::InteriorD:
        CHECK(mesh.cell_region[fc.cell[0]] == Region::Darcy);
        CHECK(mesh.cell_region[fc.cell[1]] == Region::Darcy);
        break;
      case FaceClass::GammaS:
      case FaceClass::GammaD:
        CHECK(fc.cell[1] == -1);
        break;
    }
    if (fc.cell[1] >= 0) {
      const Eigen::Vector2d n0 = mesh.outward_normal(f, fc.cell[0]);
      const Eigen::Vector2d n1 = mesh.outward_normal(f, fc.cell[1]);
      CHECK((n0 + n1).norm() <= 1e-14);
      CHECK(n0.norm() == doctest::Approx(1.0).epsilon(1e-14));
    }
  }

  // closure memberships: an interface face belongs to both regions
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const FaceClass cls = mesh.faces[f].cls;
    const bool in_s = cls == FaceClass::InteriorS || cls == FaceClass::GammaS ||
                      cls == FaceClass::Interface;
    const bool in_d = cls == FaceClass::InteriorD || cls == FaceClass::GammaD ||
                      cls == FaceClass::Interface;
    CHECK_EQ(mesh.face_on_region(f, Region::Stokes), in_s);
    CHECK_EQ(mesh.face_on_region(f, Region::Darcy), in_d);
  }
}

TEST_CASE("cell face adjacency") {
  const Mesh2D mesh = build_structured_mesh(4);
  for (int c = 0; c < mesh.num_cells(); ++c)
    for (int f = 0; f < 3; ++f) {
      const Face& fc = mesh.faces[mesh.cell_faces[c][f]];
      CHECK((fc.cell[0] == c || fc.cell[1] == c));
      // local face f is opposite local vertex f
      const int opp = mesh.cells[c][f];
      CHECK(fc.v[0] != opp);
      CHECK(fc.v[1] != opp);
    }
}

TEST_CASE("invalid sizes are rejected") {
  CHECK_THROWS(build_structured_mesh(0));
  CHECK_THROWS(build_structured_mesh(3));
  CHECK_THROWS(build_structured_mesh(-2));
}

TEST_CASE("perturbed mesh stays valid") {
  const Mesh2D mesh = build_structured_mesh(8, 0.2, 42);
  validate_mesh(mesh);
  for (const auto& v : mesh.vertices) {
    CHECK(v.x() >= -1e-14);
    CHECK(v.x() <= 1.0 + 1e-14);
    CHECK(v.y() >= -1e-14);
    CHECK(v.y() <= 1.0 + 1e-14);
  }
  // the coupling line is preserved exactly
  for (const Face& fc : mesh.faces)
    if (fc.cls == FaceClass::Interface) {
      CHECK(mesh.vertices[fc.v[0]].y() == doctest::Approx(0.5).epsilon(1e-14));
      CHECK(mesh.vertices[fc.v[1]].y() == doctest::Approx(0.5).epsilon(1e-14));
    }

  // same seed reproduces the same mesh, different seed does not
  const Mesh2D same = build_structured_mesh(8, 0.2, 42);
  const Mesh2D other = build_structured_mesh(8, 0.2, 43);
  double dsame = 0.0, dother = 0.0;
  for (int i = 0; i < mesh.num_vertices(); ++i) {
    dsame += (mesh.vertices[i] - same.vertices[i]).norm();
    dother += (mesh.vertices[i] - other.vertices[i]).norm();
  }
  CHECK_EQ(dsame, 0.0);
  CHECK(dother > 0.0);
}

TEST_CASE("save and load round trip") {
  const Mesh2D mesh = build_structured_mesh(4, 0.1, 7);
  const std::string path = "mesh_roundtrip.json";
  save_mesh(mesh, path);
  const Mesh2D back = load_mesh(path);
  std::remove(path.c_str());

  REQUIRE_EQ(back.num_vertices(), mesh.num_vertices());
  REQUIRE_EQ(back.num_cells(), mesh.num_cells());
  REQUIRE_EQ(back.num_faces(), mesh.num_faces());
  for (int i = 0; i < mesh.num_vertices(); ++i)
    CHECK((back.vertices[i] - mesh.vertices[i]).norm() <= 1e-15);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    CHECK(back.cells[c] == mesh.cells[c]);
    CHECK(back.cell_region[c] == mesh.cell_region[c]);
  }
  for (int f = 0; f < mesh.num_faces(); ++f) {
    CHECK(back.faces[f].v == mesh.faces[f].v);
    CHECK(back.faces[f].cell == mesh.faces[f].cell);
    CHECK(back.faces[f].cls == mesh.faces[f].cls);
  }
  validate_mesh(back);
}
