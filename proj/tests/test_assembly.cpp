#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sdhdg/assembly.hpp"
#include "sdhdg/manufactured.hpp"
#include "sdhdg/mesh.hpp"

using namespace sdhdg;

namespace {

// closure face counts derived from the face classification alone
struct FaceCounts {
  int stokes_closure, darcy_closure, gamma_s;
};

FaceCounts closure_counts(const Mesh2D& mesh) {
  FaceCounts c{};
  c.stokes_closure = mesh.count_faces(FaceClass::InteriorS) +
                     mesh.count_faces(FaceClass::GammaS) +
                     mesh.count_faces(FaceClass::Interface);
  c.darcy_closure = mesh.count_faces(FaceClass::InteriorD) +
                    mesh.count_faces(FaceClass::GammaD) +
                    mesh.count_faces(FaceClass::Interface);
  c.gamma_s = mesh.count_faces(FaceClass::GammaS);
  return c;
}

}  // namespace

TEST_CASE("dof counts follow the mesh topology") {
  for (int n : {2, 4}) {
    for (int k : {1, 2}) {
      const Mesh2D mesh = build_structured_mesh(n);
      const DofMap dofs = build_dofmap(mesh, k);
      const int nvel = (k + 1) * (k + 2) / 2, npres = k * (k + 1) / 2, m = k + 1;
      CHECK_EQ(dofs.nvel, nvel);
      CHECK_EQ(dofs.npres, npres);
      CHECK_EQ(dofs.nface, m);
      CHECK_EQ(dofs.cell_size(), 2 * nvel + npres);
      CHECK_EQ(dofs.total_cell_dofs, mesh.num_cells() * (2 * nvel + npres));

      const FaceCounts fc = closure_counts(mesh);
      CHECK_EQ(dofs.pbar_s_count, fc.stokes_closure * m);
      CHECK_EQ(dofs.pbar_d_count, fc.darcy_closure * m);
      CHECK_EQ(dofs.ubar_free, (fc.stokes_closure - fc.gamma_s) * 2 * m);
      CHECK_EQ(dofs.num_free(),
               dofs.total_cell_dofs + dofs.ubar_free + dofs.pbar_s_count +
                   dofs.pbar_d_count);
    }
  }

  // the smallest mesh at lowest order, spelled out
  const DofMap d21 = build_dofmap(build_structured_mesh(2), 1);
  CHECK_EQ(d21.total_cell_dofs, 56);
  CHECK_EQ(d21.ubar_free, 20);
  CHECK_EQ(d21.pbar_s_count, 18);
  CHECK_EQ(d21.pbar_d_count, 18);
  CHECK_EQ(d21.num_free(), 112);
}

TEST_CASE("face dof presence follows the face class") {
  const Mesh2D mesh = build_structured_mesh(4);
  const DofMap dofs = build_dofmap(mesh, 2);
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const FaceClass cls = mesh.faces[f].cls;
    const bool has_ubar = dofs.ubar_offset[f] >= 0;
    const bool has_ps = dofs.pbar_s_offset[f] >= 0;
    const bool has_pd = dofs.pbar_d_offset[f] >= 0;
    switch (cls) {
      case FaceClass::Interface:
        CHECK(has_ubar);
        CHECK(has_ps);
        CHECK(has_pd);
        break;
      case FaceClass::InteriorS:
        CHECK(has_ubar);
        CHECK(has_ps);
        CHECK_FALSE(has_pd);
        break;
      case FaceClass::GammaS:
        CHECK(has_ubar);  // present but constrained to the wall value
        CHECK(has_ps);
        CHECK_FALSE(has_pd);
        break;
      case FaceClass::InteriorD:
      case FaceClass::GammaD:
        CHECK_FALSE(has_ubar);
        CHECK_FALSE(has_ps);
        CHECK(has_pd);
        break;
    }
    if (cls == FaceClass::GammaS)
      for (int j = 0; j < 2 * dofs.nface; ++j)
        CHECK(dofs.constrained[dofs.ubar_offset[f] + j]);
    if (cls == FaceClass::Interface)
      for (int j = 0; j < 2 * dofs.nface; ++j)
        CHECK_FALSE(dofs.constrained[dofs.ubar_offset[f] + j]);
  }
}

TEST_CASE("assembled system is symmetric with the pressure kernel") {
  const Mesh2D mesh = build_structured_mesh(2);
  const FormsContext ctx(2);
  PhysicalParams params;
  params.k = 2;
  const ManufacturedCase mc = make_smooth_case(params);
  const DofMap dofs = build_dofmap(mesh, 2);
  const BlockSystem sys = assemble_system(mesh, ctx, params, mc.data, dofs);

  REQUIRE_EQ(sys.A.rows(), dofs.num_free());
  const Eigen::MatrixXd A = Eigen::MatrixXd(sys.A);
  const double scale = A.cwiseAbs().maxCoeff();
  CHECK((A - A.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale);
  CHECK((A * sys.nullspace).cwiseAbs().maxCoeff() <= 1e-10 * scale);

  // cell-cell coupling lives inside the per-cell diagonal blocks only
  for (size_t c = 0; c + 1 < sys.slices.size(); ++c) {
    const CellSlice& a = sys.slices[c];
    const CellSlice& b = sys.slices[c + 1];
    CHECK_EQ(a.offset + a.size, b.offset);
    CHECK(A.block(a.offset, b.offset, a.size, b.size).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK_EQ(sys.ncell, dofs.total_cell_dofs);
}

TEST_CASE("compatibility flags inconsistent bottom-region data") {
  const Mesh2D mesh = build_structured_mesh(4);
  const FormsContext ctx(2);
  PhysicalParams params;
  params.k = 2;
  const DofMap dofs = build_dofmap(mesh, 2);

  const ManufacturedCase mc = make_smooth_case(params);
  const BlockSystem good = assemble_system(mesh, ctx, params, mc.data, dofs);
  CHECK(compatibility_residual(good) <= 1e-10);

  ProblemData empty;
  const BlockSystem zero = assemble_system(mesh, ctx, params, empty, dofs);
  CHECK(zero.rhs.cwiseAbs().maxCoeff() == 0.0);
  CHECK(compatibility_residual(zero) == 0.0);

  // a net source with sealed walls has no discrete solution
  ProblemData bad;
  bad.f_d = [](const Eigen::Vector2d&) { return 1.0; };
  const BlockSystem sys = assemble_system(mesh, ctx, params, bad, dofs);
  CHECK(compatibility_residual(sys) > 1e-3);
}

TEST_CASE("weighted norm matrix splits into definite blocks") {
  const Mesh2D mesh = build_structured_mesh(2);
  const FormsContext ctx(1);
  PhysicalParams params;
  params.k = 1;
  params.mu = 0.3;
  params.kappa = 2.5;
  params.alpha = 0.9;
  const DofMap dofs = build_dofmap(mesh, 1);

  const Eigen::SparseMatrix<double> N = assemble_norm_matrix(mesh, ctx, params, dofs);
  const NormParts parts = assemble_norm_parts(mesh, ctx, params, dofs);
  const Eigen::MatrixXd sum = Eigen::MatrixXd(parts.vel_s) + Eigen::MatrixXd(parts.vel_d) +
                              Eigen::MatrixXd(parts.vel_iface) +
                              Eigen::MatrixXd(parts.pres_s) +
                              Eigen::MatrixXd(parts.pres_d) +
                              Eigen::MatrixXd(parts.pres_iface);
  CHECK((Eigen::MatrixXd(N) - sum).cwiseAbs().maxCoeff() <=
        1e-12 * Eigen::MatrixXd(N).cwiseAbs().maxCoeff());

  const Eigen::LLT<Eigen::MatrixXd> llt{Eigen::MatrixXd(N)};
  CHECK(llt.info() == Eigen::Success);

  // no coupling between the velocity family and the pressure family
  std::vector<int> vel, pres;
  split_velocity_pressure(mesh, dofs, vel, pres);
  CHECK_EQ(static_cast<int>(vel.size() + pres.size()), dofs.num_free());
  const Eigen::MatrixXd Nd(N);
  double cross = 0.0;
  for (int i : vel)
    for (int j : pres) cross = std::max(cross, std::abs(Nd(i, j)));
  CHECK_EQ(cross, 0.0);
}

TEST_CASE("global trace roughness annihilates constant traces") {
  const Mesh2D mesh = build_structured_mesh(4);
  const FormsContext ctx(2);
  const DofMap dofs = build_dofmap(mesh, 2);
  const Eigen::SparseMatrix<double> F = assemble_facet_seminorm(mesh, ctx, dofs);
  REQUIRE_EQ(F.rows(), dofs.ubar_free);

  Eigen::VectorXd ones = Eigen::VectorXd::Zero(dofs.ubar_free);
  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (dofs.ubar_offset[f] < 0 || dofs.constrained[dofs.ubar_offset[f]]) continue;
    const Eigen::VectorXd tr = project_face_scalar(
        mesh, ctx, f, [](const Eigen::Vector2d&) { return 1.0; });
    const int pos = dofs.facet_position(dofs.ubar_offset[f]);
    ones.segment(pos, dofs.nface) = tr;                  // x component
    ones.segment(pos + dofs.nface, dofs.nface) = 2.0 * tr;  // y component
  }
  // cells bordering the constrained outer boundary see a zero trace there, so
  // their boundary trace is not constant; the annihilation claim holds on
  // every face whose adjacent top-region cells are fully free
  std::vector<bool> all_free(mesh.num_cells(), true);
  for (int c = 0; c < mesh.num_cells(); ++c)
    for (int fid : cell_geometry(mesh, c).face_ids)
      if (dofs.ubar_offset[fid] >= 0 && dofs.constrained[dofs.ubar_offset[fid]])
        all_free[c] = false;
  const Eigen::VectorXd r = F * ones;
  int checked = 0;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (dofs.ubar_offset[f] < 0 || dofs.constrained[dofs.ubar_offset[f]]) continue;
    bool interior = true;
    for (int c : mesh.faces[f].cell)
      if (c >= 0 && mesh.cell_region[c] == Region::Stokes && !all_free[c])
        interior = false;
    if (!interior) continue;
    const int pos = dofs.facet_position(dofs.ubar_offset[f]);
    CHECK(r.segment(pos, 2 * dofs.nface).cwiseAbs().maxCoeff() <= 1e-12);
    ++checked;
  }
  CHECK(checked > 0);
  CHECK(r.cwiseAbs().maxCoeff() > 1e-3);  // the boundary cells genuinely couple

  // positive semidefinite
  const Eigen::VectorXd ev =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Eigen::MatrixXd(F))
          .eigenvalues();
  CHECK(ev.minCoeff() >= -1e-12);
}

TEST_CASE("matrix dump round trips through the coordinate format") {
  const Mesh2D mesh = build_structured_mesh(2);
  const FormsContext ctx(1);
  PhysicalParams params;
  params.k = 1;
  const DofMap dofs = build_dofmap(mesh, 1);
  const Eigen::SparseMatrix<double> N = assemble_norm_matrix(mesh, ctx, params, dofs);
  const std::string path = "norm_dump.mtx";
  write_matrix_market(N, path);

  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("%%MatrixMarket", 0) == 0);
  while (std::getline(in, line) && !line.empty() && line[0] == '%') {
  }
  std::istringstream header(line);
  int rows = 0, cols = 0, nnz = 0;
  header >> rows >> cols >> nnz;
  CHECK_EQ(rows, N.rows());
  CHECK_EQ(cols, N.cols());
  CHECK_EQ(nnz, N.nonZeros());
  Eigen::MatrixXd back = Eigen::MatrixXd::Zero(rows, cols);
  for (int e = 0; e < nnz; ++e) {
    int i = 0, j = 0;
    double v = 0.0;
    in >> i >> j >> v;
    back(i - 1, j - 1) = v;
  }
  std::remove(path.c_str());
  CHECK((back - Eigen::MatrixXd(N)).cwiseAbs().maxCoeff() <=
        1e-12 * back.cwiseAbs().maxCoeff());
}

TEST_CASE("projected exact fields carry matching traces") {
  const Mesh2D mesh = build_structured_mesh(2);
  const FormsContext ctx(2);
  PhysicalParams params;
  params.k = 2;
  const ManufacturedCase mc = make_smooth_case(params);
  const DofMap dofs = build_dofmap(mesh, 2);
  const Eigen::VectorXd x = project_exact(mesh, ctx, dofs, mc.exact);
  REQUIRE_EQ(x.size(), dofs.num_free());
  CHECK(x.allFinite());

  // trace unknowns are the face projections of the exact fields
  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (mesh.faces[f].cls != FaceClass::Interface) continue;
    const Eigen::VectorXd want = project_face_scalar(
        mesh, ctx, f, [&](const Eigen::Vector2d& p) {
          return mc.exact.velocity(p, Region::Stokes).x();
        });
    const int pos = dofs.facet_position(dofs.ubar_offset[f]);
    CHECK((x.segment(dofs.total_cell_dofs + pos, dofs.nface) - want).norm() <= 1e-12);
  }
}
