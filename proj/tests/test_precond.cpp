#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "sdhdg/assembly.hpp"
#include "sdhdg/condense.hpp"
#include "sdhdg/krylov.hpp"
#include "sdhdg/manufactured.hpp"
#include "sdhdg/mesh.hpp"
#include "sdhdg/precond.hpp"

using namespace sdhdg;

namespace {

struct Setup {
  Mesh2D mesh;
  FormsContext ctx;
  PhysicalParams params;
  DofMap dofs;

  explicit Setup(int n, int k, double mu = 1.0, double kappa = 1.0, double alpha = 1.0)
      : mesh(build_structured_mesh(n)), ctx(k), dofs() {
    params.k = k;
    params.mu = mu;
    params.kappa = kappa;
    params.alpha = alpha;
    dofs = build_dofmap(mesh, k);
  }
};

Eigen::VectorXd random_vector(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = unif(gen);
  return v;
}

}  // namespace

TEST_CASE("both variants build definite facet blocks") {
  const Setup s(2, 2, 0.5, 2.0, 0.8);
  for (PrecondVariant variant : {PrecondVariant::P, PrecondVariant::Phat}) {
    const FacetPreconditioner pre =
        build_precond(s.mesh, s.ctx, s.params, s.dofs, variant);
    CHECK_EQ(pre.size(), s.dofs.ubar_free + s.dofs.pbar_s_count + s.dofs.pbar_d_count);
    const Eigen::MatrixXd M(pre.matrix());
    CHECK((M - M.transpose()).cwiseAbs().maxCoeff() <=
          1e-12 * M.cwiseAbs().maxCoeff());
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    CHECK(llt.info() == Eigen::Success);

    // block diagonal: velocity rows never touch pressure columns
    const int nu = s.dofs.ubar_free;
    CHECK(M.block(0, nu, nu, M.cols() - nu).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("the top trace-pressure block is face diagonal with explicit scaling") {
  const Setup s1(2, 2, 1.3, 0.7, 1.0);
  const FacetPreconditioner pre =
      build_precond(s1.mesh, s1.ctx, s1.params, s1.dofs, PrecondVariant::P);
  const Eigen::MatrixXd Sps(pre.block_ps());
  const int m = s1.dofs.nface;
  REQUIRE_EQ(Sps.rows(), s1.dofs.pbar_s_count);

  for (int f = 0; f < s1.mesh.num_faces(); ++f) {
    if (s1.dofs.pbar_s_offset[f] < 0) continue;
    const int pos =
        s1.dofs.facet_position(s1.dofs.pbar_s_offset[f]) - s1.dofs.ubar_free;
    // orthonormal trace modes: the face block is a scaled identity summing
    // h_K L / (2 mu eta) over the adjacent top-region cells
    double weight = 0.0;
    for (int c : s1.mesh.faces[f].cell)
      if (c >= 0 && s1.mesh.cell_region[c] == Region::Stokes)
        weight += s1.mesh.h_cell[c] * s1.mesh.face_length(f) /
                  (2.0 * s1.params.mu * s1.params.penalty());
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const double want = i == j ? weight : 0.0;
        CHECK(Sps(pos + i, pos + j) == doctest::Approx(want).epsilon(1e-12));
      }
    // nothing outside the face block
    for (int j = 0; j < Sps.cols(); ++j)
      if (j < pos || j >= pos + m)
        for (int i = 0; i < m; ++i) CHECK(Sps(pos + i, j) == 0.0);
  }

  // halving comes from doubling the viscosity
  Setup s2(2, 2, 2.6, 0.7, 1.0);
  const FacetPreconditioner pre2 =
      build_precond(s2.mesh, s2.ctx, s2.params, s2.dofs, PrecondVariant::P);
  CHECK((Eigen::MatrixXd(pre2.block_ps()) - 0.5 * Sps).cwiseAbs().maxCoeff() <=
        1e-13 * Sps.cwiseAbs().maxCoeff());
}

TEST_CASE("apply and apply_inverse invert each other") {
  const Setup s(2, 2, 0.01, 100.0, 0.5);
  for (PrecondVariant variant : {PrecondVariant::P, PrecondVariant::Phat}) {
    const FacetPreconditioner pre =
        build_precond(s.mesh, s.ctx, s.params, s.dofs, variant);
    const Eigen::VectorXd x = random_vector(pre.size(), 31);
    const Eigen::VectorXd y = pre.apply_inverse(pre.apply(x));
    CHECK((y - x).norm() <= 1e-11 * x.norm());
    const Eigen::VectorXd z = Eigen::VectorXd::Zero(pre.size());
    CHECK(pre.apply_inverse(z).norm() == 0.0);
    // apply agrees with the assembled matrix
    CHECK((pre.apply(x) - pre.matrix() * x).norm() <= 1e-12 * pre.apply(x).norm());
  }
}

TEST_CASE("kernel projection removes the constant-pressure direction") {
  const Setup s(2, 2);
  const FacetPreconditioner pre =
      build_precond(s.mesh, s.ctx, s.params, s.dofs, PrecondVariant::P);
  const Eigen::VectorXd z = pre.kernel();
  REQUIRE(z.norm() > 0.0);

  CHECK(pre.project_kernel(z).norm() <= 1e-13 * z.norm());
  const Eigen::VectorXd x = random_vector(pre.size(), 7);
  const Eigen::VectorXd px = pre.project_kernel(x);
  CHECK((pre.project_kernel(px) - px).norm() <= 1e-13 * px.norm());
  // orthogonality in the operator inner product
  CHECK(std::abs(px.dot(pre.apply(z))) <= 1e-10 * px.norm() * pre.apply(z).norm());
}

TEST_CASE("preconditioning the operator by itself converges immediately") {
  const Setup s(2, 1);
  const FacetPreconditioner pre =
      build_precond(s.mesh, s.ctx, s.params, s.dofs, PrecondVariant::P);
  const Eigen::VectorXd b = random_vector(pre.size(), 13);
  Eigen::VectorXd x;
  const SolverReport r = minres([&](const Eigen::VectorXd& v) { return pre.apply(v); },
                                [&](const Eigen::VectorXd& v) {
                                  return pre.apply_inverse(v);
                                },
                                b, x, 1e-12, 10);
  CHECK(r.converged);
  CHECK(r.iterations <= 2);
  CHECK((pre.apply(x) - b).norm() <= 1e-9 * b.norm());
}

TEST_CASE("singular condensed solves need the kernel handling") {
  const Setup s(2, 2);
  const ManufacturedCase mc = make_smooth_case(s.params);
  const BlockSystem sys = assemble_system(s.mesh, s.ctx, s.params, mc.data, s.dofs);
  const CondensedSystem cs(sys.A, sys.ncell, sys.slices);
  const FacetPreconditioner pre =
      build_precond(s.mesh, s.ctx, s.params, s.dofs, PrecondVariant::Phat);
  const Eigen::VectorXd fbar = cs.reduce_rhs(sys.rhs);
  const Eigen::VectorXd z = pre.kernel();

  const LinOp A = [&](const Eigen::VectorXd& v) {
    return Eigen::VectorXd(cs.schur() * v);
  };
  const LinOp Minv = [&](const Eigen::VectorXd& v) {
    return pre.project_kernel(pre.apply_inverse(v));
  };

  // compatible data: the projected iteration converges and solves the system
  Eigen::VectorXd x;
  const SolverReport ok = minres(A, Minv, fbar, x, 1e-10, 500);
  CHECK(ok.converged);
  CHECK((cs.schur() * x - fbar).norm() <= 1e-8 * fbar.norm());

  // a kernel-polluted right-hand side: the projection hides the unreachable
  // component from the stopping test, so the iteration reports convergence,
  // but the unresolved mismatch stays confined to the kernel directions
  const Eigen::VectorXd bad = fbar + 0.1 * fbar.norm() * z / z.norm();
  Eigen::VectorXd y;
  const SolverReport filtered = minres(A, Minv, bad, y, 1e-10, 500);
  CHECK(filtered.converged);
  const Eigen::VectorXd r_bad = bad - cs.schur() * y;
  CHECK(r_bad.norm() >= 0.05 * fbar.norm());
  Eigen::MatrixXd span(r_bad.size(), 2);
  span.col(0) = z / z.norm();
  Eigen::VectorXd spz = pre.apply(z);
  spz -= span.col(0) * span.col(0).dot(spz);
  span.col(1) = spz / spz.norm();
  const Eigen::VectorXd rem = r_bad - span * (span.transpose() * r_bad);
  CHECK(rem.norm() <= 1e-5 * fbar.norm());

  // without the projection the stray component never leaves the residual and
  // the solver correctly refuses to report convergence
  const LinOp MinvRaw = [&](const Eigen::VectorXd& v) { return pre.apply_inverse(v); };
  Eigen::VectorXd w;
  const SolverReport stuck = minres(A, MinvRaw, bad, w, 1e-10, 500);
  CHECK_FALSE(stuck.converged);
}

TEST_CASE("inexact sweeps define a symmetric positive operator") {
  const Setup s(4, 2);
  const FacetPreconditioner pre = build_precond(s.mesh, s.ctx, s.params, s.dofs,
                                                PrecondVariant::Phat,
                                                PrecondMode::Inexact, 3);
  const Eigen::VectorXd x = random_vector(pre.size(), 41);
  const Eigen::VectorXd y = random_vector(pre.size(), 42);

  // fixed linear operator: additivity and homogeneity hold to roundoff
  const Eigen::VectorXd lhs = pre.apply_inverse(2.0 * x + y);
  const Eigen::VectorXd rhs =
      2.0 * pre.apply_inverse(x) + pre.apply_inverse(y);
  CHECK((lhs - rhs).norm() <= 1e-11 * rhs.norm());

  // symmetry and positivity in the Euclidean pairing
  CHECK(std::abs(y.dot(pre.apply_inverse(x)) - x.dot(pre.apply_inverse(y))) <=
        1e-10 * x.norm() * y.norm());
  CHECK(x.dot(pre.apply_inverse(x)) > 0.0);

  // still a useful preconditioner for its own assembled matrix
  const Eigen::VectorXd b = random_vector(pre.size(), 43);
  Eigen::VectorXd sol;
  const SolverReport r = minres([&](const Eigen::VectorXd& v) { return pre.apply(v); },
                                [&](const Eigen::VectorXd& v) {
                                  return pre.apply_inverse(v);
                                },
                                b, sol, 1e-10, 200);
  CHECK(r.converged);
  CHECK(r.iterations < 100);
}

TEST_CASE("raw blocks match the factorized preconditioner") {
  const Setup s(2, 2, 0.2, 5.0, 1.1);
  for (PrecondVariant variant : {PrecondVariant::P, PrecondVariant::Phat}) {
    const PrecondBlocks pb = precond_blocks(s.mesh, s.ctx, s.params, s.dofs, variant);
    const FacetPreconditioner pre =
        build_precond(s.mesh, s.ctx, s.params, s.dofs, variant);
    CHECK((Eigen::MatrixXd(pb.matrix()) - Eigen::MatrixXd(pre.matrix()))
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK((pb.kernel - pre.kernel()).norm() == 0.0);
  }
}

TEST_CASE("interface weights scale as stated in the two trace blocks") {
  auto blocks = [&](double alpha) {
    const Setup s(2, 2, 1.0, 4.0, alpha);
    return precond_blocks(s.mesh, s.ctx, s.params, s.dofs, PrecondVariant::P);
  };
  const PrecondBlocks b1 = blocks(1.0), b2 = blocks(2.0), b4 = blocks(4.0);

  // slip penalty grows linearly in alpha
  const Eigen::MatrixXd du1 = Eigen::MatrixXd(b2.Su) - Eigen::MatrixXd(b1.Su);
  const Eigen::MatrixXd du2 = Eigen::MatrixXd(b4.Su) - Eigen::MatrixXd(b2.Su);
  CHECK((du2 - 2.0 * du1).cwiseAbs().maxCoeff() <=
        1e-10 * (1.0 + du2.cwiseAbs().maxCoeff()));

  // the dual interface weight decays like 1/alpha
  const Eigen::MatrixXd dp1 = Eigen::MatrixXd(b1.Spd) - Eigen::MatrixXd(b2.Spd);
  const Eigen::MatrixXd dp2 = Eigen::MatrixXd(b2.Spd) - Eigen::MatrixXd(b4.Spd);
  CHECK((dp1 - 2.0 * dp2).cwiseAbs().maxCoeff() <=
        1e-10 * (1.0 + dp1.cwiseAbs().maxCoeff()));
}
