#include "sdhdg/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "sdhdg/condense.hpp"

namespace sdhdg {

namespace {

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& M, const std::vector<int>& rows,
                          const std::vector<int>& cols) {
  Eigen::MatrixXd R(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) R(i, j) = M(rows[i], cols[j]);
  return R;
}

// Removes the single eigenvalue nearest zero; used when the left side of a
// pencil has a known one-dimensional kernel, whose exact-zero eigenvalue
// comes out as numerical noise.
Eigen::VectorXd drop_null_eigenvalue(const Eigen::VectorXd& ev) {
  int imin = 0;
  for (int i = 1; i < ev.size(); ++i)
    if (std::abs(ev[i]) < std::abs(ev[imin])) imin = i;
  Eigen::VectorXd out(ev.size() - 1);
  int j = 0;
  for (int i = 0; i < ev.size(); ++i)
    if (i != imin) out[j++] = ev[i];
  return out;
}

// Unweighted interface face mass over one facet segment. `vector_field`
// selects the two-component trace-velocity layout.
Eigen::SparseMatrix<double> interface_mass(const Mesh2D& mesh, const FormsContext& ctx,
                                           const DofMap& dofs, bool vector_field) {
  const int m = dofs.nface;
  std::vector<Eigen::Triplet<double>> trips;
  const int size = vector_field ? dofs.ubar_free : dofs.pbar_d_count;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (mesh.faces[f].cls != FaceClass::Interface) continue;
    const Eigen::MatrixXd M =
        weighted_face_mass(mesh, ctx, f, [](const Eigen::Vector2d&) { return 1.0; });
    if (vector_field) {
      for (int c = 0; c < 2; ++c)
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) {
            const int pi = dofs.facet_position(dofs.ubar_offset[f] + c * m + i);
            const int pj = dofs.facet_position(dofs.ubar_offset[f] + c * m + j);
            trips.emplace_back(pi, pj, M(i, j));
          }
    } else {
      const int base =
          dofs.facet_position(dofs.pbar_d_offset[f]) - dofs.ubar_free - dofs.pbar_s_count;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) trips.emplace_back(base + i, base + j, M(i, j));
    }
  }
  Eigen::SparseMatrix<double> S(size, size);
  S.setFromTriplets(trips.begin(), trips.end());
  return S;
}

// Constant-one coefficients on the bottom trace-pressure segment.
Eigen::VectorXd pbar_d_constant(const Mesh2D& mesh, const FormsContext& ctx,
                                const DofMap& dofs) {
  const Eigen::VectorXd face_one =
      ctx.face_basis.values(ctx.edge_rule.points.col(0)) * ctx.edge_rule.weights;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(dofs.pbar_d_count);
  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (dofs.pbar_d_offset[f] < 0) continue;
    const int base =
        dofs.facet_position(dofs.pbar_d_offset[f]) - dofs.ubar_free - dofs.pbar_s_count;
    z.segment(base, dofs.nface) = face_one;
  }
  return z;
}

double quad_form(const Eigen::SparseMatrix<double>& M, const Eigen::VectorXd& x) {
  return x.dot(M * x);
}

}  // namespace

Eigen::MatrixXd complement_basis(const Eigen::VectorXd& v) {
  const int n = static_cast<int>(v.size());
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(v);
  const Eigen::MatrixXd Q = qr.householderQ();
  return Q.rightCols(n - 1);
}

Eigen::VectorXd pencil_eigenvalues(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  Eigen::MatrixXd As = 0.5 * (A + A.transpose());
  Eigen::MatrixXd Bs = 0.5 * (B + B.transpose());
  // Congruence by the Jacobi scaling of B keeps the eigenvalues and evens out
  // the hugely different physical block scales before factorization.
  Eigen::VectorXd d = Bs.diagonal();
  for (int i = 0; i < d.size(); ++i) d[i] = d[i] > 0.0 ? 1.0 / std::sqrt(d[i]) : 1.0;
  As = d.asDiagonal() * As * d.asDiagonal();
  Bs = d.asDiagonal() * Bs * d.asDiagonal();
  // The generalized solver factorizes B without checking success, so an
  // indefinite right side would yield silent garbage.
  if (Eigen::LLT<Eigen::MatrixXd>(Bs).info() != Eigen::Success)
    throw std::runtime_error("pencil_eigenvalues: right side not positive definite");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(
      As, Bs, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (ges.info() != Eigen::Success)
    throw std::runtime_error("pencil_eigenvalues: eigen solver failed");
  return ges.eigenvalues();
}

StabilityReport spectral_suite(const Mesh2D& mesh, const FormsContext& ctx,
                               const PhysicalParams& params) {
  const DofMap dofs = build_dofmap(mesh, ctx.k);
  const ProblemData zero_data;
  const BlockSystem sys = assemble_system(mesh, ctx, params, zero_data, dofs);
  const NormParts parts = assemble_norm_parts(mesh, ctx, params, dofs);
  const Eigen::MatrixXd A = Eigen::MatrixXd(sys.A);
  const Eigen::MatrixXd N = Eigen::MatrixXd(parts.vel_s + parts.vel_d + parts.vel_iface +
                                            parts.pres_s + parts.pres_d +
                                            parts.pres_iface);

  StabilityReport rep;

  {  // Full form against the full norm; the pressure constant contributes an
     // exact zero, removed from the report.
    const Eigen::VectorXd ev = drop_null_eigenvalue(pencil_eigenvalues(A, N));
    rep.form_bound = ev.cwiseAbs().maxCoeff();
    rep.form_infsup = ev.cwiseAbs().minCoeff();
  }

  std::vector<int> vel, pres;
  split_velocity_pressure(mesh, dofs, vel, pres);
  const Eigen::MatrixXd Dv = submatrix(A, vel, vel);
  const Eigen::MatrixXd Nv = submatrix(N, vel, vel);
  const Eigen::MatrixXd Nq = submatrix(N, pres, pres);

  rep.coercivity = pencil_eigenvalues(Dv, Nv).minCoeff();

  {  // Coupling inf-sup: smallest nonzero singular value of B in (Nv, Nq).
     // The pressure constant spans the kernel of B (transposed).
    const Eigen::MatrixXd B = submatrix(A, pres, vel);
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(0.5 * (Nv + Nv.transpose()));
    const Eigen::MatrixXd M = B * ldlt.solve(B.transpose());
    const Eigen::VectorXd ev = drop_null_eigenvalue(pencil_eigenvalues(M, Nq));
    rep.b_infsup = std::sqrt(std::max(ev.minCoeff(), 0.0));
  }

  {  // Lifted facet energy against the condensed Riesz norm.
    const CondensedSystem cs(sys.A, sys.ncell, sys.slices);
    const int nf = cs.facet_size();
    const int nfree = static_cast<int>(sys.A.rows());
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(nfree);
    Eigen::MatrixXd X(nfree, nf);
    for (int j = 0; j < nf; ++j)
      X.col(j) = cs.recover(zero, Eigen::VectorXd::Unit(nf, j));
    const Eigen::MatrixXd LNL = X.transpose() * N * X;
    const FacetPreconditioner P =
        build_precond(mesh, ctx, params, dofs, PrecondVariant::P);
    const Eigen::MatrixXd SP = Eigen::MatrixXd(P.matrix());
    rep.lift_bound = std::sqrt(pencil_eigenvalues(LNL, SP).maxCoeff());
  }

  {  // Interface trace bound for the trace velocity, and the roughness bound.
    const Eigen::SparseMatrix<double> Svs = condense_spd_block(stokes_velocity_block(
        mesh, ctx, params, dofs, StokesBlockForm::InnerProduct, false));
    const Eigen::MatrixXd S = Eigen::MatrixXd(Svs);
    const Eigen::MatrixXd MG =
        Eigen::MatrixXd(interface_mass(mesh, ctx, dofs, true));
    rep.trace_v =
        std::sqrt(pencil_eigenvalues(2.0 * params.mu * MG, S).maxCoeff());
    const Eigen::MatrixXd F =
        Eigen::MatrixXd(assemble_facet_seminorm(mesh, ctx, dofs));
    const double w = 2.0 * params.mu * params.penalty();
    rep.facet_bound = std::sqrt(pencil_eigenvalues(w * F, S).maxCoeff());
  }

  {  // Interface trace bound for the bottom trace pressure ((q,d) metric,
     // constants removed on both sides).
    const Eigen::SparseMatrix<double> Sqd = condense_spd_block(darcy_pressure_block(
        mesh, ctx, params, dofs, DarcyBlockForm::InnerProduct, false));
    const Eigen::MatrixXd Z = complement_basis(pbar_d_constant(mesh, ctx, dofs));
    const Eigen::MatrixXd MG =
        Eigen::MatrixXd(interface_mass(mesh, ctx, dofs, false));
    const double w = params.mu / params.kappa;  // constant-permeability metric
    const Eigen::VectorXd ev = pencil_eigenvalues(
        Z.transpose() * MG * Z, w * Z.transpose() * Eigen::MatrixXd(Sqd) * Z);
    rep.trace_q = std::sqrt(ev.maxCoeff());
  }

  {  // Blockwise eigenvalue interval of the Phat blocks against the P blocks.
     // Raw condensed matrices via the LU path; the Phat velocity block can be
     // indefinite for small penalty and must not be factorized here.
    auto condensed = [](const AuxiliaryBlock& blk) {
      return Eigen::MatrixXd(
          CondensedSystem(blk.matrix, blk.ncell, blk.slices).schur());
    };
    const Eigen::MatrixXd Su_p = condensed(stokes_velocity_block(
        mesh, ctx, params, dofs, StokesBlockForm::InnerProduct, true));
    const Eigen::MatrixXd Su_h = condensed(stokes_velocity_block(
        mesh, ctx, params, dofs, StokesBlockForm::DiscreteForm, true));
    const Eigen::MatrixXd Sd_p = condensed(darcy_pressure_block(
        mesh, ctx, params, dofs, DarcyBlockForm::InnerProduct, true));
    const Eigen::MatrixXd Sd_h = condensed(darcy_pressure_block(
        mesh, ctx, params, dofs, DarcyBlockForm::IpDiffusion, true));
    const Eigen::VectorXd evu = pencil_eigenvalues(Su_h, Su_p);
    const Eigen::VectorXd evp = pencil_eigenvalues(Sd_h, Sd_p);
    // The top trace-pressure block is shared, so 1 is always attained.
    rep.equiv_lo = std::min({evu.minCoeff(), evp.minCoeff(), 1.0});
    rep.equiv_hi = std::max({evu.maxCoeff(), evp.maxCoeff(), 1.0});
  }

  return rep;
}

SpectrumIntervals preconditioned_spectrum(const Mesh2D& mesh, const FormsContext& ctx,
                                          const PhysicalParams& params,
                                          PrecondVariant variant) {
  const DofMap dofs = build_dofmap(mesh, ctx.k);
  const ProblemData zero_data;
  const BlockSystem sys = assemble_system(mesh, ctx, params, zero_data, dofs);
  const CondensedSystem cs(sys.A, sys.ncell, sys.slices);
  const PrecondBlocks pb = precond_blocks(mesh, ctx, params, dofs, variant);

  // The condensed operator keeps the pressure-constant kernel; its exact-zero
  // eigenvalue is removed rather than deflated, the preconditioner side is
  // definite as is.
  const Eigen::MatrixXd SA = Eigen::MatrixXd(cs.schur());
  const Eigen::MatrixXd SP = Eigen::MatrixXd(pb.matrix());
  const Eigen::VectorXd ev = drop_null_eigenvalue(pencil_eigenvalues(SA, SP));

  SpectrumIntervals iv;
  iv.neg_lo = ev.minCoeff();
  iv.pos_hi = ev.maxCoeff();
  iv.neg_hi = -std::numeric_limits<double>::infinity();
  iv.pos_lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i] < 0.0 && ev[i] > iv.neg_hi) iv.neg_hi = ev[i];
    if (ev[i] > 0.0 && ev[i] < iv.pos_lo) iv.pos_lo = ev[i];
  }
  return iv;
}

LiftingRatios lifting_ratios(const Mesh2D& mesh, const FormsContext& ctx,
                             const PhysicalParams& params, int nsamples,
                             unsigned seed) {
  const DofMap dofs = build_dofmap(mesh, ctx.k);
  const ProblemData zero_data;
  const BlockSystem sys = assemble_system(mesh, ctx, params, zero_data, dofs);
  const NormParts parts = assemble_norm_parts(mesh, ctx, params, dofs);
  const CondensedSystem cs(sys.A, sys.ncell, sys.slices);
  const FacetPreconditioner P =
      build_precond(mesh, ctx, params, dofs, PrecondVariant::P);
  const Eigen::SparseMatrix<double> F = assemble_facet_seminorm(mesh, ctx, dofs);
  const Eigen::SparseMatrix<double> Sdt = condense_spd_block(darcy_pressure_block(
      mesh, ctx, params, dofs, DarcyBlockForm::IpDiffusion, false));
  const Eigen::SparseMatrix<double> N = parts.vel_s + parts.vel_d + parts.vel_iface +
                                        parts.pres_s + parts.pres_d + parts.pres_iface;

  const int nf = cs.facet_size();
  const int nu = dofs.ubar_free, nps = dofs.pbar_s_count, npd = dofs.pbar_d_count;
  const double eta = params.penalty();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(sys.A.rows());

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  LiftingRatios r;
  auto track = [](double& worst, double num, double den) {
    if (den > 0.0) worst = std::max(worst, num / den);
  };
  for (int s = 0; s < nsamples; ++s) {
    Eigen::VectorXd ybar(nf);
    for (int i = 0; i < nf; ++i) ybar[i] = gauss(rng);
    const Eigen::VectorXd x = cs.recover(zero, ybar);
    const Eigen::VectorXd vbar = ybar.head(nu);
    const Eigen::VectorXd qs_bar = ybar.segment(nu, nps);
    const Eigen::VectorXd qd_bar = ybar.tail(npd);

    const double vs_energy = quad_form(parts.vel_s, x);
    const double data_vs = 2.0 * params.mu * eta * vbar.dot(F * vbar) +
                           quad_form(P.block_ps(), qs_bar);
    track(r.vs, vs_energy, data_vs);
    track(r.qs, quad_form(parts.pres_s, x),
          eta * (vs_energy + quad_form(P.block_ps(), qs_bar)));
    const double vd_mass = quad_form(parts.vel_d, x);
    track(r.vd, vd_mass, quad_form(Sdt, qd_bar));
    track(r.qd, quad_form(parts.pres_d, x), vd_mass);
    const double schur_data = eta * (eta * quad_form(P.block_u(), vbar) +
                                     quad_form(P.block_ps(), qs_bar) +
                                     quad_form(P.block_pd(), qd_bar));
    track(r.total, x.dot(N * x), schur_data);
  }
  return r;
}

}  // namespace sdhdg
