#include "sdhdg/forms.hpp"

#include <cmath>

namespace sdhdg {

FormsContext::FormsContext(int k_, int quad_boost)
    : k(k_),
      vel_basis(k_),
      pres_basis(k_ - 1),
      face_basis(k_),
      cell_rule(triangle_quadrature(2 * k_ + 2 + quad_boost)),
      edge_rule(edge_quadrature(2 * k_ + 2 + quad_boost)) {
  vel_values = vel_basis.values(cell_rule.points);
  vel_dx = vel_basis.ddx(cell_rule.points);
  vel_dy = vel_basis.ddy(cell_rule.points);
  pres_values = pres_basis.values(cell_rule.points);
  pres_dx = pres_basis.ddx(cell_rule.points);
  pres_dy = pres_basis.ddy(cell_rule.points);
}

CellGeometry cell_geometry(const Mesh2D& mesh, int cell) {
  CellGeometry g;
  g.cell = cell;
  const auto& tri = mesh.cells[cell];
  g.v0 = mesh.vertices[tri[0]];
  g.J.col(0) = mesh.vertices[tri[1]] - g.v0;
  g.J.col(1) = mesh.vertices[tri[2]] - g.v0;
  g.detJ = g.J.determinant();
  g.Jinv = g.J.inverse();
  g.h = mesh.h_cell[cell];
  g.face_ids = mesh.cell_faces[cell];
  for (int f = 0; f < 3; ++f) {
    g.normal[f] = mesh.outward_normal(g.face_ids[f], cell);
    g.face_len[f] = mesh.face_length(g.face_ids[f]);
  }
  return g;
}

FaceTrace face_trace(const Mesh2D& mesh, const FormsContext& ctx,
                     const CellGeometry& geom, int local_face) {
  FaceTrace t;
  const int face = geom.face_ids[local_face];
  const Face& f = mesh.faces[face];
  const Eigen::Vector2d a = mesh.vertices[f.v[0]];
  const Eigen::Vector2d b = mesh.vertices[f.v[1]];
  const int qf = ctx.edge_rule.size();
  t.len = geom.face_len[local_face];
  t.normal = geom.normal[local_face];
  t.w = t.len * ctx.edge_rule.weights;
  t.phys.resize(qf, 2);
  Eigen::MatrixXd ref(qf, 2);
  for (int q = 0; q < qf; ++q) {
    const double s = ctx.edge_rule.points(q, 0);
    const Eigen::Vector2d x = a + s * (b - a);
    t.phys.row(q) = x;
    ref.row(q) = geom.to_ref(x);
  }
  t.vel_values = ctx.vel_basis.values(ref);
  const Eigen::MatrixXd vdx = ctx.vel_basis.ddx(ref);
  const Eigen::MatrixXd vdy = ctx.vel_basis.ddy(ref);
  t.vel_dx = geom.Jinv(0, 0) * vdx + geom.Jinv(1, 0) * vdy;
  t.vel_dy = geom.Jinv(0, 1) * vdx + geom.Jinv(1, 1) * vdy;
  t.pres_values = ctx.pres_basis.values(ref);
  const Eigen::MatrixXd pdx = ctx.pres_basis.ddx(ref);
  const Eigen::MatrixXd pdy = ctx.pres_basis.ddy(ref);
  t.pres_dx = geom.Jinv(0, 0) * pdx + geom.Jinv(1, 0) * pdy;
  t.pres_dy = geom.Jinv(0, 1) * pdx + geom.Jinv(1, 1) * pdy;
  t.face_values = ctx.face_basis.values(ctx.edge_rule.points.col(0));
  return t;
}

namespace {

// Physical derivative tables at the cell rule points.
struct CellTables {
  Eigen::MatrixXd vdx, vdy;  // velocity basis
  Eigen::MatrixXd pdx, pdy;  // pressure basis
  Eigen::VectorXd w;         // physical weights detJ * wq
  Eigen::MatrixXd phys;      // physical points
};

CellTables cell_tables(const FormsContext& ctx, const CellGeometry& g) {
  CellTables t;
  t.vdx = g.Jinv(0, 0) * ctx.vel_dx + g.Jinv(1, 0) * ctx.vel_dy;
  t.vdy = g.Jinv(0, 1) * ctx.vel_dx + g.Jinv(1, 1) * ctx.vel_dy;
  t.pdx = g.Jinv(0, 0) * ctx.pres_dx + g.Jinv(1, 0) * ctx.pres_dy;
  t.pdy = g.Jinv(0, 1) * ctx.pres_dx + g.Jinv(1, 1) * ctx.pres_dy;
  t.w = g.detJ * ctx.cell_rule.weights;
  const int q = ctx.cell_rule.size();
  t.phys.resize(q, 2);
  for (int i = 0; i < q; ++i)
    t.phys.row(i) = g.to_phys(ctx.cell_rule.points.row(i).transpose());
  return t;
}

// A += L * diag(w) * R^T
void add_weighted(Eigen::MatrixXd& A, const Eigen::MatrixXd& L,
                  const Eigen::VectorXd& w, const Eigen::MatrixXd& R) {
  A.noalias() += L * w.asDiagonal() * R.transpose();
}

// Velocity-pair face difference table for one component: rows are the pair
// layout, cols the face quad points; (v - vbar) evaluated per dof.
Eigen::MatrixXd pair_difference(const FormsContext& ctx, const FaceTrace& t,
                                int local_face, int comp) {
  const int nb = ctx.nvel(), m = ctx.nface();
  const int qf = static_cast<int>(t.w.size());
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2 * nb + 6 * m, qf);
  D.middleRows(comp * nb, nb) = t.vel_values;
  D.middleRows(2 * nb + local_face * 2 * m + comp * m, m) = -t.face_values;
  return D;
}

// eps(basis dof) * n tables: component `comp` of the boundary traction
// direction for every cell velocity dof, zero-padded to the pair layout.
Eigen::MatrixXd strain_normal(const FormsContext& ctx, const FaceTrace& t,
                              int comp) {
  const int nb = ctx.nvel(), m = ctx.nface();
  const int qf = static_cast<int>(t.w.size());
  const double n1 = t.normal.x(), n2 = t.normal.y();
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(2 * nb + 6 * m, qf);
  if (comp == 0) {
    E.middleRows(0, nb) = n1 * t.vel_dx + 0.5 * n2 * t.vel_dy;
    E.middleRows(nb, nb) = 0.5 * n2 * t.vel_dx;
  } else {
    E.middleRows(0, nb) = 0.5 * n1 * t.vel_dy;
    E.middleRows(nb, nb) = 0.5 * n1 * t.vel_dx + n2 * t.vel_dy;
  }
  return E;
}

// 2mu (eps(u),eps(v))_K for the pair layout (cell dofs only).
void add_strain_strain(Eigen::MatrixXd& A, const FormsContext& ctx,
                       const CellTables& ct, double two_mu) {
  const int nb = ctx.nvel(), m = ctx.nface();
  const int q = static_cast<int>(ct.w.size());
  const double s2 = std::sqrt(2.0);
  // Rows [S1; S2; S3] give (eps11, sqrt2*eps12, eps22) per dof.
  Eigen::MatrixXd S1 = Eigen::MatrixXd::Zero(2 * nb + 6 * m, q);
  Eigen::MatrixXd S2 = Eigen::MatrixXd::Zero(2 * nb + 6 * m, q);
  Eigen::MatrixXd S3 = Eigen::MatrixXd::Zero(2 * nb + 6 * m, q);
  S1.middleRows(0, nb) = ct.vdx;
  S2.middleRows(0, nb) = (s2 * 0.5) * ct.vdy;
  S2.middleRows(nb, nb) = (s2 * 0.5) * ct.vdx;
  S3.middleRows(nb, nb) = ct.vdy;
  const Eigen::VectorXd w = two_mu * ct.w;
  add_weighted(A, S1, w, S1);
  add_weighted(A, S2, w, S2);
  add_weighted(A, S3, w, S3);
}

Eigen::MatrixXd velocity_pair_matrix(const Mesh2D& mesh, const FormsContext& ctx,
                                     const PhysicalParams& p, int cell,
                                     bool with_consistency) {
  const CellGeometry g = cell_geometry(mesh, cell);
  const CellTables ct = cell_tables(ctx, g);
  const int nb = ctx.nvel(), m = ctx.nface();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * nb + 6 * m, 2 * nb + 6 * m);
  const double two_mu = 2.0 * p.mu;
  add_strain_strain(A, ctx, ct, two_mu);
  const double pen = two_mu * p.penalty() / g.h;
  for (int f = 0; f < 3; ++f) {
    const FaceTrace t = face_trace(mesh, ctx, g, f);
    for (int c = 0; c < 2; ++c) {
      const Eigen::MatrixXd D = pair_difference(ctx, t, f, c);
      add_weighted(A, D, pen * t.w, D);
      if (with_consistency) {
        const Eigen::MatrixXd E = strain_normal(ctx, t, c);
        const Eigen::VectorXd w = -two_mu * t.w;
        add_weighted(A, E, w, D);
        add_weighted(A, D, w, E);
      }
    }
  }
  return A;
}

// Pressure-pair face difference table (p - pbar).
Eigen::MatrixXd pressure_difference(const FormsContext& ctx, const FaceTrace& t,
                                    int local_face) {
  const int np = ctx.npres(), m = ctx.nface();
  const int qf = static_cast<int>(t.w.size());
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(np + 3 * m, qf);
  D.middleRows(0, np) = t.pres_values;
  D.middleRows(np + local_face * m, m) = -t.face_values;
  return D;
}

Eigen::MatrixXd pressure_pair_matrix(const Mesh2D& mesh, const FormsContext& ctx,
                                     const PhysicalParams& p, int cell,
                                     bool with_consistency) {
  const CellGeometry g = cell_geometry(mesh, cell);
  const CellTables ct = cell_tables(ctx, g);
  const int np = ctx.npres(), m = ctx.nface();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(np + 3 * m, np + 3 * m);

  const int q = ctx.cell_rule.size();
  Eigen::VectorXd wk(q);  // mu^{-1} kappa weights at cell points
  for (int i = 0; i < q; ++i)
    wk[i] = ct.w[i] * p.kappa_at(ct.phys.row(i).transpose()) / p.mu;
  Eigen::MatrixXd Gx = Eigen::MatrixXd::Zero(np + 3 * m, q);
  Eigen::MatrixXd Gy = Eigen::MatrixXd::Zero(np + 3 * m, q);
  Gx.middleRows(0, np) = ct.pdx;
  Gy.middleRows(0, np) = ct.pdy;
  add_weighted(A, Gx, wk, Gx);
  add_weighted(A, Gy, wk, Gy);

  const double eta = p.penalty();
  for (int f = 0; f < 3; ++f) {
    const FaceTrace t = face_trace(mesh, ctx, g, f);
    const int qf = static_cast<int>(t.w.size());
    Eigen::VectorXd wf(qf);
    for (int i = 0; i < qf; ++i)
      wf[i] = t.w[i] * p.kappa_at(t.phys.row(i).transpose()) / p.mu;
    const Eigen::MatrixXd D = pressure_difference(ctx, t, f);
    add_weighted(A, D, (eta / g.h) * wf, D);
    if (with_consistency) {
      Eigen::MatrixXd Gn = Eigen::MatrixXd::Zero(np + 3 * m, qf);
      Gn.middleRows(0, np) = t.normal.x() * t.pres_dx + t.normal.y() * t.pres_dy;
      add_weighted(A, Gn, -wf, D);
      add_weighted(A, D, -wf, Gn);
    }
  }
  return A;
}

}  // namespace

Eigen::MatrixXd stokes_cell_matrix(const Mesh2D& mesh, const FormsContext& ctx,
                                   const PhysicalParams& p, int cell) {
  return velocity_pair_matrix(mesh, ctx, p, cell, true);
}

Eigen::MatrixXd vs_inner_cell_matrix(const Mesh2D& mesh, const FormsContext& ctx,
                                     const PhysicalParams& p, int cell) {
  return velocity_pair_matrix(mesh, ctx, p, cell, false);
}

Eigen::MatrixXd darcy_cell_matrix(const Mesh2D& mesh, const FormsContext& ctx,
                                  const PhysicalParams& p, int cell) {
  const CellGeometry g = cell_geometry(mesh, cell);
  const CellTables ct = cell_tables(ctx, g);
  const int nb = ctx.nvel();
  const int q = ctx.cell_rule.size();
  Eigen::VectorXd w(q);
  for (int i = 0; i < q; ++i)
    w[i] = ct.w[i] * p.mu / p.kappa_at(ct.phys.row(i).transpose());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * nb, 2 * nb);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nb, nb);
  add_weighted(M, ctx.vel_values, w, ctx.vel_values);
  A.block(0, 0, nb, nb) = M;
  A.block(nb, nb, nb, nb) = M;
  return A;
}

Eigen::MatrixXd divergence_blocks(const Mesh2D& mesh, const FormsContext& ctx,
                                  int cell) {
  const CellGeometry g = cell_geometry(mesh, cell);
  const CellTables ct = cell_tables(ctx, g);
  const int nb = ctx.nvel(), np = ctx.npres(), m = ctx.nface();
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(np + 3 * m, 2 * nb);
  // -(p, div v)_K
  B.block(0, 0, np, nb).noalias() -=
      ctx.pres_values * ct.w.asDiagonal() * ct.vdx.transpose();
  B.block(0, nb, np, nb).noalias() -=
      ctx.pres_values * ct.w.asDiagonal() * ct.vdy.transpose();
  // + <pbar, v.n>_dK
  for (int f = 0; f < 3; ++f) {
    const FaceTrace t = face_trace(mesh, ctx, g, f);
    B.block(np + f * m, 0, m, nb).noalias() +=
        t.face_values * (t.normal.x() * t.w).asDiagonal() * t.vel_values.transpose();
    B.block(np + f * m, nb, m, nb).noalias() +=
        t.face_values * (t.normal.y() * t.w).asDiagonal() * t.vel_values.transpose();
  }
  return B;
}

Eigen::MatrixXd interface_bjs_matrix(const Mesh2D& mesh, const FormsContext& ctx,
                                     const PhysicalParams& p, int face) {
  const Face& f = mesh.faces[face];
  const CellGeometry g = cell_geometry(mesh, f.cell[0]);  // Stokes side
  int lf = 0;
  while (g.face_ids[lf] != face) ++lf;
  const FaceTrace t = face_trace(mesh, ctx, g, lf);
  const int m = ctx.nface();
  const int qf = static_cast<int>(t.w.size());
  Eigen::VectorXd w(qf);
  for (int i = 0; i < qf; ++i)
    w[i] = t.w[i] * p.alpha * p.mu / std::sqrt(p.kappa_at(t.phys.row(i).transpose()));
  // Tangential projector I - n n^T, constant on the straight face.
  Eigen::Matrix2d proj = Eigen::Matrix2d::Identity() - t.normal * t.normal.transpose();
  Eigen::MatrixXd A(2 * m, 2 * m);
  const Eigen::MatrixXd mass = t.face_values * w.asDiagonal() * t.face_values.transpose();
  for (int c = 0; c < 2; ++c)
    for (int d = 0; d < 2; ++d) A.block(c * m, d * m, m, m) = proj(c, d) * mass;
  return A;
}

Eigen::MatrixXd interface_pressure_block(const Mesh2D& mesh, const FormsContext& ctx,
                                         int face, Region r) {
  const Face& f = mesh.faces[face];
  const int cell = (r == Region::Stokes) ? f.cell[0] : f.cell[1];
  const CellGeometry g = cell_geometry(mesh, cell);
  int lf = 0;
  while (g.face_ids[lf] != face) ++lf;
  const FaceTrace t = face_trace(mesh, ctx, g, lf);
  const int m = ctx.nface();
  Eigen::MatrixXd B(m, 2 * m);
  const Eigen::MatrixXd mass = t.face_values * t.w.asDiagonal() * t.face_values.transpose();
  B.block(0, 0, m, m) = -t.normal.x() * mass;
  B.block(0, m, m, m) = -t.normal.y() * mass;
  return B;
}

Eigen::MatrixXd weighted_face_mass(const Mesh2D& mesh, const FormsContext& ctx,
                                   int face,
                                   const std::function<double(const Eigen::Vector2d&)>& wfn) {
  const Face& f = mesh.faces[face];
  const CellGeometry g = cell_geometry(mesh, f.cell[0]);
  int lf = 0;
  while (g.face_ids[lf] != face) ++lf;
  const FaceTrace t = face_trace(mesh, ctx, g, lf);
  const int qf = static_cast<int>(t.w.size());
  Eigen::VectorXd w(qf);
  for (int i = 0; i < qf; ++i) w[i] = t.w[i] * wfn(t.phys.row(i).transpose());
  return t.face_values * w.asDiagonal() * t.face_values.transpose();
}

Eigen::MatrixXd qs_inner_cell_matrix(const Mesh2D& mesh, const FormsContext& ctx,
                                     const PhysicalParams& p, int cell) {
  const CellGeometry g = cell_geometry(mesh, cell);
  const CellTables ct = cell_tables(ctx, g);
  const int np = ctx.npres(), m = ctx.nface();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(np + 3 * m, np + 3 * m);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(np, np);
  add_weighted(M, ctx.pres_values, ct.w, ctx.pres_values);
  A.block(0, 0, np, np) = M / (2.0 * p.mu);
  const double face_scale = g.h / (2.0 * p.mu * p.penalty());
  for (int f = 0; f < 3; ++f) {
    const FaceTrace t = face_trace(mesh, ctx, g, f);
    A.block(np + f * m, np + f * m, m, m).noalias() +=
        face_scale * t.face_values * t.w.asDiagonal() * t.face_values.transpose();
  }
  return A;
}

Eigen::MatrixXd qd_inner_cell_matrix(const Mesh2D& mesh, const FormsContext& ctx,
                                     const PhysicalParams& p, int cell) {
  return pressure_pair_matrix(mesh, ctx, p, cell, false);
}

Eigen::MatrixXd tilde_dh_cell_matrix(const Mesh2D& mesh, const FormsContext& ctx,
                                     const PhysicalParams& p, int cell) {
  return pressure_pair_matrix(mesh, ctx, p, cell, true);
}

Eigen::MatrixXd facet_seminorm_cell_matrix(const Mesh2D& mesh, const FormsContext& ctx,
                                           int cell) {
  const CellGeometry g = cell_geometry(mesh, cell);
  const int m = ctx.nface();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(6 * m, 6 * m);
  double perimeter = 0.0;
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(3 * m, 3 * m);  // one component
  Eigen::VectorXd b = Eigen::VectorXd::Zero(3 * m);            // boundary integrals
  for (int f = 0; f < 3; ++f) {
    const FaceTrace t = face_trace(mesh, ctx, g, f);
    perimeter += t.len;
    mass.block(f * m, f * m, m, m).noalias() +=
        t.face_values * t.w.asDiagonal() * t.face_values.transpose();
    b.segment(f * m, m).noalias() += t.face_values * t.w;
  }
  // h_K^{-1} (mass - b b^T / |dK|) per component; layout [f: (x block, y block)].
  const Eigen::MatrixXd comp = (mass - b * b.transpose() / perimeter) / g.h;
  for (int f = 0; f < 3; ++f)
    for (int f2 = 0; f2 < 3; ++f2)
      for (int c = 0; c < 2; ++c)
        A.block(f * 2 * m + c * m, f2 * 2 * m + c * m, m, m) =
            comp.block(f * m, f2 * m, m, m);
  return A;
}

Eigen::Vector2d cell_mean_velocity(const Mesh2D& mesh, const FormsContext& ctx,
                                   int cell, const Eigen::VectorXd& vel_coeffs) {
  const CellGeometry g = cell_geometry(mesh, cell);
  const int nb = ctx.nvel();
  const Eigen::VectorXd ints = ctx.vel_values * (g.detJ * ctx.cell_rule.weights);
  const double area = 0.5 * g.detJ;
  return {vel_coeffs.head(nb).dot(ints) / area, vel_coeffs.tail(nb).dot(ints) / area};
}

double cell_mean_pressure(const Mesh2D& mesh, const FormsContext& ctx, int cell,
                          const Eigen::VectorXd& pres_coeffs) {
  const CellGeometry g = cell_geometry(mesh, cell);
  const Eigen::VectorXd ints = ctx.pres_values * (g.detJ * ctx.cell_rule.weights);
  return pres_coeffs.dot(ints) / (0.5 * g.detJ);
}

Eigen::VectorXd integrate_velocity_source(
    const Mesh2D& mesh, const FormsContext& ctx, int cell,
    const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& f) {
  const CellGeometry g = cell_geometry(mesh, cell);
  const int nb = ctx.nvel();
  const int q = ctx.cell_rule.size();
  Eigen::VectorXd fx(q), fy(q);
  for (int i = 0; i < q; ++i) {
    const Eigen::Vector2d v =
        f(g.to_phys(ctx.cell_rule.points.row(i).transpose()));
    fx[i] = v.x();
    fy[i] = v.y();
  }
  const Eigen::VectorXd w = g.detJ * ctx.cell_rule.weights;
  Eigen::VectorXd out(2 * nb);
  out.head(nb) = ctx.vel_values * w.cwiseProduct(fx);
  out.tail(nb) = ctx.vel_values * w.cwiseProduct(fy);
  return out;
}

Eigen::VectorXd integrate_pressure_source(
    const Mesh2D& mesh, const FormsContext& ctx, int cell,
    const std::function<double(const Eigen::Vector2d&)>& f) {
  const CellGeometry g = cell_geometry(mesh, cell);
  const int q = ctx.cell_rule.size();
  Eigen::VectorXd fv(q);
  for (int i = 0; i < q; ++i)
    fv[i] = f(g.to_phys(ctx.cell_rule.points.row(i).transpose()));
  return ctx.pres_values * (g.detJ * ctx.cell_rule.weights).cwiseProduct(fv);
}

namespace {

Eigen::VectorXd face_rule_eval(const Mesh2D& mesh, const FormsContext& ctx, int face,
                               const std::function<double(const Eigen::Vector2d&)>& g) {
  const Face& f = mesh.faces[face];
  const Eigen::Vector2d a = mesh.vertices[f.v[0]];
  const Eigen::Vector2d b = mesh.vertices[f.v[1]];
  const int qf = ctx.edge_rule.size();
  Eigen::VectorXd vals(qf);
  for (int i = 0; i < qf; ++i)
    vals[i] = g(a + ctx.edge_rule.points(i, 0) * (b - a));
  return vals;
}

}  // namespace

Eigen::VectorXd integrate_face_scalar(
    const Mesh2D& mesh, const FormsContext& ctx, int face,
    const std::function<double(const Eigen::Vector2d&)>& g) {
  const Eigen::VectorXd vals = face_rule_eval(mesh, ctx, face, g);
  const Eigen::MatrixXd psi = ctx.face_basis.values(ctx.edge_rule.points.col(0));
  return mesh.face_length(face) * (psi * ctx.edge_rule.weights.cwiseProduct(vals));
}

Eigen::VectorXd project_face_scalar(
    const Mesh2D& mesh, const FormsContext& ctx, int face,
    const std::function<double(const Eigen::Vector2d&)>& g) {
  // Reference mass is the identity, so coefficients are reference integrals.
  const Eigen::VectorXd vals = face_rule_eval(mesh, ctx, face, g);
  const Eigen::MatrixXd psi = ctx.face_basis.values(ctx.edge_rule.points.col(0));
  return psi * ctx.edge_rule.weights.cwiseProduct(vals);
}

Eigen::VectorXd project_cell_velocity(
    const Mesh2D& mesh, const FormsContext& ctx, int cell,
    const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& f) {
  const CellGeometry g = cell_geometry(mesh, cell);
  const int nb = ctx.nvel();
  const int q = ctx.cell_rule.size();
  Eigen::VectorXd fx(q), fy(q);
  for (int i = 0; i < q; ++i) {
    const Eigen::Vector2d v =
        f(g.to_phys(ctx.cell_rule.points.row(i).transpose()));
    fx[i] = v.x();
    fy[i] = v.y();
  }
  Eigen::VectorXd out(2 * nb);
  out.head(nb) = ctx.vel_values * ctx.cell_rule.weights.cwiseProduct(fx);
  out.tail(nb) = ctx.vel_values * ctx.cell_rule.weights.cwiseProduct(fy);
  return out;
}

Eigen::VectorXd project_cell_pressure(
    const Mesh2D& mesh, const FormsContext& ctx, int cell,
    const std::function<double(const Eigen::Vector2d&)>& f) {
  const CellGeometry g = cell_geometry(mesh, cell);
  const int q = ctx.cell_rule.size();
  Eigen::VectorXd fv(q);
  for (int i = 0; i < q; ++i)
    fv[i] = f(g.to_phys(ctx.cell_rule.points.row(i).transpose()));
  return ctx.pres_values * ctx.cell_rule.weights.cwiseProduct(fv);
}

}  // namespace sdhdg
