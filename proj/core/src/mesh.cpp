#include "sdhdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sdhdg {

namespace {

constexpr double kInterfaceY = 0.5;
constexpr double kGeomTol = 1e-12;

bool near(double a, double b) { return std::abs(a - b) < kGeomTol; }

}  // namespace

bool Mesh2D::face_on_region(int face, Region r) const {
  const Face& f = faces[face];
  if (f.cls == FaceClass::Interface) return true;
  if (r == Region::Stokes)
    return f.cls == FaceClass::InteriorS || f.cls == FaceClass::GammaS;
  return f.cls == FaceClass::InteriorD || f.cls == FaceClass::GammaD;
}

double Mesh2D::face_length(int face) const {
  const Face& f = faces[face];
  return (vertices[f.v[1]] - vertices[f.v[0]]).norm();
}

Eigen::Vector2d Mesh2D::face_midpoint(int face) const {
  const Face& f = faces[face];
  return 0.5 * (vertices[f.v[0]] + vertices[f.v[1]]);
}

Eigen::Vector2d Mesh2D::outward_normal(int face, int cell) const {
  const Face& f = faces[face];
  Eigen::Vector2d d = vertices[f.v[1]] - vertices[f.v[0]];
  Eigen::Vector2d n(d.y(), -d.x());
  n.normalize();
  // Flip if n points toward the cell centroid.
  const auto& tri = cells[cell];
  Eigen::Vector2d centroid =
      (vertices[tri[0]] + vertices[tri[1]] + vertices[tri[2]]) / 3.0;
  if (n.dot(centroid - vertices[f.v[0]]) > 0.0) n = -n;
  return n;
}

int Mesh2D::count_faces(FaceClass cls) const {
  return static_cast<int>(
      std::count_if(faces.begin(), faces.end(),
                    [&](const Face& f) { return f.cls == cls; }));
}

int Mesh2D::count_cells(Region r) const {
  return static_cast<int>(std::count(cell_region.begin(), cell_region.end(), r));
}

void classify_faces(Mesh2D& mesh) {
  std::map<std::pair<int, int>, Face> edge_map;
  auto key = [](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& tri = mesh.cells[c];
    for (int e = 0; e < 3; ++e) {
      auto k = key(tri[(e + 1) % 3], tri[(e + 2) % 3]);
      auto it = edge_map.find(k);
      if (it == edge_map.end()) {
        Face f;
        f.v = {k.first, k.second};
        f.cell = {c, -1};
        edge_map.emplace(k, f);
      } else {
        if (it->second.cell[1] != -1)
          throw std::runtime_error("mesh: face shared by more than two cells");
        it->second.cell[1] = c;
      }
    }
  }

  mesh.faces.clear();
  mesh.faces.reserve(edge_map.size());
  for (auto& [k, f] : edge_map) {
    const Eigen::Vector2d a = mesh.vertices[f.v[0]];
    const Eigen::Vector2d b = mesh.vertices[f.v[1]];
    if (f.cell[1] == -1) {
      const Region r = mesh.cell_region[f.cell[0]];
      f.cls = (r == Region::Stokes) ? FaceClass::GammaS : FaceClass::GammaD;
    } else {
      const Region r0 = mesh.cell_region[f.cell[0]];
      const Region r1 = mesh.cell_region[f.cell[1]];
      if (r0 == r1) {
        f.cls = (r0 == Region::Stokes) ? FaceClass::InteriorS : FaceClass::InteriorD;
      } else {
        f.cls = FaceClass::Interface;
        if (!near(a.y(), kInterfaceY) || !near(b.y(), kInterfaceY))
          throw std::runtime_error("mesh: interface face off the line x2 = 1/2");
        if (r0 == Region::Darcy) std::swap(f.cell[0], f.cell[1]);
      }
    }
    mesh.faces.push_back(f);
  }

  // Invert: cell -> its three faces, local face i opposite local vertex i.
  std::map<std::pair<int, int>, int> face_ids;
  for (int i = 0; i < mesh.num_faces(); ++i)
    face_ids[{mesh.faces[i].v[0], mesh.faces[i].v[1]}] = i;
  mesh.cell_faces.assign(mesh.num_cells(), {-1, -1, -1});
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& tri = mesh.cells[c];
    for (int e = 0; e < 3; ++e)
      mesh.cell_faces[c][e] = face_ids.at(key(tri[(e + 1) % 3], tri[(e + 2) % 3]));
  }

  mesh.h_cell.assign(mesh.num_cells(), 0.0);
  mesh.h_max = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    double h = 0.0;
    for (int e = 0; e < 3; ++e) h = std::max(h, mesh.face_length(mesh.cell_faces[c][e]));
    mesh.h_cell[c] = h;
    mesh.h_max = std::max(mesh.h_max, h);
  }
}

void validate_mesh(const Mesh2D& mesh) {
  if (mesh.num_cells() == 0) throw std::runtime_error("mesh: empty");
  double area = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& tri = mesh.cells[c];
    const Eigen::Vector2d a = mesh.vertices[tri[0]];
    const Eigen::Vector2d b = mesh.vertices[tri[1]];
    const Eigen::Vector2d d = mesh.vertices[tri[2]];
    const double twice = (b.x() - a.x()) * (d.y() - a.y()) - (d.x() - a.x()) * (b.y() - a.y());
    if (twice <= 0.0) throw std::runtime_error("mesh: cell not counterclockwise");
    area += 0.5 * twice;

    // Every cell sits entirely inside one region.
    const double cy = (a.y() + b.y() + d.y()) / 3.0;
    const bool stokes = cy > kInterfaceY;
    if (stokes != (mesh.cell_region[c] == Region::Stokes))
      throw std::runtime_error("mesh: region tag disagrees with centroid");
    for (int v = 0; v < 3; ++v) {
      const double y = mesh.vertices[tri[v]].y();
      if (stokes ? (y < kInterfaceY - kGeomTol) : (y > kInterfaceY + kGeomTol))
        throw std::runtime_error("mesh: cell straddles the interface line");
    }
  }
  if (std::abs(area - 1.0) > 1e-10)
    throw std::runtime_error("mesh: total area differs from 1");

  // Euler relation for a simply connected planar triangulation: V - E + T = 1.
  if (mesh.num_vertices() - mesh.num_faces() + mesh.num_cells() != 1)
    throw std::runtime_error("mesh: Euler relation violated");

  for (int i = 0; i < mesh.num_faces(); ++i) {
    const Face& f = mesh.faces[i];
    if (f.cls == FaceClass::Interface) {
      if (f.cell[1] == -1 || mesh.cell_region[f.cell[0]] != Region::Stokes ||
          mesh.cell_region[f.cell[1]] != Region::Darcy)
        throw std::runtime_error("mesh: interface adjacency out of order");
      if (!near(mesh.vertices[f.v[0]].y(), kInterfaceY) ||
          !near(mesh.vertices[f.v[1]].y(), kInterfaceY))
        throw std::runtime_error("mesh: interface face off the line x2 = 1/2");
      // Normal out of the Stokes cell points down into the porous region.
      if (mesh.outward_normal(i, f.cell[0]).y() >= 0.0)
        throw std::runtime_error("mesh: interface normal not pointing into the porous region");
    }
    if ((f.cls == FaceClass::GammaS || f.cls == FaceClass::GammaD) && f.cell[1] != -1)
      throw std::runtime_error("mesh: boundary face with two cells");
  }
}

Mesh2D build_structured_mesh(int n, double perturb, std::uint64_t seed) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("build_structured_mesh: n must be even and >= 2");
  if (perturb < 0.0 || perturb > 0.2)
    throw std::invalid_argument("build_structured_mesh: perturb must lie in [0, 0.2]");

  Mesh2D mesh;
  mesh.n = n;
  const double h = 1.0 / n;
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };

  mesh.vertices.resize((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) mesh.vertices[vid(i, j)] = Eigen::Vector2d(i * h, j * h);

  if (perturb > 0.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const double amp = perturb * h;
    for (int j = 1; j < n; ++j) {
      for (int i = 1; i < n; ++i) {
        const double dx = amp * unit(rng);
        const double dy = amp * unit(rng);
        auto& v = mesh.vertices[vid(i, j)];
        v.x() += dx;
        if (j != n / 2) v.y() += dy;  // interface vertices slide along the line only
      }
    }
  }

  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      mesh.cells.push_back({a, b, c});
      mesh.cells.push_back({a, c, d});
      const Region r = (j < n / 2) ? Region::Darcy : Region::Stokes;
      mesh.cell_region.push_back(r);
      mesh.cell_region.push_back(r);
    }
  }

  classify_faces(mesh);
  validate_mesh(mesh);
  return mesh;
}

std::string mesh_to_json(const Mesh2D& mesh) {
  nlohmann::json j;
  j["n"] = mesh.n;
  auto& verts = j["vertices"] = nlohmann::json::array();
  for (const auto& v : mesh.vertices) verts.push_back({v.x(), v.y()});
  auto& cells = j["cells"] = nlohmann::json::array();
  for (const auto& c : mesh.cells) cells.push_back({c[0], c[1], c[2]});
  auto& regions = j["cell_region"] = nlohmann::json::array();
  for (Region r : mesh.cell_region) regions.push_back(r == Region::Stokes ? "stokes" : "darcy");
  static const char* names[] = {"interior_s", "interior_d", "interface", "gamma_s", "gamma_d"};
  auto& faces = j["faces"] = nlohmann::json::array();
  for (const auto& f : mesh.faces) {
    faces.push_back({{"v", {f.v[0], f.v[1]}},
                     {"cells", {f.cell[0], f.cell[1]}},
                     {"class", names[static_cast<int>(f.cls)]}});
  }
  return j.dump(2);
}

Mesh2D mesh_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  Mesh2D mesh;
  mesh.n = j.at("n").get<int>();
  for (const auto& v : j.at("vertices"))
    mesh.vertices.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
  for (const auto& c : j.at("cells"))
    mesh.cells.push_back({c.at(0).get<int>(), c.at(1).get<int>(), c.at(2).get<int>()});
  for (const auto& r : j.at("cell_region"))
    mesh.cell_region.push_back(r.get<std::string>() == "stokes" ? Region::Stokes
                                                                : Region::Darcy);
  // Faces are rebuilt rather than trusted; the stored list is for external consumers.
  classify_faces(mesh);
  validate_mesh(mesh);
  return mesh;
}

void save_mesh(const Mesh2D& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_mesh: cannot open " + path);
  out << mesh_to_json(mesh) << "\n";
}

Mesh2D load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_mesh: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return mesh_from_json(ss.str());
}

}  // namespace sdhdg
