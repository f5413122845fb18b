#include "spinscat/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace spinscat {

namespace {

constexpr double kPi = 3.14159265358979323846;

TriangleMesh unit_icosahedron() {
  const double p = (1.0 + std::sqrt(5.0)) / 2.0;
  TriangleMesh m;
  m.vertices = {{-1, p, 0}, {1, p, 0},   {-1, -p, 0}, {1, -p, 0},
                {0, -1, p}, {0, 1, p},   {0, -1, -p}, {0, 1, -p},
                {p, 0, -1}, {p, 0, 1},   {-p, 0, -1}, {-p, 0, 1}};
  for (auto& v : m.vertices) v.normalize();
  m.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                 {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                 {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                 {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  m.analytic = true;
  return m;
}

void subdivide(TriangleMesh& m) {
  std::map<std::pair<int, int>, int> cache;
  std::vector<std::array<int, 3>> out;
  out.reserve(m.triangles.size() * 4);
  auto mid = [&](int i, int j) {
    std::pair<int, int> key = std::minmax(i, j);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    int idx = static_cast<int>(m.vertices.size());
    m.vertices.push_back(m.lift(0.5 * (m.vertices[i] + m.vertices[j])));
    cache.emplace(key, idx);
    return idx;
  };
  for (const auto& t : m.triangles) {
    int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
    out.push_back({t[0], ab, ca});
    out.push_back({ab, t[1], bc});
    out.push_back({ca, bc, t[2]});
    out.push_back({ab, bc, ca});
  }
  m.triangles = std::move(out);
}

TriangleMesh analytic_sphere_image(int subdivisions, const Eigen::Matrix3d& A,
                                   const Vec3& b) {
  TriangleMesh m = unit_icosahedron();
  for (int s = 0; s < subdivisions; ++s) subdivide(m);
  for (auto& v : m.vertices) v = A * v + b;
  m.map_A = A;
  m.map_b = b;
  return m;
}

double longest_edge(const std::array<Vec3, 3>& c) {
  return std::max({(c[1] - c[0]).norm(), (c[2] - c[1]).norm(),
                   (c[0] - c[2]).norm()});
}

}  // namespace

double TriangleMesh::area() const {
  double s = 0.0;
  for (const auto& t : triangles)
    s += 0.5 * (vertices[t[1]] - vertices[t[0]])
                   .cross(vertices[t[2]] - vertices[t[0]])
                   .norm();
  return s;
}

double TriangleMesh::signed_volume() const {
  double v = 0.0;
  for (const auto& t : triangles)
    v += vertices[t[0]].dot(vertices[t[1]].cross(vertices[t[2]])) / 6.0;
  return v;
}

Vec3 TriangleMesh::lift(const Vec3& p) const {
  if (!analytic) return p;
  const Vec3 u = (map_A.inverse() * (p - map_b)).normalized();
  return map_A * u + map_b;
}

Vec3 TriangleMesh::surface_normal(const Vec3& p) const {
  if (!analytic)
    throw std::logic_error("surface_normal: mesh has no analytic surface");
  const Vec3 u = (map_A.inverse() * (p - map_b)).normalized();
  const Eigen::Matrix3d cof =
      map_A.determinant() * map_A.inverse().transpose();
  return (cof * u).normalized();
}

TriangleMesh icosphere(int subdivisions, double radius, const Vec3& center) {
  return analytic_sphere_image(
      subdivisions, radius * Eigen::Matrix3d::Identity(), center);
}

TriangleMesh ellipsoid(int subdivisions, const Vec3& semiaxes,
                       const Vec3& center) {
  if (!(semiaxes.minCoeff() > 0))
    throw std::invalid_argument("ellipsoid: semiaxes must be positive");
  return analytic_sphere_image(
      subdivisions, Eigen::Matrix3d(semiaxes.asDiagonal()), center);
}

void validate_mesh(TriangleMesh& mesh) {
  if (mesh.triangles.empty())
    throw std::runtime_error("mesh validation: no triangles");
  // undirected edge -> uses as (triangle, runs-low-to-high)
  std::map<std::pair<int, int>, std::vector<std::pair<int, bool>>> edges;
  const int nv = static_cast<int>(mesh.vertices.size());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tr = mesh.triangles[t];
    for (int e = 0; e < 3; ++e) {
      const int a = tr[e], b = tr[(e + 1) % 3];
      if (a < 0 || b < 0 || a >= nv || b >= nv)
        throw std::runtime_error("mesh validation: vertex index out of range "
                                 "in triangle " +
                                 std::to_string(t));
      if (a == b)
        throw std::runtime_error("mesh validation: degenerate edge in "
                                 "triangle " +
                                 std::to_string(t));
      edges[std::minmax(a, b)].push_back({t, a < b});
    }
  }
  for (const auto& [key, uses] : edges) {
    const std::string ename = "(" + std::to_string(key.first) + ", " +
                              std::to_string(key.second) + ")";
    if (uses.size() != 2)
      throw std::runtime_error(
          "mesh validation: edge " + ename + " belongs to " +
          std::to_string(uses.size()) +
          " triangle(s) instead of 2; mesh is not watertight");
    if (uses[0].second == uses[1].second)
      throw std::runtime_error(
          "mesh validation: inconsistent orientation at edge " + ename +
          " between triangles " + std::to_string(uses[0].first) + " and " +
          std::to_string(uses[1].first));
  }
  if (mesh.signed_volume() < 0) {
    std::cerr << "mesh validation: signed volume is negative; flipping "
                 "orientation outward\n";
    for (auto& tr : mesh.triangles) std::swap(tr[1], tr[2]);
  }
}

TriangleMesh load_obj(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_obj: cannot open " + path);
  TriangleMesh m;
  std::vector<std::vector<int>> faces;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag)) continue;
    if (tag == "v") {
      Vec3 v;
      if (!(ss >> v[0] >> v[1] >> v[2]))
        throw std::runtime_error("load_obj: malformed vertex at line " +
                                 std::to_string(lineno));
      m.vertices.push_back(v);
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string tok;
      while (ss >> tok) {
        const std::string head = tok.substr(0, tok.find('/'));
        int v = 0;
        try {
          v = std::stoi(head);
        } catch (...) {
          v = 0;
        }
        if (v <= 0)
          throw std::runtime_error("load_obj: bad face index '" + tok +
                                   "' at line " + std::to_string(lineno));
        idx.push_back(v - 1);
      }
      if (idx.size() < 3)
        throw std::runtime_error(
            "load_obj: face with fewer than 3 vertices at line " +
            std::to_string(lineno));
      faces.push_back(std::move(idx));
    }
    // every other record type is ignored
  }
  for (const auto& f : faces)
    for (size_t i = 1; i + 1 < f.size(); ++i)
      m.triangles.push_back({f[0], f[i], f[i + 1]});
  validate_mesh(m);
  return m;
}

void save_obj(const TriangleMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_obj: cannot open " + path);
  char buf[128];
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v[0], v[1], v[2]);
    out << buf;
  }
  for (const auto& t : mesh.triangles)
    out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  if (!out) throw std::runtime_error("save_obj: write failed for " + path);
}

double PanelRule::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

void PanelRule::append(const PanelRule& other) {
  points.insert(points.end(), other.points.begin(), other.points.end());
  weights.insert(weights.end(), other.weights.begin(), other.weights.end());
  normals.insert(normals.end(), other.normals.begin(), other.normals.end());
}

PanelRule panel_children(const TriangleMesh& mesh, int tri, int levels) {
  struct Tri {
    Vec3 a, b, c;
  };
  const auto co = mesh.corners(tri);
  std::vector<Tri> tris{{co[0], co[1], co[2]}};
  for (int l = 0; l < levels; ++l) {
    std::vector<Tri> next;
    next.reserve(tris.size() * 4);
    for (const Tri& t : tris) {
      const Vec3 ab = mesh.lift(0.5 * (t.a + t.b));
      const Vec3 bc = mesh.lift(0.5 * (t.b + t.c));
      const Vec3 ca = mesh.lift(0.5 * (t.c + t.a));
      next.push_back({t.a, ab, ca});
      next.push_back({ab, t.b, bc});
      next.push_back({ca, bc, t.c});
      next.push_back({ab, bc, ca});
    }
    tris = std::move(next);
  }
  PanelRule r;
  r.points.reserve(tris.size());
  r.weights.reserve(tris.size());
  r.normals.reserve(tris.size());
  for (const Tri& t : tris) {
    const Vec3 cr = (t.b - t.a).cross(t.c - t.a);
    const double n2 = cr.norm();
    r.points.push_back((t.a + t.b + t.c) / 3.0);
    r.weights.push_back(0.5 * n2);
    r.normals.push_back(cr / n2);
  }
  return r;
}

QuadratureSurface quadrature_from_mesh(const TriangleMesh& mesh) {
  QuadratureSurface q;
  q.mesh = mesh;
  const int nt = mesh.num_triangles();
  q.nodes.resize(nt);
  q.normals.resize(nt);
  q.weights.resize(nt);
  q.panel_diam.resize(nt);
  for (int t = 0; t < nt; ++t) {
    const auto co = mesh.corners(t);
    const Vec3 cr = (co[1] - co[0]).cross(co[2] - co[0]);
    const double flat_area = 0.5 * cr.norm();
    if (!(flat_area > 0.0))
      throw std::runtime_error("quadrature_from_mesh: degenerate triangle " +
                               std::to_string(t));
    const Vec3 cen = (co[0] + co[1] + co[2]) / 3.0;
    q.panel_diam[t] = longest_edge(co);
    if (mesh.analytic) {
      q.nodes[t] = mesh.lift(cen);
      q.normals[t] = mesh.surface_normal(q.nodes[t]);
      q.weights[t] = panel_children(mesh, t, 3).total_weight();
    } else {
      q.nodes[t] = cen;
      q.normals[t] = cr / (2.0 * flat_area);
      q.weights[t] = flat_area;
    }
  }
  return q;
}

double QuadratureSurface::area() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

LocalRefinement refine_panels_near(const QuadratureSurface& surface,
                                   const Vec3& x, double r, int levels) {
  if (levels < 0 || levels > 6)
    throw std::invalid_argument("refine_panels_near: levels must be in 0..6");
  LocalRefinement out;
  for (int j = 0; j < surface.size(); ++j) {
    if ((surface.nodes[j] - x).norm() >= r) continue;
    out.panels.push_back(j);
    out.rule.append(panel_children(surface.mesh, j, levels));
  }
  return out;
}

void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw std::invalid_argument("gauss_legendre_01: n must be >= 1");
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 200; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = 0.5 * (1.0 - z);
    x[n - 1 - i] = 0.5 * (1.0 + z);
    w[i] = w[n - 1 - i] = 1.0 / ((1.0 - z * z) * pp * pp);
  }
}

PanelRule polar_self_rule(const TriangleMesh& mesh, int tri,
                          const SelfRuleParams& prm) {
  const bool curved = mesh.analytic;
  const auto co = mesh.corners(tri);
  Vec3 v[3];
  Eigen::Matrix3d cof = Eigen::Matrix3d::Identity();
  if (curved) {
    const Eigen::Matrix3d Ainv = mesh.map_A.inverse();
    for (int i = 0; i < 3; ++i)
      v[i] = (Ainv * (co[i] - mesh.map_b)).normalized();
    cof = mesh.map_A.determinant() * Ainv.transpose();
  } else {
    for (int i = 0; i < 3; ++i) v[i] = co[i];
  }

  const Vec3 c0 = (v[0] + v[1] + v[2]) / 3.0;
  const Vec3 nf = (v[1] - v[0]).cross(v[2] - v[0]).normalized();
  Vec3 u1 = v[0] - c0;
  u1 -= u1.dot(nf) * nf;
  u1.normalize();
  const Vec3 u2 = nf.cross(u1);

  Eigen::Vector2d p2[3];
  for (int i = 0; i < 3; ++i)
    p2[i] = Eigen::Vector2d((v[i] - c0).dot(u1), (v[i] - c0).dot(u2));

  // distance from the centroid to the panel boundary along direction t
  auto bound = [&](double t) {
    const double dx = std::cos(t), dy = std::sin(t);
    double best = std::numeric_limits<double>::infinity();
    for (int e = 0; e < 3; ++e) {
      const Eigen::Vector2d a = p2[e], ev = p2[(e + 1) % 3] - p2[e];
      const double den = dx * ev[1] - dy * ev[0];
      if (std::abs(den) < 1e-14) continue;
      const double s = (a[0] * ev[1] - a[1] * ev[0]) / den;
      const double tt = (a[0] * dy - a[1] * dx) / den;
      if (s > 1e-12 && tt >= -1e-9 && tt <= 1.0 + 1e-9) best = std::min(best, s);
    }
    return best;
  };
  // metric factor: surface distance from the node ~ lambda(t) * r
  const Vec3 n0 = c0.normalized();
  const double c0n = c0.norm();
  auto lam_of = [&](double t) {
    if (!curved) return 1.0;
    const Vec3 d3 = std::cos(t) * u1 + std::sin(t) * u2;
    return ((d3 - n0 * n0.dot(d3)) / c0n).norm();
  };

  // angles: Gauss-Legendre per sector between vertex directions (mod pi),
  // then mirrored by +pi so rays come in centered pairs
  std::vector<double> vang(3);
  for (int i = 0; i < 3; ++i) {
    double a = std::fmod(std::atan2(p2[i][1], p2[i][0]), kPi);
    if (a < 0) a += kPi;
    vang[i] = a;
  }
  std::sort(vang.begin(), vang.end());
  const double brk[4] = {vang[0], vang[1], vang[2], vang[0] + kPi};
  std::vector<double> gq, gw;
  gauss_legendre_01(prm.nang, gq, gw);
  std::vector<double> half_t, half_w;
  for (int s = 0; s < 3; ++s) {
    const double a0 = brk[s], a1 = brk[s + 1];
    if (a1 - a0 < 1e-12) continue;
    for (int q = 0; q < prm.nang; ++q) {
      half_t.push_back(a0 + (a1 - a0) * gq[q]);
      half_w.push_back(gw[q] * (a1 - a0));
    }
  }
  const int nh = static_cast<int>(half_t.size());
  std::vector<double> full_t(2 * nh), full_w(2 * nh);
  for (int m = 0; m < nh; ++m) {
    full_t[m] = half_t[m];
    full_t[nh + m] = half_t[m] + kPi;
    full_w[m] = full_w[nh + m] = half_w[m];
  }

  std::vector<double> g(2 * nh), lam(2 * nh);
  double hole = std::numeric_limits<double>::infinity();
  for (int m = 0; m < 2 * nh; ++m) {
    g[m] = bound(full_t[m]);
    lam[m] = lam_of(full_t[m]);
    hole = std::min(hole, lam[m] * g[m]);
  }
  hole *= prm.hole_scale;

  std::vector<double> tq, wq, tq2, wq2;
  gauss_legendre_01(prm.nr, tq, wq);
  gauss_legendre_01(prm.nr2, tq2, wq2);

  PanelRule out;
  const int per_ray = prm.nr + prm.nr2;
  out.points.reserve(2 * nh * per_ray);
  out.weights.reserve(2 * nh * per_ray);
  out.normals.reserve(2 * nh * per_ray);
  std::vector<double> rmid(per_ray), wmid(per_ray);
  for (int m = 0; m < 2 * nh; ++m) {
    const double lo = hole / lam[m], hi = g[m], mid = prm.split * hi;
    const double lg = std::log(mid / lo);
    for (int q = 0; q < prm.nr; ++q) {
      rmid[q] = lo * std::pow(mid / lo, tq[q]);
      wmid[q] = wq[q] * rmid[q] * lg;
    }
    for (int q = 0; q < prm.nr2; ++q) {
      rmid[prm.nr + q] = mid + (hi - mid) * tq2[q];
      wmid[prm.nr + q] = wq2[q] * (hi - mid);
    }
    const Vec3 d3 = std::cos(full_t[m]) * u1 + std::sin(full_t[m]) * u2;
    for (int q = 0; q < per_ray; ++q) {
      const double r = rmid[q];
      const Vec3 p = c0 + r * d3;
      const double wf = wmid[q] * r * full_w[m];
      if (curved) {
        const double pn = p.norm();
        const Vec3 y = p / pn;
        const double wl = wf * p.dot(nf) / (pn * pn * pn);
        const Vec3 cn = cof * y;
        const double j = cn.norm();
        out.points.push_back(mesh.map_A * y + mesh.map_b);
        out.weights.push_back(wl * j);
        out.normals.push_back(cn / j);
      } else {
        out.points.push_back(p);
        out.weights.push_back(wf);
        out.normals.push_back(nf);
      }
    }
  }
  return out;
}

}  // namespace spinscat
