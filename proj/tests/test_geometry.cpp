#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "spinscat/geometry.hpp"

using namespace spinscat;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

// exact area of a spherical triangle on the unit sphere
double solid_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double num = std::abs(a.dot(b.cross(c)));
  const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
  return 2.0 * std::atan2(num, den);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

const char* kCubeObj =
    "v -1 -1 -1\nv 1 -1 -1\nv 1 1 -1\nv -1 1 -1\n"
    "v -1 -1 1\nv 1 -1 1\nv 1 1 1\nv -1 1 1\n"
    "f 1 4 3 2\nf 5 6 7 8\nf 1 2 6 5\nf 2 3 7 6\nf 3 4 8 7\nf 4 1 5 8\n";

}  // namespace

TEST_CASE("icosphere counts, area, volume") {
  TriangleMesh m2 = icosphere(2);
  CHECK(m2.num_triangles() == 320);

  TriangleMesh m3 = icosphere(3);
  CHECK(m3.num_triangles() == 1280);
  CHECK(std::abs(m3.area() - 4 * kPi) <= 0.005 * 4 * kPi);
  CHECK(std::abs(m3.signed_volume() - 4 * kPi / 3) <= 0.01 * 4 * kPi / 3);

  // radius/center: signed volume of closed surfaces is translation invariant
  TriangleMesh ms = icosphere(2, 0.5, Vec3(1, 2, 3));
  TriangleMesh ms0 = icosphere(2, 0.5);
  CHECK(std::abs(ms.signed_volume() - ms0.signed_volume()) < 1e-10);
  CHECK(std::abs(ms0.signed_volume() - 4 * kPi / 3 * 0.125) <=
        0.05 * 4 * kPi / 3 * 0.125);
}

TEST_CASE("ellipsoid") {
  TriangleMesh e1 = ellipsoid(2, Vec3(1, 1, 1), Vec3(0.5, 0, 0));
  TriangleMesh i1 = icosphere(2, 1.0, Vec3(0.5, 0, 0));
  REQUIRE(e1.vertices.size() == i1.vertices.size());
  for (size_t i = 0; i < e1.vertices.size(); ++i)
    CHECK((e1.vertices[i] - i1.vertices[i]).norm() == 0.0);

  const Vec3 ax(1.5, 1.0, 0.75);
  TriangleMesh e3 = ellipsoid(3, ax);
  const double vol = 4 * kPi / 3 * ax.prod();
  CHECK(std::abs(e3.signed_volume() - vol) <= 0.02 * vol);

  // outward normals: positive flux of the radial field through every face
  const Vec3 c(0.2, -0.1, 0.4);
  TriangleMesh ec = ellipsoid(2, ax, c);
  for (int t = 0; t < ec.num_triangles(); ++t) {
    auto co = ec.corners(t);
    Vec3 n = (co[1] - co[0]).cross(co[2] - co[0]);
    Vec3 cen = (co[0] + co[1] + co[2]) / 3.0;
    CHECK(n.dot(cen - c) > 0.0);
  }

  CHECK_THROWS_AS(ellipsoid(1, Vec3(1, 0, 1)), std::invalid_argument);
}

TEST_CASE("obj round trip") {
  TriangleMesh m = icosphere(1, 1.0, Vec3(0.1, 0.2, 0.3));
  const std::string path = temp_path("spinscat_roundtrip.obj");
  save_obj(m, path);
  TriangleMesh r = load_obj(path);
  REQUIRE(r.vertices.size() == m.vertices.size());
  REQUIRE(r.triangles.size() == m.triangles.size());
  for (size_t i = 0; i < m.vertices.size(); ++i) {
    CHECK(r.vertices[i][0] == m.vertices[i][0]);
    CHECK(r.vertices[i][1] == m.vertices[i][1]);
    CHECK(r.vertices[i][2] == m.vertices[i][2]);
  }
  for (size_t i = 0; i < m.triangles.size(); ++i)
    CHECK(r.triangles[i] == m.triangles[i]);
  CHECK_FALSE(r.analytic);
}

TEST_CASE("obj validation") {
  const std::string cube = temp_path("spinscat_cube.obj");
  write_file(cube, kCubeObj);
  TriangleMesh c = load_obj(cube);
  CHECK(c.num_triangles() == 12);  // quads fan-triangulated
  CHECK(std::abs(c.signed_volume() - 8.0) < 1e-12);

  // open mesh: drop one face
  const std::string open_path = temp_path("spinscat_open.obj");
  {
    std::string txt(kCubeObj);
    txt = txt.substr(0, txt.rfind("f "));
    write_file(open_path, txt);
  }
  bool threw = false;
  try {
    load_obj(open_path);
  } catch (const std::runtime_error& e) {
    threw = true;
    CHECK(std::string(e.what()).find("watertight") != std::string::npos);
    CHECK(std::string(e.what()).find("(") != std::string::npos);
  }
  CHECK(threw);

  // inward orientation: every face reversed -> auto-flip, positive volume
  const std::string inward_path = temp_path("spinscat_inward.obj");
  {
    std::string txt =
        "v -1 -1 -1\nv 1 -1 -1\nv 1 1 -1\nv -1 1 -1\n"
        "v -1 -1 1\nv 1 -1 1\nv 1 1 1\nv -1 1 1\n"
        "f 2 3 4 1\nf 8 7 6 5\nf 5 6 2 1\nf 6 7 3 2\nf 7 8 4 3\nf 8 5 1 4\n";
    write_file(inward_path, txt);
  }
  TriangleMesh inv = load_obj(inward_path);
  CHECK(inv.signed_volume() > 0.0);

  // inconsistent orientation: one face flipped
  const std::string bad_path = temp_path("spinscat_badorient.obj");
  {
    std::string txt(kCubeObj);
    txt.replace(txt.find("f 1 4 3 2"), 9, "f 2 3 4 1");
    write_file(bad_path, txt);
  }
  threw = false;
  try {
    load_obj(bad_path);
  } catch (const std::runtime_error& e) {
    threw = true;
    CHECK(std::string(e.what()).find("orientation") != std::string::npos);
  }
  CHECK(threw);

  CHECK_THROWS_AS(load_obj(temp_path("spinscat_missing.obj")),
                  std::runtime_error);
}

TEST_CASE("quadrature from mesh") {
  QuadratureSurface q = quadrature_from_mesh(icosphere(2));
  CHECK(q.size() == 320);
  CHECK(std::abs(q.area() - 4 * kPi) <= 0.01 * 4 * kPi);

  Vec3 flux = Vec3::Zero();
  for (int j = 0; j < q.size(); ++j) {
    CHECK(std::abs(q.normals[j].norm() - 1.0) < 1e-14);
    CHECK(q.weights[j] > 0.0);
    // on-surface collocation with exact normals for the sphere
    CHECK(std::abs(q.nodes[j].norm() - 1.0) < 1e-14);
    CHECK((q.normals[j] - q.nodes[j]).norm() < 1e-13);
    flux += q.weights[j] * q.normals[j];
  }
  CHECK(flux.norm() <= 1e-3 * q.area());

  // ellipsoid: divergence theorem  sum w n.(x-c) = 3 V = 4 pi A B C
  const Vec3 ax(1.5, 1.0, 0.75), c(0.3, 0.0, -0.2);
  QuadratureSurface qe = quadrature_from_mesh(ellipsoid(3, ax, c));
  double f = 0.0;
  for (int j = 0; j < qe.size(); ++j)
    f += qe.weights[j] * qe.normals[j].dot(qe.nodes[j] - c);
  CHECK(std::abs(f - 4 * kPi * ax.prod()) <= 0.01 * 4 * kPi * ax.prod());

  // flat mesh: closed surfaces have exactly zero vector area
  const std::string cube = temp_path("spinscat_cube2.obj");
  write_file(cube, kCubeObj);
  QuadratureSurface qc = quadrature_from_mesh(load_obj(cube));
  Vec3 fc = Vec3::Zero();
  for (int j = 0; j < qc.size(); ++j) fc += qc.weights[j] * qc.normals[j];
  CHECK(fc.norm() < 1e-13);
  CHECK(std::abs(qc.area() - 24.0) < 1e-12);

  // degenerate triangle rejected
  TriangleMesh bad;
  bad.vertices = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
  bad.triangles = {{0, 1, 2}};
  CHECK_THROWS_AS(quadrature_from_mesh(bad), std::runtime_error);
}

TEST_CASE("panel refinement") {
  const std::string cube = temp_path("spinscat_cube3.obj");
  write_file(cube, kCubeObj);
  QuadratureSurface qc = quadrature_from_mesh(load_obj(cube));

  // L = 0 returns the panels unchanged
  LocalRefinement r0 = refine_panels_near(qc, qc.nodes[0], 1e-6, 0);
  REQUIRE(r0.panels.size() == 1);
  CHECK(r0.panels[0] == 0);
  CHECK((r0.rule.points[0] - qc.nodes[0]).norm() < 1e-15);
  CHECK(std::abs(r0.rule.weights[0] - qc.weights[0]) < 1e-15);
  CHECK((r0.rule.normals[0] - qc.normals[0]).norm() < 1e-15);

  // flat subdivision preserves areas exactly
  for (int L = 1; L <= 4; ++L) {
    PanelRule ch = panel_children(qc.mesh, 3, L);
    CHECK(ch.size() == (1 << (2 * L)));
    CHECK(std::abs(ch.total_weight() - qc.weights[3]) <= 1e-12);
  }

  // curved children converge to the panel weight (level-3 sum by definition)
  QuadratureSurface qs = quadrature_from_mesh(icosphere(2));
  CHECK(std::abs(panel_children(qs.mesh, 7, 3).total_weight() -
                 qs.weights[7]) < 1e-15);
  CHECK(std::abs(panel_children(qs.mesh, 7, 5).total_weight() -
                 qs.weights[7]) <= 1e-3 * qs.weights[7]);

  // integrating 1/|y-x| on a panel adjacent to x: Cauchy differences shrink
  // monotonically and approach a brute-force reference
  const Vec3 x = qc.mesh.vertices[qc.mesh.triangles[0][0]];
  auto integrate = [&](const PanelRule& r) {
    double s = 0.0;
    for (int i = 0; i < r.size(); ++i)
      s += r.weights[i] / (r.points[i] - x).norm();
    return s;
  };
  double I[6];
  for (int L = 1; L <= 5; ++L)
    I[L] = integrate(panel_children(qc.mesh, 0, L));
  const double ref = integrate(panel_children(qc.mesh, 0, 9));
  for (int L = 1; L <= 3; ++L)
    CHECK(std::abs(I[L + 2] - I[L + 1]) < std::abs(I[L + 1] - I[L]));
  CHECK(std::abs(I[5] - ref) < 0.25 * std::abs(I[1] - ref));

  CHECK_THROWS_AS(refine_panels_near(qc, qc.nodes[0], 1.0, 7),
                  std::invalid_argument);
}

TEST_CASE("affine integration order on refining icospheres") {
  auto f = [](const Vec3& x) { return 1.0 + 2 * x[0] + 3 * x[1] - x[2]; };
  double err[5];
  for (int s = 1; s <= 4; ++s) {
    QuadratureSurface q = quadrature_from_mesh(icosphere(s));
    double acc = 0.0;
    for (int j = 0; j < q.size(); ++j) acc += q.weights[j] * f(q.nodes[j]);
    err[s] = std::abs(acc - 4 * kPi);
  }
  const double order = std::log2(err[1] / err[4]) / 3.0;
  CHECK(order >= 1.8);
}

TEST_CASE("polar self rule") {
  QuadratureSurface q = quadrature_from_mesh(icosphere(2));
  const int j = 144;
  auto co = q.mesh.corners(j);
  PanelRule self = polar_self_rule(q.mesh, j);

  // samples on the surface, with exact normals, positive weights
  for (int i = 0; i < self.size(); ++i) {
    CHECK(std::abs(self.points[i].norm() - 1.0) < 1e-13);
    CHECK((self.normals[i] - self.points[i]).norm() < 1e-13);
    CHECK(self.weights[i] > 0.0);
    // the hole: no sample closer to the node than the excluded disc
    CHECK((self.points[i] - q.nodes[j]).norm() > 1e-5);
  }

  // area: matches the exact spherical-triangle area (hole is negligible)
  const double exact = solid_angle(co[0], co[1], co[2]);
  CHECK(std::abs(self.total_weight() - exact) <= 1e-4 * exact);

  // smooth integrands agree with deep plain refinement
  const Vec3 d = Vec3(0.3, -0.5, 0.2);
  auto smooth = [&](const PanelRule& r) {
    double s = 0.0;
    for (int i = 0; i < r.size(); ++i)
      s += r.weights[i] * std::exp(r.points[i].dot(d));
    return s;
  };
  CHECK(std::abs(smooth(self) - smooth(panel_children(q.mesh, j, 6))) <=
        1e-3 * std::abs(smooth(self)));

  // principal-value stability: the strongly singular odd integrand
  // (y - x)/|y - x|^3 x n(y) integrated by the paired rule is insensitive to
  // the hole radius
  auto cpv_biv = [&](double hs) {
    SelfRuleParams prm;
    prm.hole_scale = hs;
    PanelRule r = polar_self_rule(q.mesh, j, prm);
    CVec3 acc = CVec3::Zero();
    for (int i = 0; i < r.size(); ++i) {
      const Vec3 z = r.points[i] - q.nodes[j];
      const double rn = z.norm();
      const Vec3 gp = z / (4 * kPi * rn * rn * rn);  // grad phi_0 (y - x)
      acc += r.weights[i] * cross3(gp.cast<cplx>(), r.normals[i].cast<cplx>());
    }
    return acc;
  };
  const CVec3 b1 = cpv_biv(0.005), b2 = cpv_biv(0.00125);
  CHECK((b1 - b2).norm() <= 5e-3 * std::max(1.0, b1.norm()));

  // flat panels: rule covers the flat area
  const std::string cube = temp_path("spinscat_cube4.obj");
  write_file(cube, kCubeObj);
  QuadratureSurface qc = quadrature_from_mesh(load_obj(cube));
  PanelRule fs = polar_self_rule(qc.mesh, 0);
  CHECK(std::abs(fs.total_weight() - qc.weights[0]) <= 1e-4 * qc.weights[0]);
  for (int i = 0; i < fs.size(); ++i)
    CHECK((fs.normals[i] - qc.normals[0]).norm() < 1e-13);
}

TEST_CASE("gauss legendre on the unit interval") {
  for (int n = 1; n <= 12; ++n) {
    std::vector<double> x, w;
    gauss_legendre_01(n, x, w);
    double s = 0.0;
    for (double wi : w) s += wi;
    CHECK(std::abs(s - 1.0) < 1e-14);
    for (int d = 0; d <= 2 * n - 1; ++d) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += w[i] * std::pow(x[i], d);
      CHECK(std::abs(acc - 1.0 / (d + 1)) < 1e-13);
    }
    for (int i = 0; i < n; ++i) {
      CHECK(x[i] > 0.0);
      CHECK(x[i] < 1.0);
      if (i) CHECK(x[i] > x[i - 1]);
    }
  }
  std::vector<double> x, w;
  CHECK_THROWS_AS(gauss_legendre_01(0, x, w), std::invalid_argument);
}
