#pragma once

#include <array>
#include <string>
#include <vector>

#include "spinscat/clifford.hpp"

namespace spinscat {

// Closed oriented triangle mesh. Analytic surfaces (icosphere, ellipsoid) are
// images of the unit sphere under x -> A x + b; midpoints created during
// refinement are re-lifted through that map so children follow the curved
// surface. Meshes loaded from OBJ files are flat (analytic = false).
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  bool analytic = false;
  Eigen::Matrix3d map_A = Eigen::Matrix3d::Identity();
  Vec3 map_b = Vec3::Zero();

  int num_triangles() const { return static_cast<int>(triangles.size()); }
  std::array<Vec3, 3> corners(int t) const {
    const auto& tr = triangles[t];
    return {vertices[tr[0]], vertices[tr[1]], vertices[tr[2]]};
  }
  double area() const;
  double signed_volume() const;
  // Projects a point near the surface onto it (analytic meshes only).
  Vec3 lift(const Vec3& p) const;
  // Outward unit normal of the analytic surface at a surface point.
  Vec3 surface_normal(const Vec3& p) const;
};

// 20 * 4^subdivisions triangles, vertices on the sphere, outward orientation.
TriangleMesh icosphere(int subdivisions, double radius = 1.0,
                       const Vec3& center = Vec3::Zero());
// Icosphere scaled anisotropically by the semiaxes.
TriangleMesh ellipsoid(int subdivisions, const Vec3& semiaxes,
                       const Vec3& center = Vec3::Zero());

// Wavefront OBJ subset: `v` and `f` records, 1-based indices, polygons
// fan-triangulated, everything else ignored. The mesh is validated: watertight
// (every edge shared by exactly two triangles), consistently oriented, and
// flipped to positive signed volume (with a warning) if loaded inward.
TriangleMesh load_obj(const std::string& path);
void save_obj(const TriangleMesh& mesh, const std::string& path);

// Validation used by load_obj, callable on any mesh. Throws on watertightness
// or orientation failures, naming the offending indices; flips the winding
// (warning on stderr) when the signed volume is negative.
void validate_mesh(TriangleMesh& mesh);

// A set of weighted surface samples with unit normals.
struct PanelRule {
  std::vector<Vec3> points;
  std::vector<double> weights;
  std::vector<Vec3> normals;
  int size() const { return static_cast<int>(points.size()); }
  double total_weight() const;
  void append(const PanelRule& other);
};

// Centroid-rule Nystrom data: one node per triangle. For analytic meshes the
// node is the centroid lifted onto the surface, the normal is exact, and the
// weight is the level-3 curved-children area sum; for flat meshes node /
// normal / weight are the flat centroid / face normal / area.
struct QuadratureSurface {
  TriangleMesh mesh;
  std::vector<Vec3> nodes;
  std::vector<Vec3> normals;
  std::vector<double> weights;
  std::vector<double> panel_diam;  // longest edge of the panel

  int size() const { return static_cast<int>(nodes.size()); }
  double area() const;
};

QuadratureSurface quadrature_from_mesh(const TriangleMesh& mesh);

// One panel subdivided 4^levels-fold: midpoint subdivision with curved
// re-lifting for analytic meshes, flat otherwise. Each child contributes its
// flat centroid / area / face normal.
PanelRule panel_children(const TriangleMesh& mesh, int tri, int levels);

// Refined quadrature for all panels whose node lies within radius r of x.
struct LocalRefinement {
  std::vector<int> panels;
  PanelRule rule;
};
LocalRefinement refine_panels_near(const QuadratureSurface& surface,
                                   const Vec3& x, double r, int levels);

// Disc-CPV polar rule on one panel for principal-value integrands centered at
// the panel node: polar coordinates in the flat panel plane around the
// centroid, angles split at the vertex directions (Gauss-Legendre per sector)
// and paired theta/theta+pi so the odd singular part cancels, radial rule
// log-graded on [hole/lambda(theta), split*g] plus plain Gauss-Legendre on the
// rest; the excluded hole is a geodesic disc of radius hole_scale *
// min(lambda g) around the node. Curved meshes lift the samples to the
// surface with the exact jacobian.
struct SelfRuleParams {
  int nang = 6;    // Gauss-Legendre angles per sector (times 2 by pairing)
  int nr = 10;     // radial points, log-graded singular piece
  int nr2 = 8;     // radial points, outer smooth piece
  double hole_scale = 0.005;
  double split = 0.25;
};
PanelRule polar_self_rule(const TriangleMesh& mesh, int tri,
                          const SelfRuleParams& params = {});

// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w);

}  // namespace spinscat
