#include "spinscat/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "spinscat/kernels.hpp"

namespace spinscat {

namespace {

// bilinear dot of a complex with a real vector (no conjugation)
inline cplx dot_cr(const CVec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

// Panels sharing an edge with j, plus panels sharing an edge with those,
// ascending, j excluded.
std::vector<std::vector<int>> two_ring_neighbors(const TriangleMesh& mesh) {
  const int np = mesh.num_triangles();
  std::unordered_map<std::int64_t, std::pair<int, int>> edge2face;
  edge2face.reserve(3 * np);
  for (int f = 0; f < np; ++f) {
    const auto& tr = mesh.triangles[f];
    for (int e = 0; e < 3; ++e) {
      const int a = std::min(tr[e], tr[(e + 1) % 3]);
      const int b = std::max(tr[e], tr[(e + 1) % 3]);
      const std::int64_t key = (static_cast<std::int64_t>(a) << 32) | b;
      auto [it, fresh] = edge2face.try_emplace(key, f, -1);
      if (!fresh) it->second.second = f;
    }
  }
  std::vector<std::set<int>> ring1(np);
  for (const auto& [key, faces] : edge2face) {
    if (faces.second < 0) continue;
    ring1[faces.first].insert(faces.second);
    ring1[faces.second].insert(faces.first);
  }
  std::vector<std::vector<int>> out(np);
  for (int i = 0; i < np; ++i) {
    std::set<int> s2 = ring1[i];
    for (int j : ring1[i]) s2.insert(ring1[j].begin(), ring1[j].end());
    s2.erase(i);
    out[i].assign(s2.begin(), s2.end());
  }
  return out;
}

Eigen::Matrix<double, 3, 2> tangent_basis(const Vec3& n) {
  Vec3 t1 = Vec3::UnitX() - Vec3::UnitX().dot(n) * n;
  if (t1.norm() < 0.3) t1 = Vec3::UnitY() - Vec3::UnitY().dot(n) * n;
  t1.normalize();
  Eigen::Matrix<double, 3, 2> t;
  t.col(0) = t1;
  t.col(1) = n.cross(t1);
  return t;
}

// Gradient-recovery interpolation weights of the rule's sample points against
// the stencil [j] + ring: value(p) ~ value(x_j) + grad_fit . (p - x_j), with
// the tangential gradient recovered from the ring node differences by least
// squares. Rows sum to 1 exactly, so constants interpolate exactly.
Eigen::MatrixXd interp_matrix(const PanelRule& rule, const Vec3& xj,
                              const Eigen::Matrix<double, 3, 2>& t,
                              const Eigen::MatrixXd& p2) {
  const int m = static_cast<int>(p2.cols());
  Eigen::MatrixXd w(rule.size(), m + 1);
  for (int c = 0; c < rule.size(); ++c) {
    const Eigen::RowVector2d u = (rule.points[c] - xj).transpose() * t;
    const Eigen::RowVectorXd cr = u * p2;
    w(c, 0) = 1.0 - cr.sum();
    w.row(c).tail(m) = cr;
  }
  return w;
}

}  // namespace

Assembler::Assembler(const QuadratureSurface& surface, NearParams params)
    : surface_(&surface), params_(params) {
  const int np = surface.size();
  if (np == 0) throw std::invalid_argument("Assembler: empty surface");
  children_.resize(np);
  self_.resize(np);
  cols_.resize(np);
  wch_.resize(np);
  wself_.resize(np);
  const auto ring = two_ring_neighbors(surface.mesh);
  for (int j = 0; j < np; ++j)
    if (ring[j].size() < 2)
      throw std::invalid_argument("Assembler: panel " + std::to_string(j) +
                                  " has fewer than 2 ring neighbors");
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < np; ++j) {
    children_[j] = panel_children(surface.mesh, j, params_.levels);
    self_[j] = polar_self_rule(surface.mesh, j, params_.self_rule);
    const int m = static_cast<int>(ring[j].size());
    cols_[j].reserve(m + 1);
    cols_[j].push_back(j);
    cols_[j].insert(cols_[j].end(), ring[j].begin(), ring[j].end());
    const Eigen::Matrix<double, 3, 2> t = tangent_basis(surface.normals[j]);
    Eigen::MatrixXd au(m, 2);
    for (int l = 0; l < m; ++l)
      au.row(l) = (surface.nodes[ring[j][l]] - surface.nodes[j]).transpose() * t;
    const Eigen::MatrixXd p2 =
        au.completeOrthogonalDecomposition().pseudoInverse();
    wch_[j] = interp_matrix(children_[j], surface.nodes[j], t, p2);
    wself_[j] = interp_matrix(self_[j], surface.nodes[j], t, p2);
  }
}

bool Assembler::near(int i, int j) const {
  if (i == j) return true;
  return (surface_->nodes[j] - surface_->nodes[i]).norm() <
         params_.r_factor * surface_->panel_diam[j];
}

// Emits the 8x8 blocks of row i of C_k in a fixed order: far panels
// ascending, then each near panel's stencil columns, then the subtraction
// diagonal I - L(sum of plain Psi_0 q-vectors) last. Running the whole row on
// one thread keeps the sums deterministic for any thread count.
template <typename Sink>
void Assembler::row_cauchy(int i, cplx k, Sink&& sink) const {
  const QuadratureSurface& s = *surface_;
  const int np = s.size();
  const Vec3 x = s.nodes[i];
  Coords8 dacc = Coords8::Zero();
  std::vector<int> near_list;
  for (int j = 0; j < np; ++j) {
    if (near(i, j)) {
      near_list.push_back(j);
      continue;
    }
    const Vec3 z = s.nodes[j] - x;
    const Multivector nj = Multivector::vector(s.normals[j]);
    const double tw = 2.0 * s.weights[j];
    const Coords8 qk = clifford_mul(psi(k, z), nj).c * tw;
    dacc += clifford_mul(psi(0.0, z), nj).c * tw;
    sink(j, Mat8(left_mul_matrix(Multivector(qk))));
  }
  for (int j : near_list) {
    const PanelRule& rule = (j == i) ? self_[i] : children_[j];
    const Eigen::MatrixXd& w = (j == i) ? wself_[i] : wch_[j];
    const std::vector<int>& cols = cols_[j];
    const int m = static_cast<int>(cols.size());
    Eigen::Matrix<cplx, 8, Eigen::Dynamic> q =
        Eigen::Matrix<cplx, 8, Eigen::Dynamic>::Zero(8, m);
    for (int c = 0; c < rule.size(); ++c) {
      const Vec3 z = rule.points[c] - x;
      const Multivector nu = Multivector::vector(rule.normals[c]);
      const double tw = 2.0 * rule.weights[c];
      const Coords8 qk = clifford_mul(psi(k, z), nu).c * tw;
      dacc += clifford_mul(psi(0.0, z), nu).c * tw;
      for (int mm = 0; mm < m; ++mm) q.col(mm) += w(c, mm) * qk;
    }
    for (int mm = 0; mm < m; ++mm)
      sink(cols[mm], Mat8(left_mul_matrix(Multivector(Coords8(q.col(mm))))));
  }
  sink(i, Mat8(Mat8::Identity() - left_mul_matrix(Multivector(dacc))));
}

DenseOperator Assembler::cauchy(cplx k) const {
  const int np = surface_->size();
  DenseOperator op;
  op.surface = surface_;
  op.k = k;
  op.mat = Eigen::MatrixXcd::Zero(8 * np, 8 * np);
  Eigen::MatrixXcd& mat = op.mat;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < np; ++i)
    row_cauchy(i, k, [&mat, i](int col, const Mat8& blk) {
      mat.block<8, 8>(8 * i, 8 * col) += blk;
    });
  return op;
}

DenseOperator Assembler::singular_rk(cplx k) const {
  DenseOperator op = cauchy(k);
  const int np = surface_->size();
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < np; ++j) {
    const Mat8 s = node_matrices(surface_->normals[j]).S;
    const Eigen::MatrixXcd tmp = op.mat.middleCols(8 * j, 8) * s;
    op.mat.middleCols(8 * j, 8) = tmp;
  }
  return op;
}

DenseOperator Assembler::block_m() const {
  const int np = surface_->size();
  DenseOperator op;
  op.surface = surface_;
  op.mat = Eigen::MatrixXcd::Zero(8 * np, 8 * np);
  for (int i = 0; i < np; ++i)
    op.mat.block<8, 8>(8 * i, 8 * i) = node_matrices(surface_->normals[i]).M;
  return op;
}

void Assembler::spin_in_place(Eigen::MatrixXcd& ck) const {
  const int np = surface_->size();
  if (ck.rows() != 8 * np || ck.cols() != 8 * np)
    throw std::invalid_argument("spin_in_place: size mismatch");
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < np; ++j) {
    const Mat8 s = node_matrices(surface_->normals[j]).S;
    const Eigen::MatrixXcd tmp = ck.middleCols(8 * j, 8) * s;
    ck.middleCols(8 * j, 8) = tmp;
  }
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < np; ++i) {
    const Mat8 m = node_matrices(surface_->normals[i]).M;
    const Eigen::MatrixXcd tmp = m * ck.middleRows(8 * i, 8);
    ck.middleRows(8 * i, 8) = tmp;
  }
  ck = -ck;
  ck.diagonal().array() += 1.0;
}

void Assembler::rotation_in_place(Eigen::MatrixXcd& ck) const {
  const int np = surface_->size();
  if (ck.rows() != 8 * np || ck.cols() != 8 * np)
    throw std::invalid_argument("rotation_in_place: size mismatch");
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < np; ++j) {
    const Mat8 n = node_matrices(surface_->normals[j]).N;
    const Eigen::MatrixXcd tmp = ck.middleCols(8 * j, 8) * n;
    ck.middleCols(8 * j, 8) = tmp;
  }
  ck = -ck;
  ck.diagonal().array() += 1.0;
}

DenseOperator Assembler::spin(cplx k) const {
  DenseOperator op = cauchy(k);
  spin_in_place(op.mat);
  return op;
}

DenseOperator Assembler::rotation(cplx k) const {
  DenseOperator op = cauchy(k);
  rotation_in_place(op.mat);
  return op;
}

BoundaryDensity Assembler::apply_cauchy(cplx k, const BoundaryDensity& h) const {
  const int np = surface_->size();
  if (h.size() != 8 * np)
    throw std::invalid_argument("apply_cauchy: density size mismatch");
  BoundaryDensity out(8 * np);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < np; ++i) {
    Coords8 acc = Coords8::Zero();
    row_cauchy(i, k, [&acc, &h](int col, const Mat8& blk) {
      acc += blk * h.segment<8>(8 * col);
    });
    out.segment<8>(8 * i) = acc;
  }
  return out;
}

BoundaryDensity Assembler::apply_rk(cplx k, const BoundaryDensity& h) const {
  const int np = surface_->size();
  if (h.size() != 8 * np)
    throw std::invalid_argument("apply_rk: density size mismatch");
  BoundaryDensity sh(8 * np);
  for (int i = 0; i < np; ++i) {
    const Mat8 s = node_matrices(surface_->normals[i]).S;
    sh.segment<8>(8 * i) = s * h.segment<8>(8 * i);
  }
  return apply_cauchy(k, sh);
}

BoundaryDensity Assembler::apply_spin(cplx k, const BoundaryDensity& h) const {
  const int np = surface_->size();
  BoundaryDensity rk = apply_rk(k, h);
  BoundaryDensity out(8 * np);
  for (int i = 0; i < np; ++i) {
    const Mat8 m = node_matrices(surface_->normals[i]).M;
    out.segment<8>(8 * i) = h.segment<8>(8 * i) - m * rk.segment<8>(8 * i);
  }
  return out;
}

namespace {

// Shared scaffold of the six classical operators: far panels lumped, near
// panels by interpolated children, the target panel by the polar rule (its
// samples sit exactly on the surface with exact normals, which the
// grazing-incidence kernels need), and for the strongly singular operators a
// subtraction diagonal calibrated so the k = 0 operator maps constants to
// ediag exactly.
template <int R, int C, typename Kernel, typename EDiag>
Eigen::MatrixXcd classical_block(const Assembler& a, cplx k, bool subtract,
                                 Kernel&& ker, EDiag&& ediag) {
  using Blk = Eigen::Matrix<cplx, R, C>;
  const QuadratureSurface& s = a.surface();
  const int np = s.size();
  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(R * np, C * np);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < np; ++i) {
    const Vec3 x = s.nodes[i];
    const Vec3 nx = s.normals[i];
    Blk dacc = Blk::Zero();
    std::vector<int> near_list;
    for (int j = 0; j < np; ++j) {
      if (a.near(i, j)) {
        near_list.push_back(j);
        continue;
      }
      mat.template block<R, C>(R * i, C * j) +=
          s.weights[j] * ker(k, x, nx, s.nodes[j], s.normals[j]);
      if (subtract)
        dacc += s.weights[j] * ker(cplx(0.0), x, nx, s.nodes[j], s.normals[j]);
    }
    for (int j : near_list) {
      const PanelRule& rule = (j == i) ? a.self_rule(i) : a.children(j);
      const Eigen::MatrixXd& w = (j == i) ? a.self_weights(i) : a.child_weights(j);
      const std::vector<int>& cols = a.columns(j);
      const int m = static_cast<int>(cols.size());
      std::vector<Blk> q(m, Blk::Zero());
      for (int c = 0; c < rule.size(); ++c) {
        const Blk kk =
            rule.weights[c] * ker(k, x, nx, rule.points[c], rule.normals[c]);
        for (int mm = 0; mm < m; ++mm) q[mm] += w(c, mm) * kk;
        if (subtract)
          dacc += rule.weights[c] *
                  ker(cplx(0.0), x, nx, rule.points[c], rule.normals[c]);
      }
      for (int mm = 0; mm < m; ++mm)
        mat.template block<R, C>(R * i, C * cols[mm]) += q[mm];
    }
    if (subtract) mat.template block<R, C>(R * i, C * i) += ediag(nx) - dacc;
  }
  return mat;
}

}  // namespace

ClassicalOperators Assembler::classical(cplx k) const {
  ClassicalOperators ops;
  ops.k = k;
  using M11 = Eigen::Matrix<cplx, 1, 1>;
  using M31 = Eigen::Matrix<cplx, 3, 1>;
  using M13 = Eigen::Matrix<cplx, 1, 3>;
  using M33 = Eigen::Matrix<cplx, 3, 3>;

  const auto kd = [](cplx kk, const Vec3& x, const Vec3&, const Vec3& y,
                     const Vec3& ny) {
    return M11(2.0 * dot_cr(grad_phi(kk, y - x), ny));
  };
  const auto kds = [](cplx kk, const Vec3& x, const Vec3& nx, const Vec3& y,
                      const Vec3&) {
    return M11(2.0 * dot_cr(grad_phi(kk, x - y), nx));
  };
  const auto km = [](cplx kk, const Vec3& x, const Vec3& nx, const Vec3& y,
                     const Vec3&) -> M33 {
    const CVec3 g2 = grad_phi(kk, x - y);
    return 2.0 * (g2 * nx.transpose().cast<cplx>() -
                  dot_cr(g2, nx) * M33::Identity());
  };
  const auto kdp = [](cplx kk, const Vec3& x, const Vec3& nx, const Vec3& y,
                      const Vec3& ny) -> M31 {
    return (2.0 * cplx(0, 1) * kk * phi(kk, y - x)) * nx.cross(ny).cast<cplx>();
  };
  const auto kdpp = [](cplx kk, const Vec3& x, const Vec3& nx, const Vec3& y,
                       const Vec3& ny) {
    const CVec3 g = grad_phi(kk, y - x);
    return M11(2.0 * dot_cr(cross3(g, ny.cast<cplx>()), nx));
  };
  const auto kmp = [](cplx kk, const Vec3& x, const Vec3& nx, const Vec3& y,
                      const Vec3&) -> M13 {
    return (-2.0 * cplx(0, 1) * kk * phi(kk, y - x)) *
           nx.transpose().cast<cplx>();
  };

  const auto e_one = [](const Vec3&) { return M11(1.0); };
  const auto e_mdip = [](const Vec3& n) -> M33 {
    return (n * n.transpose() - Eigen::Matrix3d::Identity()).cast<cplx>();
  };
  const auto e_none1 = [](const Vec3&) { return M11::Zero(); };
  const auto e_none3 = [](const Vec3&) { return M31::Zero(); };
  const auto e_none13 = [](const Vec3&) { return M13::Zero(); };

  ops.Dl = classical_block<1, 1>(*this, k, true, kd, e_one);
  ops.Dl_adjoint = classical_block<1, 1>(*this, k, true, kds, e_one);
  ops.Mdip = classical_block<3, 3>(*this, k, true, km, e_mdip);
  ops.Dl_prime = classical_block<3, 1>(*this, k, false, kdp, e_none3);
  ops.Dl_doubleprime = classical_block<1, 1>(*this, k, false, kdpp, e_none1);
  ops.M_prime = classical_block<1, 3>(*this, k, false, kmp, e_none13);
  return ops;
}

FieldEvaluation Assembler::field(cplx k, const BoundaryDensity& h,
                                 const std::vector<Vec3>& points) const {
  const QuadratureSurface& s = *surface_;
  const int np = s.size();
  if (h.size() != 8 * np)
    throw std::invalid_argument("field: density size mismatch");
  const int npt = static_cast<int>(points.size());
  FieldEvaluation out;
  out.values.resize(npt);
  Eigen::Matrix3d ainv;
  if (s.mesh.analytic) ainv = s.mesh.map_A.inverse();
  for (int p = 0; p < npt; ++p) {
    const Vec3& x = points[p];
    int jstar = 0;
    double dmin = (x - s.nodes[0]).norm();
    for (int j = 1; j < np; ++j) {
      const double d = (x - s.nodes[j]).norm();
      if (d < dmin) {
        dmin = d;
        jstar = j;
      }
    }
    bool inside;
    if (s.mesh.analytic) {
      inside = (ainv * (x - s.mesh.map_b)).norm() <= 1.0 + 1e-9;
    } else {
      inside = (x - s.nodes[jstar]).dot(s.normals[jstar]) <=
               1e-9 * s.panel_diam[jstar];
    }
    if (inside)
      throw std::invalid_argument(
          "field: evaluation point " + std::to_string(p) + " = (" +
          std::to_string(x[0]) + ", " + std::to_string(x[1]) + ", " +
          std::to_string(x[2]) + ") is on or inside the surface");
    if (dmin < s.panel_diam[jstar]) out.near_boundary.push_back(p);
  }
#pragma omp parallel for schedule(dynamic)
  for (int p = 0; p < npt; ++p) {
    Coords8 acc = Coords8::Zero();
    for (int j = 0; j < np; ++j) {
      const Multivector hj(Coords8(h.segment<8>(8 * j)));
      acc -= s.weights[j] *
             clifford_mul(psi(k, s.nodes[j] - points[p]), hj).c;
    }
    out.values[p] = Multivector(acc);
  }
  return out;
}

BlockComparison compare_classical_blocks(const Assembler& a, cplx k) {
  const QuadratureSurface& s = a.surface();
  const int np = s.size();
  const Eigen::MatrixXcd c = a.cauchy(k).mat;
  const ClassicalOperators cl = a.classical(k);

  std::vector<Mat8> nplus(np);
  for (int i = 0; i < np; ++i) nplus[i] = node_matrices(s.normals[i]).Nplus;

  // Smooth probe fields: low-order polynomials restricted to the surface
  // (scalars) and tangential projections of constant fields (vectors),
  // normalized.
  std::vector<Eigen::VectorXcd> scalars;
  {
    const Vec3 w(1.0, 2.0, -1.0);
    for (int f = 0; f < 5; ++f) {
      Eigen::VectorXcd u(np);
      for (int i = 0; i < np; ++i) {
        const Vec3& x = s.nodes[i];
        if (f == 0) u[i] = 1.0;
        else if (f <= 3) u[i] = x[f - 1];
        else u[i] = 0.5 * x.dot(w) * x.dot(w);
      }
      scalars.push_back(u / u.norm());
    }
  }
  std::vector<Eigen::VectorXcd> vectors;
  for (int f = 0; f < 4; ++f) {
    const Vec3 e = f < 3 ? Vec3(Vec3::Unit(f)) : Vec3(Vec3::Ones().normalized());
    Eigen::VectorXcd v(3 * np);
    for (int i = 0; i < np; ++i) {
      const Vec3& n = s.normals[i];
      v.segment<3>(3 * i) = (e - e.dot(n) * n).cast<cplx>();
    }
    vectors.push_back(v / v.norm());
  }

  const auto compress = [&](const Eigen::VectorXcd& f) {
    Eigen::VectorXcd g(8 * np);
    for (int i = 0; i < np; ++i)
      g.segment<8>(8 * i) = nplus[i] * f.segment<8>(8 * i);
    Eigen::VectorXcd cg = c * g;
    for (int i = 0; i < np; ++i)
      cg.segment<8>(8 * i) = (nplus[i] * cg.segment<8>(8 * i)).eval();
    return cg;
  };

  // embeddings of the three input components and decoders of the four
  // output components
  const auto embed_scalar = [&](const Eigen::VectorXcd& u) {
    Eigen::VectorXcd f = Eigen::VectorXcd::Zero(8 * np);
    for (int i = 0; i < np; ++i) f[8 * i] = u[i];
    return f;
  };
  const auto embed_vector = [&](const Eigen::VectorXcd& v) {
    Eigen::VectorXcd f = Eigen::VectorXcd::Zero(8 * np);
    for (int i = 0; i < np; ++i)
      f.segment<3>(8 * i + 1) =
          cross3(s.normals[i].cast<cplx>(), v.segment<3>(3 * i));
    return f;
  };
  const auto embed_star_normal = [&](const Eigen::VectorXcd& u) {
    Eigen::VectorXcd f = Eigen::VectorXcd::Zero(8 * np);
    for (int i = 0; i < np; ++i)
      f.segment<3>(8 * i + 4) = u[i] * s.normals[i].cast<cplx>();
    return f;
  };
  // trivector input: killed by the tangential projection, so every block of
  // this column is structurally zero
  const auto embed_star_scalar = [&](const Eigen::VectorXcd& u) {
    Eigen::VectorXcd f = Eigen::VectorXcd::Zero(8 * np);
    for (int i = 0; i < np; ++i) f[8 * i + 7] = u[i];
    return f;
  };
  const auto decode = [&](const Eigen::VectorXcd& f, int row) {
    if (row == 1) {  // tangential vector from a = n x v: v = -n x a
      Eigen::VectorXcd v(3 * np);
      for (int i = 0; i < np; ++i)
        v.segment<3>(3 * i) =
            -cross3(s.normals[i].cast<cplx>(), f.segment<3>(8 * i + 1));
      return v;
    }
    Eigen::VectorXcd u(np);
    for (int i = 0; i < np; ++i) {
      if (row == 0) u[i] = f[8 * i];
      else if (row == 2) u[i] = dot_cr(CVec3(f.segment<3>(8 * i + 4)), s.normals[i]);
      else u[i] = f[8 * i + 7];
    }
    return u;
  };

  BlockComparison out;
  out.deviation.setZero();
  out.reference.setZero();
  out.labels = {{{"Dl", "0", "0", "0"},
                 {"Dl'", "Mdip", "0", "0"},
                 {"Dl''", "-M'", "-Dl*", "0"},
                 {"0", "0", "0", "0"}}};

  // classical target of block (row, col) applied to the probe; empty = zero
  const auto target = [&](int row, int col,
                          const Eigen::VectorXcd& u) -> Eigen::VectorXcd {
    if (col == 0) {
      if (row == 0) return cl.Dl * u;
      if (row == 1) return cl.Dl_prime * u;
      if (row == 2) return cl.Dl_doubleprime * u;
    } else if (col == 1) {
      if (row == 1) return cl.Mdip * u;
      if (row == 2) return Eigen::VectorXcd(-cl.M_prime * u);
    } else if (col == 2) {
      if (row == 2) return Eigen::VectorXcd(-cl.Dl_adjoint * u);
    }
    const int rows = row == 1 ? 3 * np : np;
    return Eigen::VectorXcd::Zero(rows);
  };

  for (int col = 0; col < 4; ++col) {
    const auto& family = col == 1 ? vectors : scalars;
    for (const Eigen::VectorXcd& u : family) {
      const Eigen::VectorXcd f = col == 0   ? embed_scalar(u)
                                 : col == 1 ? embed_vector(u)
                                 : col == 2 ? embed_star_normal(u)
                                            : embed_star_scalar(u);
      const Eigen::VectorXcd p = compress(f);
      for (int row = 0; row < 4; ++row) {
        const Eigen::VectorXcd got = decode(p, row);
        const Eigen::VectorXcd want = target(row, col, u);
        out.deviation(row, col) =
            std::max(out.deviation(row, col), (got - want).norm());
        out.reference(row, col) =
            std::max(out.reference(row, col), want.norm());
      }
    }
  }
  out.global_scale = out.reference.maxCoeff();
  for (int row = 0; row < 4; ++row)
    for (int col = 0; col < 4; ++col)
      out.relative(row, col) =
          out.reference(row, col) > 0.05 * out.global_scale
              ? out.deviation(row, col) / out.reference(row, col)
              : out.deviation(row, col) / out.global_scale;
  return out;
}

DenseOperator assemble_Ck(const QuadratureSurface& surface, cplx k) {
  return Assembler(surface).cauchy(k);
}

DenseOperator assemble_Rk(const QuadratureSurface& surface, cplx k,
                          NearParams params) {
  return Assembler(surface, params).singular_rk(k);
}

DenseOperator assemble_M(const QuadratureSurface& surface) {
  return Assembler(surface).block_m();
}

DenseOperator spin_system(const QuadratureSurface& surface, cplx k) {
  return Assembler(surface).spin(k);
}

DenseOperator rotation_system(const QuadratureSurface& surface, cplx k) {
  return Assembler(surface).rotation(k);
}

BoundaryDensity matrix_free_apply(const QuadratureSurface& surface, cplx k,
                                  const BoundaryDensity& h) {
  return Assembler(surface).apply_rk(k, h);
}

ClassicalOperators assemble_classical(const QuadratureSurface& surface,
                                      cplx k) {
  return Assembler(surface).classical(k);
}

FieldEvaluation field_eval_RkOmega(const QuadratureSurface& surface, cplx k,
                                   const BoundaryDensity& h,
                                   const std::vector<Vec3>& points) {
  return Assembler(surface).field(k, h, points);
}

}  // namespace spinscat
