#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>

namespace spinscat {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using Coords8 = Eigen::Matrix<cplx, 8, 1>;
using Mat8 = Eigen::Matrix<cplx, 8, 8>;
using Mat2 = Eigen::Matrix2cd;

// Bilinear cross product. Eigen's cross() conjugates its result for complex
// scalars, which is wrong for every pairing in this algebra.
inline CVec3 cross3(const CVec3& x, const CVec3& y) {
  return CVec3(x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2],
               x[0] * y[1] - x[1] * y[0]);
}

// Element of the complexified 3D exterior/Clifford algebra, 8 complex
// coordinates in the order alpha, a1, a2, a3, b1, b2, b3, beta.
// Bivector basis: (e2^e3, e3^e1, e1^e2).
struct Multivector {
  Coords8 c = Coords8::Zero();

  Multivector() = default;
  explicit Multivector(const Coords8& v) : c(v) {}
  Multivector(cplx alpha, const CVec3& a, const CVec3& b, cplx beta) {
    c[0] = alpha;
    c.segment<3>(1) = a;
    c.segment<3>(4) = b;
    c[7] = beta;
  }

  cplx alpha() const { return c[0]; }
  CVec3 a() const { return c.segment<3>(1); }
  CVec3 b() const { return c.segment<3>(4); }
  cplx beta() const { return c[7]; }

  static Multivector scalar(cplx s) {
    Multivector w;
    w.c[0] = s;
    return w;
  }
  template <typename Derived>
  static Multivector vector(const Eigen::MatrixBase<Derived>& v) {
    Multivector w;
    w.c.segment<3>(1) = v.template cast<cplx>();
    return w;
  }

  bool is_vector(double tol = 1e-13) const;

  Multivector operator+(const Multivector& o) const { return Multivector(c + o.c); }
  Multivector operator-(const Multivector& o) const { return Multivector(c - o.c); }
  Multivector operator-() const { return Multivector(-c); }
  Multivector operator*(cplx s) const { return Multivector(c * s); }
  double norm() const { return c.norm(); }
};

inline Multivector operator*(cplx s, const Multivector& w) { return w * s; }

// Pair of complex 2x2 matrices with pairwise product; the rho-image of the
// algebra.
struct MatrixPair {
  Mat2 m1 = Mat2::Zero();
  Mat2 m2 = Mat2::Zero();

  MatrixPair() = default;
  MatrixPair(const Mat2& a, const Mat2& b) : m1(a), m2(b) {}

  static MatrixPair identity() { return {Mat2::Identity(), Mat2::Identity()}; }

  MatrixPair operator*(const MatrixPair& o) const { return {m1 * o.m1, m2 * o.m2}; }
  MatrixPair operator+(const MatrixPair& o) const { return {m1 + o.m1, m2 + o.m2}; }
  MatrixPair operator-(const MatrixPair& o) const { return {m1 - o.m1, m2 - o.m2}; }
  double norm() const { return std::sqrt(m1.squaredNorm() + m2.squaredNorm()); }
};

// Products. clifford_mul is the full table-driven product; exterior_mul
// requires a pure vector left factor and throws otherwise.
Multivector clifford_mul(const Multivector& w1, const Multivector& w2);
Multivector exterior_mul(const Multivector& u, const Multivector& w);

// Matrix-pair representation (an explicit algebra isomorphism) and its
// inverse.
MatrixPair rho(const Multivector& w);
Multivector rho_inv(const MatrixPair& p);

// Grade involution (negates vector and trivector parts) in both encodings,
// and the Hodge star.
Multivector involution(const Multivector& w);
MatrixPair involution_pair(const MatrixPair& h);
Multivector hodge_star(const Multivector& w);

// Pointwise reflection operators at a unit normal n:
//   N f = n * involution(f) * n,   S f = n * f,
// with projections N± = (I ± N)/2, S± = (I ± S)/2, and the grade-parity
// split T± f = (f ± involution(f))/2.
Multivector reflect_N(const Multivector& f, const Vec3& n);
Multivector project_N_plus(const Multivector& f, const Vec3& n);
Multivector project_N_minus(const Multivector& f, const Vec3& n);
Multivector reflect_S(const Multivector& f, const Vec3& n);
Multivector project_S_plus(const Multivector& f, const Vec3& n);
Multivector project_S_minus(const Multivector& f, const Vec3& n);
Multivector project_T_plus(const Multivector& f);
Multivector project_T_minus(const Multivector& f);

// Linearizations of Clifford multiplication acting on coordinate vectors:
// left_mul_matrix(w) * coords(v) = coords(w v), right_mul_matrix likewise.
Mat8 left_mul_matrix(const Multivector& w);
Mat8 right_mul_matrix(const Multivector& w);

// Per-node 8x8 coordinate matrices of N, S, M = I + SN + N, and N+ used by
// operator assembly.
struct NodeMats {
  Mat8 N, S, M, Nplus;
};
NodeMats node_matrices(const Vec3& n);

// Coordinate matrix of the involution: diag(1,-1,-1,-1,1,1,1,-1).
const Mat8& involution_matrix();

}  // namespace spinscat
