#include "spinscat/clifford.hpp"

#include <stdexcept>

namespace spinscat {

namespace {

// Basis blade bitmasks in coordinate order {1, e1, e2, e3, e2^e3, e3^e1,
// e1^e2, e1^e2^e3} and the sign relating each coordinate basis element to the
// ascending-index blade product (e3^e1 = -e1e3, all others match).
constexpr std::array<int, 8> kMask = {0b000, 0b001, 0b010, 0b100,
                                      0b110, 0b101, 0b011, 0b111};
constexpr std::array<int, 8> kBladeSign = {1, 1, 1, 1, 1, -1, 1, 1};

constexpr int mask_index(int m) {
  for (int i = 0; i < 8; ++i)
    if (kMask[i] == m) return i;
  return -1;
}

// Sign of e_S * e_T as ascending blade products: move each generator of T
// leftwards through the higher generators of the accumulated product;
// repeated generators square to +1 (Euclidean signature).
constexpr int blade_mul_sign(int m1, int m2) {
  int s = 1, m = m1;
  for (int b = 0; b < 3; ++b) {
    if (m2 & (1 << b)) {
      int higher = m >> (b + 1);
      int pops = 0;
      while (higher) {
        pops += higher & 1;
        higher >>= 1;
      }
      if (pops & 1) s = -s;
      m ^= (1 << b);
    }
  }
  return s;
}

struct MulTable {
  // prod_idx[i][j] = coordinate index of B_i B_j, prod_sgn the sign.
  std::array<std::array<int, 8>, 8> idx{};
  std::array<std::array<int, 8>, 8> sgn{};
  constexpr MulTable() {
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) {
        int m = kMask[i] ^ kMask[j];
        int k = mask_index(m);
        idx[i][j] = k;
        sgn[i][j] = kBladeSign[i] * kBladeSign[j] *
                    blade_mul_sign(kMask[i], kMask[j]) * kBladeSign[k];
      }
  }
};
constexpr MulTable kTab;

const Mat2& sigma1() {
  static const Mat2 s = (Mat2() << 0, 1, 1, 0).finished();
  return s;
}
const Mat2& sigma3() {
  static const Mat2 s = (Mat2() << 1, 0, 0, -1).finished();
  return s;
}

}  // namespace

bool Multivector::is_vector(double tol) const {
  double off = std::abs(c[0]) + std::abs(c[4]) + std::abs(c[5]) +
               std::abs(c[6]) + std::abs(c[7]);
  return off <= tol * std::max(1.0, c.norm());
}

Multivector clifford_mul(const Multivector& w1, const Multivector& w2) {
  Coords8 out = Coords8::Zero();
  for (int i = 0; i < 8; ++i) {
    if (w1.c[i] == cplx(0)) continue;
    for (int j = 0; j < 8; ++j)
      out[kTab.idx[i][j]] += double(kTab.sgn[i][j]) * w1.c[i] * w2.c[j];
  }
  return Multivector(out);
}

Multivector exterior_mul(const Multivector& u, const Multivector& w) {
  if (!u.is_vector())
    throw std::invalid_argument("exterior_mul: left factor must be a vector");
  // u ^ w = u alpha + *(u x a) + *(u . b)
  CVec3 uv = u.a();
  Multivector out;
  out.c.segment<3>(1) = uv * w.alpha();
  out.c.segment<3>(4) = cross3(uv, w.a());
  // bilinear pairing, not Eigen's sesquilinear dot()
  out.c[7] = uv.cwiseProduct(w.b()).sum();
  return out;
}

MatrixPair rho(const Multivector& w) {
  const cplx al = w.c[0], a1 = w.c[1], a2 = w.c[2], a3 = w.c[3];
  const cplx b1 = w.c[4], b2 = w.c[5], b3 = w.c[6], be = w.c[7];
  const cplx I(0, 1);
  MatrixPair p;
  p.m1 << al + a3 + I * (b3 + be), a1 + b2 + I * (-a2 + b1),
      a1 - b2 + I * (a2 + b1), al - a3 + I * (-b3 + be);
  p.m2 << al - a3 + I * (b3 - be), a1 - b2 + I * (-a2 - b1),
      a1 + b2 + I * (a2 - b1), al + a3 + I * (-b3 - be);
  return p;
}

Multivector rho_inv(const MatrixPair& p) {
  const cplx I(0, 1);
  const Mat2 &A = p.m1, &B = p.m2;
  Multivector w;
  w.c[0] = (A(0, 0) + A(1, 1) + B(0, 0) + B(1, 1)) / 4.0;
  w.c[3] = (A(0, 0) - A(1, 1) - B(0, 0) + B(1, 1)) / 4.0;
  w.c[6] = (A(0, 0) - A(1, 1) + B(0, 0) - B(1, 1)) / (4.0 * I);
  w.c[7] = (A(0, 0) + A(1, 1) - B(0, 0) - B(1, 1)) / (4.0 * I);
  w.c[1] = (A(0, 1) + A(1, 0) + B(0, 1) + B(1, 0)) / 4.0;
  w.c[4] = (A(0, 1) + A(1, 0) - B(0, 1) - B(1, 0)) / (4.0 * I);
  w.c[5] = (A(0, 1) - A(1, 0) - B(0, 1) + B(1, 0)) / 4.0;
  w.c[2] = -(A(0, 1) - A(1, 0) + B(0, 1) - B(1, 0)) / (4.0 * I);
  return w;
}

Multivector involution(const Multivector& w) {
  Coords8 out = w.c;
  out.segment<3>(1) *= -1.0;
  out[7] *= -1.0;
  return Multivector(out);
}

MatrixPair involution_pair(const MatrixPair& h) {
  // Complex-linear rule (h1,h2) -> (s3 h2 s3, s3 h1 s3): swap the pair and
  // negate the off-diagonal entries. Agrees with coordinate involution
  // through rho on every basis element.
  return {sigma3() * h.m2 * sigma3(), sigma3() * h.m1 * sigma3()};
}

Multivector hodge_star(const Multivector& w) {
  Coords8 out;
  out[0] = w.c[7];
  out.segment<3>(1) = w.c.segment<3>(4);
  out.segment<3>(4) = w.c.segment<3>(1);
  out[7] = w.c[0];
  return Multivector(out);
}

namespace {

void check_unit(const Vec3& n) {
  if (std::abs(n.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("reflection operator: normal must be unit");
}

}  // namespace

Multivector reflect_N(const Multivector& f, const Vec3& n) {
  check_unit(n);
  Multivector nv = Multivector::vector(n);
  return clifford_mul(nv, clifford_mul(involution(f), nv));
}

Multivector project_N_plus(const Multivector& f, const Vec3& n) {
  return 0.5 * (f + reflect_N(f, n));
}

Multivector project_N_minus(const Multivector& f, const Vec3& n) {
  return 0.5 * (f - reflect_N(f, n));
}

Multivector reflect_S(const Multivector& f, const Vec3& n) {
  check_unit(n);
  return clifford_mul(Multivector::vector(n), f);
}

Multivector project_S_plus(const Multivector& f, const Vec3& n) {
  return 0.5 * (f + reflect_S(f, n));
}

Multivector project_S_minus(const Multivector& f, const Vec3& n) {
  return 0.5 * (f - reflect_S(f, n));
}

Multivector project_T_plus(const Multivector& f) {
  return 0.5 * (f + involution(f));
}

Multivector project_T_minus(const Multivector& f) {
  return 0.5 * (f - involution(f));
}

Mat8 left_mul_matrix(const Multivector& w) {
  // out(k, j): coefficient of (w v)_k from v_j.
  Mat8 m = Mat8::Zero();
  for (int i = 0; i < 8; ++i) {
    if (w.c[i] == cplx(0)) continue;
    for (int j = 0; j < 8; ++j)
      m(kTab.idx[i][j], j) += double(kTab.sgn[i][j]) * w.c[i];
  }
  return m;
}

Mat8 right_mul_matrix(const Multivector& w) {
  Mat8 m = Mat8::Zero();
  for (int j = 0; j < 8; ++j) {
    if (w.c[j] == cplx(0)) continue;
    for (int i = 0; i < 8; ++i)
      m(kTab.idx[i][j], i) += double(kTab.sgn[i][j]) * w.c[j];
  }
  return m;
}

const Mat8& involution_matrix() {
  static const Mat8 m = [] {
    Coords8 d;
    d << 1, -1, -1, -1, 1, 1, 1, -1;
    return Mat8(d.asDiagonal());
  }();
  return m;
}

NodeMats node_matrices(const Vec3& n) {
  check_unit(n);
  Multivector nv = Multivector::vector(n);
  Mat8 Ln = left_mul_matrix(nv), Rn = right_mul_matrix(nv);
  NodeMats out;
  out.N = Ln * Rn * involution_matrix();
  out.S = Ln;
  out.M = Mat8::Identity() + Rn * involution_matrix() + out.N;
  out.Nplus = 0.5 * (Mat8::Identity() + out.N);
  return out;
}

}  // namespace spinscat
