#pragma once

#include <vector>

#include "spinscat/clifford.hpp"
#include "spinscat/geometry.hpp"

namespace spinscat {

// Per-node multivector coefficients, flattened node-major: entry 8i + m is
// coordinate m (order alpha, a1, a2, a3, b1, b2, b3, beta) at node i.
using BoundaryDensity = Eigen::VectorXcd;

inline Multivector density_node(const BoundaryDensity& h, int i) {
  return Multivector(Coords8(h.segment<8>(8 * i)));
}
inline void set_density_node(BoundaryDensity& h, int i, const Multivector& w) {
  h.segment<8>(8 * i) = w.c;
}

// Near-field handling: panels with |y_j - x_i| < r_factor * diam_j are
// integrated with 4^levels curved children and gradient-recovery density
// interpolation; the target's own panel uses the polar principal-value rule.
struct NearParams {
  double r_factor = 3.0;
  int levels = 3;
  SelfRuleParams self_rule{};
};

struct DenseOperator {
  Eigen::MatrixXcd mat;
  const QuadratureSurface* surface = nullptr;
  cplx k = 0.0;
};

// The six boundary operators of the classical formulation in the scalar /
// tangential-vector splitting: N scalar or 3N vector unknowns per side.
struct ClassicalOperators {
  Eigen::MatrixXcd Dl;              // double layer, N x N
  Eigen::MatrixXcd Dl_adjoint;      // normal derivative of single layer, N x N
  Eigen::MatrixXcd Mdip;            // magnetic dipole, 3N x 3N
  Eigen::MatrixXcd Dl_prime;        // 3N x N
  Eigen::MatrixXcd Dl_doubleprime;  // N x N
  Eigen::MatrixXcd M_prime;         // N x 3N
  cplx k = 0.0;
};

struct FieldEvaluation {
  std::vector<Multivector> values;
  // Indices of evaluation points closer to the surface than one local panel
  // diameter; values there carry O(1) quadrature error.
  std::vector<int> near_boundary;
};

// Quadrature caches (children rules, polar self rules, interpolation
// stencils) shared by the assembly and matrix-free application of every
// operator on one surface. Immutable after construction; all methods are
// const and thread-safe, and assembly parallelizes internally over rows with
// a fixed per-row summation order, so results are thread-count invariant.
class Assembler {
 public:
  explicit Assembler(const QuadratureSurface& surface, NearParams params = {});

  const QuadratureSurface& surface() const { return *surface_; }
  const NearParams& params() const { return params_; }

  // C_k h(x) = 2 p.v. int Psi_k(y - x) n(y) h(y) dy with the
  // constant-subtraction diagonal: C_0 reproduces constants exactly.
  DenseOperator cauchy(cplx k) const;
  // R_k = C_k S (pointwise left multiplication by the normal first).
  DenseOperator singular_rk(cplx k) const;
  // Block-diagonal M = I + SN + N.
  DenseOperator block_m() const;
  // Spin system I - M R_k.
  DenseOperator spin(cplx k) const;
  // Rotation system I - C_k N.
  DenseOperator rotation(cplx k) const;
  // Rewrite an assembled C_k into the spin / rotation system without a copy,
  // for matrices at the memory budget.
  void spin_in_place(Eigen::MatrixXcd& ck) const;
  void rotation_in_place(Eigen::MatrixXcd& ck) const;

  BoundaryDensity apply_cauchy(cplx k, const BoundaryDensity& h) const;
  BoundaryDensity apply_rk(cplx k, const BoundaryDensity& h) const;
  BoundaryDensity apply_spin(cplx k, const BoundaryDensity& h) const;

  ClassicalOperators classical(cplx k) const;

  // F(x) = -int Psi_k(y - x) h(y) dy at exterior points. Points on or inside
  // the surface throw; exterior points within one local panel diameter of the
  // nearest node are evaluated but flagged.
  FieldEvaluation field(cplx k, const BoundaryDensity& h,
                        const std::vector<Vec3>& points) const;

  // Cache accessors (tests and quadrature mirrors).
  const PanelRule& children(int j) const { return children_[j]; }
  const PanelRule& self_rule(int j) const { return self_[j]; }
  // Interpolation stencil of panel j: [j] + two-ring, ring ascending.
  const std::vector<int>& columns(int j) const { return cols_[j]; }
  // Sample x stencil interpolation weights; rows sum to 1 exactly.
  const Eigen::MatrixXd& child_weights(int j) const { return wch_[j]; }
  const Eigen::MatrixXd& self_weights(int j) const { return wself_[j]; }
  bool near(int i, int j) const;

 private:
  template <typename Sink>
  void row_cauchy(int i, cplx k, Sink&& sink) const;

  const QuadratureSurface* surface_;
  NearParams params_;
  std::vector<PanelRule> children_;
  std::vector<PanelRule> self_;
  std::vector<std::vector<int>> cols_;
  std::vector<Eigen::MatrixXd> wch_;
  std::vector<Eigen::MatrixXd> wself_;
};

// Comparison of the compressed Cauchy operator against the classical
// operators. The scalar / tangential-vector / scalar-times-normal splitting
// compresses N+ C_k N+ to a 4 (outputs) x 3 (inputs) block grid whose entries
// are the classical operators (rows 1..3; row 4 is the trivector output,
// structurally zero). Blocks are compared by their action on a fixed family
// of smooth probe fields, not entrywise: the subtraction diagonal implements
// the same operator with a different matrix representation.
struct BlockComparison {
  Eigen::Matrix<double, 4, 4> deviation;  // max_u ||B u - T u|| per block
  Eigen::Matrix<double, 4, 4> reference;  // max_u ||T u|| per block
  // deviation / reference where reference > 0.05 * global_scale, else
  // deviation / global_scale (structurally zero blocks)
  Eigen::Matrix<double, 4, 4> relative;
  std::array<std::array<const char*, 4>, 4> labels;
  double global_scale = 0.0;
};
BlockComparison compare_classical_blocks(const Assembler& assembler, cplx k);

// One-shot entry points; construct an Assembler directly when assembling more
// than one operator on the same surface (the caches dominate setup time).
DenseOperator assemble_Ck(const QuadratureSurface& surface, cplx k);
DenseOperator assemble_Rk(const QuadratureSurface& surface, cplx k,
                          NearParams params = {});
DenseOperator assemble_M(const QuadratureSurface& surface);
DenseOperator spin_system(const QuadratureSurface& surface, cplx k);
DenseOperator rotation_system(const QuadratureSurface& surface, cplx k);
// Applies R_k with the same quadrature as assemble_Rk, never forming the
// matrix.
BoundaryDensity matrix_free_apply(const QuadratureSurface& surface, cplx k,
                                  const BoundaryDensity& h);
ClassicalOperators assemble_classical(const QuadratureSurface& surface,
                                      cplx k);
FieldEvaluation field_eval_RkOmega(const QuadratureSurface& surface, cplx k,
                                   const BoundaryDensity& h,
                                   const std::vector<Vec3>& points);

}  // namespace spinscat
