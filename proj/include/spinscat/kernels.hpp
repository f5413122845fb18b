#pragma once

#include <functional>

#include "spinscat/clifford.hpp"

namespace spinscat {

// Fundamental solution of the Helmholtz operator Delta + k^2:
//   phi_k(x) = -e^{ik|x|} / (4 pi |x|).
// Defined for any k != 0 (and k = 0, the Laplace case); solver entry points
// additionally require Im k >= 0.
cplx phi(cplx k, const Vec3& x);

// grad phi_k(x) = (ik - 1/|x|) phi_k(x) x/|x|.
CVec3 grad_phi(cplx k, const Vec3& x);

// Clifford kernel psi_k = grad phi_k - ik phi_k: vector part grad phi_k,
// scalar part -ik phi_k. Satisfies (D + ik) psi_k = 0 away from the origin.
Multivector psi(cplx k, const Vec3& x);

// Dual kernel psi~_k = grad phi_k + ik phi_k (scalar sign flipped). Satisfies
// D psi~_k = ik psi~_k away from the origin together with the radiation
// condition (x/|x| - 1) psi~_k(x) = o(|x|^{-1} e^{Im k |x|}).
Multivector psi_tilde(cplx k, const Vec3& x);

// Boundary-value-problem flavor shared across field constructors and the
// scattering driver.
enum class FieldKind { dirichlet, neumann, maxwell };

// Radiating point-source field with u = phi_k(x - z0):
//   dirichlet: F = ik u + grad u        (alpha = ik u, a = grad u)
//   neumann:   F = *grad u + ik *u      (b = grad u, beta = ik u)
// Rejects the maxwell kind; use maxwell_dipole_field.
Multivector helmholtz_source_field(cplx k, const Vec3& z0, const Vec3& x,
                                   FieldKind kind = FieldKind::dirichlet);

// Electric dipole at z0 with (possibly complex) moment p:
//   u = phi_k(x - z0), H = grad u x p, E = ik p u + (i/k) grad(p . grad u),
// embedded as F = E + *H (alpha = beta = 0). First and second radial
// derivatives of phi are expanded in closed form.
Multivector maxwell_dipole_field(cplx k, const Vec3& z0, const CVec3& p,
                                 const Vec3& x);

// Incident plane waves, embedded like the source fields:
//   dirichlet/neumann: u0 = e^{ik d.x} (polarization ignored)
//   maxwell: E = p e^{ik d.x}, H = (d x p) e^{ik d.x}, requires p . d = 0.
// d must be a real unit vector.
Multivector plane_wave_field(FieldKind kind, cplx k, const Vec3& d,
                             const CVec3& p, const Vec3& x);

using FieldEvaluator = std::function<Multivector(const Vec3&)>;

// Radiation-condition diagnostic: max over m quasi-uniform points x on the
// sphere |x| = R of |(x/|x| - 1) F(x)| * R * e^{-Im k R}. Decays like 1/R for
// radiating fields; stays O(1) for wrong-sign kernels.
double radiation_defect(const FieldEvaluator& F, cplx k, double R, int m);

}  // namespace spinscat
