#include "spinscat/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spinscat {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_nonzero(const Vec3& z, const char* who) {
  if (z.squaredNorm() == 0.0)
    throw std::invalid_argument(std::string(who) +
                                ": evaluation point coincides with the source");
}

}  // namespace

cplx phi(cplx k, const Vec3& x) {
  require_nonzero(x, "phi");
  const double r = x.norm();
  return -std::exp(cplx(0, 1) * k * r) / (4.0 * kPi * r);
}

CVec3 grad_phi(cplx k, const Vec3& x) {
  require_nonzero(x, "grad_phi");
  const double r = x.norm();
  const cplx f = (cplx(0, 1) * k - 1.0 / r) * phi(k, x) / r;
  return f * x.cast<cplx>();
}

Multivector psi(cplx k, const Vec3& x) {
  return Multivector(-cplx(0, 1) * k * phi(k, x), grad_phi(k, x),
                     CVec3::Zero(), 0.0);
}

Multivector psi_tilde(cplx k, const Vec3& x) {
  return Multivector(cplx(0, 1) * k * phi(k, x), grad_phi(k, x), CVec3::Zero(),
                     0.0);
}

Multivector helmholtz_source_field(cplx k, const Vec3& z0, const Vec3& x,
                                   FieldKind kind) {
  const Vec3 z = x - z0;
  require_nonzero(z, "helmholtz_source_field");
  const cplx u = phi(k, z);
  const Multivector f(cplx(0, 1) * k * u, grad_phi(k, z), CVec3::Zero(), 0.0);
  switch (kind) {
    case FieldKind::dirichlet:
      return f;
    case FieldKind::neumann:
      return hodge_star(f);
    default:
      throw std::invalid_argument(
          "helmholtz_source_field: kind must be dirichlet or neumann");
  }
}

Multivector maxwell_dipole_field(cplx k, const Vec3& z0, const CVec3& p,
                                 const Vec3& x) {
  if (k == cplx(0))
    throw std::invalid_argument("maxwell_dipole_field: k must be nonzero");
  const Vec3 z = x - z0;
  require_nonzero(z, "maxwell_dipole_field");
  const cplx I(0, 1);
  const double r = z.norm();
  const CVec3 zh = (z / r).cast<cplx>();
  const cplx u = phi(k, z);
  const cplx du = (I * k - 1.0 / r) * u;            // d phi / dr
  const cplx ddu = (I * k - 1.0 / r) * du + u / (r * r);
  const cplx zp = zh.cwiseProduct(p).sum();
  // Hessian(u) p, with Hess u = ddu zh zh^T + (du/r)(I - zh zh^T).
  const CVec3 grad_p_du = ddu * zp * zh + (du / r) * (p - zp * zh);
  const CVec3 E = I * k * u * p + (I / k) * grad_p_du;
  const CVec3 H = cross3(du * zh, p);
  return Multivector(0.0, E, H, 0.0);
}

Multivector plane_wave_field(FieldKind kind, cplx k, const Vec3& d,
                             const CVec3& p, const Vec3& x) {
  if (std::abs(d.norm() - 1.0) > 1e-12)
    throw std::invalid_argument(
        "plane_wave_field: direction must be a real unit vector");
  const cplx I(0, 1);
  const cplx u = std::exp(I * k * d.dot(x));
  switch (kind) {
    case FieldKind::dirichlet:
      return Multivector(I * k * u, I * k * u * d.cast<cplx>(), CVec3::Zero(),
                         0.0);
    case FieldKind::neumann:
      return hodge_star(Multivector(I * k * u, I * k * u * d.cast<cplx>(),
                                    CVec3::Zero(), 0.0));
    case FieldKind::maxwell: {
      const cplx pd = d.cast<cplx>().cwiseProduct(p).sum();
      if (std::abs(pd) > 1e-12 * std::max(1.0, p.norm()))
        throw std::invalid_argument(
            "plane_wave_field: maxwell polarization must satisfy p . d = 0");
      return Multivector(0.0, u * p, u * cross3(d.cast<cplx>(), p), 0.0);
    }
  }
  throw std::invalid_argument("plane_wave_field: unknown kind");
}

double radiation_defect(const FieldEvaluator& F, cplx k, double R, int m) {
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  double worst = 0.0;
  for (int i = 0; i < m; ++i) {
    const double zc = 1.0 - 2.0 * (i + 0.5) / m;
    const double rr = std::sqrt(std::max(0.0, 1.0 - zc * zc));
    const double th = golden * i;
    const Vec3 xh(rr * std::cos(th), rr * std::sin(th), zc);
    const Multivector zm(-1.0, xh.cast<cplx>(), CVec3::Zero(), 0.0);
    worst = std::max(worst, clifford_mul(zm, F(R * xh)).norm());
  }
  return worst * R * std::exp(-k.imag() * R);
}

}  // namespace spinscat
