#include "spinscat/scattering.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace spinscat {

namespace {

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

bool strictly_interior(const QuadratureSurface& s, const Vec3& x) {
  const TriangleMesh& mesh = s.mesh;
  if (mesh.analytic)
    return (mesh.map_A.inverse() * (x - mesh.map_b)).norm() < 1.0 - 1e-9;
  int jstar = 0;
  double dmin = std::numeric_limits<double>::infinity();
  for (int j = 0; j < s.size(); ++j) {
    const double d = (x - s.nodes[j]).norm();
    if (d < dmin) {
      dmin = d;
      jstar = j;
    }
  }
  return (x - s.nodes[jstar]).dot(s.normals[jstar]) <
         -1e-9 * s.panel_diam[jstar];
}

Incident validated(FieldKind kind, cplx k, Incident inc,
                   const QuadratureSurface& surface) {
  if (k == cplx(0.0))
    throw std::invalid_argument("scattering: wave number k must be nonzero");
  if (k.imag() < 0.0)
    throw std::invalid_argument("scattering: Im k must be >= 0");
  switch (inc.kind) {
    case Incident::Kind::plane_wave: {
      const double dn = inc.direction.norm();
      if (dn == 0.0)
        throw std::invalid_argument(
            "scattering: plane-wave direction must be nonzero");
      inc.direction /= dn;
      if (kind == FieldKind::maxwell) {
        const double pn = inc.moment.norm();
        if (pn == 0.0)
          throw std::invalid_argument(
              "scattering: maxwell polarization must be nonzero");
        const cplx pd = inc.moment[0] * inc.direction[0] +
                        inc.moment[1] * inc.direction[1] +
                        inc.moment[2] * inc.direction[2];
        if (std::abs(pd) > 1e-12 * pn)
          throw std::invalid_argument(
              "scattering: maxwell polarization must be transverse to the "
              "propagation direction");
      }
      break;
    }
    case Incident::Kind::point_source:
      if (kind == FieldKind::maxwell)
        throw std::invalid_argument(
            "scattering: maxwell problems take a dipole incident, not a "
            "scalar point source");
      if (!strictly_interior(surface, inc.source))
        throw std::invalid_argument(
            "scattering: point source must lie strictly inside the surface");
      break;
    case Incident::Kind::dipole:
      if (kind != FieldKind::maxwell)
        throw std::invalid_argument(
            "scattering: dipole incidents are for maxwell problems");
      if (inc.moment.norm() == 0.0)
        throw std::invalid_argument(
            "scattering: dipole moment must be nonzero");
      if (!strictly_interior(surface, inc.source))
        throw std::invalid_argument(
            "scattering: dipole must lie strictly inside the surface");
      break;
  }
  return inc;
}

}  // namespace

Incident Incident::plane_wave(const Vec3& d, const CVec3& p) {
  Incident inc;
  inc.kind = Kind::plane_wave;
  inc.direction = d;
  inc.moment = p;
  return inc;
}

Incident Incident::point_source(const Vec3& z0) {
  Incident inc;
  inc.kind = Kind::point_source;
  inc.source = z0;
  return inc;
}

Incident Incident::dipole(const Vec3& z0, const CVec3& p) {
  Incident inc;
  inc.kind = Kind::dipole;
  inc.source = z0;
  inc.moment = p;
  return inc;
}

ScatteringProblem::ScatteringProblem(FieldKind kind_, cplx k_,
                                     Incident incident_,
                                     const QuadratureSurface& surface_,
                                     SolverSettings solver_, NearParams quad)
    : kind(kind_),
      k(k_),
      incident(validated(kind_, k_, std::move(incident_), surface_)),
      solver(solver_),
      assembler(surface_, quad) {}

Multivector incident_field(const ScatteringProblem& problem, const Vec3& x) {
  const Incident& inc = problem.incident;
  switch (inc.kind) {
    case Incident::Kind::plane_wave:
      return plane_wave_field(problem.kind, problem.k, inc.direction,
                              inc.moment, x);
    case Incident::Kind::point_source:
      return helmholtz_source_field(problem.k, inc.source, x, problem.kind);
    case Incident::Kind::dipole:
      return maxwell_dipole_field(problem.k, inc.source, inc.moment, x);
  }
  throw std::logic_error("scattering: unknown incident kind");
}

BoundaryDensity build_boundary_data(const ScatteringProblem& problem) {
  const QuadratureSurface& s = problem.surface();
  BoundaryDensity g(8 * s.size());
  for (int i = 0; i < s.size(); ++i) {
    const Multivector f0 = incident_field(problem, s.nodes[i]);
    g.segment<8>(8 * i) = -project_N_plus(f0, s.normals[i]).c;
  }
  return g;
}

BoundaryDensity rhs_from_g(const QuadratureSurface& surface,
                           const BoundaryDensity& g) {
  if (g.size() != 8 * surface.size())
    throw std::invalid_argument("rhs_from_g: density size mismatch");
  BoundaryDensity out(g.size());
  for (int i = 0; i < surface.size(); ++i) {
    const Multivector gi(Coords8(g.segment<8>(8 * i)));
    const Multivector hat_n = clifford_mul(
        involution(gi), Multivector::vector(surface.normals[i]));
    out.segment<8>(8 * i) = 2.0 * gi.c + 2.0 * hat_n.c;
  }
  return out;
}

std::pair<BoundaryDensity, SolveReport> spin_solve(
    const ScatteringProblem& problem) {
  const Assembler& a = problem.assembler;
  const cplx k = problem.k;
  const BoundaryDensity g = build_boundary_data(problem);
  const BoundaryDensity rhs = rhs_from_g(problem.surface(), g);

  if (problem.solver.method == SolverSettings::Method::gmres) {
    const auto apply = [&](const Eigen::VectorXcd& v) {
      return a.apply_spin(k, v);
    };
    return gmres_solve(apply, rhs, problem.solver.tol, problem.solver.restart,
                       problem.solver.max_iters);
  }

  const double t0 = now_seconds();
  DenseOperator op = a.spin(k);
  LuFactorization lu = lu_factor(std::move(op.mat));
  BoundaryDensity h = lu_solve(lu, rhs);
  SolveReport rep;
  rep.method = "direct";
  rep.iterations = 0;
  const double bnorm = rhs.norm();
  const double rnorm = (a.apply_spin(k, h) - rhs).norm();
  rep.residual_norm = bnorm > 0.0 ? rnorm / bnorm : rnorm;
  rep.condition_estimate = 1.0 / lu_rcond(lu);
  rep.elapsed_seconds = now_seconds() - t0;
  return {std::move(h), rep};
}

namespace {

void require_kind(FieldKind have, FieldKind want, const char* view) {
  if (have != want)
    throw std::logic_error(std::string("DecodedField: view ") + view +
                           " is not defined for this problem kind");
}

}  // namespace

CVec3 DecodedField::E() const {
  require_kind(kind, FieldKind::maxwell, "E");
  return a;
}

CVec3 DecodedField::H() const {
  require_kind(kind, FieldKind::maxwell, "H");
  return b;
}

cplx DecodedField::u() const {
  require_kind(kind, FieldKind::dirichlet, "u");
  return alpha / (cplx(0, 1) * k);
}

CVec3 DecodedField::grad_u() const {
  require_kind(kind, FieldKind::dirichlet, "grad_u");
  return a;
}

cplx DecodedField::v() const {
  require_kind(kind, FieldKind::neumann, "v");
  return beta / (cplx(0, 1) * k);
}

CVec3 DecodedField::grad_v() const {
  require_kind(kind, FieldKind::neumann, "grad_v");
  return b;
}

std::vector<DecodedField> evaluate_scattered(const ScatteringProblem& problem,
                                             const BoundaryDensity& h,
                                             const std::vector<Vec3>& points) {
  const FieldEvaluation fe = problem.assembler.field(problem.k, h, points);
  std::vector<DecodedField> out(points.size());
  for (size_t p = 0; p < points.size(); ++p) {
    DecodedField& d = out[p];
    d.position = points[p];
    d.kind = problem.kind;
    d.k = problem.k;
    const Multivector& f = fe.values[p];
    d.alpha = f.alpha();
    d.a = f.a();
    d.b = f.b();
    d.beta = f.beta();
  }
  for (int idx : fe.near_boundary) out[idx].near_boundary = true;
  return out;
}

std::vector<Vec3> standard_probe_points() {
  std::vector<Vec3> pts;
  pts.reserve(52);
  for (double r : {2.0, 5.0})
    for (int i = -1; i <= 1; ++i)
      for (int j = -1; j <= 1; ++j)
        for (int l = -1; l <= 1; ++l) {
          if (i == 0 && j == 0 && l == 0) continue;
          pts.push_back(r * Vec3(i, j, l).normalized());
        }
  return pts;
}

ErrorReport verify_interior_source(FieldKind kind,
                                   const QuadratureSurface& surface, cplx k,
                                   const Vec3& z0, const CVec3& p,
                                   SolverSettings solver, NearParams quad) {
  const Incident inc = kind == FieldKind::maxwell ? Incident::dipole(z0, p)
                                                  : Incident::point_source(z0);
  const ScatteringProblem problem(kind, k, inc, surface, solver, quad);
  auto [h, rep] = spin_solve(problem);

  ErrorReport er;
  er.points = standard_probe_points();
  er.solve = rep;
  const std::vector<DecodedField> dec =
      evaluate_scattered(problem, h, er.points);

  double sumsq = 0.0;
  for (size_t q = 0; q < er.points.size(); ++q) {
    const Vec3& x = er.points[q];
    const DecodedField& d = dec[q];
    const Multivector f0 = incident_field(problem, x);
    double err = 0.0, leak = 0.0;
    switch (kind) {
      case FieldKind::dirichlet: {
        const cplx u_ex = -phi(k, x - z0);
        err = std::abs(d.u() - u_ex) / std::abs(u_ex);
        leak = (d.b.norm() + std::abs(d.beta)) / f0.norm();
        break;
      }
      case FieldKind::neumann: {
        const cplx v_ex = -phi(k, x - z0);
        err = std::abs(d.v() - v_ex) / std::abs(v_ex);
        leak = (std::abs(d.alpha) + d.a.norm()) / f0.norm();
        break;
      }
      case FieldKind::maxwell: {
        const CVec3 e_ex = -f0.a();
        const CVec3 h_ex = -f0.b();
        const double den = e_ex.norm() + h_ex.norm();
        err = ((d.E() - e_ex).norm() + (d.H() - h_ex).norm()) / den;
        leak = (std::abs(d.alpha) + std::abs(d.beta)) / den;
        break;
      }
    }
    er.per_point.push_back(err);
    er.max_rel = std::max(er.max_rel, err);
    er.leak_max = std::max(er.leak_max, leak);
    sumsq += err * err;
  }
  er.rms_rel = std::sqrt(sumsq / static_cast<double>(er.points.size()));
  return er;
}

std::vector<ResonancePoint> resonance_scan(const QuadratureSurface& surface,
                                           const std::vector<cplx>& ks,
                                           NearParams quad,
                                           SigmaMethod method) {
  for (cplx k : ks) {
    if (k == cplx(0.0))
      throw std::invalid_argument("resonance_scan: k must be nonzero");
    if (k.imag() < 0.0)
      throw std::invalid_argument("resonance_scan: Im k must be >= 0");
  }
  const Assembler a(surface, quad);
  std::vector<ResonancePoint> out;
  out.reserve(ks.size());
  for (cplx k : ks) {
    ResonancePoint rp;
    rp.k = k;
    {
      DenseOperator op = a.cauchy(k);
      a.spin_in_place(op.mat);
      rp.sigma_spin = smallest_singular_value_inplace(op.mat, 1e-6, method);
    }
    {
      DenseOperator op = a.cauchy(k);
      a.rotation_in_place(op.mat);
      rp.sigma_rotation =
          smallest_singular_value_inplace(op.mat, 1e-6, method);
    }
    out.push_back(rp);
  }
  return out;
}

ExtensionReport cauchy_extension_check(const QuadratureSurface& surface,
                                       cplx k, const Vec3& z0,
                                       const Multivector& c, NearParams quad) {
  if (!strictly_interior(surface, z0))
    throw std::invalid_argument(
        "cauchy_extension_check: z0 must lie strictly inside the surface");
  const Assembler a(surface, quad);
  const auto oracle = [&](const Vec3& x) {
    return clifford_mul(psi_tilde(k, x - z0), c);
  };
  BoundaryDensity h(8 * surface.size());
  for (int i = 0; i < surface.size(); ++i)
    h.segment<8>(8 * i) =
        clifford_mul(Multivector::vector(surface.normals[i]),
                     oracle(surface.nodes[i]))
            .c;
  const std::vector<Vec3> pts = standard_probe_points();
  const FieldEvaluation fe = a.field(k, h, pts);
  ExtensionReport er;
  double sumsq = 0.0;
  for (size_t p = 0; p < pts.size(); ++p) {
    const Multivector ex = oracle(pts[p]);
    const double exn = ex.norm();
    const double rel = exn > 0.0 ? (fe.values[p] - ex).norm() / exn
                                 : fe.values[p].norm();
    er.per_point.push_back(rel);
    er.max_rel = std::max(er.max_rel, rel);
    sumsq += rel * rel;
  }
  er.rms_rel = std::sqrt(sumsq / static_cast<double>(pts.size()));
  return er;
}

}  // namespace spinscat
