#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "spinscat/scattering.hpp"

using namespace spinscat;

namespace {

const QuadratureSurface& sphere(int s) {
  static const QuadratureSurface s1 = quadrature_from_mesh(icosphere(1));
  static const QuadratureSurface s2 = quadrature_from_mesh(icosphere(2));
  return s == 1 ? s1 : s2;
}

const Vec3 kSource(0.2, 0.1, -0.3);

const ErrorReport& dirichlet_report(int s) {
  static const ErrorReport r1 =
      verify_interior_source(FieldKind::dirichlet, sphere(1), 2.0, kSource);
  static const ErrorReport r2 =
      verify_interior_source(FieldKind::dirichlet, sphere(2), 2.0, kSource);
  return s == 1 ? r1 : r2;
}

cplx cdot(const CVec3& x, const Vec3& y) {
  return x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
}

}  // namespace

TEST_CASE("construction validates the standing assumptions") {
  const QuadratureSurface& s = sphere(1);
  const Incident pw = Incident::plane_wave(Vec3::UnitZ(), CVec3(1, 0, 0));
  CHECK_THROWS_AS(ScatteringProblem(FieldKind::dirichlet, 0.0, pw, s),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      ScatteringProblem(FieldKind::dirichlet, cplx(2.0, -0.1), pw, s),
      std::invalid_argument);
  // non-transverse maxwell polarization
  CHECK_THROWS_AS(
      ScatteringProblem(FieldKind::maxwell, 2.0,
                        Incident::plane_wave(Vec3::UnitZ(), CVec3(0, 0, 1)),
                        s),
      std::invalid_argument);
  // scalar point source is not a maxwell incident; dipole is not a scalar one
  CHECK_THROWS_AS(ScatteringProblem(FieldKind::maxwell, 2.0,
                                    Incident::point_source(kSource), s),
                  std::invalid_argument);
  CHECK_THROWS_AS(ScatteringProblem(FieldKind::dirichlet, 2.0,
                                    Incident::dipole(kSource, CVec3(1, 0, 0)),
                                    s),
                  std::invalid_argument);
  // sources must be strictly interior
  CHECK_THROWS_AS(ScatteringProblem(FieldKind::dirichlet, 2.0,
                                    Incident::point_source(Vec3(2, 0, 0)), s),
                  std::invalid_argument);
  CHECK_THROWS_AS(ScatteringProblem(FieldKind::maxwell, 2.0,
                                    Incident::dipole(kSource, CVec3::Zero()),
                                    s),
                  std::invalid_argument);
  // valid problems construct fine
  CHECK_NOTHROW(ScatteringProblem(FieldKind::maxwell, 2.0, pw, s));
  CHECK_NOTHROW(ScatteringProblem(FieldKind::neumann, cplx(2.0, 0.5),
                                  Incident::point_source(kSource), s));
}

TEST_CASE("boundary data is tangential with the kind's sparsity pattern") {
  const QuadratureSurface& s = sphere(1);
  const struct {
    FieldKind kind;
    Incident inc;
  } cases[] = {
      {FieldKind::dirichlet, Incident::plane_wave(Vec3::UnitZ())},
      {FieldKind::neumann, Incident::point_source(kSource)},
      {FieldKind::maxwell,
       Incident::plane_wave(Vec3::UnitZ(), CVec3(1, cplx(0, 0.5), 0))},
  };
  for (const auto& tc : cases) {
    const ScatteringProblem pr(tc.kind, 2.0, tc.inc, s);
    const BoundaryDensity g = build_boundary_data(pr);
    REQUIRE(g.size() == 8 * s.size());
    CHECK(g.norm() > 0.0);
    for (int i = 0; i < s.size(); ++i) {
      const Multivector gi(Coords8(g.segment<8>(8 * i)));
      // tangential: N- g = 0
      const Multivector nminus = gi - project_N_plus(gi, s.normals[i]);
      CHECK(nminus.norm() <= 1e-13 * gi.norm() + 1e-15);
      if (tc.kind == FieldKind::dirichlet) {
        CHECK(gi.b().norm() <= 1e-14 * gi.norm());
        CHECK(std::abs(gi.beta()) <= 1e-14 * gi.norm());
      } else if (tc.kind == FieldKind::neumann) {
        // projection is computed via Clifford products, so expect fp dust
        CHECK(std::abs(gi.alpha()) <= 1e-14 * gi.norm());
        CHECK(gi.a().norm() <= 1e-14 * gi.norm());
      }
    }
  }
}

TEST_CASE("boundary data matches the hand-built trace displays") {
  const QuadratureSurface& s = sphere(1);
  const cplx k(2.0, 0.0);
  const Vec3 d = Vec3::UnitZ();
  const CVec3 p(1, cplx(0, 0.5), 0);

  // maxwell: g = -(E_T + *(H_N)) with E = p e^{ik d.x}, H = (d x p) e^{ik d.x}
  {
    const ScatteringProblem pr(FieldKind::maxwell, k,
                               Incident::plane_wave(d, p), s);
    const BoundaryDensity g = build_boundary_data(pr);
    for (int i = 0; i < s.size(); ++i) {
      const Vec3& x = s.nodes[i];
      const Vec3& n = s.normals[i];
      const cplx phase = std::exp(cplx(0, 1) * k * d.dot(x));
      const CVec3 e = p * phase;
      const CVec3 hv = cross3(d.cast<cplx>(), p) * phase;
      const CVec3 et = e - cdot(e, n) * n.cast<cplx>();
      const CVec3 hn = cdot(hv, n) * n.cast<cplx>();
      const Multivector want(0.0, -et, -hn, 0.0);
      CHECK((Multivector(Coords8(g.segment<8>(8 * i))) - want).norm() <=
            1e-14 * want.norm());
    }
  }
  // dirichlet: g = -(ik u0 + ik u0 d_T)
  {
    const ScatteringProblem pr(FieldKind::dirichlet, k,
                               Incident::plane_wave(d), s);
    const BoundaryDensity g = build_boundary_data(pr);
    for (int i = 0; i < s.size(); ++i) {
      const Vec3& x = s.nodes[i];
      const Vec3& n = s.normals[i];
      const cplx u0 = std::exp(cplx(0, 1) * k * d.dot(x));
      const CVec3 dt = (d - d.dot(n) * n).cast<cplx>();
      const Multivector want(-cplx(0, 1) * k * u0,
                             -cplx(0, 1) * k * u0 * dt, CVec3::Zero(), 0.0);
      CHECK((Multivector(Coords8(g.segment<8>(8 * i))) - want).norm() <=
            1e-14 * want.norm() + 1e-15);
    }
  }
  // neumann: g = -*( (du0/dn) n ) = -*( ik (d.n) u0 n )
  {
    const ScatteringProblem pr(FieldKind::neumann, k,
                               Incident::plane_wave(d), s);
    const BoundaryDensity g = build_boundary_data(pr);
    for (int i = 0; i < s.size(); ++i) {
      const Vec3& x = s.nodes[i];
      const Vec3& n = s.normals[i];
      const cplx u0 = std::exp(cplx(0, 1) * k * d.dot(x));
      const CVec3 bn = -cplx(0, 1) * k * d.dot(n) * u0 * n.cast<cplx>();
      const Multivector want(0.0, CVec3::Zero(), bn, 0.0);
      CHECK((Multivector(Coords8(g.segment<8>(8 * i))) - want).norm() <=
            1e-14 * want.norm() + 1e-15);
    }
  }
}

TEST_CASE("homogeneous data solves to the zero density") {
  const QuadratureSurface& s = sphere(1);
  const Assembler a(s);
  const BoundaryDensity zero_g = BoundaryDensity::Zero(8 * s.size());
  const BoundaryDensity rhs = rhs_from_g(s, zero_g);
  CHECK(rhs.norm() == 0.0);
  const auto [h, rep] = direct_solve(a.spin(2.0).mat, rhs);
  CHECK(h.norm() == 0.0);
  CHECK(rep.residual_norm == 0.0);
  CHECK_THROWS_AS(rhs_from_g(s, BoundaryDensity::Zero(8)),
                  std::invalid_argument);
}

TEST_CASE("interior-source dirichlet: solution matches the analytic field") {
  const ErrorReport& r2 = dirichlet_report(2);
  CHECK(r2.solve.residual_norm <= 1e-8);
  CHECK(r2.max_rel <= 5e-2);
  CHECK(r2.leak_max <= 5e-2);
  CHECK(r2.rms_rel <= r2.max_rel);
  REQUIRE(r2.per_point.size() == 52);
  // error decreases under refinement
  CHECK(r2.max_rel < dirichlet_report(1).max_rel);
}

TEST_CASE("interior-source neumann: decoded v matches the analytic field") {
  const ErrorReport r =
      verify_interior_source(FieldKind::neumann, sphere(2), 2.0, kSource);
  CHECK(r.solve.residual_norm <= 1e-8);
  CHECK(r.max_rel <= 5e-2);
  CHECK(r.leak_max <= 5e-2);
}

TEST_CASE("interior-dipole maxwell: E and H match, scalar parts vanish") {
  const ErrorReport r = verify_interior_source(
      FieldKind::maxwell, sphere(2), 2.0, kSource, CVec3(1, cplx(0, 0.5), 0));
  CHECK(r.solve.residual_norm <= 1e-8);
  CHECK(r.max_rel <= 5e-2);
  CHECK(r.leak_max <= 5e-2);
}

TEST_CASE("direct and iterative spin solves agree") {
  const QuadratureSurface& s = sphere(1);
  SolverSettings it;
  it.method = SolverSettings::Method::gmres;
  it.tol = 1e-10;
  const ScatteringProblem direct(FieldKind::dirichlet, 2.0,
                                 Incident::point_source(kSource), s);
  const ScatteringProblem iterative(FieldKind::dirichlet, 2.0,
                                    Incident::point_source(kSource), s, it);
  const auto [hd, repd] = spin_solve(direct);
  const auto [hi, repi] = spin_solve(iterative);
  CHECK(repd.method == "direct");
  CHECK(repi.method == "iterative");
  CHECK(repd.residual_norm <= 1e-10);
  CHECK(repi.residual_norm <= 1e-10);
  CHECK(repi.iterations > 0);
  REQUIRE(repd.condition_estimate.has_value());
  CHECK((hd - hi).norm() / hd.norm() <= 1e-8);
}

TEST_CASE("conjugated-system solve maps back to the same density") {
  const QuadratureSurface& s = sphere(1);
  const int np = s.size();
  const cplx k(2.0, 0.0);
  const ScatteringProblem pr(FieldKind::dirichlet, k,
                             Incident::point_source(kSource), s);
  const auto [h, rep] = spin_solve(pr);

  // (I - (N + S + SN) C) f = 2 (I + S) g, then h = S f
  const BoundaryDensity g = build_boundary_data(pr);
  Eigen::MatrixXcd t = pr.assembler.cauchy(k).mat;
  for (int i = 0; i < np; ++i) {
    const NodeMats nm = node_matrices(s.normals[i]);
    const Mat8 nssn = nm.N + nm.S + nm.S * nm.N;
    t.middleRows(8 * i, 8) = (nssn * t.middleRows(8 * i, 8)).eval();
  }
  t = -t;
  t.diagonal().array() += 1.0;
  BoundaryDensity rhs(8 * np);
  for (int i = 0; i < np; ++i) {
    const Multivector gi(Coords8(g.segment<8>(8 * i)));
    rhs.segment<8>(8 * i) =
        2.0 * (gi + reflect_S(gi, s.normals[i])).c;
  }
  const auto [f, repf] = direct_solve(t, rhs);
  BoundaryDensity h43(8 * np);
  for (int i = 0; i < np; ++i)
    h43.segment<8>(8 * i) =
        reflect_S(Multivector(Coords8(f.segment<8>(8 * i))), s.normals[i]).c;
  CHECK((h43 - h).norm() / h.norm() <= 1e-10);
}

TEST_CASE("decoded views are kind-guarded and consistent with the field") {
  const QuadratureSurface& s = sphere(1);
  const ScatteringProblem pr(FieldKind::dirichlet, 2.0,
                             Incident::point_source(kSource), s);
  const auto [h, rep] = spin_solve(pr);
  const std::vector<Vec3> pts = {Vec3(2, 0.3, -0.4)};
  const std::vector<DecodedField> dec = evaluate_scattered(pr, h, pts);
  REQUIRE(dec.size() == 1);
  const DecodedField& d = dec[0];
  CHECK(d.position == pts[0]);
  CHECK_NOTHROW(d.u());
  CHECK_NOTHROW(d.grad_u());
  CHECK_THROWS_AS(d.E(), std::logic_error);
  CHECK_THROWS_AS(d.v(), std::logic_error);
  CHECK(d.field().alpha() == d.alpha);
  CHECK(!d.near_boundary);
  // u = alpha/(ik)
  CHECK(std::abs(d.u() - d.alpha / (cplx(0, 1) * 2.0)) <= 1e-15);
}

TEST_CASE("scattered field is a Dirac solution: FD gradient and D-residual") {
  const QuadratureSurface& s = sphere(2);
  const cplx k(2.0, 0.0);
  const ScatteringProblem pr(FieldKind::dirichlet, k,
                             Incident::point_source(kSource), s);
  const auto [h, rep] = spin_solve(pr);
  const Vec3 x0(1.7, 0.4, -0.6);
  const double step = 1e-3;
  std::vector<Vec3> pts = {x0};
  for (int c = 0; c < 3; ++c) {
    Vec3 dp = Vec3::Zero(), dm = Vec3::Zero();
    dp[c] = step;
    dm[c] = -step;
    pts.push_back(x0 + dp);
    pts.push_back(x0 + dm);
  }
  const std::vector<DecodedField> dec = evaluate_scattered(pr, h, pts);
  // grad(alpha/(ik)) ~ a
  CVec3 fd_grad;
  for (int c = 0; c < 3; ++c)
    fd_grad[c] =
        (dec[1 + 2 * c].u() - dec[2 + 2 * c].u()) / (2 * step);
  CHECK((fd_grad - dec[0].grad_u()).norm() / dec[0].grad_u().norm() <= 5e-2);
  // D F = ik F
  Multivector df;
  for (int c = 0; c < 3; ++c) {
    const Multivector diff =
        (dec[1 + 2 * c].field() - dec[2 + 2 * c].field()) *
        cplx(1.0 / (2 * step));
    Vec3 ec = Vec3::Zero();
    ec[c] = 1.0;
    df = df + clifford_mul(Multivector::vector(ec), diff);
  }
  const Multivector f0 = dec[0].field();
  CHECK((df - f0 * (cplx(0, 1) * k)).norm() / f0.norm() <= 5e-2);
}

TEST_CASE("computed fields satisfy the radiation-decay diagnostic") {
  const QuadratureSurface& s = sphere(1);
  const cplx k(2.0, 0.0);
  const ScatteringProblem pr(FieldKind::dirichlet, k,
                             Incident::point_source(kSource), s);
  const auto [h, rep] = spin_solve(pr);
  const FieldEvaluator F = [&](const Vec3& x) {
    return pr.assembler.field(k, h, {x}).values[0];
  };
  const double d5 = radiation_defect(F, k, 5.0, 26);
  const double d20 = radiation_defect(F, k, 20.0, 26);
  CHECK(d20 <= 2.0 * d5 * (5.0 / 20.0));
}

TEST_CASE("spin and rotation systems give the same exterior solution") {
  const QuadratureSurface& s = sphere(2);
  const int np = s.size();
  const cplx k(2.0, 0.0);
  const ScatteringProblem pr(FieldKind::dirichlet, k,
                             Incident::point_source(kSource), s);
  const auto [h_spin, rep] = spin_solve(pr);

  // (I - C N)(N h) = 2g; the unknown h is the exterior trace, so the
  // field is its Cauchy extension: evaluate the monogenic integral on n h.
  const BoundaryDensity g = build_boundary_data(pr);
  const auto [w, repw] = direct_solve(pr.assembler.rotation(k).mat, 2.0 * g);
  BoundaryDensity sh_rot(8 * np);
  for (int i = 0; i < np; ++i) {
    const auto& nm = node_matrices(s.normals[i]);
    sh_rot.segment<8>(8 * i) = nm.S * (nm.N * w.segment<8>(8 * i));
  }

  const std::vector<Vec3> pts = standard_probe_points();
  const std::vector<DecodedField> da = evaluate_scattered(pr, h_spin, pts);
  const std::vector<DecodedField> db = evaluate_scattered(pr, sh_rot, pts);
  double worst = 0;
  for (size_t q = 0; q < pts.size(); ++q) {
    const cplx u_ex = -phi(k, pts[q] - kSource);
    worst = std::max(worst, std::abs(da[q].u() - db[q].u()) / std::abs(u_ex));
  }
  CHECK(worst <= 2e-2);
}

TEST_CASE("resonance scan: rotation dips at the interior eigenvalue") {
  const double kpi = 3.14159265358979323846;
  const std::vector<ResonancePoint> scan = resonance_scan(
      sphere(2), {cplx(2.6), cplx(kpi)}, NearParams{},
      SigmaMethod::inverse_iteration);
  REQUIRE(scan.size() == 2);
  CHECK(scan[0].k == cplx(2.6));
  // the rotation system loses invertibility at the resonance
  CHECK(scan[1].sigma_rotation <= 0.2 * scan[0].sigma_rotation);
  // the spin system does not
  const double smax = std::max(scan[0].sigma_spin, scan[1].sigma_spin);
  const double smin = std::min(scan[0].sigma_spin, scan[1].sigma_spin);
  CHECK(smax <= 3.0 * smin);
  CHECK(smin > 0.1);
}

TEST_CASE("resonance scan: complex k keeps both systems invertible") {
  const std::vector<ResonancePoint> scan =
      resonance_scan(sphere(1), {cplx(2.6), cplx(2.0, 0.5)});
  REQUIRE(scan.size() == 2);
  CHECK(scan[1].sigma_spin >= 0.05 * scan[0].sigma_spin);
  CHECK(scan[1].sigma_rotation >= 0.05 * scan[0].sigma_rotation);
  CHECK_THROWS_AS(resonance_scan(sphere(1), {cplx(0.0)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(resonance_scan(sphere(1), {cplx(1.0, -0.2)}),
                  std::invalid_argument);
  const std::vector<ResonancePoint> one =
      resonance_scan(sphere(1), {cplx(2.0)});
  CHECK(one.size() == 1);
}

TEST_CASE("cauchy extension reproduces the oracle field") {
  const cplx k(2.0, 0.0);
  const Multivector c1(0.3, CVec3(1, -0.2, 0.5), CVec3(0.1, 0.7, -0.4), 0.9);
  const Multivector c2(0.1, CVec3(0.2, 0.3, -0.1), CVec3(0.5, -0.2, 0.1), 0.2);
  const Multivector c = c1 + c2 * cplx(0, 1);
  const ExtensionReport r1 = cauchy_extension_check(sphere(1), k, kSource, c);
  const ExtensionReport r2 = cauchy_extension_check(sphere(2), k, kSource, c);
  CHECK(r2.max_rel <= 5e-2);
  CHECK(r2.max_rel < r1.max_rel);
  CHECK(r2.rms_rel <= r2.max_rel);
  // zero constant: exact zeros
  const ExtensionReport rz =
      cauchy_extension_check(sphere(1), k, kSource, Multivector());
  for (double e : rz.per_point) CHECK(e == 0.0);
  // exterior z0 rejected
  CHECK_THROWS_AS(cauchy_extension_check(sphere(1), k, Vec3(3, 0, 0), c),
                  std::invalid_argument);
}
