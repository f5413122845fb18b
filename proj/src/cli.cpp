#include "spinscat/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <json.hpp>

#include "spinscat/config.hpp"

extern "C" void openblas_set_num_threads(int);

namespace spinscat {
namespace {

namespace fs = std::filesystem;
using njson = nlohmann::ordered_json;

std::string fmt17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void append_complex(std::string* row, cplx v) {
  *row += ',';
  *row += fmt17(v.real());
  *row += ',';
  *row += fmt17(v.imag());
}

njson json_complex(cplx v) { return njson{{"re", v.real()}, {"im", v.imag()}}; }

// resolve against out_dir (absolute paths win) and create the directories
std::string resolve_output(const std::string& out_dir, const std::string& p) {
  fs::path fp(p);
  if (!fp.is_absolute()) fp = fs::path(out_dir) / fp;
  if (fp.has_parent_path()) fs::create_directories(fp.parent_path());
  return fp.string();
}

bool write_file(const std::string& path, const std::string& content,
                std::string* err) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  out.flush();
  if (!out) {
    *err = "cannot write \"" + path + "\"";
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// selftest

struct IdentityResult {
  std::string name;
  bool ok = true;
  std::string detail;
};

Multivector basis_element(int i) {
  Coords8 c = Coords8::Zero();
  c[i] = 1.0;
  return Multivector(c);
}

std::mt19937* selftest_rng() {
  static std::mt19937 rng(2026);
  return &rng;
}

double urand() {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  return d(*selftest_rng());
}

Multivector random_multivector() {
  Coords8 c;
  for (int i = 0; i < 8; ++i) c[i] = cplx(urand(), urand());
  return Multivector(c);
}

Vec3 random_unit() {
  Vec3 v;
  do {
    v = Vec3(urand(), urand(), urand());
  } while (v.norm() < 0.1);
  return v.normalized();
}

// Structure constants of the Clifford product on the basis
// {1, e1, e2, e3, e23, e31, e12, e123}: basis_i basis_j = sign * basis_target.
struct StructureTable {
  int target[8][8];
  int sign[8][8];
};

StructureTable reference_table(bool corrupt) {
  // clang-format off
  static const int tgt[8][8] = {
      {0, 1, 2, 3, 4, 5, 6, 7},
      {1, 0, 6, 5, 7, 3, 2, 4},
      {2, 6, 0, 4, 3, 7, 1, 5},
      {3, 5, 4, 0, 2, 1, 7, 6},
      {4, 7, 3, 2, 0, 6, 5, 1},
      {5, 3, 7, 1, 6, 0, 4, 2},
      {6, 2, 1, 7, 5, 4, 0, 3},
      {7, 4, 5, 6, 1, 2, 3, 0}};
  static const int sgn[8][8] = {
      {+1, +1, +1, +1, +1, +1, +1, +1},
      {+1, +1, +1, -1, +1, -1, +1, +1},
      {+1, -1, +1, +1, +1, +1, -1, +1},
      {+1, +1, -1, +1, -1, +1, +1, +1},
      {+1, +1, -1, +1, -1, -1, +1, -1},
      {+1, +1, +1, -1, +1, -1, -1, -1},
      {+1, -1, +1, +1, -1, +1, -1, -1},
      {+1, +1, +1, +1, -1, -1, -1, -1}};
  // clang-format on
  StructureTable t;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      t.target[i][j] = tgt[i][j];
      t.sign[i][j] = sgn[i][j];
    }
  if (corrupt) t.sign[1][2] = -t.sign[1][2];  // miswire e1 * e2
  return t;
}

double pair_norm(const MatrixPair& p) { return p.m1.norm() + p.m2.norm(); }

std::vector<IdentityResult> run_selftest(bool corrupt) {
  selftest_rng()->seed(2026);
  std::vector<IdentityResult> results;
  const auto record = [&](const std::string& name, bool ok,
                          const std::string& detail = "") {
    results.push_back({name, ok, detail});
  };
  static const char* basis_names[8] = {"1",   "e1",  "e2", "e3",
                                       "e23", "e31", "e12", "e123"};

  {
    const StructureTable t = reference_table(corrupt);
    bool ok = true;
    std::string detail;
    for (int i = 0; i < 8 && ok; ++i)
      for (int j = 0; j < 8 && ok; ++j) {
        const Multivector got = clifford_mul(basis_element(i), basis_element(j));
        Coords8 want = Coords8::Zero();
        want[t.target[i][j]] = static_cast<double>(t.sign[i][j]);
        if ((got.c - want).norm() > 1e-14) {
          ok = false;
          detail = std::string(basis_names[i]) + " * " + basis_names[j];
        }
      }
    record("basis products match the structure constants", ok, detail);
  }

  {
    bool ok = true;
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j) {
        const Multivector s = clifford_mul(basis_element(i), basis_element(j)) +
                              clifford_mul(basis_element(j), basis_element(i));
        Coords8 want = Coords8::Zero();
        want[0] = i == j ? 2.0 : 0.0;
        if ((s.c - want).norm() > 1e-14) ok = false;
      }
    record("generators anticommute", ok);
  }

  {
    bool ok = true;
    for (int rep = 0; rep < 8; ++rep) {
      const Multivector w1 = random_multivector();
      const Multivector w2 = random_multivector();
      const MatrixPair lhs = rho(clifford_mul(w1, w2));
      const MatrixPair rhs = rho(w1) * rho(w2);
      if (pair_norm(lhs - rhs) > 1e-12 * (1.0 + pair_norm(rhs))) ok = false;
      if ((rho_inv(rho(w1)).c - w1.c).norm() > 1e-13 * w1.norm()) ok = false;
    }
    record("matrix representation is an algebra isomorphism", ok);
  }

  {
    bool ok = true;
    for (int rep = 0; rep < 8; ++rep) {
      const Multivector w1 = random_multivector();
      const Multivector w2 = random_multivector();
      const Multivector lhs = involution(clifford_mul(w1, w2));
      const Multivector rhs = clifford_mul(involution(w1), involution(w2));
      if ((lhs.c - rhs.c).norm() > 1e-12 * (1.0 + rhs.norm())) ok = false;
      if ((hodge_star(hodge_star(w1)).c - w1.c).norm() > 1e-13 * w1.norm())
        ok = false;
    }
    record("grade involution is an automorphism and ** = id", ok);
  }

  {
    bool ok = true;
    for (int rep = 0; rep < 8; ++rep) {
      const CVec3 a(cplx(urand(), urand()), cplx(urand(), urand()),
                    cplx(urand(), urand()));
      const CVec3 b(cplx(urand(), urand()), cplx(urand(), urand()),
                    cplx(urand(), urand()));
      const Multivector va = Multivector::vector(a);
      const Multivector vb = Multivector::vector(b);
      const cplx dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
      const Multivector want = Multivector::scalar(dot) + exterior_mul(va, vb);
      if ((clifford_mul(va, vb).c - want.c).norm() >
          1e-13 * (1.0 + want.norm()))
        ok = false;
    }
    record("vector products split into dot and wedge parts", ok);
  }

  {
    bool ok = true;
    for (int rep = 0; rep < 6; ++rep) {
      const Vec3 n = random_unit();
      const NodeMats nm = node_matrices(n);
      const Mat8 id = Mat8::Identity();
      if ((nm.N * nm.N - id).norm() > 1e-13) ok = false;
      if ((nm.S * nm.S - id).norm() > 1e-13) ok = false;
      if ((nm.N * nm.S + nm.S * nm.N).norm() > 1e-13) ok = false;
    }
    record("boundary reflections obey N^2 = S^2 = I and NS + SN = 0", ok);
  }

  {
    bool ok = true;
    for (int rep = 0; rep < 6; ++rep) {
      const Vec3 n = random_unit();
      const Multivector g = project_N_plus(random_multivector(), n);
      const Multivector lhs = clifford_mul(Multivector::vector(n), g);
      const Multivector rhs =
          clifford_mul(involution(g), Multivector::vector(n));
      if ((lhs.c - rhs.c).norm() > 1e-13 * (1.0 + g.norm())) ok = false;
    }
    record("tangential fields commute with the normal up to involution", ok);
  }

  {
    const cplx k(2.0, 0.3);
    bool ok = true;
    for (const Vec3& x : {Vec3(0.7, -0.4, 1.1), Vec3(-1.2, 0.5, 0.3)}) {
      const double h = 1e-5;
      CVec3 fd;
      for (int c = 0; c < 3; ++c) {
        Vec3 xp = x, xm = x;
        xp[c] += h;
        xm[c] -= h;
        fd[c] = (phi(k, xp) - phi(k, xm)) / (2.0 * h);
      }
      if ((fd - grad_phi(k, x)).norm() > 1e-6 * grad_phi(k, x).norm())
        ok = false;
    }
    record("kernel gradient matches finite differences", ok);
  }

  {
    const cplx k(1.7, 0.0);
    bool ok = true;
    for (const Vec3& x : {Vec3(0.9, 0.2, -0.5), Vec3(-0.3, 1.1, 0.8)}) {
      const double h = 1e-5;
      Multivector acc = psi(k, x) * (cplx(0, 1) * k);
      for (int c = 0; c < 3; ++c) {
        Vec3 xp = x, xm = x;
        xp[c] += h;
        xm[c] -= h;
        const Multivector d = (psi(k, xp) - psi(k, xm)) * (1.0 / (2.0 * h));
        acc = acc + clifford_mul(Multivector::vector(Vec3(Vec3::Unit(c))), d);
      }
      if (acc.norm() > 1e-5 * psi(k, x).norm()) ok = false;
    }
    record("fundamental solution is Dirac-monogenic away from the source", ok);
  }

  {
    const cplx k(2.0, 0.0);
    const Vec3 d = Vec3(1.0, 2.0, 2.0).normalized();
    const CVec3 p = CVec3(2.0, -1.0, 0.0).normalized();  // p . d = 0
    bool ok = true;
    const Vec3 x(0.4, -0.7, 0.6);
    const double h = 1e-5;
    Multivector acc = plane_wave_field(FieldKind::maxwell, k, d, p, x) *
                      (cplx(0, -1) * k);
    for (int c = 0; c < 3; ++c) {
      Vec3 xp = x, xm = x;
      xp[c] += h;
      xm[c] -= h;
      const Multivector fd =
          (plane_wave_field(FieldKind::maxwell, k, d, p, xp) -
           plane_wave_field(FieldKind::maxwell, k, d, p, xm)) *
          (1.0 / (2.0 * h));
      acc = acc + clifford_mul(Multivector::vector(Vec3(Vec3::Unit(c))), fd);
    }
    if (acc.norm() >
        1e-5 * plane_wave_field(FieldKind::maxwell, k, d, p, x).norm())
      ok = false;
    record("plane-wave field solves the first-order system", ok);
  }

  return results;
}

// ---------------------------------------------------------------------------
// shared command plumbing

njson solve_report_json(const SolveReport& rep) {
  njson j;
  j["method"] = rep.method;
  j["residual_norm"] = rep.residual_norm;
  j["iterations"] = rep.iterations;
  j["elapsed_seconds"] = rep.elapsed_seconds;
  if (rep.condition_estimate) j["condition_estimate"] = *rep.condition_estimate;
  return j;
}

njson mesh_stats_json(const QuadratureSurface& s) {
  double dmax = 0.0;
  for (double d : s.panel_diam) dmax = std::max(dmax, d);
  njson j;
  j["panels"] = s.mesh.num_triangles();
  j["nodes"] = s.size();
  j["unknowns"] = 8 * s.size();
  j["area"] = s.area();
  j["max_panel_diameter"] = dmax;
  return j;
}

// components that must vanish for the kind, relative to the field magnitude
double decoded_leak(const DecodedField& f) {
  const double den = f.field().norm();
  if (den <= 0.0) return 0.0;
  switch (f.kind) {
    case FieldKind::dirichlet:
      return (f.b.norm() + std::abs(f.beta)) / den;
    case FieldKind::neumann:
      return (std::abs(f.alpha) + f.a.norm()) / den;
    case FieldKind::maxwell:
      return (std::abs(f.alpha) + std::abs(f.beta)) / den;
  }
  return 0.0;
}

}  // namespace

void apply_thread_count(int threads) {
  if (threads <= 0) return;
#ifdef _OPENMP
  omp_set_num_threads(threads);
#endif
  Eigen::setNbThreads(threads);
  openblas_set_num_threads(threads);
}

int cmd_selftest(bool corrupt_structure_constants, std::ostream& out) {
  const std::vector<IdentityResult> results =
      run_selftest(corrupt_structure_constants);
  int passed = 0, failed = 0;
  njson failures = njson::array();
  for (const IdentityResult& r : results) {
    if (r.ok) {
      ++passed;
      continue;
    }
    ++failed;
    njson f;
    f["identity"] = r.name;
    if (!r.detail.empty()) f["detail"] = r.detail;
    failures.push_back(f);
  }
  njson summary;
  summary["passed"] = passed;
  summary["failed"] = failed;
  summary["failures"] = failures;
  out << summary.dump(2) << "\n";
  return failed == 0 ? 0 : 1;
}

int cmd_solve(const CliOptions& opt) {
  apply_thread_count(opt.threads);
  RunConfig cfg;
  TriangleMesh mesh;
  QuadratureSurface surf;
  std::optional<ScatteringProblem> pr;
  try {
    cfg = parse_config_file(opt.config_path);
    if (!cfg.has_kind) throw ConfigError("missing \"kind\"");
    if (!cfg.has_k) throw ConfigError("missing \"k\"");
    if (!cfg.has_geometry) throw ConfigError("missing \"geometry\"");
    if (!cfg.has_incident) throw ConfigError("missing \"incident\"");
    mesh = build_geometry(cfg.geometry);
    surf = quadrature_from_mesh(mesh);
    pr.emplace(cfg.kind, cfg.k, cfg.incident, surf, cfg.solver,
               cfg.quadrature);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  std::vector<Vec3> points = evaluation_points(cfg.evaluation);
  if (points.empty()) points = standard_probe_points();

  BoundaryDensity h;
  SolveReport rep;
  std::vector<DecodedField> fields;
  try {
    std::tie(h, rep) = spin_solve(*pr);
    fields = evaluate_scattered(*pr, h, points);
  } catch (const std::exception& e) {
    std::cerr << "solve error: " << e.what() << "\n";
    return 3;
  }

  std::string csv =
      "x,y,z,re_alpha,im_alpha,re_a1,im_a1,re_a2,im_a2,re_a3,im_a3,"
      "re_b1,im_b1,re_b2,im_b2,re_b3,im_b3,re_beta,im_beta";
  if (cfg.kind == FieldKind::maxwell)
    csv +=
        ",re_E1,im_E1,re_E2,im_E2,re_E3,im_E3,"
        "re_H1,im_H1,re_H2,im_H2,re_H3,im_H3";
  else if (cfg.kind == FieldKind::dirichlet)
    csv += ",re_u,im_u,re_du1,im_du1,re_du2,im_du2,re_du3,im_du3";
  else
    csv += ",re_v,im_v,re_dv1,im_dv1,re_dv2,im_dv2,re_dv3,im_dv3";
  csv += '\n';

  double leak_max = 0.0, leak_sq = 0.0;
  njson near = njson::array();
  for (size_t q = 0; q < fields.size(); ++q) {
    const DecodedField& f = fields[q];
    std::string row = fmt17(f.position[0]);
    row += ',';
    row += fmt17(f.position[1]);
    row += ',';
    row += fmt17(f.position[2]);
    append_complex(&row, f.alpha);
    for (int c = 0; c < 3; ++c) append_complex(&row, f.a[c]);
    for (int c = 0; c < 3; ++c) append_complex(&row, f.b[c]);
    append_complex(&row, f.beta);
    if (cfg.kind == FieldKind::maxwell) {
      const CVec3 e = f.E(), hm = f.H();
      for (int c = 0; c < 3; ++c) append_complex(&row, e[c]);
      for (int c = 0; c < 3; ++c) append_complex(&row, hm[c]);
    } else if (cfg.kind == FieldKind::dirichlet) {
      append_complex(&row, f.u());
      const CVec3 g = f.grad_u();
      for (int c = 0; c < 3; ++c) append_complex(&row, g[c]);
    } else {
      append_complex(&row, f.v());
      const CVec3 g = f.grad_v();
      for (int c = 0; c < 3; ++c) append_complex(&row, g[c]);
    }
    row += '\n';
    csv += row;
    const double leak = decoded_leak(f);
    leak_max = std::max(leak_max, leak);
    leak_sq += leak * leak;
    if (f.near_boundary) near.push_back(static_cast<int>(q));
  }

  njson report;
  report["kind"] = kind_name(cfg.kind);
  report["k"] = json_complex(cfg.k);
  report["mesh"] = mesh_stats_json(surf);
  report["solve"] = solve_report_json(rep);
  report["constraints"] = {
      {"max_leak", leak_max},
      {"rms_leak",
       fields.empty() ? 0.0 : std::sqrt(leak_sq / double(fields.size()))}};
  report["evaluation"] = {{"points", static_cast<int>(points.size())},
                          {"near_boundary", near}};

  std::string err;
  const std::string csv_path = resolve_output(opt.out_dir, cfg.output.fields_csv);
  const std::string rep_path =
      resolve_output(opt.out_dir, cfg.output.report_json);
  if (!write_file(csv_path, csv, &err) ||
      !write_file(rep_path, report.dump(2) + "\n", &err)) {
    std::cerr << "output error: " << err << "\n";
    return 3;
  }
  std::cout << "wrote " << csv_path << " and " << rep_path << "\n";
  return 0;
}

int cmd_verify(const CliOptions& opt) {
  apply_thread_count(opt.threads);
  RunConfig cfg;
  TriangleMesh mesh;
  QuadratureSurface surf;
  try {
    cfg = parse_config_file(opt.config_path);
    if (!cfg.has_kind) throw ConfigError("missing \"kind\"");
    if (!cfg.has_k) throw ConfigError("missing \"k\"");
    if (!cfg.has_geometry) throw ConfigError("missing \"geometry\"");
    if (!cfg.has_incident) throw ConfigError("missing \"incident\"");
    if (cfg.incident.kind == Incident::Kind::plane_wave)
      throw ConfigError(
          "verify requires an interior point_source or dipole incident");
    mesh = build_geometry(cfg.geometry);
    surf = quadrature_from_mesh(mesh);
    // trigger the full problem validation (interior source, kind match)
    const ScatteringProblem probe(cfg.kind, cfg.k, cfg.incident, surf,
                                  cfg.solver, cfg.quadrature);
    static_cast<void>(probe);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  ErrorReport rep;
  try {
    rep = verify_interior_source(cfg.kind, surf, cfg.k, cfg.incident.source,
                                 cfg.incident.moment, cfg.solver,
                                 cfg.quadrature);
  } catch (const std::exception& e) {
    std::cerr << "solve error: " << e.what() << "\n";
    return 3;
  }

  std::string csv = "x,y,z,rel_err\n";
  for (size_t q = 0; q < rep.points.size(); ++q) {
    std::string row = fmt17(rep.points[q][0]);
    row += ',';
    row += fmt17(rep.points[q][1]);
    row += ',';
    row += fmt17(rep.points[q][2]);
    row += ',';
    row += fmt17(rep.per_point[q]);
    row += '\n';
    csv += row;
  }

  njson report;
  report["kind"] = kind_name(cfg.kind);
  report["k"] = json_complex(cfg.k);
  report["threshold"] = cfg.threshold;
  report["max_rel"] = rep.max_rel;
  report["rms_rel"] = rep.rms_rel;
  report["leak_max"] = rep.leak_max;
  report["mesh"] = mesh_stats_json(surf);
  report["solve"] = solve_report_json(rep.solve);

  std::string err;
  const std::string csv_path =
      resolve_output(opt.out_dir, cfg.output.errors_csv);
  const std::string rep_path =
      resolve_output(opt.out_dir, cfg.output.report_json);
  if (!write_file(csv_path, csv, &err) ||
      !write_file(rep_path, report.dump(2) + "\n", &err)) {
    std::cerr << "output error: " << err << "\n";
    return 3;
  }
  std::cout << "max relative error " << fmt17(rep.max_rel) << " (threshold "
            << fmt17(cfg.threshold) << ")\n";
  if (rep.max_rel > cfg.threshold) {
    std::cerr << "tolerance not met: max relative error " << fmt17(rep.max_rel)
              << " > " << fmt17(cfg.threshold) << "\n";
    return 4;
  }
  return 0;
}

int cmd_resonance_scan(const CliOptions& opt) {
  apply_thread_count(opt.threads);
  RunConfig cfg;
  TriangleMesh mesh;
  QuadratureSurface surf;
  try {
    cfg = parse_config_file(opt.config_path);
    if (!cfg.has_geometry) throw ConfigError("missing \"geometry\"");
    if (cfg.k_list.empty()) throw ConfigError("missing \"k_list\"");
    mesh = build_geometry(cfg.geometry);
    surf = quadrature_from_mesh(mesh);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  std::vector<cplx> ks = cfg.k_list;
  std::sort(ks.begin(), ks.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });

  std::vector<ResonancePoint> scan;
  try {
    scan = resonance_scan(surf, ks, cfg.quadrature, cfg.sigma_method);
  } catch (const std::exception& e) {
    std::cerr << "scan error: " << e.what() << "\n";
    return 3;
  }

  std::string csv = "re_k,im_k,sigma_min_spin,sigma_min_rotation\n";
  for (const ResonancePoint& p : scan) {
    std::string row = fmt17(p.k.real());
    row += ',';
    row += fmt17(p.k.imag());
    row += ',';
    row += fmt17(p.sigma_spin);
    row += ',';
    row += fmt17(p.sigma_rotation);
    row += '\n';
    csv += row;
  }

  std::string err;
  const std::string csv_path = resolve_output(opt.out_dir, cfg.output.scan_csv);
  if (!write_file(csv_path, csv, &err)) {
    std::cerr << "output error: " << err << "\n";
    return 3;
  }
  std::cout << "wrote " << csv_path << " (" << scan.size() << " rows)\n";
  return 0;
}

int cmd_compare_classical(const CliOptions& opt) {
  apply_thread_count(opt.threads);
  RunConfig cfg;
  TriangleMesh mesh;
  QuadratureSurface surf;
  std::optional<Assembler> assembler;
  try {
    cfg = parse_config_file(opt.config_path);
    if (!cfg.has_k) throw ConfigError("missing \"k\"");
    if (!cfg.has_geometry) throw ConfigError("missing \"geometry\"");
    mesh = build_geometry(cfg.geometry);
    surf = quadrature_from_mesh(mesh);
    assembler.emplace(surf, cfg.quadrature);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  BlockComparison bc;
  try {
    bc = compare_classical_blocks(*assembler, cfg.k);
  } catch (const std::exception& e) {
    std::cerr << "comparison error: " << e.what() << "\n";
    return 3;
  }

  njson blocks = njson::array();
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      njson b;
      b["row"] = r + 1;
      b["col"] = c + 1;
      b["label"] = bc.labels[r][c];
      b["deviation"] = bc.deviation(r, c);
      b["reference"] = bc.reference(r, c);
      b["relative"] = bc.relative(r, c);
      blocks.push_back(b);
    }
  njson labels = njson::array();
  for (int r = 0; r < 4; ++r) {
    njson row = njson::array();
    for (int c = 0; c < 4; ++c) row.push_back(bc.labels[r][c]);
    labels.push_back(row);
  }
  njson report;
  report["k"] = json_complex(cfg.k);
  report["mesh"] = mesh_stats_json(surf);
  report["labels"] = labels;
  report["global_scale"] = bc.global_scale;
  report["blocks"] = blocks;

  std::string err;
  const std::string rep_path =
      resolve_output(opt.out_dir, cfg.output.compare_json);
  if (!write_file(rep_path, report.dump(2) + "\n", &err)) {
    std::cerr << "output error: " << err << "\n";
    return 3;
  }
  std::cout << "wrote " << rep_path << "\n";
  return 0;
}

}  // namespace spinscat
