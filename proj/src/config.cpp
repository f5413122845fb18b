#include "spinscat/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

namespace spinscat {
namespace {

using njson = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void expect_object(const njson& j, const std::string& where) {
  if (!j.is_object()) fail(where + ": expected an object");
}

void check_keys(const njson& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (item.key() == a) {
        known = true;
        break;
      }
    if (!known) fail("unknown key \"" + item.key() + "\" in " + where);
  }
}

double get_number(const njson& j, const std::string& where) {
  if (!j.is_number()) fail(where + ": expected a number");
  return j.get<double>();
}

int get_int(const njson& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where + ": expected an integer");
  return j.get<int>();
}

std::string get_string(const njson& j, const std::string& where) {
  if (!j.is_string()) fail(where + ": expected a string");
  return j.get<std::string>();
}

// a number is real; an object {re, im} is complex
cplx get_complex(const njson& j, const std::string& where) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  expect_object(j, where);
  check_keys(j, where, {"re", "im"});
  if (!j.contains("re")) fail(where + ": missing \"re\"");
  const double re = get_number(j["re"], where + ".re");
  const double im =
      j.contains("im") ? get_number(j["im"], where + ".im") : 0.0;
  return cplx(re, im);
}

Vec3 get_vec3(const njson& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3)
    fail(where + ": expected an array of 3 numbers");
  Vec3 v;
  for (int c = 0; c < 3; ++c)
    v[c] = get_number(j[c], where + "[" + std::to_string(c) + "]");
  return v;
}

CVec3 get_cvec3(const njson& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3)
    fail(where + ": expected an array of 3 numbers or {re, im} objects");
  CVec3 v;
  for (int c = 0; c < 3; ++c)
    v[c] = get_complex(j[c], where + "[" + std::to_string(c) + "]");
  return v;
}

cplx get_wavenumber(const njson& j, const std::string& where) {
  const cplx k = get_complex(j, where);
  if (k == cplx(0.0)) fail(where + ": wavenumber must be nonzero");
  if (k.imag() < 0.0) fail(where + ": Im k must be >= 0");
  return k;
}

GeometryDesc parse_geometry(const njson& j) {
  expect_object(j, "geometry");
  if (!j.contains("type")) fail("geometry: missing \"type\"");
  const std::string type = get_string(j["type"], "geometry.type");
  GeometryDesc g;
  if (type == "icosphere") {
    g.kind = GeometryDesc::Kind::icosphere;
    check_keys(j, "geometry", {"type", "subdivisions", "radius", "center"});
    if (!j.contains("subdivisions")) fail("geometry: missing \"subdivisions\"");
    g.subdivisions = get_int(j["subdivisions"], "geometry.subdivisions");
    if (j.contains("radius"))
      g.radius = get_number(j["radius"], "geometry.radius");
    if (j.contains("center")) g.center = get_vec3(j["center"], "geometry.center");
    if (g.radius <= 0.0) fail("geometry.radius: must be > 0");
  } else if (type == "ellipsoid") {
    g.kind = GeometryDesc::Kind::ellipsoid;
    check_keys(j, "geometry", {"type", "subdivisions", "semiaxes", "center"});
    if (!j.contains("subdivisions")) fail("geometry: missing \"subdivisions\"");
    if (!j.contains("semiaxes")) fail("geometry: missing \"semiaxes\"");
    g.subdivisions = get_int(j["subdivisions"], "geometry.subdivisions");
    g.semiaxes = get_vec3(j["semiaxes"], "geometry.semiaxes");
    if (j.contains("center")) g.center = get_vec3(j["center"], "geometry.center");
    if (g.semiaxes.minCoeff() <= 0.0)
      fail("geometry.semiaxes: all semiaxes must be > 0");
  } else if (type == "obj") {
    g.kind = GeometryDesc::Kind::obj;
    check_keys(j, "geometry", {"type", "path"});
    if (!j.contains("path")) fail("geometry: missing \"path\"");
    g.path = get_string(j["path"], "geometry.path");
    if (g.path.empty()) fail("geometry.path: must not be empty");
  } else {
    fail("geometry.type: unknown type \"" + type +
         "\" (expected icosphere, ellipsoid, or obj)");
  }
  if (g.kind != GeometryDesc::Kind::obj &&
      (g.subdivisions < 0 || g.subdivisions > 8))
    fail("geometry.subdivisions: expected 0..8");
  return g;
}

Incident parse_incident(const njson& j) {
  expect_object(j, "incident");
  if (!j.contains("type")) fail("incident: missing \"type\"");
  const std::string type = get_string(j["type"], "incident.type");
  if (type == "plane_wave") {
    check_keys(j, "incident", {"type", "direction", "polarization"});
    if (!j.contains("direction")) fail("incident: missing \"direction\"");
    const Vec3 d = get_vec3(j["direction"], "incident.direction");
    CVec3 p = CVec3::Zero();
    if (j.contains("polarization"))
      p = get_cvec3(j["polarization"], "incident.polarization");
    return Incident::plane_wave(d, p);
  }
  if (type == "point_source") {
    check_keys(j, "incident", {"type", "source"});
    if (!j.contains("source")) fail("incident: missing \"source\"");
    return Incident::point_source(get_vec3(j["source"], "incident.source"));
  }
  if (type == "dipole") {
    check_keys(j, "incident", {"type", "source", "moment"});
    if (!j.contains("source")) fail("incident: missing \"source\"");
    if (!j.contains("moment")) fail("incident: missing \"moment\"");
    return Incident::dipole(get_vec3(j["source"], "incident.source"),
                            get_cvec3(j["moment"], "incident.moment"));
  }
  fail("incident.type: unknown type \"" + type +
       "\" (expected plane_wave, point_source, or dipole)");
}

SolverSettings parse_solver(const njson& j) {
  expect_object(j, "solver");
  check_keys(j, "solver", {"method", "tol", "restart", "max_iters"});
  SolverSettings s;
  if (j.contains("method")) {
    const std::string m = get_string(j["method"], "solver.method");
    if (m == "direct")
      s.method = SolverSettings::Method::direct;
    else if (m == "gmres")
      s.method = SolverSettings::Method::gmres;
    else
      fail("solver.method: unknown method \"" + m +
           "\" (expected direct or gmres)");
  }
  if (j.contains("tol")) s.tol = get_number(j["tol"], "solver.tol");
  if (j.contains("restart")) s.restart = get_int(j["restart"], "solver.restart");
  if (j.contains("max_iters"))
    s.max_iters = get_int(j["max_iters"], "solver.max_iters");
  if (s.tol <= 0.0) fail("solver.tol: must be > 0");
  if (s.restart < 1) fail("solver.restart: must be >= 1");
  if (s.max_iters < 1) fail("solver.max_iters: must be >= 1");
  return s;
}

NearParams parse_quadrature(const njson& j) {
  expect_object(j, "quadrature");
  check_keys(j, "quadrature", {"r_factor", "levels"});
  NearParams q;
  if (j.contains("r_factor"))
    q.r_factor = get_number(j["r_factor"], "quadrature.r_factor");
  if (j.contains("levels")) q.levels = get_int(j["levels"], "quadrature.levels");
  if (q.r_factor < 0.0) fail("quadrature.r_factor: must be >= 0");
  if (q.levels < 0 || q.levels > 8) fail("quadrature.levels: expected 0..8");
  return q;
}

EvalDesc parse_evaluation(const njson& j) {
  expect_object(j, "evaluation");
  check_keys(j, "evaluation", {"points", "sphere_grids"});
  EvalDesc e;
  if (j.contains("points")) {
    const njson& pts = j["points"];
    if (!pts.is_array()) fail("evaluation.points: expected an array");
    for (size_t i = 0; i < pts.size(); ++i)
      e.points.push_back(get_vec3(
          pts[i], "evaluation.points[" + std::to_string(i) + "]"));
  }
  if (j.contains("sphere_grids")) {
    const njson& grids = j["sphere_grids"];
    if (!grids.is_array()) fail("evaluation.sphere_grids: expected an array");
    for (size_t i = 0; i < grids.size(); ++i) {
      const std::string where =
          "evaluation.sphere_grids[" + std::to_string(i) + "]";
      expect_object(grids[i], where);
      check_keys(grids[i], where, {"radius", "count"});
      if (!grids[i].contains("radius")) fail(where + ": missing \"radius\"");
      if (!grids[i].contains("count")) fail(where + ": missing \"count\"");
      SphereGrid g;
      g.radius = get_number(grids[i]["radius"], where + ".radius");
      g.count = get_int(grids[i]["count"], where + ".count");
      if (g.radius <= 0.0) fail(where + ".radius: must be > 0");
      if (g.count < 1) fail(where + ".count: must be >= 1");
      e.sphere_grids.push_back(g);
    }
  }
  return e;
}

OutputDesc parse_output(const njson& j) {
  expect_object(j, "output");
  check_keys(j, "output",
             {"fields_csv", "report_json", "errors_csv", "scan_csv",
              "compare_json"});
  OutputDesc o;
  const auto grab = [&](const char* key, std::string* dst) {
    if (!j.contains(key)) return;
    *dst = get_string(j[key], std::string("output.") + key);
    if (dst->empty()) fail(std::string("output.") + key + ": must not be empty");
  };
  grab("fields_csv", &o.fields_csv);
  grab("report_json", &o.report_json);
  grab("errors_csv", &o.errors_csv);
  grab("scan_csv", &o.scan_csv);
  grab("compare_json", &o.compare_json);
  return o;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& name) {
  njson j;
  try {
    j = njson::parse(text);
  } catch (const njson::parse_error& e) {
    fail(name + ": " + e.what());
  }
  expect_object(j, "config");
  check_keys(j, "config",
             {"kind", "k", "geometry", "incident", "solver", "quadrature",
              "evaluation", "output", "threshold", "k_list", "sigma_method"});

  RunConfig cfg;
  if (j.contains("kind")) {
    const std::string kind = get_string(j["kind"], "kind");
    if (kind == "dirichlet")
      cfg.kind = FieldKind::dirichlet;
    else if (kind == "neumann")
      cfg.kind = FieldKind::neumann;
    else if (kind == "maxwell")
      cfg.kind = FieldKind::maxwell;
    else
      fail("kind: unknown kind \"" + kind +
           "\" (expected dirichlet, neumann, or maxwell)");
    cfg.has_kind = true;
  }
  if (j.contains("k")) {
    cfg.k = get_wavenumber(j["k"], "k");
    cfg.has_k = true;
  }
  if (j.contains("geometry")) {
    cfg.geometry = parse_geometry(j["geometry"]);
    cfg.has_geometry = true;
  }
  if (j.contains("incident")) {
    cfg.incident = parse_incident(j["incident"]);
    cfg.has_incident = true;
  }
  if (j.contains("solver")) cfg.solver = parse_solver(j["solver"]);
  if (j.contains("quadrature"))
    cfg.quadrature = parse_quadrature(j["quadrature"]);
  if (j.contains("evaluation"))
    cfg.evaluation = parse_evaluation(j["evaluation"]);
  if (j.contains("output")) cfg.output = parse_output(j["output"]);
  if (j.contains("threshold")) {
    cfg.threshold = get_number(j["threshold"], "threshold");
    if (cfg.threshold <= 0.0) fail("threshold: must be > 0");
  }
  if (j.contains("k_list")) {
    const njson& ks = j["k_list"];
    if (!ks.is_array() || ks.empty())
      fail("k_list: expected a nonempty array of wavenumbers");
    for (size_t i = 0; i < ks.size(); ++i)
      cfg.k_list.push_back(
          get_wavenumber(ks[i], "k_list[" + std::to_string(i) + "]"));
  }
  if (j.contains("sigma_method")) {
    const std::string m = get_string(j["sigma_method"], "sigma_method");
    if (m == "auto")
      cfg.sigma_method = SigmaMethod::automatic;
    else if (m == "svd")
      cfg.sigma_method = SigmaMethod::svd;
    else if (m == "inverse_iteration")
      cfg.sigma_method = SigmaMethod::inverse_iteration;
    else
      fail("sigma_method: unknown method \"" + m +
           "\" (expected auto, svd, or inverse_iteration)");
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open config file \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

TriangleMesh build_geometry(const GeometryDesc& g) {
  switch (g.kind) {
    case GeometryDesc::Kind::icosphere:
      return icosphere(g.subdivisions, g.radius, g.center);
    case GeometryDesc::Kind::ellipsoid:
      return ellipsoid(g.subdivisions, g.semiaxes, g.center);
    case GeometryDesc::Kind::obj:
      try {
        return load_obj(g.path);
      } catch (const std::exception& e) {
        fail("geometry: " + std::string(e.what()));
      }
  }
  fail("geometry: invalid descriptor");
}

std::vector<Vec3> evaluation_points(const EvalDesc& e) {
  std::vector<Vec3> pts = e.points;
  constexpr double golden_angle = 2.39996322972865332;  // pi (3 - sqrt 5)
  for (const SphereGrid& grid : e.sphere_grids)
    for (int i = 0; i < grid.count; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / grid.count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double ph = golden_angle * i;
      pts.emplace_back(grid.radius * r * std::cos(ph),
                       grid.radius * r * std::sin(ph), grid.radius * z);
    }
  return pts;
}

const char* kind_name(FieldKind kind) {
  switch (kind) {
    case FieldKind::dirichlet:
      return "dirichlet";
    case FieldKind::neumann:
      return "neumann";
    case FieldKind::maxwell:
      return "maxwell";
  }
  return "unknown";
}

}  // namespace spinscat
