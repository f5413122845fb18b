#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "spinscat/geometry.hpp"
#include "spinscat/operators.hpp"
#include "spinscat/scattering.hpp"
#include "spinscat/solve.hpp"

namespace spinscat {

// Configuration errors carry enough context to fix the file: JSON syntax
// errors keep the parser's line/column, schema errors name the offending key.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct GeometryDesc {
  enum class Kind { icosphere, ellipsoid, obj };
  Kind kind = Kind::icosphere;
  int subdivisions = 2;
  double radius = 1.0;
  Vec3 semiaxes = Vec3::Ones();
  Vec3 center = Vec3::Zero();
  std::string path;  // obj
};

struct SphereGrid {
  double radius = 2.0;
  int count = 26;
};

struct EvalDesc {
  std::vector<Vec3> points;
  std::vector<SphereGrid> sphere_grids;
};

// Output file names, resolved against --out-dir unless absolute.
struct OutputDesc {
  std::string fields_csv = "fields.csv";
  std::string report_json = "report.json";
  std::string errors_csv = "errors.csv";
  std::string scan_csv = "scan.csv";
  std::string compare_json = "compare.json";
};

// One batch run, parsed from strict JSON (unknown keys are errors). The same
// schema serves every subcommand; each command checks that the sections it
// needs are present.
struct RunConfig {
  FieldKind kind = FieldKind::dirichlet;
  bool has_kind = false;
  cplx k = cplx(2.0, 0.0);
  bool has_k = false;
  GeometryDesc geometry;
  bool has_geometry = false;
  Incident incident;
  bool has_incident = false;
  SolverSettings solver;
  NearParams quadrature;
  EvalDesc evaluation;
  OutputDesc output;
  double threshold = 5e-2;   // verify
  std::vector<cplx> k_list;  // resonance-scan
  SigmaMethod sigma_method = SigmaMethod::automatic;
};

// Throws ConfigError; `name` prefixes syntax errors (usually the file path).
RunConfig parse_config_text(const std::string& text, const std::string& name);
RunConfig parse_config_file(const std::string& path);

// Instantiates the geometry descriptor (ConfigError on unreadable/invalid
// OBJ input).
TriangleMesh build_geometry(const GeometryDesc& g);

// Explicit points followed by the Fibonacci-lattice sphere grids, in
// declaration order (deterministic).
std::vector<Vec3> evaluation_points(const EvalDesc& e);

const char* kind_name(FieldKind kind);

}  // namespace spinscat
