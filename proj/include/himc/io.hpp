#pragma once

// File formats: SurfaceGrid / field / report JSON, PhiSolution and profile
// CSV, OBJ / PLY meshes, and the canonical RunConfig.

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "himc/conformal.hpp"
#include "himc/error.hpp"
#include "himc/grid.hpp"
#include "himc/quaternion.hpp"
#include "himc/revolution.hpp"
#include "himc/tolerances.hpp"
#include "himc/transforms.hpp"

namespace himc::io {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// JSON building blocks.

inline json to_json(const Quaternion& q) { return json::array({q.w, q.x, q.y, q.z}); }

inline json to_json(const GridSpec& g) {
  return json{{"nx", g.nx}, {"ny", g.ny}, {"x0", g.x0}, {"y0", g.y0}, {"hx", g.hx}, {"hy", g.hy}};
}

/// Non-finite reals become null (JSON has no inf/nan).
inline json real(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline Quaternion quaternion_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) throw Error(ErrorCode::ParseError, "quaternion must be [w,x,y,z]");
  std::array<double, 4> a{};
  for (std::size_t k = 0; k < 4; ++k) {
    if (!j[k].is_number()) throw Error(ErrorCode::ParseError, "quaternion entries must be numbers");
    a[k] = j[k].get<double>();
    if (!std::isfinite(a[k])) throw Error(ErrorCode::ParseError, "quaternion entries must be finite");
  }
  return Quaternion::from_array(a);
}

inline GridSpec grid_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "\"grid\" must be an object");
  auto num = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_number()) {
      throw Error(ErrorCode::ParseError, std::string("grid.") + key + " missing or not a number");
    }
    return j[key];
  };
  auto integer = [&](const char* key) {
    const auto& v = num(key);
    if (!v.is_number_integer()) throw Error(ErrorCode::ParseError, std::string("grid.") + key + " must be an integer");
    return v.get<long long>();
  };
  const long long nx = integer("nx"), ny = integer("ny");
  if (nx < 0 || ny < 0 || nx > 100000 || ny > 100000) {
    throw Error(ErrorCode::InvalidGrid, "grid sizes out of range");
  }
  GridSpec g{static_cast<int>(nx), static_cast<int>(ny), num("x0").get<double>(),
             num("y0").get<double>(), num("hx").get<double>(), num("hy").get<double>()};
  g.validate();
  return g;
}

inline json field_to_json(const ScalarField& f) {
  json vals = json::array();
  for (const auto& q : f.values) vals.push_back(to_json(q));
  return json{{"grid", to_json(f.grid)}, {"f", std::move(vals)}};
}

inline json mask_to_json(const Mask& m) {
  json a = json::array();
  for (auto v : m) a.push_back(v != 0);
  return a;
}

inline json surface_to_json(const SurfaceGrid& s, const Mask* mask = nullptr) {
  json j = field_to_json(s.f);
  if (mask && !mask->empty()) j["mask"] = mask_to_json(*mask);
  return j;
}

inline SurfaceGrid surface_from_json(const json& j) {
  if (!j.is_object() || !j.contains("grid") || !j.contains("f")) {
    throw Error(ErrorCode::ParseError, "surface JSON needs \"grid\" and \"f\"");
  }
  const GridSpec g = grid_from_json(j["grid"]);
  const auto& f = j["f"];
  if (!f.is_array() || f.size() != g.size()) {
    throw Error(ErrorCode::ParseError, "\"f\" must hold nx*ny = " + std::to_string(g.size()) +
                                           " quaternions");
  }
  ScalarField field(g);
  for (std::size_t k = 0; k < g.size(); ++k) field[k] = quaternion_from_json(f[k]);
  return SurfaceGrid(std::move(field));
}

inline json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidConfig, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::InvalidConfig, "write failed for " + path);
}

inline SurfaceGrid read_surface(const std::string& path) {
  return surface_from_json(parse_json_text(read_file(path)));
}

inline void write_json(const std::string& path, const json& j) { write_file(path, j.dump(2) + "\n"); }

// ---------------------------------------------------------------------------
// Reports.

inline json residual_json(const Residual& r, const GridSpec& g) {
  return json{{"name", r.name},
              {"max", real(r.max)},
              {"mean", real(r.mean)},
              {"grid", to_json(g)},
              {"h", std::max(g.hx, g.hy)},
              {"masked_fraction", r.masked_fraction},
              {"margin", r.margin},
              {"argmax", json::array({r.argmax.i, r.argmax.j})}};
}

inline json conformality_json(const ConformalityReport& c, const GridSpec& g) {
  return json::array({residual_json(c.metric, g), residual_json(c.orthogonality, g),
                      residual_json(c.n_square, g), residual_json(c.r_square, g)});
}

inline json transform_report_json(const TransformReport& t, const GridSpec& g) {
  return json{{"residuals", json::array({residual_json(t.sphere, g), residual_json(t.left, g),
                                         residual_json(t.right, g), residual_json(t.classical, g),
                                         residual_json(t.h_change, g)})},
              {"h_scale", real(t.h_scale)},
              {"classical", t.is_classical}};
}

inline json linear_fit_json(const LinearFit& f) {
  return json{{"slope", real(f.slope)},
              {"intercept", real(f.intercept)},
              {"max_deviation", real(f.max_deviation)},
              {"imaginary_part", real(f.imaginary_part)}};
}

// ---------------------------------------------------------------------------
// CSV.

inline std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string phi_csv(const PhiSolution& s) {
  std::string out = "x,phi,dphi\n";
  for (std::size_t k = 0; k < s.size(); ++k)
    out += csv_number(s.xs[k]) + "," + csv_number(s.phi[k]) + "," + csv_number(s.dphi[k]) + "\n";
  return out;
}

inline std::string profile_csv(const RevolutionProfile& p) {
  std::string out = "x,u,c\n";
  for (std::size_t k = 0; k < p.xs.size(); ++k)
    out += csv_number(p.xs[k]) + "," + csv_number(p.u[k]) + "," + csv_number(p.c[k]) + "\n";
  return out;
}

inline std::vector<std::vector<double>> parse_csv_rows(const std::string& text,
                                                       std::size_t columns) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "bad CSV cell \"" + cell + "\"");
      }
    }
    if (row.size() != columns) throw Error(ErrorCode::ParseError, "CSV row has wrong column count");
    rows.push_back(std::move(row));
  }
  return rows;
}

inline PhiSolution phi_from_csv(const std::string& text) {
  PhiSolution s;
  for (const auto& r : parse_csv_rows(text, 3)) {
    s.xs.push_back(r[0]);
    s.phi.push_back(r[1]);
    s.dphi.push_back(r[2]);
    s.degenerate.push_back(std::abs(r[2] + 2.0 * std::sin(r[1])) < 1e-8);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Meshes.

enum class MeshFormat { Obj, Ply };

enum class ExportKind { Mesh3D, Csv4D };

struct MeshExport {
  ExportKind kind = ExportKind::Mesh3D;
  std::string text;
  std::string warning;
};

/// Quad mesh of a surface with image in Im ℍ; otherwise a 4D CSV with a
/// warning. Quads touching a masked node are skipped.
inline MeshExport export_mesh(const SurfaceGrid& s, MeshFormat fmt, const Mask& mask = {},
                              double tol = 1e-9) {
  const auto& g = s.grid();
  double re_max = 0.0;
  for (const auto& q : s.f.values) re_max = std::max(re_max, std::abs(q.w));
  MeshExport out;
  if (re_max > tol) {
    out.kind = ExportKind::Csv4D;
    out.warning = "image leaves Im H (max |Re f| = " + fmt_num(re_max) +
                  "); wrote 4D CSV instead of a mesh";
    out.text = "i,j,w,x,y,z\n";
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const auto& q = s.f(i, j);
        out.text += std::to_string(i) + "," + std::to_string(j) + "," + csv_number(q.w) + "," +
                    csv_number(q.x) + "," + csv_number(q.y) + "," + csv_number(q.z) + "\n";
      }
    return out;
  }
  auto bad = [&](int i, int j) { return !mask.empty() && mask[g.index(i, j)]; };
  std::vector<std::array<std::size_t, 4>> faces;
  for (int j = 0; j + 1 < g.ny; ++j)
    for (int i = 0; i + 1 < g.nx; ++i) {
      if (bad(i, j) || bad(i + 1, j) || bad(i + 1, j + 1) || bad(i, j + 1)) continue;
      faces.push_back({g.index(i, j), g.index(i + 1, j), g.index(i + 1, j + 1), g.index(i, j + 1)});
    }
  std::string& t = out.text;
  if (fmt == MeshFormat::Obj) {
    for (const auto& q : s.f.values)
      t += "v " + csv_number(q.x) + " " + csv_number(q.y) + " " + csv_number(q.z) + "\n";
    for (const auto& f : faces)
      t += "f " + std::to_string(f[0] + 1) + " " + std::to_string(f[1] + 1) + " " +
           std::to_string(f[2] + 1) + " " + std::to_string(f[3] + 1) + "\n";
  } else {
    t = "ply\nformat ascii 1.0\nelement vertex " + std::to_string(g.size()) +
        "\nproperty double x\nproperty double y\nproperty double z\nelement face " +
        std::to_string(faces.size()) + "\nproperty list uchar int vertex_indices\nend_header\n";
    for (const auto& q : s.f.values)
      t += csv_number(q.x) + " " + csv_number(q.y) + " " + csv_number(q.z) + "\n";
    for (const auto& f : faces)
      t += "4 " + std::to_string(f[0]) + " " + std::to_string(f[1]) + " " + std::to_string(f[2]) +
           " " + std::to_string(f[3]) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Run configuration.

struct OdeParams {
  double x0 = 0.5;
  double phi0 = 0.3;
  double dphi0 = 0.5;
  double xend = 2.5;
  double h = 1e-3;
};

struct RunConfig {
  std::string command;
  std::string input;
  std::string output;
  double rho = 1.0;
  Tolerances tol;
  std::optional<GridSpec> grid;
  OdeParams ode;
  std::array<Quaternion, 3> motion{kOne, kOne, Quaternion{}};
  std::optional<Quaternion> seed_lambda;
  /// generate: corpus surface name.
  std::string surface = "sphere";
  /// export-mesh: "obj" or "ply".
  std::string format = "obj";
  /// backward: also build the induced Darboux transform.
  bool with_darboux = false;
  int verbosity = 0;
};

inline json tolerances_json(const Tolerances& t) {
  return json{{"unit", t.unit},           {"closed", t.closed},
              {"certificate", t.certificate}, {"ghimc", t.ghimc},
              {"hmin_scale", t.hmin_scale}, {"branch", t.branch},
              {"denominator", t.denominator}, {"identity", t.identity},
              {"revolution", t.revolution}, {"trig", t.trig},
              {"solver", t.solver},         {"piii", t.piii}};
}

inline void validate(const RunConfig& c) {
  const Tolerances& t = c.tol;
  for (double v : {t.unit, t.closed, t.certificate, t.ghimc, t.hmin_scale, t.branch,
                   t.denominator, t.identity, t.revolution, t.trig, t.solver, t.piii}) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidConfig, "tolerances must be positive");
  }
  if (c.command.empty()) throw Error(ErrorCode::InvalidConfig, "command is empty");
  if (c.output.empty()) throw Error(ErrorCode::InvalidConfig, "output path is empty");
  if (!std::isfinite(c.rho)) throw Error(ErrorCode::InvalidConfig, "rho must be finite");
  if (c.grid) c.grid->validate();
}

/// Canonical form: fixed key order, every field present.
inline json config_to_json(const RunConfig& c) {
  json j{{"command", c.command},
         {"input", c.input},
         {"output", c.output},
         {"rho", c.rho},
         {"tolerances", tolerances_json(c.tol)},
         {"grid", c.grid ? to_json(*c.grid) : json(nullptr)},
         {"ode", json{{"x0", c.ode.x0}, {"phi0", c.ode.phi0}, {"dphi0", c.ode.dphi0},
                      {"xend", c.ode.xend}, {"h", c.ode.h}}},
         {"motion", json{{"r", to_json(c.motion[0])}, {"s", to_json(c.motion[1])},
                         {"t", to_json(c.motion[2])}}},
         {"seed_lambda", c.seed_lambda ? to_json(*c.seed_lambda) : json(nullptr)},
         {"surface", c.surface},
         {"format", c.format},
         {"with_darboux", c.with_darboux},
         {"verbosity", c.verbosity}};
  return j;
}

inline RunConfig config_from_json(const json& j) {
  try {
    RunConfig c;
    c.command = j.at("command").get<std::string>();
    c.input = j.at("input").get<std::string>();
    c.output = j.at("output").get<std::string>();
    c.rho = j.at("rho").get<double>();
    const auto& t = j.at("tolerances");
    c.tol.unit = t.at("unit").get<double>();
    c.tol.closed = t.at("closed").get<double>();
    c.tol.certificate = t.at("certificate").get<double>();
    c.tol.ghimc = t.at("ghimc").get<double>();
    c.tol.hmin_scale = t.at("hmin_scale").get<double>();
    c.tol.branch = t.at("branch").get<double>();
    c.tol.denominator = t.at("denominator").get<double>();
    c.tol.identity = t.at("identity").get<double>();
    c.tol.revolution = t.at("revolution").get<double>();
    c.tol.trig = t.at("trig").get<double>();
    c.tol.solver = t.at("solver").get<double>();
    c.tol.piii = t.at("piii").get<double>();
    if (!j.at("grid").is_null()) c.grid = grid_from_json(j.at("grid"));
    const auto& o = j.at("ode");
    c.ode = {o.at("x0").get<double>(), o.at("phi0").get<double>(), o.at("dphi0").get<double>(),
             o.at("xend").get<double>(), o.at("h").get<double>()};
    const auto& m = j.at("motion");
    c.motion = {quaternion_from_json(m.at("r")), quaternion_from_json(m.at("s")),
                quaternion_from_json(m.at("t"))};
    if (!j.at("seed_lambda").is_null()) c.seed_lambda = quaternion_from_json(j.at("seed_lambda"));
    c.surface = j.at("surface").get<std::string>();
    c.format = j.at("format").get<std::string>();
    c.with_darboux = j.at("with_darboux").get<bool>();
    c.verbosity = j.at("verbosity").get<int>();
    validate(c);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("config: ") + e.what());
  }
}

}  // namespace himc::io
