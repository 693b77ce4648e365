// himc: command-line front end. Exit codes: 0 pass, 2 input error,
// 3 certificate failure.

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "himc/conformal.hpp"
#include "himc/corpus.hpp"
#include "himc/error.hpp"
#include "himc/io.hpp"
#include "himc/revolution.hpp"
#include "himc/transforms.hpp"

using namespace himc;
using io::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitInput = 2;
constexpr int kExitCertificate = 3;

std::vector<double> parse_list(const std::string& text, std::size_t count, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidConfig, std::string(what) + ": bad number \"" + cell + "\"");
    }
  }
  if (out.size() != count) {
    throw Error(ErrorCode::InvalidConfig, std::string(what) + " needs " + std::to_string(count) +
                                              " comma-separated numbers");
  }
  return out;
}

Quaternion quaternion_at(const std::vector<double>& v, std::size_t k) {
  return {v[k], v[k + 1], v[k + 2], v[k + 3]};
}

/// Certificate bookkeeping for a command.
struct Certificates {
  json entries = json::array();
  bool pass = true;

  void add(const std::string& name, double value, double tol) {
    const bool ok = std::isfinite(value) && value <= tol;
    pass = pass && ok;
    entries.push_back(json{{"name", name}, {"value", io::real(value)}, {"tol", tol}, {"pass", ok}});
  }
};

Motion motion_of(const io::RunConfig& c) { return Motion(c.motion[0], c.motion[1], c.motion[2], c.tol.unit); }

bool is_identity(const io::RunConfig& c) {
  return c.motion[0] == kOne && c.motion[1] == kOne && c.motion[2] == Quaternion{};
}

SurfaceGrid load_input(const io::RunConfig& c) {
  if (c.input.empty()) throw Error(ErrorCode::InvalidConfig, "--input is required");
  auto s = io::read_surface(c.input);
  if (!is_identity(c)) s = corpus::moved(s, motion_of(c));
  return s;
}

json error_json(const Error& e) { return json{{"error", e.what()}}; }

int run_generate(const io::RunConfig& c) {
  const GridSpec g = c.grid.value_or(corpus::square_grid(-1, -1, 2, 0.01));
  SurfaceGrid s;
  if (c.surface == "plane") s = corpus::plane(g);
  else if (c.surface == "cylinder") s = corpus::cylinder(g);
  else if (c.surface == "sphere") s = corpus::sphere(g);
  else if (c.surface == "cone") s = corpus::cone(g);
  else if (c.surface == "clifford") s = corpus::clifford_torus(g);
  else throw Error(ErrorCode::InvalidConfig, "unknown surface \"" + c.surface + "\"");
  if (!is_identity(c)) s = corpus::moved(s, motion_of(c));
  io::write_json(c.output, io::surface_to_json(s));
  return kExitPass;
}

int run_analyze(const io::RunConfig& c) {
  const auto s = load_input(c);
  const auto& g = s.grid();
  json rep;
  rep["grid"] = io::to_json(g);
  rep["conformality"] = io::conformality_json(conformality_residual(s, 0, c.tol.branch), g);
  const auto sd = mean_curvature(s, c.tol.branch);
  json inv = json::array();
  for (const auto& r : sphere_invariants(s, sd)) inv.push_back(io::residual_json(r, g));
  rep["sphere_invariants"] = inv;
  rep["eta"] = io::residual_json(eta_residual(s, sd), g);
  const auto wd = willmore_diagnostics(s, sd);
  rep["willmore"] = json{{"dw", io::residual_json(wd.dw, g)}, {"energy", io::real(wd.energy)}};
  const double hmin = default_hmin(g, c.tol.hmin_scale);
  try {
    rep["ghimc"] = io::residual_json(ghimc_residual(s, sd, hmin), g);
  } catch (const Error& e) {
    rep["ghimc"] = error_json(e);
  }
  try {
    const auto c0 = cond_characterization(s, sd, Quaternion{}, hmin);
    const auto c1 = cond_characterization(s, sd, kOne, hmin);
    rep["cond"] = json{{"identity", io::residual_json(c0.identity, g)},
                       {"closed_n0", io::residual_json(c0.closed, g)},
                       {"closed_n1", io::residual_json(c1.closed, g)}};
  } catch (const Error& e) {
    rep["cond"] = error_json(e);
  }
  const auto rh = detect_real_h(sd);
  rep["real_h"] = json{{"imaginary_part", io::real(rh.imaginary_part)},
                       {"normal_gap", io::real(rh.normal_gap)},
                       {"real_valued", rh.real_valued}};
  rep["inverse_h_fit"] = io::linear_fit_json(inverse_h_linear_fit(sd, hmin));
  io::write_json(c.output, rep);
  return kExitPass;
}

int run_generate_revolution(const io::RunConfig& c) {
  const auto sol = piii_integrate(c.ode.x0, c.ode.phi0, c.ode.dphi0, c.ode.xend, c.ode.h);
  ProfileCertificate pc;
  const auto pr = profile_from_phi(sol, &pc);
  const double grid_h = c.grid ? c.grid->hx : 0.01;
  const int ny = c.grid ? c.grid->ny : 201;
  const double hy = c.grid ? c.grid->hy : grid_h;
  const double y0 = c.grid ? c.grid->y0 : 0.0;
  const int stride = std::max(1, static_cast<int>(std::lround(grid_h / sol.step())));
  const auto s = surface_from_profile(pr, y0, hy, ny, stride);
  const auto sd = mean_curvature(s, c.tol.branch);
  const auto& g = s.grid();

  Certificates cert;
  cert.add("solver_residual", max_abs(piii_residuals(sol), 2), c.tol.solver);
  cert.add("identity_du", pc.du_identity, c.tol.identity);
  cert.add("identity_dc", pc.dc_identity, c.tol.identity);
  cert.add("identity_conformality", pc.conformality, c.tol.identity);
  const auto gh = ghimc_residual(s, sd, default_hmin(g, c.tol.hmin_scale));
  cert.add("ghimc", gh.max, c.tol.ghimc);
  const auto rh = detect_real_h(sd);
  cert.add("normal_gap", rh.normal_gap, c.tol.certificate);

  const std::string& p = c.output;
  io::write_json(p + ".surface.json", io::surface_to_json(s));
  io::write_file(p + ".profile.csv", io::profile_csv(pr));
  io::write_file(p + ".phi.csv", io::phi_csv(sol));
  json rep{{"certificates", cert.entries},
           {"pass", cert.pass},
           {"sigma", pr.sigma},
           {"a", pr.a},
           {"conformality_grid", io::conformality_json(conformality_residual(s), g)},
           {"inverse_h_fit", io::linear_fit_json(inverse_h_linear_fit(sd, default_hmin(g)))}};
  io::write_json(p + ".certificate.json", rep);
  return cert.pass ? kExitPass : kExitCertificate;
}

int run_darboux(const io::RunConfig& c) {
  const auto s = load_input(c);
  const auto& g = s.grid();
  const auto cp = christoffel(s, c.tol.closed);
  DarbouxSeeds seeds;
  seeds.lambda_inf0 = c.seed_lambda;
  DarbouxOptions opt;
  opt.path_tol = c.tol.certificate;
  opt.denominator = c.tol.denominator;
  const auto ds = darboux_solve(s, cp, c.rho, seeds, opt);
  const auto sd = mean_curvature(s, c.tol.branch);
  const auto tr = dtnr_check(s, sd, ds.f_hat, ds.mask_f, c.tol.certificate);

  Certificates cert;
  for (const auto* r : {&ds.path, &ds.eq_inf, &ds.eq_L, &ds.dlambdaL_R, &ds.wedge_fhat_ghat,
                        &ds.wedge_ghat_fhat, &cp.df_dg, &cp.dg_df}) {
    cert.add(r->name, r->max, c.tol.certificate);
  }
  cert.add(tr.classical.name, tr.classical.max, c.tol.certificate);

  io::write_json(c.output + ".surface.json", io::surface_to_json(ds.f_hat, &ds.mask_f));
  json christ = json::array();
  for (const auto* r : {&cp.closed, &cp.df_dg, &cp.dg_df, &cp.dfbar_dg, &cp.dg_dfbar})
    christ.push_back(io::residual_json(*r, g));
  json rep{{"rho", c.rho},
           {"lambda_inf0", io::to_json(ds.data.lambda_inf0)},
           {"lambda_L0", io::to_json(ds.data.lambda_L0)},
           {"certificates", cert.entries},
           {"pass", cert.pass},
           {"christoffel", christ},
           {"transform_report", io::transform_report_json(tr, g)}};
  io::write_json(c.output + ".report.json", rep);
  return cert.pass ? kExitPass : kExitCertificate;
}

int run_backward(const io::RunConfig& c) {
  const auto s = load_input(c);
  const auto& g = s.grid();
  const auto sd = mean_curvature(s, c.tol.branch);
  BackwardOptions bo;
  bo.ghimc_tol = c.tol.ghimc;
  bo.hmin = default_hmin(g, c.tol.hmin_scale);
  const auto bb = backward_baecklund(s, sd, bo);
  Certificates cert;
  cert.add(bb.dhbar_R.name, bb.dhbar_R.max, c.tol.certificate);
  io::write_json(c.output + ".hbar.json", io::surface_to_json(SurfaceGrid(bb.h_bar), &bb.mask));
  json rep{{"ghimc", io::residual_json(bb.ghimc, g)}};
  try {
    const auto sh = mean_curvature(SurfaceGrid(bb.h_bar), c.tol.branch);
    rep["exploratory_hbar_ghimc"] = io::residual_json(ghimc_residual(SurfaceGrid(bb.h_bar), sh), g);
  } catch (const Error& e) {
    rep["exploratory_hbar_ghimc"] = error_json(e);
  }
  if (c.with_darboux) {
    BackwardDarbouxOptions dopt;
    dopt.lambda_inf0 = c.seed_lambda;
    dopt.closed_tol = c.tol.closed;
    const auto bd = darboux_from_backward(s, sd, bb, dopt);
    for (const auto* r : {&bd.lambda_eq, &bd.path, &bd.dual}) cert.add(r->name, r->max, c.tol.certificate);
    rep["closed"] = io::residual_json(bd.closed, g);
    rep["lambda_inf0"] = io::to_json(bd.lambda_inf0);
    rep["transform_report"] =
        io::transform_report_json(dtnr_check(s, sd, bd.f_hat, bd.mask, c.tol.certificate), g);
    io::write_json(c.output + ".surface.json", io::surface_to_json(bd.f_hat, &bd.mask));
  }
  rep["certificates"] = cert.entries;
  rep["pass"] = cert.pass;
  io::write_json(c.output + ".report.json", rep);
  return cert.pass ? kExitPass : kExitCertificate;
}

int run_piii_transform(const io::RunConfig& c) {
  const auto sol = piii_integrate(c.ode.x0, c.ode.phi0, c.ode.dphi0, c.ode.xend, c.ode.h);
  PiiiTransformOptions opt;
  opt.tol = c.tol;
  if (c.seed_lambda) opt.seed = EquivariantSeed{*c.seed_lambda, kOne};
  const auto pt = piii_transform(sol, c.rho, opt);
  Certificates cert;
  cert.add("constraint_propagation", pt.equivariant.max_violation, c.tol.certificate);
  cert.add(pt.dtnr.classical.name, pt.dtnr.classical.max, c.tol.certificate);
  cert.add("reduced_vs_2d", pt.agreement_2d, c.tol.certificate);
  cert.add("piii_residual", pt.residual_max, c.tol.piii);
  io::write_file(c.output + ".phi_hat.csv", io::phi_csv(pt.phi_hat));
  const GridSpec g{static_cast<int>(pt.phi_hat.size()), 5, pt.phi_hat.xs.front(), 0.0,
                   pt.phi_hat.step(), 0.01};
  json rep{{"rho", c.rho},
           {"seed", json{{"lambda0", io::to_json(pt.equivariant.seed.lambda0)},
                         {"m0", io::to_json(pt.equivariant.seed.m0)}}},
           {"certificates", cert.entries},
           {"pass", cert.pass},
           {"constraint_initial", io::real(pt.equivariant.initial_violation)},
           {"trig_deviation", io::real(pt.trig_deviation)},
           {"ghimc_hat", io::real(pt.ghimc_hat)},
           {"normal_gap_hat", io::real(pt.normal_gap_hat)},
           {"inverse_h_fit_hat", io::linear_fit_json(pt.inverse_h_fit_hat)},
           {"transform_report", io::transform_report_json(pt.dtnr, g)}};
  io::write_json(c.output + ".report.json", rep);
  return cert.pass ? kExitPass : kExitCertificate;
}

int run_export_mesh(const io::RunConfig& c) {
  if (c.input.empty()) throw Error(ErrorCode::InvalidConfig, "--input is required");
  const auto j = io::parse_json_text(io::read_file(c.input));
  const auto s = io::surface_from_json(j);
  Mask mask;
  if (j.contains("mask")) {
    const auto& m = j["mask"];
    if (!m.is_array() || m.size() != s.grid().size()) throw Error(ErrorCode::ParseError, "mask size mismatch");
    for (const auto& v : m) mask.push_back(v.get<bool>() ? 1 : 0);
  }
  io::MeshFormat fmt;
  if (c.format == "obj") fmt = io::MeshFormat::Obj;
  else if (c.format == "ply") fmt = io::MeshFormat::Ply;
  else throw Error(ErrorCode::InvalidConfig, "format must be obj or ply");
  const auto ex = io::export_mesh(s, fmt, mask, c.tol.unit);
  if (ex.kind == io::ExportKind::Csv4D) {
    std::cerr << "warning: " << ex.warning << "\n";
    io::write_file(c.output + ".csv", ex.text);
  } else {
    io::write_file(c.output, ex.text);
  }
  return kExitPass;
}

int dispatch(const io::RunConfig& c) {
  io::validate(c);
  if (c.command == "generate") return run_generate(c);
  if (c.command == "analyze") return run_analyze(c);
  if (c.command == "generate-revolution") return run_generate_revolution(c);
  if (c.command == "darboux") return run_darboux(c);
  if (c.command == "backward") return run_backward(c);
  if (c.command == "piii-transform") return run_piii_transform(c);
  if (c.command == "export-mesh") return run_export_mesh(c);
  throw Error(ErrorCode::InvalidConfig, "unknown command \"" + c.command + "\"");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for GHIMC surfaces in the quaternions"};
  app.require_subcommand(0, 1);

  io::RunConfig cfg;
  std::string grid_s, ode_s, motion_s, seed_s, config_in, config_out;
  app.add_option("--config", config_in, "Run a saved configuration (JSON)");

  auto common = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input, "Input surface JSON");
    sub->add_option("--output", cfg.output, "Output file or prefix")->required();
    sub->add_option("--rho", cfg.rho, "Spectral parameter");
    sub->add_option("--tol", cfg.tol.certificate, "Certificate tolerance");
    sub->add_option("--ghimc-tol", cfg.tol.ghimc, "GHIMC residual gate");
    sub->add_option("--closed-tol", cfg.tol.closed, "Closedness gate for potentials");
    sub->add_option("--hmin-scale", cfg.tol.hmin_scale, "H_min times grid diameter");
    sub->add_option("--grid", grid_s, "nx,ny,x0,y0,hx,hy");
    sub->add_option("--ode", ode_s, "x0,phi0,dphi0,xend,h");
    sub->add_option("--motion", motion_s, "r,s,t as 12 comma-separated numbers");
    sub->add_option("--seed-lambda", seed_s, "Seed w,x,y,z for lambda_inf (or Lambda)");
    sub->add_option("--config-out", config_out, "Write the canonical run configuration");
    sub->add_flag("-v,--verbose", cfg.verbosity, "Verbosity");
  };
  const std::vector<std::pair<std::string, std::string>> cmds = {
      {"generate", "Write a closed-form corpus surface"},
      {"analyze", "Conformality, GHIMC, Willmore, eta and H^-1 *w H^-1 identity reports"},
      {"generate-revolution", "Painleve III solution to an HIMC surface of revolution"},
      {"darboux", "Christoffel pair and classical Darboux transform"},
      {"backward", "Backward Baecklund transform of a GHIMC surface"},
      {"piii-transform", "Transform a Painleve III solution"},
      {"export-mesh", "OBJ/PLY export"}};
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : cmds) {
    auto* sub = app.add_subcommand(name, help);
    common(sub);
    subs.push_back(sub);
  }
  subs[0]->add_option("--surface", cfg.surface, "plane|cylinder|sphere|cone|clifford");
  subs[4]->add_flag("--darboux", cfg.with_darboux, "Also build the induced Darboux transform");
  subs[6]->add_option("--format", cfg.format, "obj|ply");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitInput;
  }

  try {
    if (!config_in.empty()) {
      cfg = io::config_from_json(io::parse_json_text(io::read_file(config_in)));
    } else {
      CLI::App* chosen = nullptr;
      for (auto* s : subs)
        if (s->parsed()) chosen = s;
      if (!chosen) {
        std::cerr << app.help();
        return kExitInput;
      }
      cfg.command = chosen->get_name();
      if (!grid_s.empty()) {
        const auto v = parse_list(grid_s, 6, "--grid");
        if (v[0] != std::floor(v[0]) || v[1] != std::floor(v[1])) {
          throw Error(ErrorCode::InvalidGrid, "--grid sizes must be integers");
        }
        cfg.grid = GridSpec{static_cast<int>(v[0]), static_cast<int>(v[1]), v[2], v[3], v[4], v[5]};
      }
      if (!ode_s.empty()) {
        const auto v = parse_list(ode_s, 5, "--ode");
        cfg.ode = {v[0], v[1], v[2], v[3], v[4]};
      }
      if (!motion_s.empty()) {
        const auto v = parse_list(motion_s, 12, "--motion");
        cfg.motion = {quaternion_at(v, 0), quaternion_at(v, 4), quaternion_at(v, 8)};
      }
      if (!seed_s.empty()) cfg.seed_lambda = quaternion_at(parse_list(seed_s, 4, "--seed-lambda"), 0);
    }
    io::validate(cfg);
    if (!config_out.empty()) io::write_json(config_out, io::config_to_json(cfg));
    const int rc = dispatch(cfg);
    if (rc != kExitPass) std::cerr << "certificate failure (see report)\n";
    return rc;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_input_error(e.code()) ? kExitInput : kExitCertificate;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCertificate;
  }
}
