#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "glj/canonical.hpp"
#include "glj/density.hpp"
#include "glj/error.hpp"
#include "glj/field.hpp"
#include "glj/io.hpp"
#include "glj/meissner.hpp"
#include "glj/polar.hpp"
#include "glj/sweep.hpp"
#include "glj/vortex.hpp"

namespace {

using nlohmann::json;

constexpr int exit_config = 2;
constexpr int exit_solver = 3;
constexpr int exit_io = 4;

struct Options {
  double a = 1.0;
  double d = 1.0;
  std::optional<double> c_thick;
  double eps = 0.02;
  std::string eps_list = "0.04,0.02,0.01,0.005";
  std::string H = "0";
  double h_frac = 0.25;
  double R = 0.5;
  std::size_t nr = 4000;
  std::size_t ntheta = 256;
  double lambda = 0.25;
  double alpha = 0.4;
  std::string out;
  std::string format = "json";
  bool resume = false;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  int nvort = 4;
  std::size_t grid_nr = 256;
  std::string binary;
};

void add_common(CLI::App* app, Options& o) {
  app->add_option("--a", o.a, "Normal-layer coefficient a > 0")->capture_default_str();
  app->add_option("--d", o.d, "Thin regime: ell = d * eps")->capture_default_str();
  app->add_option("--c-thick", o.c_thick, "Thick regime: ell = c * eps * ln|ln eps|");
  app->add_option("--eps", o.eps, "Coherence length eps")->capture_default_str();
  app->add_option("--H", o.H, "Applied field, a number or 'auto'")->capture_default_str();
  app->add_option("--H-frac", o.h_frac, "Fraction of the vortex-less budget for H=auto")
      ->capture_default_str();
  app->add_option("--R", o.R, "Junction radius")->capture_default_str();
  app->add_option("--nr", o.nr, "Radial mesh nodes")->capture_default_str();
  app->add_option("--ntheta", o.ntheta, "Angular nodes of the polar grid")->capture_default_str();
  app->add_option("--lambda", o.lambda, "Budget prefactor: lambda * m_eps * |ln eps|")
      ->capture_default_str();
  app->add_option("--alpha", o.alpha, "Ball-construction exponent")->capture_default_str();
  app->add_option("--out", o.out, "Output path (stdout when omitted)");
  app->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app->add_option("--seed", o.seed, "Seed for randomized choices")->capture_default_str();
}

glj::ModelParams to_params(const Options& o) {
  glj::ModelParams p;
  p.a = o.a;
  if (o.c_thick)
    p.regime = glj::ThickRegime{*o.c_thick};
  else
    p.regime = glj::ThinRegime{o.d};
  p.eps = o.eps;
  if (o.H == "auto") {
    p.H.reset();
  } else {
    try {
      std::size_t used = 0;
      p.H = std::stod(o.H, &used);
      if (used != o.H.size()) throw std::invalid_argument(o.H);
    } catch (const std::exception&) {
      throw glj::ConfigError("--H must be a number or 'auto', got '" + o.H + "'");
    }
  }
  p.h_frac = o.h_frac;
  p.R = o.R;
  p.nr = o.nr;
  p.ntheta = o.ntheta;
  p.lambda = o.lambda;
  p.alpha = o.alpha;
  p.seed = o.seed;
  p.validate();
  return p;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw glj::ConfigError("invalid number '" + item + "' in --eps-list");
    }
  }
  return out;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty())
    std::cout << text;
  else
    glj::write_text(o.out, text);
}

json json_params(const glj::ModelParams& p) { return json::parse(glj::params_json(p)); }

// key,value lines for the flat summaries.
std::string flat_csv(const json& j) {
  std::string out = "key,value\n";
  for (const auto& [k, v] : j.items())
    if (v.is_number() || v.is_boolean() || v.is_string())
      out += k + "," + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
  return out;
}

void emit_summary(const Options& o, const json& j) {
  emit(o, o.format == "csv" ? flat_csv(j) : j.dump(2) + "\n");
}

int run_canonical(const Options& o) {
  const auto k = glj::compute_constants(o.a, o.d);
  const auto hp = glj::half_plane_constants(o.a);
  std::vector<double> xs;
  for (int s = 0; s <= 1000; ++s) xs.push_back(-(o.d + 10.0) + (2.0 * (o.d + 10.0)) * s / 1000.0);
  const auto res = glj::residual_canonical(k, xs);
  const auto m = glj::matching_residuals(k);
  json j;
  j["a"] = o.a;
  j["d"] = o.d;
  j["beta"] = k.beta;
  j["a_tilde"] = k.a_tilde;
  j["interface_value"] = k.interface_value();
  j["x_root"] = k.x_root();
  j["kappa"] = glj::degennes_coefficient(o.a, o.d);
  j["beta_inf"] = hp.beta_inf;
  j["a_inf"] = hp.a_inf;
  j["ode_residual"] = res.ode;
  j["interface_residual"] = res.interface;
  j["matching_residual"] = std::max(std::abs(m[0]), std::abs(m[1]));
  emit_summary(o, j);
  return 0;
}

glj::DensityProfile density_for(const glj::ModelParams& p) {
  const auto g = p.geometry();
  return glj::solve_density(p, g, glj::build_mesh(g, p.eps, p.nr));
}

int run_density(const Options& o) {
  const auto p = to_params(o);
  const auto prof = density_for(p);
  if (o.format == "csv") {
    emit(o, glj::profile_csv(prof));
    return 0;
  }
  const auto jr = glj::density_jump(prof);
  const auto eig = glj::first_eigenvalue(p, prof.geometry, prof.mesh);
  json j;
  j["params"] = json_params(p);
  j["ell"] = prof.geometry.ell;
  j["C0"] = prof.c0_energy;
  j["m_eps"] = prof.m_eps;
  j["newton_residual"] = prof.newton_residual;
  j["iterations"] = prof.iterations;
  j["eps_log_jump"] = jr.eps_log_jump;
  j["target"] = jr.target_kappa;
  j["rel_err"] = jr.relative_error;
  j["u_jump"] = jr.u_jump;
  j["u_inner"] = jr.u_inner;
  j["u_outer"] = jr.u_outer;
  j["interface_value"] = jr.interface_target;
  j["lambda1"] = eig.lambda;
  j["lambda_bound"] = glj::eigenvalue_constant_bound(p, prof.geometry);
  j["mesh"] = {{"nodes", prof.mesh.size()},
               {"min_spacing", prof.mesh.min_spacing()},
               {"max_spacing", prof.mesh.max_spacing()}};
  j["r"] = prof.mesh.nodes;
  j["u"] = prof.u;
  emit(o, j.dump(2) + "\n");
  return 0;
}

int run_meissner(const Options& o) {
  const auto p = to_params(o);
  const auto prof = density_for(p);
  const auto lf = glj::solve_london(prof);
  if (o.format == "csv") {
    std::string out = "r,h\n";
    for (std::size_t i = 0; i < prof.mesh.size(); ++i)
      out += fmt::format("{:.17g},{:.17g}\n", prof.mesh.nodes[i], lf.h[i]);
    emit(o, out);
    return 0;
  }
  const double H = glj::resolve_field(p, prof);
  const auto me = glj::meissner_energies(prof, lf, H);
  json j;
  j["params"] = json_params(p);
  j["H"] = H;
  j["J0"] = lf.j0_energy;
  j["J0_h_form"] = lf.j0_h_form;
  j["M0"] = me.m0;
  j["c0"] = lf.c0;
  j["weighted_gradient_sup"] = lf.weighted_gradient_sup;
  j["origin_curvature"] = lf.origin_curvature;
  j["origin_target"] = lf.origin_target;
  j["gradient_bound_violation"] = glj::gradient_integral_bound_violation(prof, lf);
  j["r"] = prof.mesh.nodes;
  j["h"] = lf.h;
  emit(o, j.dump(2) + "\n");
  return 0;
}

int run_field(const Options& o) {
  const auto p = to_params(o);
  glj::SweepReport rep;
  rep.base = p;
  rep.rows.push_back(glj::run_point(p));
  if (!rep.rows.front().ok()) {
    spdlog::error("{}", rep.rows.front().status);
    return rep.rows.front().status.starts_with("config") ? exit_config : exit_solver;
  }
  emit(o, o.format == "csv" ? glj::report_csv(rep) : glj::report_json(rep));
  return 0;
}

int run_sweep_cmd(const Options& o) {
  const auto p = to_params(o);
  const auto eps = parse_list(o.eps_list);
  glj::SweepOptions so;
  so.jobs = o.jobs;
  so.resume = o.resume;
  if (!o.out.empty()) so.journal = o.out + ".jsonl";
  if (o.resume && so.journal.empty()) throw glj::ConfigError("--resume needs --out");
  if (!o.resume && !so.journal.empty() && std::filesystem::exists(so.journal))
    std::filesystem::remove(so.journal);
  so.on_row = [](const glj::SweepRow& r) {
    spdlog::info("eps={} rel_err={:.3e} circ_gap={:.3e} status={}", r.eps, r.rel_err, r.circ_gap,
                 r.status);
  };
  const auto rep = glj::run_sweep(p, eps, so);
  emit(o, o.format == "csv" ? glj::report_csv(rep) : glj::report_json(rep));
  return 0;
}

int run_vortex(const Options& o) {
  const auto p = to_params(o);
  const auto prof = density_for(p);
  const auto gmesh = glj::build_mesh(prof.geometry, p.eps, o.grid_nr);
  const auto grid = glj::make_polar_grid(gmesh, p.ntheta);
  const auto cfg = glj::build_pinned_configuration(o.nvort, p, prof, grid);
  const auto ie = glj::interaction_energy(grid, cfg.u_nodal, cfg.h_prime, cfg.measure.mu);

  std::mt19937_64 rng(p.seed);
  std::uniform_int_distribution<std::size_t> row(1, grid.nr() - 2), col(0, grid.ntheta - 1);
  std::vector<glj::GridPoint> ys;
  for (int k = 0; k < 20; ++k) ys.push_back({row(rng), col(rng)});
  const auto cols = glj::green_columns(ys, grid, cfg.u_nodal, o.jobs);
  double asym = 0.0, gmin = std::numeric_limits<double>::infinity(), clog = 0.0;
  for (std::size_t k = 0; k + 1 < ys.size(); k += 2) {
    const double gab = cols[k][grid.index(ys[k + 1].row, ys[k + 1].column)];
    const double gba = cols[k + 1][grid.index(ys[k].row, ys[k].column)];
    asym = std::max(asym, std::abs(gab - gba) / std::max(std::abs(gab), std::abs(gba)));
  }
  for (std::size_t k = 0; k < ys.size(); ++k) {
    for (double v : cols[k]) gmin = std::min(gmin, v);
    clog = std::max(clog, glj::green_log_constant(cols[k], ys[k], grid));
  }

  const auto balls = glj::sublevel_cover(cfg.field, 0.5, p.seed);
  const auto jac = glj::jacobian_field(cfg.field);

  if (!o.binary.empty()) glj::write_field_binary(cfg.field, o.binary);
  if (o.format == "csv") {
    emit(o, glj::field_csv(cfg.field));
    return 0;
  }
  json j;
  j["params"] = json_params(p);
  j["grid"] = {{"nr", grid.nr()}, {"ntheta", grid.ntheta}};
  j["n"] = o.nvort;
  j["sector_mass_over_2pi"] = json::array();
  for (double m : cfg.measure.sector_mass) j["sector_mass_over_2pi"].push_back(m / (2.0 * std::numbers::pi));
  j["windings"] = cfg.windings;
  j["phase_residual"] = cfg.phase_residual;
  j["interaction_primal"] = ie.primal;
  j["interaction_dual"] = ie.dual;
  j["interaction_rel_diff"] = ie.relative_difference;
  j["green_max_asymmetry"] = asym;
  j["green_min"] = gmin;
  j["green_log_constant"] = clog;
  j["jacobian_mass_over_2pi"] = jac.total_mass / (2.0 * std::numbers::pi);
  j["balls"] = json::parse(glj::balls_json(balls));
  emit(o, j.dump(2) + "\n");
  return 0;
}

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("glj");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("GLJ_LOG")) spdlog::set_level(spdlog::level::from_str(env));
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"Ginzburg-Landau S-N-S junction lab on the unit disc"};
  app.require_subcommand(1);
  Options o;

  auto* canonical = app.add_subcommand("canonical", "Flat-junction constants and residuals");
  canonical->add_option("--a", o.a)->capture_default_str();
  canonical->add_option("--d", o.d)->capture_default_str();
  canonical->add_option("--out", o.out);
  canonical->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));

  auto* density = app.add_subcommand("density", "Field-free density profile");
  auto* meissner = app.add_subcommand("meissner", "Weighted London field");
  auto* field = app.add_subcommand("field", "Radial vortex-less state at one eps");
  auto* sweep = app.add_subcommand("sweep", "eps sweep with fitted rates");
  auto* vortex = app.add_subcommand("vortex", "Pinned-vortex configuration on a polar grid");
  for (auto* sc : {density, meissner, field, sweep, vortex}) add_common(sc, o);
  sweep->add_option("--eps-list", o.eps_list, "Comma-separated, strictly decreasing")
      ->capture_default_str();
  sweep->add_flag("--resume", o.resume, "Skip rows already in <out>.jsonl");
  sweep->add_option("--jobs", o.jobs, "Concurrent rows (disables continuation)")
      ->capture_default_str();
  vortex->add_option("--nvort", o.nvort, "Number of pinned vortices")->capture_default_str();
  vortex->add_option("--grid-nr", o.grid_nr, "Radial nodes of the polar grid")
      ->capture_default_str();
  vortex->add_option("--jobs", o.jobs, "Concurrent Green-column solves")->capture_default_str();
  vortex->add_option("--binary", o.binary, "Also write the field as flat binary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config;
  }

  try {
    if (*canonical) return run_canonical(o);
    if (*density) return run_density(o);
    if (*meissner) return run_meissner(o);
    if (*field) return run_field(o);
    if (*sweep) return run_sweep_cmd(o);
    if (*vortex) return run_vortex(o);
  } catch (const glj::ConfigError& e) {
    spdlog::error("configuration error: {}", e.what());
    return exit_config;
  } catch (const glj::SolverError& e) {
    spdlog::error("solver error: {} (last residual {:.3e})", e.what(), e.last_residual());
    return exit_solver;
  } catch (const glj::IoError& e) {
    spdlog::error("I/O error: {}", e.what());
    return exit_io;
  } catch (const std::filesystem::filesystem_error& e) {
    spdlog::error("I/O error: {}", e.what());
    return exit_io;
  }
  return 0;
}
