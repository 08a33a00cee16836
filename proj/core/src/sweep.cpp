#include "glj/sweep.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "glj/density.hpp"
#include "glj/error.hpp"
#include "glj/field.hpp"
#include "glj/io.hpp"
#include "glj/meissner.hpp"
#include "json_io.hpp"

namespace glj {

std::vector<double> continuation_seed(const DensityProfile& previous, const ModelParams& p,
                                      const RadialMesh& mesh) {
  const JunctionGeometry g = p.geometry();
  const JunctionGeometry& go = previous.geometry;
  const double ratio = previous.params.eps / p.eps;
  std::vector<double> seed(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const double r = mesh.nodes[i];
    double ro;
    if (g.in_normal(r)) {
      ro = go.R + (r - g.R) * go.ell / g.ell;
    } else if (r <= g.r_inner()) {
      ro = go.r_inner() - (g.r_inner() - r) * ratio;
    } else {
      ro = go.r_outer() + (r - g.r_outer()) * ratio;
    }
    seed[i] = interpolate(previous.mesh, previous.u, std::clamp(ro, 0.0, 1.0));
  }
  return seed;
}

SweepRow run_point(const ModelParams& p, const DensityProfile* previous,
                   DensityProfile* profile_out) {
  SweepRow row;
  row.params = p;
  row.eps = p.eps;
  try {
    p.validate();
    const JunctionGeometry g = p.geometry();
    row.ell = g.ell;
    const RadialMesh mesh = build_mesh(g, p.eps, p.nr);
    std::vector<double> seed;
    if (previous) seed = continuation_seed(*previous, p, mesh);
    DensityProfile prof = solve_density(p, g, mesh, seed);
    const LondonField london = solve_london(prof);
    const FieldState st = solve_field_state(p, prof, london);
    const JunctionReport jr = junction_report(st, prof);
    const EnergyBreakdown eb = total_energy(st, prof, london);

    row.H = st.H;
    row.params.H = st.H;
    row.jump = jr.eps_log_jump;
    row.target = jr.target_kappa;
    row.rel_err = jr.relative_error;
    row.psi_jump = jr.psi_jump;
    row.C0 = prof.c0_energy;
    row.J0 = london.j0_energy;
    row.F = eb.f_functional;
    row.circ_inner = jr.circulation_inner;
    row.circ_outer = jr.circulation_outer;
    row.circ_gap = jr.circulation_gap;
    row.m_eps = prof.m_eps;

    auto& d = row.diagnostics;
    const DensityJumpReport dj = density_jump(prof);
    d["u_jump"] = dj.u_jump;
    d["u_inner"] = dj.u_inner;
    d["u_outer"] = dj.u_outer;
    d["interface_value"] = dj.interface_target;
    d["density_rel_err"] = dj.relative_error;
    d["density_residual"] = prof.newton_residual;
    d["lambda1"] = first_eigenvalue(p, g, mesh).lambda;
    d["lambda_bound"] = eigenvalue_constant_bound(p, g);
    d["budget"] = st.budget;
    d["over_budget"] = st.over_budget ? 1.0 : 0.0;
    d["field_residual"] = st.residual;
    d["delta"] = st.H * st.H * london.j0_energy - eb.f_functional;
    double ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < mesh.size(); ++i)
      if (!g.in_normal(mesh.nodes[i])) ratio = std::min(ratio, st.f[i] / prof.u[i]);
    d["f_over_u_min_S"] = ratio;
    d["max_excess_over_u"] = st.max_excess_over_u;
    d["split_residual"] = eb.split_residual;
    d["br_residual"] = eb.br_residual;
    const SmallnessReport sm = energy_estimate_check(prof, london, pair_from_state(st, prof), st.H);
    d["smallness_energy"] = sm.energy;
    d["smallness_curl"] = sm.curl_potential;
    d["smallness_normal"] = sm.normal_derivative;
    d["meissner_c0"] = london.c0;
    d["weighted_gradient_sup"] = london.weighted_gradient_sup;
    d["origin_curvature"] = london.origin_curvature;
    d["origin_target"] = london.origin_target;
    d["degennes_mismatch"] = jr.degennes_mismatch;
    if (profile_out) *profile_out = std::move(prof);
  } catch (const ConfigError& e) {
    row.status = std::string("config_error: ") + e.what();
  } catch (const SolverError& e) {
    row.status = std::string("solver_error: ") + e.what();
  }
  if (!row.ok()) spdlog::warn("eps={} failed: {}", p.eps, row.status);
  return row;
}

namespace {

std::vector<SweepRow> read_journal(const std::filesystem::path& path) {
  std::vector<SweepRow> rows;
  if (path.empty() || !std::filesystem::exists(path)) return rows;
  std::istringstream in(read_text(path));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      rows.push_back(row_from_json(line));
    } catch (const std::exception& e) {
      spdlog::warn("skipping unreadable journal line in {}: {}", path.string(), e.what());
    }
  }
  return rows;
}

void add_fit(SweepReport& rep, const std::string& name, auto value) {
  std::vector<double> xs, ys;
  for (const auto& r : rep.rows) {
    if (!r.ok()) continue;
    const double y = value(r);
    if (y > 0.0 && std::isfinite(y)) {
      xs.push_back(r.eps);
      ys.push_back(y);
    }
  }
  if (xs.size() >= 3) rep.fits.push_back(fit_rate(xs, ys, name));
}

}  // namespace

SweepReport run_sweep(const ModelParams& base, std::span<const double> eps_list,
                      const SweepOptions& options) {
  if (eps_list.empty()) throw ConfigError("eps list is empty");
  for (std::size_t k = 1; k < eps_list.size(); ++k)
    if (!(eps_list[k] < eps_list[k - 1])) throw ConfigError("eps list must be strictly decreasing");

  SweepReport rep;
  rep.base = base;
  rep.rows.resize(eps_list.size());
  std::vector<char> done(eps_list.size(), 0);

  if (options.resume) {
    for (const auto& r : read_journal(options.journal)) {
      if (!r.ok()) continue;
      for (std::size_t k = 0; k < eps_list.size(); ++k) {
        if (!done[k] && std::abs(r.eps - eps_list[k]) <= 1e-14 * eps_list[k]) {
          rep.rows[k] = r;
          done[k] = 1;
          spdlog::info("eps={} restored from {}", r.eps, options.journal.string());
        }
      }
    }
  }

  std::mutex out_mutex;
  auto finish = [&](std::size_t k, SweepRow row) {
    std::lock_guard lock(out_mutex);
    if (!options.journal.empty()) append_line(options.journal, row_json(row));
    if (options.on_row) options.on_row(row);
    rep.rows[k] = std::move(row);
  };
  auto params_at = [&](double eps) {
    ModelParams p = base;
    p.eps = eps;
    return p;
  };

  if (options.jobs <= 1) {
    std::optional<DensityProfile> previous;
    for (std::size_t k = 0; k < eps_list.size(); ++k) {
      if (done[k]) {
        previous.reset();
        continue;
      }
      DensityProfile prof;
      SweepRow row = run_point(params_at(eps_list[k]), previous ? &*previous : nullptr, &prof);
      if (row.ok())
        previous = std::move(prof);
      else
        previous.reset();
      finish(k, std::move(row));
    }
  } else {
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t k = next++; k < eps_list.size(); k = next++)
        if (!done[k]) finish(k, run_point(params_at(eps_list[k])));
    };
    std::vector<std::thread> pool;
    const std::size_t jobs = std::min(options.jobs, eps_list.size());
    for (std::size_t t = 1; t < jobs; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
  }

  if (std::none_of(rep.rows.begin(), rep.rows.end(), [](const SweepRow& r) { return r.ok(); }))
    throw SolverError("all sweep rows failed", 0.0);

  add_fit(rep, "rel_err", [](const SweepRow& r) { return r.rel_err; });
  add_fit(rep, "circ_gap", [](const SweepRow& r) { return std::abs(r.circ_gap); });
  add_fit(rep, "psi_jump", [](const SweepRow& r) { return std::abs(r.psi_jump); });
  return rep;
}

RateFit fit_rate(std::span<const double> xs, std::span<const double> ys, std::string name) {
  if (xs.size() != ys.size()) throw ConfigError("fit_rate needs matching x and y samples");
  if (xs.size() < 3) throw ConfigError("fit_rate needs at least 3 points");
  const std::size_t n = xs.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(xs[k] > 0.0) || !(ys[k] > 0.0)) throw ConfigError("fit_rate needs positive data");
    lx[k] = std::log(xs[k]);
    ly[k] = std::log(ys[k]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
  }
  if (!(sxx > 0.0)) throw ConfigError("fit_rate needs distinct x values");
  RateFit fit;
  fit.name = std::move(name);
  fit.points = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double e = ly[k] - (fit.intercept + fit.slope * lx[k]);
    ssr += e * e;
  }
  fit.residual = std::sqrt(ssr / static_cast<double>(n));
  const double dof = static_cast<double>(n - 2);
  const boost::math::students_t dist(dof);
  const double tq = boost::math::quantile(boost::math::complement(dist, 0.025));
  fit.slope_ci = tq * std::sqrt(ssr / dof / sxx);
  return fit;
}

ReportFormat parse_format(const std::string& name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "json") return ReportFormat::json;
  throw ConfigError("unknown format '" + name + "' (expected csv or json)");
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{
      "eps",   "ell",  "H",  "jump", "target",     "rel_err",    "psi_jump", "C0",
      "J0",    "F",    "circ_inner", "circ_outer", "circ_gap", "m_eps",    "status"};
  return cols;
}

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        cur += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(std::move(cur));
  return cells;
}

}  // namespace

std::string report_csv(const SweepReport& report) {
  std::string out;
  const auto& cols = csv_columns();
  for (std::size_t k = 0; k < cols.size(); ++k) out += (k ? "," : "") + cols[k];
  out += '\n';
  for (const auto& r : report.rows) {
    for (double v : {r.eps, r.ell, r.H, r.jump, r.target, r.rel_err, r.psi_jump, r.C0, r.J0, r.F,
                     r.circ_inner, r.circ_outer, r.circ_gap, r.m_eps})
      out += fmt::format("{:.17g},", v);
    out += csv_quote(r.status) + '\n';
  }
  return out;
}

std::vector<SweepRow> parse_report_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || csv_split(line) != csv_columns())
    throw ConfigError("unexpected CSV header");
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = csv_split(line);
    if (cells.size() != csv_columns().size()) throw ConfigError("malformed CSV row: " + line);
    SweepRow r;
    double* fields[] = {&r.eps, &r.ell,     &r.H,  &r.jump, &r.target,     &r.rel_err,
                        &r.psi_jump, &r.C0, &r.J0, &r.F, &r.circ_inner, &r.circ_outer,
                        &r.circ_gap, &r.m_eps};
    for (std::size_t k = 0; k < std::size(fields); ++k) *fields[k] = std::stod(cells[k]);
    r.status = cells.back();
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string report_json(const SweepReport& report) {
  nlohmann::json j;
  j["schema"] = 1;
  j["params"] = detail::to_json(report.base);
  j["rows"] = nlohmann::json::array();
  for (const auto& r : report.rows) j["rows"].push_back(detail::to_json(r));
  j["fits"] = nlohmann::json::array();
  for (const auto& f : report.fits) j["fits"].push_back(detail::to_json(f));
  return j.dump(2) + "\n";
}

void emit_report(const SweepReport& report, ReportFormat format, const std::filesystem::path& path) {
  write_text(path, format == ReportFormat::csv ? report_csv(report) : report_json(report));
}

}  // namespace glj
