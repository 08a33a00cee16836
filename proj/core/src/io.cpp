#include "glj/io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "glj/error.hpp"
#include "json_io.hpp"

namespace glj {

namespace detail {

using nlohmann::json;

json to_json(const ModelParams& p) {
  json j;
  j["a"] = p.a;
  if (const auto* t = std::get_if<ThinRegime>(&p.regime))
    j["regime"] = {{"kind", "thin"}, {"d", t->d}};
  else
    j["regime"] = {{"kind", "thick"}, {"c", std::get<ThickRegime>(p.regime).c}};
  j["eps"] = p.eps;
  if (p.H)
    j["H"] = *p.H;
  else
    j["H"] = "auto";
  j["h_frac"] = p.h_frac;
  j["R"] = p.R;
  j["nr"] = p.nr;
  j["ntheta"] = p.ntheta;
  j["lambda"] = p.lambda;
  j["alpha"] = p.alpha;
  j["seed"] = p.seed;
  j["newton_tol"] = p.tol.newton_tol;
  j["max_iterations"] = p.tol.max_iterations;
  return j;
}

ModelParams params_from(const json& j) {
  ModelParams p;
  p.a = j.at("a").get<double>();
  const auto& reg = j.at("regime");
  if (reg.at("kind") == "thin")
    p.regime = ThinRegime{reg.at("d").get<double>()};
  else
    p.regime = ThickRegime{reg.at("c").get<double>()};
  p.eps = j.at("eps").get<double>();
  if (j.at("H").is_string())
    p.H.reset();
  else
    p.H = j.at("H").get<double>();
  p.h_frac = j.at("h_frac").get<double>();
  p.R = j.at("R").get<double>();
  p.nr = j.at("nr").get<std::size_t>();
  p.ntheta = j.at("ntheta").get<std::size_t>();
  p.lambda = j.at("lambda").get<double>();
  p.alpha = j.at("alpha").get<double>();
  p.seed = j.at("seed").get<std::uint64_t>();
  p.tol.newton_tol = j.at("newton_tol").get<double>();
  p.tol.max_iterations = j.at("max_iterations").get<int>();
  return p;
}

namespace {

double number(const json& j, const char* key) {
  const auto& v = j.at(key);
  return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
}

}  // namespace

json to_json(const SweepRow& r) {
  json j;
  j["params"] = to_json(r.params);
  j["eps"] = r.eps;
  j["ell"] = r.ell;
  j["H"] = r.H;
  j["jump"] = r.jump;
  j["target"] = r.target;
  j["rel_err"] = r.rel_err;
  j["psi_jump"] = r.psi_jump;
  j["C0"] = r.C0;
  j["J0"] = r.J0;
  j["F"] = r.F;
  j["circ_inner"] = r.circ_inner;
  j["circ_outer"] = r.circ_outer;
  j["circ_gap"] = r.circ_gap;
  j["m_eps"] = r.m_eps;
  j["status"] = r.status;
  j["diagnostics"] = json::object();
  for (const auto& [k, v] : r.diagnostics) j["diagnostics"][k] = v;
  return j;
}

SweepRow row_from(const json& j) {
  SweepRow r;
  r.params = params_from(j.at("params"));
  r.eps = number(j, "eps");
  r.ell = number(j, "ell");
  r.H = number(j, "H");
  r.jump = number(j, "jump");
  r.target = number(j, "target");
  r.rel_err = number(j, "rel_err");
  r.psi_jump = number(j, "psi_jump");
  r.C0 = number(j, "C0");
  r.J0 = number(j, "J0");
  r.F = number(j, "F");
  r.circ_inner = number(j, "circ_inner");
  r.circ_outer = number(j, "circ_outer");
  r.circ_gap = number(j, "circ_gap");
  r.m_eps = number(j, "m_eps");
  r.status = j.at("status").get<std::string>();
  if (j.contains("diagnostics"))
    for (const auto& [k, v] : j.at("diagnostics").items())
      r.diagnostics[k] = v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
  return r;
}

json to_json(const RateFit& f) {
  return {{"name", f.name},         {"slope", f.slope},       {"intercept", f.intercept},
          {"residual", f.residual}, {"slope_ci", f.slope_ci}, {"points", f.points}};
}

}  // namespace detail

void write_text(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

void append_line(const std::filesystem::path& path, std::string_view line) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw IoError("cannot open " + path.string() + " for appending");
  out << line << '\n';
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string params_json(const ModelParams& p) { return detail::to_json(p).dump(); }

ModelParams params_from_json(const std::string& text) {
  try {
    return detail::params_from(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid parameter JSON: ") + e.what());
  }
}

std::string row_json(const SweepRow& row) { return detail::to_json(row).dump(); }

SweepRow row_from_json(const std::string& text) {
  try {
    return detail::row_from(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid row JSON: ") + e.what());
  }
}

std::string field_csv(const ComplexField2D& field) {
  const auto& g = field.grid;
  std::string out = "r,theta,re,im\n";
  auto line = [&](std::size_t i, std::size_t j) {
    const auto v = field.at(i, j);
    out += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", g.r(i), g.theta(j), v.real(), v.imag());
  };
  line(0, 0);
  for (std::size_t i = 1; i < g.nr(); ++i)
    for (std::size_t j = 0; j < g.ntheta; ++j) line(i, j);
  return out;
}

void write_field_csv(const ComplexField2D& field, const std::filesystem::path& path) {
  write_text(path, field_csv(field));
}

namespace {

template <class T>
void put_le(std::string& out, T v) {
  auto bits = std::bit_cast<std::array<char, sizeof(T)>>(v);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
  out.append(bits.data(), bits.size());
}

template <class T>
T get_le(const std::string& in, std::size_t& pos) {
  std::array<char, sizeof(T)> bits;
  std::memcpy(bits.data(), in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
  pos += sizeof(T);
  return std::bit_cast<T>(bits);
}

}  // namespace

void write_field_binary(const ComplexField2D& field, const std::filesystem::path& path) {
  std::string out;
  out.reserve(16 + 16 * field.values.size());
  put_le<std::uint64_t>(out, field.grid.nr());
  put_le<std::uint64_t>(out, field.grid.ntheta);
  for (const auto& v : field.values) {
    put_le(out, v.real());
    put_le(out, v.imag());
  }
  write_text(path, out);
}

FieldSamples read_field_binary(const std::filesystem::path& path) {
  const std::string in = read_text(path);
  if (in.size() < 16) throw IoError("truncated field file: " + path.string());
  std::size_t pos = 0;
  FieldSamples s;
  s.nr = get_le<std::uint64_t>(in, pos);
  s.ntheta = get_le<std::uint64_t>(in, pos);
  if (in.size() != 16 + 16 * s.nr * s.ntheta)
    throw IoError("field file size does not match its header: " + path.string());
  s.values.resize(s.nr * s.ntheta);
  for (auto& v : s.values) {
    const double re = get_le<double>(in, pos);
    const double im = get_le<double>(in, pos);
    v = {re, im};
  }
  return s;
}

std::string balls_json(const BallCollection& balls) {
  nlohmann::json j;
  j["balls"] = nlohmann::json::array();
  for (const auto& b : balls.balls)
    j["balls"].push_back({{"x", b.center.x},
                          {"y", b.center.y},
                          {"radius", b.radius},
                          {"degree", b.degree},
                          {"inside", b.inside}});
  j["total_radius"] = balls.total_radius();
  j["total_abs_degree"] = balls.total_abs_degree();
  j["clipped"] = balls.clipped;
  j["exited"] = balls.exited;
  j["degree_mismatch"] = balls.degree_mismatch;
  j["merge_events"] = balls.merge_events;
  return j.dump(2) + "\n";
}

std::string mesh_json(const RadialMesh& mesh) {
  nlohmann::json j;
  j["nodes"] = mesh.nodes;
  j["inner_index"] = mesh.inner_index;
  j["mid_index"] = mesh.mid_index;
  j["outer_index"] = mesh.outer_index;
  j["max_spacing"] = mesh.max_spacing();
  j["min_spacing"] = mesh.min_spacing();
  return j.dump(2) + "\n";
}

std::string profile_csv(const DensityProfile& profile) {
  std::string out = "r,u\n";
  for (std::size_t i = 0; i < profile.mesh.size(); ++i)
    out += fmt::format("{:.17g},{:.17g}\n", profile.mesh.nodes[i], profile.u[i]);
  return out;
}

}  // namespace glj
