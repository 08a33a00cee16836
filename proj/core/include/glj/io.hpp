#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "glj/density.hpp"
#include "glj/params.hpp"
#include "glj/sweep.hpp"
#include "glj/vortex.hpp"

namespace glj {

/// All writers throw IoError carrying the path.
void write_text(const std::filesystem::path& path, std::string_view content);
void append_line(const std::filesystem::path& path, std::string_view line);
std::string read_text(const std::filesystem::path& path);

std::string params_json(const ModelParams& p);
ModelParams params_from_json(const std::string& text);

/// One JSON object on a single line.
std::string row_json(const SweepRow& row);
SweepRow row_from_json(const std::string& text);

/// Columns r, theta, re, im; the origin row appears once.
std::string field_csv(const ComplexField2D& field);
void write_field_csv(const ComplexField2D& field, const std::filesystem::path& path);

/// Little-endian: uint64 n_r, uint64 n_theta, then n_r * n_theta pairs
/// (re, im) of float64 in row-major order (index i * n_theta + j).
void write_field_binary(const ComplexField2D& field, const std::filesystem::path& path);

struct FieldSamples {
  std::uint64_t nr = 0;
  std::uint64_t ntheta = 0;
  std::vector<std::complex<double>> values;
};
FieldSamples read_field_binary(const std::filesystem::path& path);

std::string balls_json(const BallCollection& balls);
std::string mesh_json(const RadialMesh& mesh);
/// Columns r, u.
std::string profile_csv(const DensityProfile& profile);

}  // namespace glj
