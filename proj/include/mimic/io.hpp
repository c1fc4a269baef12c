#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "mimic/geometry.hpp"

namespace mimic {

inline constexpr const char* kToolVersion = "0.1.0";

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> pixels;  // row-major

  uint8_t at(int row, int col) const { return pixels[static_cast<size_t>(row) * width + col]; }
  uint8_t& at(int row, int col) { return pixels[static_cast<size_t>(row) * width + col]; }
};

// 8-bit grayscale PNG I/O (libpng). Throws std::runtime_error on failure.
void png_write_gray(const std::string& path, const GrayImage& img);
GrayImage png_read_gray(const std::string& path);

// FNV-1a 64-bit, used for config hashes embedded in artifacts.
uint64_t fnv1a64(const std::string& data);
std::string hex64(uint64_t value);

// {tool version, config hash, seed} block embedded in every artifact.
struct Provenance {
  std::string version = kToolVersion;
  std::string config_hash;
  uint64_t seed = 0;
};
nlohmann::json provenance_to_json(const Provenance& p);

// Deterministic shortest-round-trip double formatting for CSV/SVG output.
std::string fmt_double(double v);

// StateTrajectory wire format:
//   camera {distance_mm, azimuth_rad, elevation_rad}, frame_interval_s,
//   frames [{hand {p[3], azimuth, elevation}, objects [{p[3], s[3], theta[3]}], touch}]
nlohmann::json trajectory_to_json(const StateTrajectory& traj);
StateTrajectory trajectory_from_json(const nlohmann::json& j);

void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace mimic
