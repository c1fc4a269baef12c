#include "mimic/io.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <stdexcept>

namespace mimic {

namespace {

struct FileCloser {
  void operator()(FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

}  // namespace

void png_write_gray(const std::string& path, const GrayImage& img) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw std::runtime_error("png_write_gray: cannot open " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (!png || !info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("png_write_gray: libpng failure for " + path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < img.height; ++y) {
    png_write_row(png, const_cast<png_bytep>(img.pixels.data() + static_cast<size_t>(y) * img.width));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

GrayImage png_read_gray(const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw std::runtime_error("png_read_gray: cannot open " + path);
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (!png || !info || setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("png_read_gray: libpng failure for " + path);
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  const int color = png_get_color_type(png, info);
  if (color == PNG_COLOR_TYPE_RGB || color == PNG_COLOR_TYPE_RGB_ALPHA) {
    png_set_rgb_to_gray_fixed(png, 1, -1, -1);
  }
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (png_get_bit_depth(png, info) < 8) png_set_expand_gray_1_2_4_to_8(png);
  png_read_update_info(png, info);

  GrayImage img;
  img.width = static_cast<int>(png_get_image_width(png, info));
  img.height = static_cast<int>(png_get_image_height(png, info));
  img.pixels.resize(static_cast<size_t>(img.width) * img.height);
  for (int y = 0; y < img.height; ++y) {
    png_read_row(png, img.pixels.data() + static_cast<size_t>(y) * img.width, nullptr);
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

uint64_t fnv1a64(const std::string& data) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

nlohmann::json provenance_to_json(const Provenance& p) {
  return {{"tool_version", p.version}, {"config_hash", p.config_hash}, {"seed", p.seed}};
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  // Trim to the shortest representation that round-trips.
  for (int prec = 1; prec < 17; ++prec) {
    char probe[32];
    std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
    if (std::strtod(probe, nullptr) == v) return probe;
  }
  return buf;
}

nlohmann::json trajectory_to_json(const StateTrajectory& traj) {
  nlohmann::json frames = nlohmann::json::array();
  for (const auto& f : traj.frames) {
    nlohmann::json objects = nlohmann::json::array();
    for (const auto& o : f.objects) {
      objects.push_back({{"p", {o.position.x(), o.position.y(), o.position.z()}},
                         {"s", {o.size.x(), o.size.y(), o.size.z()}},
                         {"theta", {o.rotation.x(), o.rotation.y(), o.rotation.z()}}});
    }
    frames.push_back({{"hand",
                       {{"p", {f.hand.position.x(), f.hand.position.y(), f.hand.position.z()}},
                        {"azimuth", f.hand.azimuth},
                        {"elevation", f.hand.elevation}}},
                      {"objects", objects},
                      {"touch", f.touch ? 1 : 0}});
  }
  return {{"camera",
           {{"distance_mm", traj.camera.distance},
            {"azimuth_rad", traj.camera.azimuth},
            {"elevation_rad", traj.camera.elevation}}},
          {"frame_interval_s", traj.frame_interval},
          {"frames", frames}};
}

StateTrajectory trajectory_from_json(const nlohmann::json& j) {
  StateTrajectory traj;
  traj.camera.distance = j.at("camera").at("distance_mm").get<double>();
  traj.camera.azimuth = j.at("camera").at("azimuth_rad").get<double>();
  traj.camera.elevation = j.at("camera").at("elevation_rad").get<double>();
  traj.frame_interval = j.at("frame_interval_s").get<double>();
  for (const auto& jf : j.at("frames")) {
    FrameState f;
    const auto& jh = jf.at("hand");
    f.hand.position = {jh.at("p")[0].get<double>(), jh.at("p")[1].get<double>(),
                       jh.at("p")[2].get<double>()};
    f.hand.azimuth = jh.at("azimuth").get<double>();
    f.hand.elevation = jh.at("elevation").get<double>();
    for (const auto& jo : jf.at("objects")) {
      ObjectState o;
      o.position = {jo.at("p")[0].get<double>(), jo.at("p")[1].get<double>(),
                    jo.at("p")[2].get<double>()};
      o.size = {jo.at("s")[0].get<double>(), jo.at("s")[1].get<double>(),
                jo.at("s")[2].get<double>()};
      o.rotation = {jo.at("theta")[0].get<double>(), jo.at("theta")[1].get<double>(),
                    jo.at("theta")[2].get<double>()};
      f.objects.push_back(o);
    }
    f.touch = jf.at("touch").get<int>() != 0;
    traj.frames.push_back(std::move(f));
  }
  return traj;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  return nlohmann::json::parse(in);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace mimic
