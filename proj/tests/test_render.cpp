#include <cmath>
#include <functional>

#include "doctest.h"
#include "mimic/geometry.hpp"
#include "mimic/render.hpp"
#include "mimic/rng.hpp"

using namespace mimic;

namespace {

RasterConfig small_cfg() {
  RasterConfig cfg;
  cfg.width = 64;
  cfg.height = 64;
  cfg.focal_length = 64;
  return cfg;
}

// Independent hard-rasterization oracle: point-in-any-projected-triangle.
std::vector<double> hard_raster(const TriMesh& mesh, const CameraPose& cam,
                                const RasterConfig& cfg) {
  const RigidTransform view = camera_view_matrix(cam);
  std::vector<Eigen::Vector2d> pts(mesh.vertices.size());
  for (size_t i = 0; i < mesh.vertices.size(); ++i) {
    const Eigen::Vector3d pc = view.apply(mesh.vertices[i]);
    pts[i] = {cfg.focal_length * pc.x() / pc.z() + 0.5 * cfg.width,
              cfg.focal_length * pc.y() / pc.z() + 0.5 * cfg.height};
  }
  std::vector<double> out(static_cast<size_t>(cfg.width) * cfg.height, 0.0);
  for (int y = 0; y < cfg.height; ++y) {
    for (int x = 0; x < cfg.width; ++x) {
      const Eigen::Vector2d p(x + 0.5, y + 0.5);
      for (const auto& f : mesh.faces) {
        const Eigen::Vector2d& a = pts[f[0]];
        const Eigen::Vector2d& b = pts[f[1]];
        const Eigen::Vector2d& c = pts[f[2]];
        const auto side = [&](const Eigen::Vector2d& u, const Eigen::Vector2d& v) {
          return (v.x() - u.x()) * (p.y() - u.y()) - (v.y() - u.y()) * (p.x() - u.x());
        };
        const double s1 = side(a, b), s2 = side(b, c), s3 = side(c, a);
        const bool inside = (s1 >= 0 && s2 >= 0 && s3 >= 0) || (s1 <= 0 && s2 <= 0 && s3 <= 0);
        if (inside) {
          out[static_cast<size_t>(y) * cfg.width + x] = 1.0;
          break;
        }
      }
    }
  }
  return out;
}

double bbox_side(const Silhouette& sil, double threshold = 0.5) {
  int min_x = sil.width, max_x = -1, min_y = sil.height, max_y = -1;
  for (int y = 0; y < sil.height; ++y) {
    for (int x = 0; x < sil.width; ++x) {
      if (sil.at(y, x) > threshold) {
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
      }
    }
  }
  if (max_x < 0) return 0.0;
  return std::max(max_x - min_x + 1, max_y - min_y + 1);
}

}  // namespace

TEST_CASE("empty scene renders all zeros") {
  TriMesh empty;
  const Silhouette sil = render_silhouette(empty, CameraPose{1000, 0, 0.4}, small_cfg());
  for (double v : sil.values) CHECK(v == 0.0);
}

TEST_CASE("interior pixel saturates") {
  ObjectState o;
  o.size = {200, 200, 200};
  o.position = {0, 0, 100};
  const Silhouette sil =
      render_silhouette(object_mesh(o), CameraPose{1000, 0, 0}, small_cfg());
  // The cuboid face fills the image center; pixels far from every projected
  // triangle edge saturate.
  double peak = 0.0;
  for (double v : sil.values) peak = std::max(peak, v);
  CHECK(peak >= 0.999);
}

TEST_CASE("mesh behind camera gives empty silhouette and warning") {
  ObjectState o;
  o.size = {100, 100, 100};
  o.position = {2000, 0, 0};  // beyond the camera at distance 1000, azimuth 0
  const Silhouette sil =
      render_silhouette(object_mesh(o), CameraPose{1000, 0, 0}, small_cfg());
  CHECK(sil.behind_camera);
  for (double v : sil.values) CHECK(v == 0.0);
}

TEST_CASE("doubling camera distance halves the projected bbox") {
  ObjectState o;
  o.size = {150, 150, 150};
  o.position = {0, 0, 75};
  RasterConfig cfg;
  cfg.width = 128;
  cfg.height = 128;
  cfg.focal_length = 128;
  const Silhouette near_sil =
      render_silhouette(object_mesh(o), CameraPose{900, 0.2, 0.5}, cfg);
  const Silhouette far_sil =
      render_silhouette(object_mesh(o), CameraPose{1800, 0.2, 0.5}, cfg);
  const double a = bbox_side(near_sil);
  const double b = bbox_side(far_sil);
  CHECK(std::abs(a / 2.0 - b) <= 1.0 + 0.5);  // pinhole similar triangles, px quantization
}

TEST_CASE("rendering is deterministic") {
  ObjectState o;
  o.size = {120, 80, 60};
  o.position = {50, -30, 30};
  o.rotation = {0.1, 0.2, 0.3};
  const Silhouette s1 =
      render_silhouette(object_mesh(o), CameraPose{1100, 0.4, 0.6}, small_cfg());
  const Silhouette s2 =
      render_silhouette(object_mesh(o), CameraPose{1100, 0.4, 0.6}, small_cfg());
  REQUIRE(s1.values.size() == s2.values.size());
  for (size_t i = 0; i < s1.values.size(); ++i) CHECK(s1.values[i] == s2.values[i]);
}

TEST_CASE("soft silhouette converges to hard rasterization as softness shrinks") {
  ObjectState o;
  o.size = {140, 100, 90};
  o.position = {20, 10, 45};
  o.rotation = {0, 0, 0.4};
  const TriMesh mesh = object_mesh(o);
  const CameraPose cam{1000, 0.3, 0.5};
  RasterConfig cfg = small_cfg();
  const std::vector<double> hard = hard_raster(mesh, cam, cfg);

  std::vector<double> prev;
  for (double sigma : {2.0, 0.5, 0.1}) {
    cfg.softness = sigma;
    const Silhouette sil = render_silhouette(mesh, cam, cfg);
    if (!prev.empty()) {
      int regressions = 0;
      for (size_t i = 0; i < sil.values.size(); ++i) {
        const double now = std::abs(sil.values[i] - hard[i]);
        const double was = std::abs(prev[i] - hard[i]);
        if (now > was + 1e-12) ++regressions;
      }
      CHECK(regressions == 0);
    }
    prev = sil.values;
  }
}

// ---------------------------------------------------------------------------
// Gradient checks against central finite differences.

namespace {

struct FdCheck {
  int checked = 0;
  int failed = 0;
};

// Compares d(sum(upstream .* pixels))/d(param) against central differences.
// steps: 0.5 mm for lengths, 1e-3 rad for angles.
template <class RenderFn>
void check_gradients(RenderFn render, std::vector<double>* params,
                     const std::vector<double>& steps, int num_entity_params,
                     const std::vector<double>& upstream, FdCheck* result,
                     double rel_tol = 1e-3) {
  const EntityRender base = render(*params);
  const ParamGrad grad = base.backward(upstream);
  const int total = static_cast<int>(params->size());
  for (int k = 0; k < total; ++k) {
    const double h = steps[k];
    const double save = (*params)[k];
    (*params)[k] = save + h;
    const EntityRender hi = render(*params);
    (*params)[k] = save - h;
    const EntityRender lo = render(*params);
    (*params)[k] = save;
    double fhi = 0, flo = 0;
    for (size_t i = 0; i < upstream.size(); ++i) {
      fhi += upstream[i] * hi.silhouette().values[i];
      flo += upstream[i] * lo.silhouette().values[i];
    }
    const double fd = (fhi - flo) / (2 * h);
    const double analytic =
        k < num_entity_params ? grad.entity[k] : grad.camera[k - num_entity_params];
    if (std::abs(analytic) > 1e-8 || std::abs(fd) > 1e-8) {
      ++result->checked;
      const double denom = std::max(std::abs(analytic), std::abs(fd));
      if (std::abs(analytic - fd) / denom > rel_tol) ++result->failed;
    }
  }
}

}  // namespace

TEST_CASE("object translation gradient matches finite differences") {
  const RasterConfig cfg = small_cfg();
  const CameraPose cam{1000, 0.25, 0.55};
  std::vector<double> params = {30, -20, 50, 140, 100, 100, 0.05, -0.1, 0.2,
                                cam.distance, cam.azimuth, cam.elevation};
  const std::vector<double> steps = {0.5, 0.5, 0.5, 0.5, 0.5, 0.5,
                                     1e-3, 1e-3, 1e-3, 0.5, 1e-3, 1e-3};
  std::vector<double> upstream(static_cast<size_t>(cfg.width) * cfg.height, 1.0);
  auto render = [&](const std::vector<double>& p) {
    ObjectState o;
    o.position = {p[0], p[1], p[2]};
    o.size = {p[3], p[4], p[5]};
    o.rotation = {p[6], p[7], p[8]};
    return EntityRender::object(o, CameraPose{p[9], p[10], p[11]}, cfg);
  };
  FdCheck result;
  check_gradients(render, &params, steps, 9, upstream, &result);
  CHECK(result.checked > 0);
  CHECK(result.failed == 0);
}

TEST_CASE("hand gradient matches finite differences with mixed upstream") {
  const RasterConfig cfg = small_cfg();
  const CameraPose cam{1200, -0.3, 0.45};
  std::vector<double> params = {40, 60, 80, 1.2, 0.3, cam.distance, cam.azimuth, cam.elevation};
  const std::vector<double> steps = {0.5, 0.5, 0.5, 1e-3, 1e-3, 0.5, 1e-3, 1e-3};
  // Mixed-sign upstream imitates a perceptual-loss residual.
  std::vector<double> upstream(static_cast<size_t>(cfg.width) * cfg.height);
  Rng rng(5);
  for (auto& u : upstream) u = rng.uniform(-1, 1);
  auto render = [&](const std::vector<double>& p) {
    HandState h;
    h.position = {p[0], p[1], p[2]};
    h.azimuth = p[3];
    h.elevation = p[4];
    return EntityRender::hand(h, CameraPose{p[5], p[6], p[7]}, cfg);
  };
  FdCheck result;
  check_gradients(render, &params, steps, 5, upstream, &result);
  CHECK(result.checked > 0);
  CHECK(result.failed == 0);
}

TEST_CASE("zero upstream gives zero gradient") {
  ObjectState o;
  o.size = {100, 100, 100};
  o.position = {0, 0, 50};
  const EntityRender r = EntityRender::object(o, CameraPose{1000, 0, 0.4}, small_cfg());
  const std::vector<double> upstream(r.silhouette().values.size(), 0.0);
  const ParamGrad g = r.backward(upstream);
  CHECK(g.entity.norm() == 0.0);
  CHECK(g.camera.norm() == 0.0);
}

TEST_CASE("out-of-frame object has zero gradient") {
  ObjectState o;
  o.size = {60, 60, 60};
  o.position = {0, 0, -4000};  // far below the frustum
  const EntityRender r = EntityRender::object(o, CameraPose{1000, 0, 0.0}, small_cfg());
  std::vector<double> upstream(r.silhouette().values.size(), 1.0);
  const ParamGrad g = r.backward(upstream);
  // Gradients decay like the sigmoid tail; at hundreds of px away they are
  // numerically negligible.
  CHECK(g.entity.norm() < 1e-12);
}
