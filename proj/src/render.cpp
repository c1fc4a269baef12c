#include "mimic/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mimic {

namespace {

constexpr double kNearClip = 1.0;  // mm

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

inline double segment_dist2(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                            const Eigen::Vector2d& p, double* t_out = nullptr) {
  const Eigen::Vector2d h = b - a;
  const Eigen::Vector2d w = p - a;
  const double hh = h.squaredNorm();
  double t = hh > 0.0 ? std::clamp(w.dot(h) / hh, 0.0, 1.0) : 0.0;
  if (t_out) *t_out = t;
  return (w - t * h).squaredNorm();
}

struct RasterTape {
  std::vector<int32_t> feature;  // nearest hull edge, -1 = empty hull
  std::vector<double> dist;      // signed px distance
};

// Exact signed distance to the hull outline for every pixel. Hull edges are
// pruned per 16x16 block with the 1-Lipschitz bound: an edge can be nearest
// somewhere in the block only if its center distance is within 2r of the best
// center distance, r being the block's half-diagonal.
void rasterize_tape(const std::vector<Eigen::Vector2d>& pts, const std::vector<int>& hull,
                    int width, int height, RasterTape* tape) {
  const size_t n = static_cast<size_t>(width) * height;
  tape->feature.assign(n, -1);
  tape->dist.assign(n, -std::numeric_limits<double>::infinity());
  const int ne = static_cast<int>(hull.size());
  if (ne == 0) return;

  constexpr int kBlock = 16;
  std::vector<double> center_d(ne);
  std::vector<int> candidates;
  candidates.reserve(ne);
  for (int by = 0; by < height; by += kBlock) {
    const int bh = std::min(kBlock, height - by);
    for (int bx = 0; bx < width; bx += kBlock) {
      const int bw = std::min(kBlock, width - bx);
      const Eigen::Vector2d center(bx + 0.5 + (bw - 1) * 0.5, by + 0.5 + (bh - 1) * 0.5);
      const double radius = 0.5 * std::hypot(bw - 1.0, bh - 1.0) + 1e-9;

      double best = std::numeric_limits<double>::infinity();
      bool center_inside = ne >= 3;
      for (int e = 0; e < ne; ++e) {
        const Eigen::Vector2d& a = pts[hull[e]];
        const Eigen::Vector2d& b = pts[hull[(e + 1) % ne]];
        center_d[e] = std::sqrt(segment_dist2(a, b, center));
        best = std::min(best, center_d[e]);
        if (center_inside && cross2(b - a, center - a) < 0.0) center_inside = false;
      }
      candidates.clear();
      const double cutoff = best + 2.0 * radius;
      for (int e = 0; e < ne; ++e) {
        if (center_d[e] <= cutoff) candidates.push_back(e);
      }
      // Signed distance is 1-Lipschitz, so a block whose center is farther
      // from the outline than its radius has one sign throughout.
      const int block_sign = best > radius ? (center_inside ? 1 : -1) : 0;

      for (int y = by; y < by + bh; ++y) {
        for (int x = bx; x < bx + bw; ++x) {
          const Eigen::Vector2d p(x + 0.5, y + 0.5);
          double d2 = std::numeric_limits<double>::infinity();
          int32_t win = -1;
          for (int e : candidates) {
            const Eigen::Vector2d& a = pts[hull[e]];
            const Eigen::Vector2d& b = pts[hull[(e + 1) % ne]];
            const double de = segment_dist2(a, b, p);
            if (de < d2) {
              d2 = de;
              win = e;
            }
          }
          bool inside;
          if (block_sign != 0) {
            inside = block_sign > 0;
          } else {
            inside = ne >= 3;
            for (int e = 0; e < ne && inside; ++e) {
              const Eigen::Vector2d& a = pts[hull[e]];
              const Eigen::Vector2d& b = pts[hull[(e + 1) % ne]];
              if (cross2(b - a, p - a) < 0.0) inside = false;
            }
          }
          const size_t idx = static_cast<size_t>(y) * width + x;
          tape->dist[idx] = inside ? std::sqrt(d2) : -std::sqrt(d2);
          tape->feature[idx] = win;
        }
      }
    }
  }
}

void tape_to_values(const RasterTape& tape, double softness, std::vector<double>* values) {
  values->resize(tape.dist.size());
  const double inv = 1.0 / softness;
  for (size_t i = 0; i < tape.dist.size(); ++i) {
    const double d = tape.dist[i];
    (*values)[i] = std::isinf(d) ? 0.0 : sigmoid(d * inv);
  }
}

}  // namespace

std::vector<int> convex_hull(const std::vector<Eigen::Vector2d>& pts,
                             const std::vector<uint8_t>& ok) {
  std::vector<int> idx;
  idx.reserve(pts.size());
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    if (ok.empty() || ok[i]) idx.push_back(i);
  }
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (pts[a].x() != pts[b].x()) return pts[a].x() < pts[b].x();
    if (pts[a].y() != pts[b].y()) return pts[a].y() < pts[b].y();
    return a < b;
  });
  idx.erase(std::unique(idx.begin(), idx.end(),
                        [&](int a, int b) { return pts[a] == pts[b]; }),
            idx.end());
  const int n = static_cast<int>(idx.size());
  if (n <= 2) return idx;

  // Andrew monotone chain, CCW output in the raster frame (y down flips the
  // usual orientation convention; we orient by signed area at the end).
  std::vector<int> hull(2 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    while (k >= 2 && cross2(pts[hull[k - 1]] - pts[hull[k - 2]],
                            pts[idx[i]] - pts[hull[k - 2]]) <= 0.0) {
      --k;
    }
    hull[k++] = idx[i];
  }
  const int lower = k + 1;
  for (int i = n - 2; i >= 0; --i) {
    while (k >= lower && cross2(pts[hull[k - 1]] - pts[hull[k - 2]],
                                pts[idx[i]] - pts[hull[k - 2]]) <= 0.0) {
      --k;
    }
    hull[k++] = idx[i];
  }
  hull.resize(k - 1);

  double area2 = 0.0;
  const int m = static_cast<int>(hull.size());
  for (int i = 0; i < m; ++i) {
    area2 += cross2(pts[hull[i]], pts[hull[(i + 1) % m]]);
  }
  if (area2 < 0.0) std::reverse(hull.begin(), hull.end());
  return hull;
}

double polygon_signed_distance(const std::vector<Eigen::Vector2d>& pts,
                               const std::vector<int>& hull, const Eigen::Vector2d& p,
                               int* nearest_edge) {
  const int ne = static_cast<int>(hull.size());
  if (nearest_edge) *nearest_edge = -1;
  if (ne == 0) return -std::numeric_limits<double>::infinity();
  double d2 = std::numeric_limits<double>::infinity();
  bool inside = ne >= 3;
  for (int e = 0; e < ne; ++e) {
    const Eigen::Vector2d& a = pts[hull[e]];
    const Eigen::Vector2d& b = pts[hull[(e + 1) % ne]];
    const double de = segment_dist2(a, b, p);
    if (de < d2) {
      d2 = de;
      if (nearest_edge) *nearest_edge = e;
    }
    if (inside && cross2(b - a, p - a) < 0.0) inside = false;
  }
  return inside ? std::sqrt(d2) : -std::sqrt(d2);
}

Silhouette render_silhouette(const TriMesh& mesh, const CameraPose& cam, const RasterConfig& cfg) {
  const RigidTransform view = camera_view_matrix(cam);
  std::vector<Eigen::Vector2d> pts(mesh.vertices.size());
  std::vector<uint8_t> ok(mesh.vertices.size(), 0);
  bool any_ok = false, any_culled = false;
  for (size_t i = 0; i < mesh.vertices.size(); ++i) {
    const Eigen::Vector3d pc = view.apply(mesh.vertices[i]);
    if (pc.z() > kNearClip) {
      ok[i] = 1;
      any_ok = true;
      pts[i] = {cfg.focal_length * pc.x() / pc.z() + 0.5 * cfg.width,
                cfg.focal_length * pc.y() / pc.z() + 0.5 * cfg.height};
    } else {
      any_culled = true;
    }
  }
  Silhouette sil;
  sil.width = cfg.width;
  sil.height = cfg.height;
  sil.behind_camera = any_culled || !any_ok;
  if (!any_ok) {
    sil.values.assign(static_cast<size_t>(cfg.width) * cfg.height, 0.0);
    return sil;
  }
  const std::vector<int> hull = convex_hull(pts, ok);
  RasterTape tape;
  rasterize_tape(pts, hull, cfg.width, cfg.height, &tape);
  tape_to_values(tape, cfg.softness, &sil.values);
  return sil;
}

namespace {

// Projects entity vertices through the camera with forward-mode derivatives
// against (entity params..., camera distance, azimuth, elevation).
template <int N>
void project_with_jets(const std::vector<Vec3T<Jet<N>>>& world,
                       const Jet<N> cam_params[3], const RasterConfig& cfg,
                       std::vector<Eigen::Vector2d>* pts,
                       std::vector<Eigen::Matrix<double, 2, Eigen::Dynamic>>* jac,
                       std::vector<uint8_t>* ok) {
  Mat3T<Jet<N>> rot;
  Vec3T<Jet<N>> center;
  camera_rigid<Jet<N>>(cam_params, &rot, &center);

  pts->resize(world.size());
  jac->resize(world.size());
  ok->assign(world.size(), 0);
  for (size_t i = 0; i < world.size(); ++i) {
    const Vec3T<Jet<N>> pc = rot * (world[i] - center);
    if (pc.z.v <= kNearClip) continue;
    (*ok)[i] = 1;
    const Jet<N> u = pc.x / pc.z * Jet<N>(cfg.focal_length) + Jet<N>(0.5 * cfg.width);
    const Jet<N> v = pc.y / pc.z * Jet<N>(cfg.focal_length) + Jet<N>(0.5 * cfg.height);
    (*pts)[i] = {u.v, v.v};
    auto& m = (*jac)[i];
    m.resize(2, N);
    for (int k = 0; k < N; ++k) {
      m(0, k) = u.d[k];
      m(1, k) = v.d[k];
    }
  }
}

}  // namespace

EntityRender EntityRender::hand(const HandState& state, const CameraPose& cam,
                                const RasterConfig& cfg) {
  constexpr int K = 5;
  constexpr int N = K + 3;
  Jet<N> params[K];
  const double raw[K] = {state.position.x(), state.position.y(), state.position.z(),
                         state.azimuth, state.elevation};
  for (int i = 0; i < K; ++i) params[i] = Jet<N>::variable(raw[i], i);
  Jet<N> cam_params[3] = {Jet<N>::variable(cam.distance, K),
                          Jet<N>::variable(cam.azimuth, K + 1),
                          Jet<N>::variable(cam.elevation, K + 2)};
  EntityRender r;
  r.kind_ = EntityKind::kHand;
  r.num_params_ = K;
  r.cfg_ = cfg;
  const auto world = hand_vertices<Jet<N>>(params);
  project_with_jets<N>(world, cam_params, cfg, &r.pts_, &r.jac_, &r.vert_ok_);
  r.rasterize();
  return r;
}

EntityRender EntityRender::object(const ObjectState& state, const CameraPose& cam,
                                  const RasterConfig& cfg) {
  constexpr int K = 9;
  constexpr int N = K + 3;
  Jet<N> params[K];
  const double raw[K] = {state.position.x(), state.position.y(), state.position.z(),
                         state.size.x(),     state.size.y(),     state.size.z(),
                         state.rotation.x(), state.rotation.y(), state.rotation.z()};
  for (int i = 0; i < K; ++i) params[i] = Jet<N>::variable(raw[i], i);
  Jet<N> cam_params[3] = {Jet<N>::variable(cam.distance, K),
                          Jet<N>::variable(cam.azimuth, K + 1),
                          Jet<N>::variable(cam.elevation, K + 2)};
  EntityRender r;
  r.kind_ = EntityKind::kObject;
  r.num_params_ = K;
  r.cfg_ = cfg;
  const auto world = object_vertices<Jet<N>>(params);
  project_with_jets<N>(world, cam_params, cfg, &r.pts_, &r.jac_, &r.vert_ok_);
  r.rasterize();
  return r;
}

void EntityRender::rasterize() {
  sil_.width = cfg_.width;
  sil_.height = cfg_.height;
  bool any_ok = false, any_culled = false;
  for (uint8_t o : vert_ok_) {
    if (o) any_ok = true; else any_culled = true;
  }
  sil_.behind_camera = any_culled || !any_ok;
  const size_t n = static_cast<size_t>(cfg_.width) * cfg_.height;
  if (!any_ok) {
    sil_.values.assign(n, 0.0);
    feature_.assign(n, -1);
    dist_.assign(n, -std::numeric_limits<double>::infinity());
    return;
  }
  hull_ = convex_hull(pts_, vert_ok_);
  RasterTape tape;
  rasterize_tape(pts_, hull_, cfg_.width, cfg_.height, &tape);
  tape_to_values(tape, cfg_.softness, &sil_.values);
  feature_ = std::move(tape.feature);
  dist_ = std::move(tape.dist);
}

ParamGrad EntityRender::backward(const std::vector<double>& upstream) const {
  ParamGrad grad;
  grad.entity = Eigen::VectorXd::Zero(num_params_);
  if (feature_.empty() || hull_.empty()) return grad;

  // Per-pixel gradient accumulates onto projected vertices, then one chain
  // through the stored Jacobians maps it into parameter space.
  std::vector<Eigen::Vector2d> vgrad(pts_.size(), Eigen::Vector2d::Zero());
  const double inv_sigma = 1.0 / cfg_.softness;
  const int ne = static_cast<int>(hull_.size());
  const size_t n = sil_.values.size();
  for (size_t i = 0; i < n; ++i) {
    const double up = upstream[i];
    const int32_t e = feature_[i];
    if (up == 0.0 || e < 0) continue;
    const double s = sil_.values[i];
    const double gd = up * s * (1.0 - s) * inv_sigma;  // d(loss)/d(signed distance)
    if (gd == 0.0) continue;

    const int iu = hull_[e];
    const int iv = hull_[(e + 1) % ne];
    const int y = static_cast<int>(i) / cfg_.width;
    const int x = static_cast<int>(i) % cfg_.width;
    const Eigen::Vector2d p(x + 0.5, y + 0.5);
    double t = 0.0;
    const double d2 = segment_dist2(pts_[iu], pts_[iv], p, &t);
    const double dist = std::sqrt(d2);
    if (dist < 1e-12) continue;  // exactly on the outline; measure-zero kink
    const double sign = dist_[i] >= 0.0 ? 1.0 : -1.0;
    const Eigen::Vector2d nrm = (p - (pts_[iu] + t * (pts_[iv] - pts_[iu]))) / dist;
    // Envelope theorem: t is the minimizer, so only the explicit dependence
    // on the endpoints contributes. d = sign * |p - u - t (v - u)|.
    vgrad[iu] -= gd * sign * (1.0 - t) * nrm;
    vgrad[iv] -= gd * sign * t * nrm;
  }

  for (size_t vi = 0; vi < pts_.size(); ++vi) {
    if (!vert_ok_[vi]) continue;
    const Eigen::Vector2d& g = vgrad[vi];
    if (g.x() == 0.0 && g.y() == 0.0) continue;
    const Eigen::VectorXd contrib = jac_[vi].transpose() * g;
    grad.entity += contrib.head(num_params_);
    grad.camera += contrib.tail(3);
  }
  return grad;
}

}  // namespace mimic
