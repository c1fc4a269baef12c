#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "mimic/geometry.hpp"

namespace mimic {

struct RasterConfig {
  int width = 128;
  int height = 128;
  double focal_length = 128.0;  // px
  double softness = 1.5;        // sigma_r, px
};

struct Silhouette {
  int width = 0;
  int height = 0;
  std::vector<double> values;  // row-major, in [0, 1]
  bool behind_camera = false;  // warning flag: some/all geometry was culled

  double& at(int row, int col) { return values[static_cast<size_t>(row) * width + col]; }
  double at(int row, int col) const { return values[static_cast<size_t>(row) * width + col]; }
  double sum() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
};

// Soft silhouette. Per pixel the value is sigmoid(d / sigma_r), where d is
// the signed 2D distance (px, positive inside) to the boundary of the mesh's
// projected silhouette. The scene meshes are convex solids, so the projected
// silhouette is the convex hull of the projected vertices and d is computed
// exactly against that outline.
Silhouette render_silhouette(const TriMesh& mesh, const CameraPose& cam, const RasterConfig& cfg);

enum class EntityKind { kHand, kObject };

// Gradient of sum(upstream .* pixels) with respect to the entity state
// parameters and the camera parameters.
struct ParamGrad {
  Eigen::VectorXd entity;  // hand: (px,py,pz,az,el); object: (px,py,pz,sx,sy,sz,tx,ty,tz)
  Eigen::Vector3d camera = Eigen::Vector3d::Zero();  // (distance, azimuth, elevation)
};

// Differentiable render of one entity. Keeps the forward tape needed by
// backward(): projected vertices, their Jacobians, the silhouette outline and
// the per-pixel nearest outline feature.
class EntityRender {
 public:
  static EntityRender hand(const HandState& state, const CameraPose& cam, const RasterConfig& cfg);
  static EntityRender object(const ObjectState& state, const CameraPose& cam, const RasterConfig& cfg);

  const Silhouette& silhouette() const { return sil_; }

  // upstream is row-major height*width.
  ParamGrad backward(const std::vector<double>& upstream) const;

  EntityKind kind() const { return kind_; }

 private:
  EntityKind kind_ = EntityKind::kHand;
  int num_params_ = 0;  // entity parameter count (5 or 9)
  RasterConfig cfg_;
  Silhouette sil_;
  std::vector<Eigen::Vector2d> pts_;  // projected vertices, px
  std::vector<Eigen::Matrix<double, 2, Eigen::Dynamic>> jac_;  // d pt / d (entity..., camera)
  std::vector<uint8_t> vert_ok_;      // vertex in front of camera
  std::vector<int> hull_;             // CCW convex hull as indices into pts_
  std::vector<int32_t> feature_;      // per pixel nearest hull edge (index into hull_)
  std::vector<double> dist_;          // per pixel signed distance, px

  void rasterize();
};

// CCW convex hull (indices into pts, collinear points dropped). Points with
// ok == 0 are ignored.
std::vector<int> convex_hull(const std::vector<Eigen::Vector2d>& pts,
                             const std::vector<uint8_t>& ok);

// Signed distance (positive inside) from p to the CCW convex polygon given by
// hull indices into pts. Degenerate hulls (point, segment) are all-outside.
// If nearest_edge is non-null it receives the index into `hull` of the edge
// realizing the distance.
double polygon_signed_distance(const std::vector<Eigen::Vector2d>& pts,
                               const std::vector<int>& hull, const Eigen::Vector2d& p,
                               int* nearest_edge = nullptr);

}  // namespace mimic
