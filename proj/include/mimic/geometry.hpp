#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "mimic/jet.hpp"

namespace mimic {

// World frame: z up, ground plane z = 0, origin on the ground.
// Units are millimetres and radians throughout; degrees appear only at
// CLI/config boundaries.

inline constexpr double kHandRadius = 40.0;     // mm
inline constexpr double kHandHeight = 150.0;    // mm
inline constexpr int kCylinderSegments = 24;
inline constexpr double kMaxObjectSize = 300.0;  // mm, per-axis cuboid bound

struct CameraPose {
  double distance = 1000.0;  // mm, > 0
  double azimuth = 0.0;      // rad; 0 puts the camera on the +x axis
  double elevation = 0.0;    // rad, in [-pi/2, pi/2]
};

struct HandState {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();  // mm
  double azimuth = 0.0;    // rad, unbounded
  double elevation = 0.0;  // rad, in [-pi/2, pi/2]
};

struct ObjectState {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();   // mm
  Eigen::Vector3d size = Eigen::Vector3d::Zero();       // mm, per axis in (0, 300]
  Eigen::Vector3d rotation = Eigen::Vector3d::Zero();   // axis-angle, rad
};

struct FrameState {
  HandState hand;
  std::vector<ObjectState> objects;  // 1 or 2, constant within a trajectory
  bool touch = false;
};

struct StateTrajectory {
  CameraPose camera;                 // one per video
  std::vector<FrameState> frames;    // length T >= 2
  double frame_interval = 1.0 / 12;  // s

  int num_frames() const { return static_cast<int>(frames.size()); }
  int num_objects() const { return frames.empty() ? 0 : static_cast<int>(frames[0].objects.size()); }
};

struct TriMesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> faces;  // consistent outward winding
};

struct RigidTransform {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return rotation * p + translation; }
};

// Unit direction for (azimuth, elevation), the hand cylinder axis.
Eigen::Vector3d direction(double azimuth, double elevation);

// Closed cylinder (radius 40, height 150) with the base cap at the hand
// position and the manipulator cap at position + height * direction.
TriMesh hand_mesh(const HandState& state);

// 12-triangle cuboid with extents `size`, rotated by the axis-angle vector,
// centered at `position`. Throws std::invalid_argument on nonpositive size.
TriMesh object_mesh(const ObjectState& state);

// World-to-camera transform for a camera on the sphere of radius `distance`
// looking at the origin, up = +z projected orthogonal to the view direction
// (+x fallback at elevation +-pi/2). Camera frame: x right, y down, z forward.
RigidTransform camera_view_matrix(const CameraPose& cam);

// --- Templated cores -----------------------------------------------------
// The same construction code runs on plain doubles and on Jet scalars; the
// render module uses the Jet instantiations to obtain exact Jacobians of
// projected vertices with respect to the state parameters.

// Canonical cylinder vertices: two 24-gon rings (z=0 and z=height) followed
// by the bottom and top cap centers. 50 vertices total.
const std::vector<Eigen::Vector3d>& cylinder_template();
const std::vector<std::array<int, 3>>& cylinder_faces();
const std::vector<std::array<int, 3>>& cuboid_faces();

// params: (px, py, pz, azimuth, elevation)
template <class T>
std::vector<Vec3T<T>> hand_vertices(const T* params) {
  const Vec3T<T> pos{params[0], params[1], params[2]};
  const Mat3T<T> rot = rot_z(params[3]) * rot_y(T(1.5707963267948966) - params[4]);
  const auto& tpl = cylinder_template();
  std::vector<Vec3T<T>> out;
  out.reserve(tpl.size());
  for (const auto& v : tpl) {
    Vec3T<T> local{T(v.x()), T(v.y()), T(v.z())};
    out.push_back(rot * local + pos);
  }
  return out;
}

// params: (px, py, pz, sx, sy, sz, tx, ty, tz)
template <class T>
std::vector<Vec3T<T>> object_vertices(const T* params) {
  const Vec3T<T> pos{params[0], params[1], params[2]};
  const Vec3T<T> half{params[3] * T(0.5), params[4] * T(0.5), params[5] * T(0.5)};
  const Mat3T<T> rot = rot_axis_angle(Vec3T<T>{params[6], params[7], params[8]});
  std::vector<Vec3T<T>> out;
  out.reserve(8);
  for (int i = 0; i < 8; ++i) {
    const double sx = (i & 1) ? 1.0 : -1.0;
    const double sy = (i & 2) ? 1.0 : -1.0;
    const double sz = (i & 4) ? 1.0 : -1.0;
    Vec3T<T> corner{half.x * T(sx), half.y * T(sy), half.z * T(sz)};
    out.push_back(rot * corner + pos);
  }
  return out;
}

// params: (distance, azimuth, elevation). Returns world-to-camera (R, C)
// with p_cam = R * (p_world - C).
template <class T>
void camera_rigid(const T* params, Mat3T<T>* rotation, Vec3T<T>* center) {
  const T ce = cos(params[2]), se = sin(params[2]);
  const T ca = cos(params[1]), sa = sin(params[1]);
  const Vec3T<T> c{params[0] * ce * ca, params[0] * ce * sa, params[0] * se};
  const Vec3T<T> forward = (c * T(-1)).normalized();
  // Up vector: +z unless looking straight up/down, then +x.
  Vec3T<T> up{T(0), T(0), T(1)};
  const double horiz = std::abs(value_of(ce));
  if (horiz < 1e-9) up = Vec3T<T>{T(1), T(0), T(0)};
  Vec3T<T> down = up - forward * up.dot(forward);
  down = down * T(-1);
  down = down.normalized();
  const Vec3T<T> right = down.cross(forward);
  rotation->r0 = right;
  rotation->r1 = down;
  rotation->r2 = forward;
  *center = c;
}

}  // namespace mimic
