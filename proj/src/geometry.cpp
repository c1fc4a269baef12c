#include "mimic/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace mimic {

Eigen::Vector3d direction(double azimuth, double elevation) {
  const double ce = std::cos(elevation);
  return {ce * std::cos(azimuth), ce * std::sin(azimuth), std::sin(elevation)};
}

const std::vector<Eigen::Vector3d>& cylinder_template() {
  static const std::vector<Eigen::Vector3d> verts = [] {
    std::vector<Eigen::Vector3d> v;
    v.reserve(2 * kCylinderSegments + 2);
    for (int ring = 0; ring < 2; ++ring) {
      const double z = ring == 0 ? 0.0 : kHandHeight;
      for (int i = 0; i < kCylinderSegments; ++i) {
        const double phi = 2.0 * M_PI * i / kCylinderSegments;
        v.emplace_back(kHandRadius * std::cos(phi), kHandRadius * std::sin(phi), z);
      }
    }
    v.emplace_back(0.0, 0.0, 0.0);          // bottom cap center
    v.emplace_back(0.0, 0.0, kHandHeight);  // top (manipulator) cap center
    return v;
  }();
  return verts;
}

const std::vector<std::array<int, 3>>& cylinder_faces() {
  static const std::vector<std::array<int, 3>> faces = [] {
    std::vector<std::array<int, 3>> f;
    const int n = kCylinderSegments;
    const int bottom_center = 2 * n;
    const int top_center = 2 * n + 1;
    for (int i = 0; i < n; ++i) {
      const int j = (i + 1) % n;
      // Side quad, outward normal radial (rings are CCW seen from +z).
      f.push_back({i, j, n + j});
      f.push_back({i, n + j, n + i});
      // Caps.
      f.push_back({bottom_center, j, i});
      f.push_back({top_center, n + i, n + j});
    }
    return f;
  }();
  return faces;
}

const std::vector<std::array<int, 3>>& cuboid_faces() {
  // Corner i has coordinates (±x,±y,±z) with bits (1,2,4) selecting +.
  static const std::vector<std::array<int, 3>> faces = {
      {0, 2, 3}, {0, 3, 1},  // z-
      {4, 5, 7}, {4, 7, 6},  // z+
      {0, 1, 5}, {0, 5, 4},  // y-
      {2, 6, 7}, {2, 7, 3},  // y+
      {0, 4, 6}, {0, 6, 2},  // x-
      {1, 3, 7}, {1, 7, 5},  // x+
  };
  return faces;
}

TriMesh hand_mesh(const HandState& state) {
  const double params[5] = {state.position.x(), state.position.y(), state.position.z(),
                            state.azimuth, state.elevation};
  const auto verts = hand_vertices<double>(params);
  TriMesh mesh;
  mesh.vertices.reserve(verts.size());
  for (const auto& v : verts) mesh.vertices.emplace_back(v.x, v.y, v.z);
  mesh.faces = cylinder_faces();
  return mesh;
}

TriMesh object_mesh(const ObjectState& state) {
  if (!(state.size.minCoeff() > 0.0)) {
    throw std::invalid_argument("object_mesh: size components must be positive");
  }
  const double params[9] = {state.position.x(), state.position.y(), state.position.z(),
                            state.size.x(),     state.size.y(),     state.size.z(),
                            state.rotation.x(), state.rotation.y(), state.rotation.z()};
  const auto verts = object_vertices<double>(params);
  TriMesh mesh;
  mesh.vertices.reserve(8);
  for (const auto& v : verts) mesh.vertices.emplace_back(v.x, v.y, v.z);
  mesh.faces = cuboid_faces();
  return mesh;
}

RigidTransform camera_view_matrix(const CameraPose& cam) {
  if (!(cam.distance > 0.0)) {
    throw std::invalid_argument("camera_view_matrix: distance must be positive");
  }
  const double params[3] = {cam.distance, cam.azimuth, cam.elevation};
  Mat3T<double> rot;
  Vec3T<double> center;
  camera_rigid<double>(params, &rot, &center);
  RigidTransform t;
  t.rotation << rot.r0.x, rot.r0.y, rot.r0.z,
                rot.r1.x, rot.r1.y, rot.r1.z,
                rot.r2.x, rot.r2.y, rot.r2.z;
  t.translation = -t.rotation * Eigen::Vector3d(center.x, center.y, center.z);
  return t;
}

}  // namespace mimic
