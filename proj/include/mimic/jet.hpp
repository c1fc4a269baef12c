#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace mimic {

using std::cos;
using std::sin;
using std::sqrt;
using std::tanh;

// Forward-mode dual number carrying N partial derivatives. Used to push
// exact Jacobians through mesh construction, camera placement and
// perspective projection without hand-deriving each chain.
template <int N>
struct Jet {
  double v = 0.0;
  std::array<double, N> d{};

  Jet() = default;
  Jet(double value) : v(value) { d.fill(0.0); }  // NOLINT(google-explicit-constructor)
  static Jet variable(double value, int index) {
    Jet j(value);
    j.d[index] = 1.0;
    return j;
  }

  Jet operator-() const {
    Jet r(-v);
    for (int i = 0; i < N; ++i) r.d[i] = -d[i];
    return r;
  }
  Jet& operator+=(const Jet& o) {
    v += o.v;
    for (int i = 0; i < N; ++i) d[i] += o.d[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    v -= o.v;
    for (int i = 0; i < N; ++i) d[i] -= o.d[i];
    return *this;
  }
};

template <int N>
Jet<N> operator+(Jet<N> a, const Jet<N>& b) { return a += b; }
template <int N>
Jet<N> operator-(Jet<N> a, const Jet<N>& b) { return a -= b; }

template <int N>
Jet<N> operator*(const Jet<N>& a, const Jet<N>& b) {
  Jet<N> r(a.v * b.v);
  for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
  return r;
}

template <int N>
Jet<N> operator/(const Jet<N>& a, const Jet<N>& b) {
  Jet<N> r(a.v / b.v);
  const double inv = 1.0 / b.v;
  const double inv2 = inv * inv;
  for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * inv - a.v * b.d[i] * inv2;
  return r;
}

template <int N>
Jet<N> sin(const Jet<N>& a) {
  Jet<N> r(std::sin(a.v));
  const double c = std::cos(a.v);
  for (int i = 0; i < N; ++i) r.d[i] = c * a.d[i];
  return r;
}

template <int N>
Jet<N> cos(const Jet<N>& a) {
  Jet<N> r(std::cos(a.v));
  const double s = -std::sin(a.v);
  for (int i = 0; i < N; ++i) r.d[i] = s * a.d[i];
  return r;
}

template <int N>
Jet<N> sqrt(const Jet<N>& a) {
  const double s = std::sqrt(a.v);
  Jet<N> r(s);
  const double g = (s > 0.0) ? 0.5 / s : 0.0;
  for (int i = 0; i < N; ++i) r.d[i] = g * a.d[i];
  return r;
}

template <int N>
Jet<N> tanh(const Jet<N>& a) {
  const double t = std::tanh(a.v);
  Jet<N> r(t);
  const double g = 1.0 - t * t;
  for (int i = 0; i < N; ++i) r.d[i] = g * a.d[i];
  return r;
}

// Minimal fixed-size vector/matrix with a generic scalar, enough for the
// rigid-transform and projection chains.
template <class T>
struct Vec3T {
  T x{}, y{}, z{};

  Vec3T() = default;
  Vec3T(T xx, T yy, T zz) : x(xx), y(yy), z(zz) {}

  Vec3T operator+(const Vec3T& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3T operator-(const Vec3T& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3T operator*(const T& s) const { return {x * s, y * s, z * s}; }
  T dot(const Vec3T& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3T cross(const Vec3T& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  T squared_norm() const { return dot(*this); }
  Vec3T normalized() const {
    T n = sqrt(squared_norm());
    return {x / n, y / n, z / n};
  }
};

template <class T>
struct Mat3T {
  // Row-major rows.
  Vec3T<T> r0, r1, r2;

  Vec3T<T> operator*(const Vec3T<T>& v) const {
    return {r0.dot(v), r1.dot(v), r2.dot(v)};
  }
  Mat3T operator*(const Mat3T& o) const {
    Mat3T<T> c;
    const Vec3T<T> c0{o.r0.x, o.r1.x, o.r2.x};
    const Vec3T<T> c1{o.r0.y, o.r1.y, o.r2.y};
    const Vec3T<T> c2{o.r0.z, o.r1.z, o.r2.z};
    c.r0 = {r0.dot(c0), r0.dot(c1), r0.dot(c2)};
    c.r1 = {r1.dot(c0), r1.dot(c1), r1.dot(c2)};
    c.r2 = {r2.dot(c0), r2.dot(c1), r2.dot(c2)};
    return c;
  }
  static Mat3T identity() {
    Mat3T m;
    m.r0 = {T(1), T(0), T(0)};
    m.r1 = {T(0), T(1), T(0)};
    m.r2 = {T(0), T(0), T(1)};
    return m;
  }
};

template <class T>
Mat3T<T> rot_z(const T& a) {
  Mat3T<T> m = Mat3T<T>::identity();
  const T c = cos(a), s = sin(a);
  m.r0 = {c, -s, T(0)};
  m.r1 = {s, c, T(0)};
  return m;
}

template <class T>
Mat3T<T> rot_y(const T& a) {
  Mat3T<T> m = Mat3T<T>::identity();
  const T c = cos(a), s = sin(a);
  m.r0 = {c, T(0), s};
  m.r2 = {-s, T(0), c};
  return m;
}

inline double value_of(double x) { return x; }
template <int N>
double value_of(const Jet<N>& x) { return x.v; }

template <class T>
Vec3T<T>& operator+=(Vec3T<T>& a, const Vec3T<T>& b) {
  a = a + b;
  return a;
}

// Rodrigues rotation from an axis-angle vector, with the small-angle series
// so derivatives stay finite at zero rotation.
template <class T>
Mat3T<T> rot_axis_angle(const Vec3T<T>& aa) {
  const T theta2 = aa.squared_norm();
  T k1, k2;  // sin(t)/t and (1-cos(t))/t^2
  if (value_of(theta2) < 1e-14) {
    k1 = T(1) - theta2 * T(1.0 / 6.0);
    k2 = T(0.5) - theta2 * T(1.0 / 24.0);
  } else {
    const T theta = sqrt(theta2);
    k1 = sin(theta) / theta;
    k2 = (T(1) - cos(theta)) / theta2;
  }
  Mat3T<T> K;  // hat(aa)
  K.r0 = {T(0), -aa.z, aa.y};
  K.r1 = {aa.z, T(0), -aa.x};
  K.r2 = {-aa.y, aa.x, T(0)};
  const Mat3T<T> K2 = K * K;
  Mat3T<T> r = Mat3T<T>::identity();
  r.r0 += K.r0 * k1 + K2.r0 * k2;
  r.r1 += K.r1 * k1 + K2.r1 * k2;
  r.r2 += K.r2 * k1 + K2.r2 * k2;
  return r;
}

}  // namespace mimic
