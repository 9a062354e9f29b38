#pragma once

// Quaternion arithmetic and the ambient space H^n with its three
// complex structures I, J, K (left multiplication by i, j, k).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

#include "qlag/error.hpp"

namespace qlag {

struct Quaternion {
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double w_, double x_ = 0.0, double y_ = 0.0, double z_ = 0.0)
      : w(w_), x(x_), y(y_), z(z_) {}

  constexpr double real() const { return w; }
  constexpr double norm2() const { return w * w + x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm2()); }

  constexpr Quaternion& operator+=(const Quaternion& q) {
    w += q.w; x += q.x; y += q.y; z += q.z;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& q) {
    w -= q.w; x -= q.x; y -= q.y; z -= q.z;
    return *this;
  }
  constexpr Quaternion& operator*=(double s) {
    w *= s; x *= s; y *= s; z *= s;
    return *this;
  }

  friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;
};

inline constexpr Quaternion kQuatOne{1.0, 0.0, 0.0, 0.0};
inline constexpr Quaternion kQuatI{0.0, 1.0, 0.0, 0.0};
inline constexpr Quaternion kQuatJ{0.0, 0.0, 1.0, 0.0};
inline constexpr Quaternion kQuatK{0.0, 0.0, 0.0, 1.0};

constexpr Quaternion operator+(Quaternion p, const Quaternion& q) { return p += q; }
constexpr Quaternion operator-(Quaternion p, const Quaternion& q) { return p -= q; }
constexpr Quaternion operator-(const Quaternion& q) { return {-q.w, -q.x, -q.y, -q.z}; }
constexpr Quaternion operator*(Quaternion q, double s) { return q *= s; }
constexpr Quaternion operator*(double s, Quaternion q) { return q *= s; }
constexpr Quaternion operator/(Quaternion q, double s) { return q *= (1.0 / s); }

/// Hamilton product.
constexpr Quaternion quat_mul(const Quaternion& p, const Quaternion& q) {
  return {p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
          p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
          p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
          p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w};
}

constexpr Quaternion operator*(const Quaternion& p, const Quaternion& q) { return quat_mul(p, q); }

constexpr Quaternion quat_conj(const Quaternion& q) { return {q.w, -q.x, -q.y, -q.z}; }

inline Quaternion quat_inverse(const Quaternion& q) { return quat_conj(q) / q.norm2(); }

/// Real part of p * conj(q): the Euclidean inner product on H = R^4.
constexpr double quat_dot(const Quaternion& p, const Quaternion& q) {
  return p.w * q.w + p.x * q.x + p.y * q.y + p.z * q.z;
}

/// The imaginary components (x, y, z) of q.
constexpr std::array<double, 3> imaginary(const Quaternion& q) { return {q.x, q.y, q.z}; }

inline std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
  return os << '(' << q.w << ", " << q.x << ", " << q.y << ", " << q.z << ')';
}

enum class Structure { I, J, K };

inline constexpr std::array<Structure, 3> kStructures{Structure::I, Structure::J, Structure::K};

constexpr Quaternion unit_of(Structure s) {
  switch (s) {
    case Structure::I: return kQuatI;
    case Structure::J: return kQuatJ;
    case Structure::K: return kQuatK;
  }
  return kQuatI;
}

constexpr std::size_t slot_of(Structure s) { return static_cast<std::size_t>(s); }

inline const char* to_string(Structure s) {
  switch (s) {
    case Structure::I: return "I";
    case Structure::J: return "J";
    case Structure::K: return "K";
  }
  return "?";
}

inline Structure structure_from_string(const std::string& name) {
  if (name == "I" || name == "i") return Structure::I;
  if (name == "J" || name == "j") return Structure::J;
  if (name == "K" || name == "k") return Structure::K;
  throw GeometryError(ErrorCode::InvalidArgument, "unknown structure '" + name + "'");
}

/// cos(theta) + u sin(theta) for the unit imaginary u of the given structure.
inline Quaternion quat_exp(Structure s, double theta) {
  return std::cos(theta) * kQuatOne + std::sin(theta) * unit_of(s);
}

/// An n-tuple of quaternions, i.e. a point or vector of H^n = R^{4n}.
class HVector {
 public:
  HVector() = default;
  explicit HVector(std::size_t n) : comps_(n) {}
  HVector(std::initializer_list<Quaternion> comps) : comps_(comps) {}
  explicit HVector(std::vector<Quaternion> comps) : comps_(std::move(comps)) {}

  static HVector zero(std::size_t n) { return HVector(n); }

  std::size_t size() const { return comps_.size(); }
  Quaternion& operator[](std::size_t a) { return comps_[a]; }
  const Quaternion& operator[](std::size_t a) const { return comps_[a]; }
  const std::vector<Quaternion>& components() const { return comps_; }

  auto begin() const { return comps_.begin(); }
  auto end() const { return comps_.end(); }

  HVector& operator+=(const HVector& v) {
    require_same(v);
    for (std::size_t a = 0; a < comps_.size(); ++a) comps_[a] += v.comps_[a];
    return *this;
  }
  HVector& operator-=(const HVector& v) {
    require_same(v);
    for (std::size_t a = 0; a < comps_.size(); ++a) comps_[a] -= v.comps_[a];
    return *this;
  }
  HVector& operator*=(double s) {
    for (auto& q : comps_) q *= s;
    return *this;
  }

  /// axpy: *this += s * v.
  HVector& add_scaled(double s, const HVector& v) {
    require_same(v);
    for (std::size_t a = 0; a < comps_.size(); ++a) comps_[a] += s * v.comps_[a];
    return *this;
  }

  double norm2() const {
    double acc = 0.0;
    for (const auto& q : comps_) acc += q.norm2();
    return acc;
  }
  double norm() const { return std::sqrt(norm2()); }

  /// Largest absolute real coordinate.
  double max_abs() const {
    double m = 0.0;
    for (const auto& q : comps_)
      for (double c : {q.w, q.x, q.y, q.z}) m = std::max(m, std::abs(c));
    return m;
  }

  void require_same(const HVector& v) const {
    if (v.size() != size())
      throw GeometryError(ErrorCode::DimensionMismatch,
                          "H^" + std::to_string(size()) + " vs H^" + std::to_string(v.size()));
  }

  friend bool operator==(const HVector&, const HVector&) = default;

 private:
  std::vector<Quaternion> comps_;
};

inline HVector operator+(HVector u, const HVector& v) { return u += v; }
inline HVector operator-(HVector u, const HVector& v) { return u -= v; }
inline HVector operator-(HVector u) { return u *= -1.0; }
inline HVector operator*(double s, HVector v) { return v *= s; }
inline HVector operator*(HVector v, double s) { return v *= s; }

/// q * v componentwise (a quaternion scalar acting from the left).
inline HVector left_mul(const Quaternion& q, const HVector& v) {
  HVector out(v.size());
  for (std::size_t a = 0; a < v.size(); ++a) out[a] = q * v[a];
  return out;
}

/// I, J or K applied to v: left multiplication of every component.
inline HVector apply_structure(Structure s, const HVector& v) { return left_mul(unit_of(s), v); }

/// Re sum_a u_a conj(v_a), the Euclidean metric of R^{4n}.
inline double inner(const HVector& u, const HVector& v) {
  u.require_same(v);
  double acc = 0.0;
  for (std::size_t a = 0; a < u.size(); ++a) acc += quat_dot(u[a], v[a]);
  return acc;
}

/// Embeds a real vector of E^n as the real parts of an H^n vector.
inline HVector real_hvector(const std::vector<double>& xs) {
  HVector v(xs.size());
  for (std::size_t a = 0; a < xs.size(); ++a) v[a] = Quaternion{xs[a]};
  return v;
}

inline std::ostream& operator<<(std::ostream& os, const HVector& v) {
  os << '[';
  for (std::size_t a = 0; a < v.size(); ++a) os << (a ? ", " : "") << v[a];
  return os << ']';
}

}  // namespace qlag
