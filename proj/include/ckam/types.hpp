#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace ckam {

/** @brief Chart selector for phase-space points. */
enum class ModelTag {
  TwoWave,  ///< (q, p, t): q and t periodic with period 1, p on the real line
  QFlow     ///< (x, y, z): x and y on the real line, z periodic with period 2*pi
};

[[nodiscard]] inline const char* ToString(ModelTag tag) {
  switch (tag) {
    case ModelTag::TwoWave: return "twowave";
    case ModelTag::QFlow: return "qflow";
  }
  return "unknown";
}

/** @brief A point in 3D chart coordinates. c0,c1,c2 map to (q,p,t) or (x,y,z). */
struct State {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  ModelTag tag = ModelTag::TwoWave;
};

/** @brief A tangent vector at a State, in the same chart basis. */
struct TangentVec {
  double v0 = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
};

/** @brief Row-major 3x3 real matrix (Jacobians of the velocity field). */
struct Mat3 {
  std::array<double, 9> m{};  // m[3*row + col]

  double& operator()(int row, int col) { return m[3 * row + col]; }
  double operator()(int row, int col) const { return m[3 * row + col]; }
};

inline TangentVec operator+(const TangentVec& a, const TangentVec& b) {
  return {a.v0 + b.v0, a.v1 + b.v1, a.v2 + b.v2};
}
inline TangentVec operator-(const TangentVec& a, const TangentVec& b) {
  return {a.v0 - b.v0, a.v1 - b.v1, a.v2 - b.v2};
}
inline TangentVec operator*(double c, const TangentVec& a) {
  return {c * a.v0, c * a.v1, c * a.v2};
}

/** @brief Matrix-vector product Dv * xi. */
inline TangentVec operator*(const Mat3& m, const TangentVec& a) {
  return {m(0, 0) * a.v0 + m(0, 1) * a.v1 + m(0, 2) * a.v2,
          m(1, 0) * a.v0 + m(1, 1) * a.v1 + m(1, 2) * a.v2,
          m(2, 0) * a.v0 + m(2, 1) * a.v1 + m(2, 2) * a.v2};
}

[[nodiscard]] inline double dot3(const TangentVec& a, const TangentVec& b) {
  return a.v0 * b.v0 + a.v1 * b.v1 + a.v2 * b.v2;
}

[[nodiscard]] inline double norm3(const TangentVec& a) {
  return std::sqrt(dot3(a, a));
}

/** @brief Determinant of the 3x3 matrix with rows a, b, c (alternating, trilinear). */
[[nodiscard]] inline double det3(const TangentVec& a, const TangentVec& b,
                                 const TangentVec& c) {
  return a.v0 * (b.v1 * c.v2 - b.v2 * c.v1) -
         a.v1 * (b.v0 * c.v2 - b.v2 * c.v0) +
         a.v2 * (b.v0 * c.v1 - b.v1 * c.v0);
}

/** @brief Reduce x into [0, period). Exact for arguments already in range. */
[[nodiscard]] inline double wrap_coord(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  if (r >= period) r -= period;  // guards against r + period rounding up to period
  return r;
}

/**
 * @brief Reduce periodic coordinates of s into their fundamental domain.
 *
 * TwoWave: q and t mod 1. QFlow: z mod 2*pi (x, y untouched). Velocity and
 * form evaluations are invariant under wrap. Throws on non-finite input.
 */
[[nodiscard]] inline State wrap(const State& s) {
  if (!std::isfinite(s.c0) || !std::isfinite(s.c1) || !std::isfinite(s.c2)) {
    throw std::invalid_argument("wrap: non-finite state");
  }
  State w = s;
  if (s.tag == ModelTag::TwoWave) {
    w.c0 = wrap_coord(s.c0, 1.0);
    w.c2 = wrap_coord(s.c2, 1.0);
  } else {
    w.c2 = wrap_coord(s.c2, 2.0 * M_PI);
  }
  return w;
}

/** @brief Classification of one initial condition by the detector. */
enum class DetectionStatus {
  Detected,  ///< guarded sign change of K found at t_c <= t_max
  None,      ///< integration reached t_max without a guarded crossing
  Excluded,  ///< orbit entered the singular-leaf neighborhood of the foliation
  Error      ///< integration failed (step size underflow)
};

[[nodiscard]] inline const char* ToString(DetectionStatus s) {
  switch (s) {
    case DetectionStatus::Detected: return "detected";
    case DetectionStatus::None: return "none";
    case DetectionStatus::Excluded: return "excluded";
    case DetectionStatus::Error: return "error";
  }
  return "unknown";
}

}  // namespace ckam
