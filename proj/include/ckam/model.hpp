#pragma once

#include <memory>

#include "ckam/types.hpp"

namespace ckam {

/** @brief Two-wave parameters. Defaults follow the standard study case nu = k = 1. */
struct TwoWaveParams {
  double mu = 0.0;  ///< wave amplitude
  double nu = 1.0;  ///< relative amplitude of the travelling wave
  double k = 1.0;   ///< wavenumber of the travelling wave
};

/** @brief Q-flow parameters: q-fold symmetric Beltrami field with vertical forcing eps. */
struct QFlowParams {
  int q = 4;           ///< symmetry order, q >= 1
  double eps = 0.0;    ///< amplitude of the helical perturbation
};

/**
 * @brief Contract bundling the velocity field, its Jacobian, and the two
 * differential forms needed by the detector.
 *
 * two_form(s,a,b) evaluates dalpha_s(a,b); volume_form(s,a,b,c) evaluates the
 * conserved volume Omega_s(a,b,c). The identity dalpha(a,b) = Omega(v,a,b)
 * holds for both implementations and is cross-checked in the verify suites.
 */
class FlowModel {
 public:
  virtual ~FlowModel() = default;

  virtual ModelTag tag() const = 0;
  virtual TangentVec velocity(const State& s) const = 0;
  virtual Mat3 jacobian(const State& s) const = 0;
  virtual double two_form(const State& s, const TangentVec& a,
                          const TangentVec& b) const = 0;
  virtual double volume_form(const State& s, const TangentVec& a,
                             const TangentVec& b, const TangentVec& c) const = 0;
};

/** @brief Non-autonomous two-wave Hamiltonian flow on (q, p, t), with dt/dt = 1. */
class TwoWaveModel final : public FlowModel {
 public:
  explicit TwoWaveModel(const TwoWaveParams& params) : p_(params) {}

  ModelTag tag() const override { return ModelTag::TwoWave; }
  TangentVec velocity(const State& s) const override;
  Mat3 jacobian(const State& s) const override;
  double two_form(const State& s, const TangentVec& a,
                  const TangentVec& b) const override;
  /// Omega = dp ^ dq ^ dt: det3 on rows (a,b,c) in (p,q,t) component order.
  double volume_form(const State& s, const TangentVec& a, const TangentVec& b,
                     const TangentVec& c) const override;

  const TwoWaveParams& params() const { return p_; }

 private:
  TwoWaveParams p_;
};

/** @brief Sum of q plane waves: psi_q(x,y) = sum_j cos(x cos(2*pi*j/q) + y sin(2*pi*j/q)). */
double psi_q(double x, double y, int q);

/** @brief First partials (d/dx, d/dy) of psi_q, differentiated termwise. */
void psi_q_grad(double x, double y, int q, double& px, double& py);

/** @brief Second partials (d2/dx2, d2/dxdy, d2/dy2) of psi_q. */
void psi_q_hess(double x, double y, int q, double& pxx, double& pxy, double& pyy);

/**
 * @brief Q-flow: Beltrami field v = (psi_y + eps sin z, -psi_x + eps cos z, psi)
 * satisfying curl v = v (since laplacian(psi_q) = -psi_q) and div v = 0.
 */
class QFlowModel final : public FlowModel {
 public:
  explicit QFlowModel(const QFlowParams& params) : p_(params) {}

  ModelTag tag() const override { return ModelTag::QFlow; }
  TangentVec velocity(const State& s) const override;
  Mat3 jacobian(const State& s) const override;
  double two_form(const State& s, const TangentVec& a,
                  const TangentVec& b) const override;
  /// Omega = dy ^ dx ^ dz: det3 on rows (a,b,c) in (y,x,z) component order.
  double volume_form(const State& s, const TangentVec& a, const TangentVec& b,
                     const TangentVec& c) const override;

  const QFlowParams& params() const { return p_; }

 private:
  QFlowParams p_;
};

}  // namespace ckam
