#pragma once

#include <string>

#include "ckam/model.hpp"
#include "ckam/types.hpp"

namespace ckam {

/** @brief The seven foliation generators selectable from the CLI. */
enum class FoliationKind {
  R,     ///< two-wave, J = p^2/2: vertical lines in (q,p)
  L,     ///< two-wave, J = (q~^2 + p^2)/2 with q~ re-centered to [-1/2,1/2)
  P,     ///< two-wave, pendulum energy J = p^2/2 - mu cos(2 pi q)
  S1,    ///< two-wave, first-order adiabatic invariant
  S2,    ///< two-wave, second-order adiabatic invariant (requires k = 1)
  QL,    ///< Q-flow, J = (x^2 + y^2)/2
  QPsi,  ///< Q-flow, J = psi_q(x,y)
};

[[nodiscard]] const char* ToString(FoliationKind kind);

/** @brief Parse one of r|l|p|s1|s2|ql|qpsi. Throws std::invalid_argument otherwise. */
[[nodiscard]] FoliationKind FoliationKindFromLabel(const std::string& label);

/** @brief True for the two-wave family {r,l,p,s1,s2}. */
[[nodiscard]] bool IsTwoWaveFoliation(FoliationKind kind);

/**
 * @brief Generator of a 1D foliation: scalar J with line field eta = grad J.
 *
 * value() and gradient() accept unwrapped states (periodic coordinates are
 * reduced internally where the chart requires it). Leaves with |grad J| below
 * singular_tol are treated as singular and excluded from detection.
 */
class Foliation {
 public:
  Foliation(FoliationKind kind, const TwoWaveParams& params,
            double singular_tol = 1e-6);
  Foliation(FoliationKind kind, const QFlowParams& params,
            double singular_tol = 1e-6);

  FoliationKind kind() const { return kind_; }
  double singular_tol() const { return singular_tol_; }

  double value(const State& s) const;
  TangentVec gradient(const State& s) const;

  /** @brief True iff |gradient(s)| < singular_tol. */
  bool is_singular(const State& s) const;

  /** @brief Copy with J replaced by -J (used by the flip-invariance checks). */
  [[nodiscard]] Foliation flipped() const;

 private:
  FoliationKind kind_;
  TwoWaveParams twp_{};
  QFlowParams qfp_{};
  double singular_tol_;
  double sign_ = 1.0;
};

/**
 * @brief Extended-bracket residual {H,J} = H_p J_q - H_q J_p + J_t for the
 * adiabatic invariants (kind in {S1, S2}), evaluated analytically.
 *
 * Vanishes like O(mu^2) for S1 and O(mu^3) for S2 at fixed state.
 */
double poisson_residual(FoliationKind kind, const State& s,
                        const TwoWaveParams& params);

/** @brief Outcome of the mu-halving scaling measurement of poisson_residual. */
struct ResidualScalingReport {
  FoliationKind kind;
  int n_samples = 0;
  double median_exponent = 0.0;  ///< log2 |r(mu)| / |r(mu/2)|, median over samples
  double worst_exponent = 0.0;   ///< sample farthest from the expected order
  State worst_state;             ///< where the worst exponent was observed
};

/**
 * @brief Sample random states (p kept 0.1 away from the resonant values 0 and 1)
 * and measure the residual's mu-scaling exponent between mu and mu/2.
 */
ResidualScalingReport residual_scaling_test(FoliationKind kind, int n_samples,
                                            double mu, double nu, unsigned seed);

}  // namespace ckam
