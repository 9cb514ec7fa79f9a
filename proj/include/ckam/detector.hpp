#pragma once

#include <limits>
#include <string>
#include <vector>

#include "ckam/foliation.hpp"
#include "ckam/integrator.hpp"
#include "ckam/model.hpp"
#include "ckam/types.hpp"

namespace ckam {

/** @brief Settings for one converse-KAM decision run. */
struct DetectorOptions {
  double t_max = 150.0;
  /// Orbits reaching |grad J| below this are reported Excluded (singular leaf).
  double singular_tol = 1e-6;
  bool record_trace = false;
  /// Multiplies the seed tangent xi0 = xi0_scale * grad J(s0). The decision is
  /// invariant under any positive value; exposed for the invariance checks.
  double xi0_scale = 1.0;
};

/** @brief One diagnostic sample per accepted step (written by --trace). */
struct TraceSample {
  double t = 0.0;
  double K = 0.0;          ///< dalpha(xi_t, eta_t), unnormalized
  double guard_dot = 0.0;  ///< <eta_t, xi_t>, unnormalized
  State state;             ///< wrapped chart point
};

/** @brief Outcome of detect(): classification plus diagnostics. */
struct DetectionResult {
  DetectionStatus status = DetectionStatus::None;
  double t_c = std::numeric_limits<double>::quiet_NaN();  ///< valid iff Detected
  double t_end = 0.0;   ///< exclusion time, or last time reached otherwise
  long n_steps = 0;     ///< accepted integration steps
  std::string reason;   ///< diagnostic for status == Error
  std::vector<TraceSample> trace;  ///< filled iff DetectorOptions::record_trace
};

/**
 * @brief Root of the linear interpolant through (t1,K1), (t2,K2).
 *
 * Requires K1*K2 < 0 and t1 < t2; the result lies strictly inside (t1, t2).
 */
double interpolate_crossing(double t1, double K1, double t2, double K2);

/**
 * @brief Decide whether s0 can lie on an invariant 2-torus transverse to the
 * foliation, by tracking K(t) = dalpha(xi_t, eta_t) along the orbit.
 *
 * Starts with xi0 = grad J(s0) (scaled by opts.xi0_scale) and reports:
 *  - Detected(t_c) at the first accepted step where K changes sign with the
 *    guard <eta, xi> negative at both endpoints of the step,
 *  - Excluded(t) as soon as |grad J| falls below opts.singular_tol
 *    (including at t = 0),
 *  - None when t_max is reached,
 *  - Error when step-size control underflows (reason records the diagnostics).
 *
 * ctrl.t_max is overridden by opts.t_max. Sign tests and the crossing
 * interpolation use K/|xi| and guard/|xi|, which are continuous across the
 * integrator's tangent renormalizations; trace records the raw values.
 */
DetectionResult detect(const FlowModel& model, const Foliation& foliation,
                       const State& s0, const DetectorOptions& opts = {},
                       StepControl ctrl = {});

}  // namespace ckam
