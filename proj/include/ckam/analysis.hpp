#pragma once

#include <utility>
#include <vector>

#include "ckam/detector.hpp"
#include "ckam/integrator.hpp"
#include "ckam/model.hpp"

namespace ckam {

/** @brief One Poincare-section hit of a two-wave orbit. */
struct SectionPoint {
  double q = 0.0;  ///< wrapped to [0,1)
  double p = 0.0;
  int crossing_index = 0;
};

/** @brief Finite-time maximal Lyapunov exponent along one orbit. */
struct FtleResult {
  double lambda = 0.0;
  double T = 0.0;
  TangentVec v0;
};

/**
 * @brief Record (q,p) of the two-wave orbit from s0 at t = t_section (mod 1).
 *
 * dt/dt = 1 exactly, so crossing times are known in advance and the integrator
 * is run segment-by-segment to each of them. If s0 starts on the section the
 * initial point is crossing 0; crossings are 1 apart.
 */
std::vector<SectionPoint> poincare_section(const TwoWaveParams& params,
                                           const State& s0, int n_crossings,
                                           double t_section,
                                           const StepControl& ctrl = {});

/**
 * @brief lambda = (1/T)(log_scale + ln|xi_T|) for the orbit from s0, seeded
 * with v0 normalized to unit length and renormalized every accepted step.
 */
FtleResult ftle(const FlowModel& model, const State& s0, double T,
                const TangentVec& v0, StepControl ctrl = {});

/**
 * @brief Count Detected results by t_c bin [i*w, (i+1)*w). Bins run
 * contiguously from 0 through the last nonempty bin; empty input gives an
 * empty histogram.
 */
std::vector<std::pair<double, long>> histogram_tc(
    const std::vector<DetectionResult>& results, double bin_width);

/** @brief Per input result: 1/t_c if Detected, else 0. Preserves order. */
std::vector<double> inverse_tc_profile(const std::vector<DetectionResult>& row);

}  // namespace ckam
