#pragma once

#include <functional>
#include <stdexcept>

#include "ckam/model.hpp"
#include "ckam/types.hpp"

namespace ckam {

/** @brief Adaptive step-size settings for the embedded 5(4) pair. */
struct StepControl {
  double rtol = 1e-8;
  double atol = 1e-10;
  double h_init = 1e-3;
  double h_max = 0.1;
  double h_min = 1e-12;
  double t_max = 150.0;
  /// Tangent-norm band edge: |xi| is rescaled to 1 outside [1/renorm, renorm].
  double renorm = 1e6;
};

/** @brief Joint integration state: base point, tangent vector, time, and the
 * accumulated logarithm of tangent rescalings. */
struct CombinedState {
  State s;
  TangentVec xi;
  double t = 0.0;
  double log_scale = 0.0;
};

/** @brief Raised when step-size control underflows h_min (stiff segment). */
class StiffnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StepResult {
  CombinedState next;
  double err = 0.0;  ///< tolerance-scaled error norm; accept iff err <= 1
};

/**
 * @brief One Tsitouras 5(4) step of the joint system (ds/dt, dxi/dt) =
 * (v(s), Dv(s) xi).
 *
 * The error norm is the weighted RMS of the embedded difference over the three
 * state components with weights atol + rtol*max(|y|,|y'|); the tangent rides
 * along without influencing step-size control, which keeps the accepted-step
 * sequence independent of tangent scaling (see detector invariances).
 * A non-finite derivative yields err = +inf so the caller rejects the step.
 */
StepResult rk_step(const FlowModel& model, const CombinedState& cs, double h,
                   const StepControl& ctrl);

/** @brief Called after each accepted step; return false to stop integrating. */
using StepHook =
    std::function<bool(const CombinedState& prev, const CombinedState& next)>;

enum class StopReason {
  ReachedTMax,  ///< integrated through ctrl.t_max
  HookStop      ///< the hook requested termination
};

struct AdvanceResult {
  CombinedState final_state;
  long n_accepted = 0;
  long n_rejected = 0;
  StopReason reason = StopReason::ReachedTMax;
};

/**
 * @brief Integrate from cs.t to ctrl.t_max with standard accept/reject control
 * (safety 0.9, exponent 1/5, growth factor clamped to [0.2, 5]).
 *
 * The final accepted step is clamped to land exactly on t_max. After the hook
 * runs, |xi| outside [1/renorm, renorm] is rescaled to unit norm with the
 * logarithm accumulated in log_scale. Throws StiffnessError when the
 * controller drives h below h_min.
 */
AdvanceResult advance_with_hook(const FlowModel& model, CombinedState cs,
                                const StepControl& ctrl, const StepHook& hook);

}  // namespace ckam
