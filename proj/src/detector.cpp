#include "ckam/detector.hpp"

#include <cmath>
#include <stdexcept>

namespace ckam {

double interpolate_crossing(double t1, double K1, double t2, double K2) {
  if (!(K1 * K2 < 0.0)) {
    throw std::invalid_argument("interpolate_crossing: K1, K2 must have opposite signs");
  }
  if (!(t1 < t2)) {
    throw std::invalid_argument("interpolate_crossing: requires t1 < t2");
  }
  return t1 + (t2 - t1) * K1 / (K1 - K2);
}

DetectionResult detect(const FlowModel& model, const Foliation& foliation,
                       const State& s0, const DetectorOptions& opts,
                       StepControl ctrl) {
  ctrl.t_max = opts.t_max;

  DetectionResult res;
  const TangentVec eta0 = foliation.gradient(s0);
  if (norm3(eta0) < opts.singular_tol) {
    res.status = DetectionStatus::Excluded;
    res.t_end = 0.0;
    return res;
  }

  CombinedState cs;
  cs.s = s0;
  cs.s.tag = model.tag();
  cs.xi = opts.xi0_scale * eta0;
  cs.t = 0.0;

  if (opts.record_trace) {
    // K(0) = dalpha(xi0, eta0) vanishes identically since xi0 || eta0.
    res.trace.push_back({0.0, 0.0, dot3(eta0, cs.xi), wrap(cs.s)});
  }

  bool found = false;
  bool excluded = false;
  double t_event = 0.0;

  // Previous-sample values, normalized by |xi|. K_prev is seeded from the
  // first accepted step with nonzero K; t=0 is degenerate by construction.
  bool have_K_prev = false;
  double t_prev = 0.0;
  double K_prev = 0.0;
  double g_prev = 0.0;

  const auto hook = [&](const CombinedState&, const CombinedState& next) {
    const TangentVec eta = foliation.gradient(next.s);
    if (norm3(eta) < opts.singular_tol) {
      excluded = true;
      t_event = next.t;
      return false;
    }
    const double K_raw = model.two_form(next.s, next.xi, eta);
    const double g_raw = dot3(eta, next.xi);
    if (opts.record_trace) {
      res.trace.push_back({next.t, K_raw, g_raw, wrap(next.s)});
    }
    const double xi_n = norm3(next.xi);
    const double K = K_raw / xi_n;
    const double g = g_raw / xi_n;

    if (have_K_prev && K != 0.0 && (K > 0.0) != (K_prev > 0.0) &&
        g_prev < 0.0 && g < 0.0) {
      found = true;
      t_event = interpolate_crossing(t_prev, K_prev, next.t, K);
      return false;
    }
    t_prev = next.t;
    g_prev = g;
    if (K != 0.0) {  // an exact zero retains the previous sign
      K_prev = K;
      have_K_prev = true;
    }
    return true;
  };

  try {
    const AdvanceResult adv = advance_with_hook(model, cs, ctrl, hook);
    res.n_steps = adv.n_accepted;
    if (found) {
      res.status = DetectionStatus::Detected;
      res.t_c = t_event;
      res.t_end = t_event;
    } else if (excluded) {
      res.status = DetectionStatus::Excluded;
      res.t_end = t_event;
    } else {
      res.status = DetectionStatus::None;
      res.t_end = adv.final_state.t;
    }
  } catch (const StiffnessError& e) {
    res.status = DetectionStatus::Error;
    res.reason = e.what();
  }
  return res;
}

}  // namespace ckam
