#include "ckam/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace ckam {

namespace {

// Tsitouras 5(4) coefficients (FSAL; the 5th-order weights are the last A row).
constexpr double kC2 = 0.161;
constexpr double kC3 = 0.327;
constexpr double kC4 = 0.9;
constexpr double kC5 = 0.9800255409045097;

constexpr double kA21 = 0.161;
constexpr double kA31 = -0.008480655492356989;
constexpr double kA32 = 0.335480655492357;
constexpr double kA41 = 2.8971530571054935;
constexpr double kA42 = -6.359448489975075;
constexpr double kA43 = 4.3622954328695815;
constexpr double kA51 = 5.325864828439257;
constexpr double kA52 = -11.748883564062828;
constexpr double kA53 = 7.4955393428898365;
constexpr double kA54 = -0.09249506636175525;
constexpr double kA61 = 5.86145544294642;
constexpr double kA62 = -12.92096931784711;
constexpr double kA63 = 8.159367898576159;
constexpr double kA64 = -0.071584973281401;
constexpr double kA65 = -0.028269050394068383;

constexpr std::array<double, 6> kB = {0.09646076681806523, 0.01,
                                      0.4798896504144996,  1.379008574103742,
                                      -3.290069515436081,  2.324710524099774};

// Weights of the embedded 4th-order difference (error = h * sum bt_i k_i).
constexpr std::array<double, 7> kBt = {
    -0.00178001105222577714, -0.0008164344596567469, 0.007880878010261995,
    -0.1447110071732629,     0.5823571654525552,     -0.45808210592918697,
    0.015151515151515152};

constexpr double kSafety = 0.9;
constexpr double kFacMin = 0.2;
constexpr double kFacMax = 5.0;

using Vec6 = std::array<double, 6>;

Vec6 pack(const CombinedState& cs) {
  return {cs.s.c0, cs.s.c1, cs.s.c2, cs.xi.v0, cs.xi.v1, cs.xi.v2};
}

CombinedState unpack(const Vec6& y, const CombinedState& like) {
  CombinedState cs = like;
  cs.s.c0 = y[0];
  cs.s.c1 = y[1];
  cs.s.c2 = y[2];
  cs.xi = {y[3], y[4], y[5]};
  return cs;
}

// Joint vector field (v(s), Dv(s) xi) at chart point y.
Vec6 deriv(const FlowModel& model, const Vec6& y, ModelTag tag) {
  const State s{y[0], y[1], y[2], tag};
  const TangentVec v = model.velocity(s);
  const TangentVec dxi = model.jacobian(s) * TangentVec{y[3], y[4], y[5]};
  return {v.v0, v.v1, v.v2, dxi.v0, dxi.v1, dxi.v2};
}

Vec6 axpy(const Vec6& y, double h, std::initializer_list<std::pair<double, const Vec6*>> terms) {
  Vec6 out = y;
  for (const auto& [c, k] : terms) {
    for (int i = 0; i < 6; ++i) out[i] += h * c * (*k)[i];
  }
  return out;
}

struct CoreStep {
  Vec6 y_new;
  Vec6 k7;  // derivative at y_new, reusable as the next step's k1
  double err = 0.0;
};

CoreStep tsit5_core(const FlowModel& model, const Vec6& y, const Vec6& k1,
                    double h, ModelTag tag, const StepControl& ctrl) {
  const Vec6 k2 = deriv(model, axpy(y, h, {{kA21, &k1}}), tag);
  const Vec6 k3 = deriv(model, axpy(y, h, {{kA31, &k1}, {kA32, &k2}}), tag);
  const Vec6 k4 =
      deriv(model, axpy(y, h, {{kA41, &k1}, {kA42, &k2}, {kA43, &k3}}), tag);
  const Vec6 k5 = deriv(
      model, axpy(y, h, {{kA51, &k1}, {kA52, &k2}, {kA53, &k3}, {kA54, &k4}}),
      tag);
  const Vec6 k6 =
      deriv(model,
            axpy(y, h,
                 {{kA61, &k1}, {kA62, &k2}, {kA63, &k3}, {kA64, &k4}, {kA65, &k5}}),
            tag);

  CoreStep out;
  out.y_new = axpy(y, h,
                   {{kB[0], &k1},
                    {kB[1], &k2},
                    {kB[2], &k3},
                    {kB[3], &k4},
                    {kB[4], &k5},
                    {kB[5], &k6}});
  out.k7 = deriv(model, out.y_new, tag);

  const std::array<const Vec6*, 7> ks = {&k1, &k2, &k3, &k4, &k5, &k6, &out.k7};
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {  // state components only
    double e = 0.0;
    for (int j = 0; j < 7; ++j) e += kBt[j] * (*ks[j])[i];
    e *= h;
    const double w =
        ctrl.atol + ctrl.rtol * std::max(std::abs(y[i]), std::abs(out.y_new[i]));
    const double r = e / w;
    sum += r * r;
  }
  out.err = std::sqrt(sum / 3.0);
  bool finite = std::isfinite(out.err);
  for (int i = 0; i < 6 && finite; ++i) {
    finite = std::isfinite(out.y_new[i]) && std::isfinite(out.k7[i]);
  }
  if (!finite) out.err = std::numeric_limits<double>::infinity();
  return out;
}

double step_factor(double err) {
  // err == 0 gives +inf, clamped to the growth cap.
  const double fac = kSafety * std::pow(err, -0.2);
  return std::clamp(fac, kFacMin, kFacMax);
}

}  // namespace

StepResult rk_step(const FlowModel& model, const CombinedState& cs, double h,
                   const StepControl& ctrl) {
  const Vec6 y = pack(cs);
  const Vec6 k1 = deriv(model, y, model.tag());
  const CoreStep core = tsit5_core(model, y, k1, h, model.tag(), ctrl);
  StepResult res;
  res.next = unpack(core.y_new, cs);
  res.next.t = cs.t + h;
  res.err = core.err;
  return res;
}

AdvanceResult advance_with_hook(const FlowModel& model, CombinedState cs,
                                const StepControl& ctrl, const StepHook& hook) {
  AdvanceResult result;
  const ModelTag tag = model.tag();
  double h = std::clamp(ctrl.h_init, ctrl.h_min, ctrl.h_max);

  Vec6 y = pack(cs);
  Vec6 k1 = deriv(model, y, tag);

  while (cs.t < ctrl.t_max) {
    const double remaining = ctrl.t_max - cs.t;
    const bool last = remaining <= h;
    const double h_try = last ? remaining : h;

    const CoreStep core = tsit5_core(model, y, k1, h_try, tag, ctrl);

    if (core.err <= 1.0) {
      CombinedState next = unpack(core.y_new, cs);
      next.t = last ? ctrl.t_max : cs.t + h_try;
      ++result.n_accepted;

      const bool go_on = !hook || hook(cs, next);

      // Rescale the tangent outside the norm band; k7's tangent half is
      // linear in xi, so it stays valid for FSAL reuse after the same scaling.
      Vec6 y_next = core.y_new;
      Vec6 k_next = core.k7;
      const double n = norm3(next.xi);
      if (n > ctrl.renorm || (n < 1.0 / ctrl.renorm && n > 0.0)) {
        next.log_scale += std::log(n);
        for (int i = 3; i < 6; ++i) {
          y_next[i] /= n;
          k_next[i] /= n;
        }
        next.xi = {y_next[3], y_next[4], y_next[5]};
      }

      cs = next;
      if (!go_on) {
        result.final_state = cs;
        result.reason = StopReason::HookStop;
        return result;
      }
      y = y_next;
      k1 = k_next;
      h = std::clamp(h_try * step_factor(core.err), ctrl.h_min, ctrl.h_max);
    } else {
      ++result.n_rejected;
      h = h_try * step_factor(core.err);
      if (h < ctrl.h_min) {
        throw StiffnessError("step size underflow at t = " +
                             std::to_string(cs.t));
      }
    }
  }

  result.final_state = cs;
  result.reason = StopReason::ReachedTMax;
  return result;
}

}  // namespace ckam
