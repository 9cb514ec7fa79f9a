#include "ckam/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace ckam {

std::vector<SectionPoint> poincare_section(const TwoWaveParams& params,
                                           const State& s0, int n_crossings,
                                           double t_section,
                                           const StepControl& ctrl) {
  if (n_crossings < 1) {
    throw std::invalid_argument("poincare_section: n_crossings must be >= 1");
  }
  if (t_section < 0.0 || t_section >= 1.0) {
    throw std::invalid_argument("poincare_section: t_section must lie in [0,1)");
  }
  const TwoWaveModel model(params);

  // The chart's t coordinate advances exactly with integration time, so the
  // n-th hit of {t = t_section mod 1} after t0 is at a known offset.
  const double t0 = s0.c2;
  const double first_offset = wrap_coord(t_section - t0, 1.0);  // 0 if on section

  std::vector<SectionPoint> pts;
  pts.reserve(n_crossings);

  CombinedState cs;
  cs.s = s0;
  cs.s.tag = ModelTag::TwoWave;
  cs.xi = {0.0, 0.0, 0.0};  // tangent unused here
  cs.t = 0.0;

  StepControl seg = ctrl;
  for (int n = 0; n < n_crossings; ++n) {
    const double t_target = first_offset + n;
    if (t_target > cs.t) {
      seg.t_max = t_target;
      const AdvanceResult adv = advance_with_hook(model, cs, seg, nullptr);
      cs = adv.final_state;
    }
    pts.push_back({wrap_coord(cs.s.c0, 1.0), cs.s.c1, n});
  }
  return pts;
}

FtleResult ftle(const FlowModel& model, const State& s0, double T,
                const TangentVec& v0, StepControl ctrl) {
  if (!(T > 0.0)) throw std::invalid_argument("ftle: T must be positive");
  const double n0 = norm3(v0);
  if (!(n0 > 0.0)) throw std::invalid_argument("ftle: v0 must be nonzero");

  CombinedState cs;
  cs.s = s0;
  cs.s.tag = model.tag();
  cs.xi = (1.0 / n0) * v0;
  cs.t = 0.0;

  ctrl.t_max = T;
  ctrl.renorm = 1.0;  // band collapses to {1}: renormalize every accepted step

  const AdvanceResult adv = advance_with_hook(model, cs, ctrl, nullptr);
  const CombinedState& f = adv.final_state;
  FtleResult res;
  res.lambda = (f.log_scale + std::log(norm3(f.xi))) / T;
  res.T = T;
  res.v0 = v0;
  return res;
}

std::vector<std::pair<double, long>> histogram_tc(
    const std::vector<DetectionResult>& results, double bin_width) {
  if (!(bin_width > 0.0)) {
    throw std::invalid_argument("histogram_tc: bin_width must be positive");
  }
  long max_bin = -1;
  for (const auto& r : results) {
    if (r.status != DetectionStatus::Detected) continue;
    max_bin = std::max(max_bin, static_cast<long>(std::floor(r.t_c / bin_width)));
  }
  std::vector<std::pair<double, long>> hist;
  if (max_bin < 0) return hist;
  hist.reserve(max_bin + 1);
  for (long i = 0; i <= max_bin; ++i) hist.emplace_back(i * bin_width, 0L);
  for (const auto& r : results) {
    if (r.status != DetectionStatus::Detected) continue;
    hist[static_cast<size_t>(std::floor(r.t_c / bin_width))].second += 1;
  }
  return hist;
}

std::vector<double> inverse_tc_profile(const std::vector<DetectionResult>& row) {
  std::vector<double> out;
  out.reserve(row.size());
  for (const auto& r : row) {
    out.push_back(r.status == DetectionStatus::Detected ? 1.0 / r.t_c : 0.0);
  }
  return out;
}

}  // namespace ckam
