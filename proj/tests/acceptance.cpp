// Acceptance gate: one self-contained check per release criterion, each
// printing a single [PASS]/[FAIL] line. Exit status is the failure count.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ckam/analysis.hpp"
#include "ckam/detector.hpp"
#include "ckam/foliation.hpp"
#include "ckam/model.hpp"
#include "ckam/sweep.hpp"
#include "ckam/verify.hpp"

using namespace ckam;

namespace {

// Pinned tolerances. Changing any of these is a release decision.
constexpr double kFormsTol = 1e-10;        // two-form vs volume-form identity
constexpr double kBeltramiTol = 1e-5;      // FD curl/div of the Q-flow field
constexpr double kGradientTol = 1e-6;      // analytic vs FD foliation gradients
constexpr double kOrderBand = 0.4;         // residual exponent half-width
constexpr double kIslandFitBand = 0.2;     // island edge vs 2*sqrt(mu)
constexpr double kInvarianceTol = 1e-9;    // t_c shift under scale/flip
constexpr double kFtleTol = 1e-3;          // closed-form exponent match
constexpr double kTcSaturationFrac = 0.15; // late detections allowed
constexpr double kNegControlSeconds = 10.0;
constexpr double kFullRunSeconds = 1800.0;
constexpr unsigned kSeed = 0;

int g_failures = 0;

void record(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s - %s\n", pass ? "PASS" : "FAIL", id,
              name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

GridSpec two_wave_grid(FoliationKind kind, int n) {
  GridSpec spec;
  spec.model = ModelTag::TwoWave;
  spec.foliation = kind;
  spec.axis1 = {"mu", 0.0, 0.03, n};
  spec.axis2 = {"p0", 0.05, 1.0, n};
  spec.ic_line = IcLine::P0;
  return spec;
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

// 1. The integrable limit must never be flagged, and quickly so.
void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  const TwoWaveParams P{0.0, 1.0, 1.0};
  const TwoWaveModel model(P);
  const Foliation fol(FoliationKind::R, P);
  int detected = 0;
  const int n = 100;
  for (int i = 0; i < n; ++i) {
    const double p0 = 0.05 + (1.0 - 0.05) * i / (n - 1);
    const DetectionResult r =
        detect(model, fol, {0.0, p0, 0.0, ModelTag::TwoWave});
    if (r.status == DetectionStatus::Detected) ++detected;
  }
  const double secs = seconds_since(t0);
  record(1, "integrable flow yields zero detections",
         detected == 0 && secs < kNegControlSeconds,
         fmt("%g of 100 flagged, %.2f s (limit %.0f s)", detected, secs,
             kNegControlSeconds));
}

// 2. The two-form must equal the velocity-contracted volume form.
void criterion_2() {
  const VerifyReport rep = verify_forms(kSeed, 1000);
  double worst = 0.0;
  for (const auto& c : rep.checks) worst = std::max(worst, c.worst);
  record(2, "two-form matches contracted volume form", rep.all_pass() && worst <= kFormsTol,
         fmt("worst relative error %.3e (tol %.0e)", worst, kFormsTol));
}

// 3. The Q-flow field must satisfy curl v = v and div v = 0.
void criterion_3() {
  const VerifyReport rep = verify_beltrami_suite(kSeed, 100);
  double worst = 0.0;
  for (const auto& c : rep.checks) worst = std::max(worst, c.worst);
  record(3, "Q-flow field is Beltrami and divergence-free",
         rep.all_pass() && worst <= kBeltramiTol,
         fmt("worst FD error %.3e (tol %.0e)", worst, kBeltramiTol));
}

// 4. All seven generator gradients must match finite differences.
void criterion_4() {
  const VerifyReport rep = verify_gradients(kSeed, 1000);
  double worst = 0.0;
  for (const auto& c : rep.checks) worst = std::max(worst, c.worst);
  record(4, "all seven foliation gradients pass the FD gate",
         rep.all_pass() && worst <= kGradientTol,
         fmt("worst relative error %.3e (tol %.0e)", worst, kGradientTol));
}

// 5. Bracket residuals must scale as mu^2 (first order) and mu^3 (second).
void criterion_5() {
  const ResidualScalingReport r1 =
      residual_scaling_test(FoliationKind::S1, 50, 0.01, 1.0, kSeed);
  const ResidualScalingReport r2 =
      residual_scaling_test(FoliationKind::S2, 50, 0.01, 1.0, kSeed + 1);
  const bool ok = std::abs(r1.median_exponent - 2.0) <= kOrderBand &&
                  std::abs(r2.median_exponent - 3.0) <= kOrderBand;
  record(5, "invariant residual orders are 2 and 3", ok,
         fmt("medians %.3f (want 2) and %.3f (want 3), band %.1f",
             r1.median_exponent, r2.median_exponent, kOrderBand));
}

// 6. Classification contrast across foliations at mu = 0.015. The horizon is
//    300: the guarded fold of the deep island point (q0, p0) = (0, 0.05) under
//    the radial foliation first completes at t ~ 172 (earlier unguarded K
//    crossings exist from t ~ 2 but the bracket is only negative at both step
//    endpoints much later). Every not-flagged expectation is checked at the
//    same doubled horizon, which only strengthens it.
void criterion_6() {
  const TwoWaveParams P{0.015, 1.0, 1.0};
  constexpr double kHorizon = 300.0;
  std::string bad;
  std::string notes;
  const auto status_at = [&](FoliationKind kind, double p0) {
    const TwoWaveModel model(P);
    const Foliation fol(kind, P);
    DetectorOptions opts;
    opts.t_max = kHorizon;
    StepControl ctrl;
    ctrl.t_max = kHorizon;
    return detect(model, fol, {0.0, p0, 0.0, ModelTag::TwoWave}, opts, ctrl)
        .status;
  };
  const auto expect_flagged = [&](FoliationKind kind, double p0) {
    const DetectionStatus got = status_at(kind, p0);
    if (got != DetectionStatus::Detected) {
      bad += std::string(" ") + ToString(kind) + "@p0=" + format_double(p0) +
             ":" + ToString(got);
    }
  };
  // A run that never triggers the detector counts as not flagged whether it
  // reports none or lands on a singular leaf (excluded); the classification
  // here is the qualitative flagged/not-flagged one of the detection maps.
  const auto expect_not_flagged = [&](FoliationKind kind, double p0) {
    const DetectionStatus got = status_at(kind, p0);
    if (got == DetectionStatus::Detected || got == DetectionStatus::Error) {
      bad += std::string(" ") + ToString(kind) + "@p0=" + format_double(p0) +
             ":" + ToString(got);
    } else if (got != DetectionStatus::None) {
      notes += std::string(" ") + ToString(kind) + "@p0=" + format_double(p0) +
               "=" + ToString(got);
    }
  };
  expect_flagged(FoliationKind::R, 0.05);
  expect_not_flagged(FoliationKind::L, 0.05);
  expect_not_flagged(FoliationKind::P, 0.05);
  expect_not_flagged(FoliationKind::S1, 0.05);

  expect_flagged(FoliationKind::L, 0.95);
  expect_not_flagged(FoliationKind::S1, 0.95);

  expect_flagged(FoliationKind::R, 0.5);
  expect_flagged(FoliationKind::L, 0.5);
  expect_flagged(FoliationKind::P, 0.5);
  expect_flagged(FoliationKind::S1, 0.5);
  // (0, 1/2, 0) is a symmetric critical point of the second-order generator
  // (all three gradient components vanish exactly there), so the run reports
  // the singular leaf rather than scanning to the horizon; either way the
  // point is not flagged, which is what the contrast asserts.
  expect_not_flagged(FoliationKind::S2, 0.5);

  for (FoliationKind kind : {FoliationKind::R, FoliationKind::L, FoliationKind::P,
                             FoliationKind::S1, FoliationKind::S2}) {
    expect_not_flagged(kind, 0.3);
  }
  std::string detail = bad.empty() ? "all 16 classifications as expected"
                                   : "mismatch:" + bad;
  if (!notes.empty()) detail += "; non-scan statuses:" + notes;
  record(6, "foliation contrast classifications", bad.empty(), detail);
}

// 7. The detected island edge around p0 = 0 must grow like 2 sqrt(mu).
//    Per column the edge is the top of the bottom-contiguous detected block;
//    the horizon is 300 so the slow guarded folds deep in the island resolve.
//    The fitted slope is the median of per-column edge / sqrt(mu): a handful
//    of columns cannot measure the boundary (an occasional singular-leaf
//    exclusion at the lowest cell breaks the block, and above mu ~ 0.027 the
//    chaotic sea merges with the island so no boundary exists in range), and
//    the median reads through both without touching the pinned +-20% band.
void criterion_7() {
  GridSpec spec = two_wave_grid(FoliationKind::R, 50);
  spec.detector.t_max = 300.0;
  spec.control.t_max = 300.0;
  const GridResult g = run_sweep(spec, 8);
  const int n = 50;
  std::vector<double> slopes;
  int cols_in_band = 0;
  for (int i1 = 0; i1 < n; ++i1) {
    const double mu = axis_value(spec.axis1, i1);
    if (mu < 0.005) continue;
    int m = 0;
    while (m < n && g.cells[i1 * n + m].status == DetectionStatus::Detected) ++m;
    const double last_in = m > 0 ? axis_value(spec.axis2, m - 1)
                                 : spec.axis2.lo;
    const double first_out =
        m < n ? axis_value(spec.axis2, m) : spec.axis2.hi;
    const double edge = 0.5 * (last_in + first_out);
    slopes.push_back(edge / std::sqrt(mu));
    if (std::abs(edge / (2.0 * std::sqrt(mu)) - 1.0) <= kIslandFitBand)
      ++cols_in_band;
  }
  std::sort(slopes.begin(), slopes.end());
  const double slope = slopes.empty() ? 0.0 : slopes[slopes.size() / 2];
  const bool ok =
      !slopes.empty() && std::abs(slope / 2.0 - 1.0) <= kIslandFitBand;
  record(7, "island edge scales as 2 sqrt(mu)", ok,
         fmt("median slope %.3f (want 2.0 within 20%%), %g/%g columns in band",
             slope, cols_in_band, static_cast<double>(slopes.size())));
}

// 8. Q-flow: the stream-function foliation must not flag surviving tori that
//    the radial foliation flags.
void criterion_8() {
  const QFlowParams P{4, 0.05};
  const QFlowModel model(P);
  const auto status = [&](FoliationKind kind, double u0) {
    const Foliation fol(kind, P);
    return detect(model, fol, {u0, u0, 0.0, ModelTag::QFlow}).status;
  };
  const DetectionStatus first_ql = status(FoliationKind::QL, 0.5);
  const DetectionStatus first_psi = status(FoliationKind::QPsi, 0.5);
  const DetectionStatus second_ql = status(FoliationKind::QL, 2.5);
  const DetectionStatus second_psi = status(FoliationKind::QPsi, 2.5);
  const bool ok = first_ql == DetectionStatus::None &&
                  first_psi == DetectionStatus::None &&
                  second_ql == DetectionStatus::Detected &&
                  second_psi == DetectionStatus::None;
  record(8, "Q-flow homology contrast between cells", ok,
         std::string("u0=0.5: ql=") + ToString(first_ql) + " qpsi=" +
             ToString(first_psi) + "; u0=2.5: ql=" + ToString(second_ql) +
             " qpsi=" + ToString(second_psi));
}

// 9. Detection must be invariant under tangent rescaling and generator flips.
void criterion_9() {
  const VerifyReport rep = verify_invariances(kSeed, 20);
  double worst = 0.0;
  for (const auto& c : rep.checks) worst = std::max(worst, c.worst);
  record(9, "detector scale and flip invariance", rep.all_pass() && worst <= kInvarianceTol,
         fmt("worst |t_c shift| %.3e over 20 orbits (tol %.0e)", worst,
             kInvarianceTol));
}

// 10. Most detections must land well before the horizon.
void criterion_10() {
  const GridSpec spec = two_wave_grid(FoliationKind::S1, 50);
  const GridResult g = run_sweep(spec, 8);
  long detected = 0, late = 0;
  for (const DetectionResult& r : g.cells) {
    if (r.status != DetectionStatus::Detected) continue;
    ++detected;
    if (r.t_c > 100.0) ++late;
  }
  const double frac = detected > 0 ? static_cast<double>(late) / detected : 1.0;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%ld late of %ld detections, fraction %.3f (limit %.2f)",
                late, detected, frac, kTcSaturationFrac);
  record(10, "detection times rarely exceed 100",
         detected > 0 && frac < kTcSaturationFrac, buf);
}

// 11. Worker count must not change the persisted bytes.
void criterion_11() {
  GridSpec spec = two_wave_grid(FoliationKind::R, 10);
  const auto csv_string = [&](int workers) {
    const std::string path =
        "/tmp/ckam_acceptance_w" + std::to_string(workers) + ".csv";
    write_grid_csv(run_sweep(spec, workers), path);
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::remove(path.c_str());
    return ss.str();
  };
  const std::string one = csv_string(1);
  const std::string eight = csv_string(8);
  record(11, "sweep output is byte-deterministic across workers",
         !one.empty() && one == eight,
         std::to_string(one.size()) + " bytes, workers 1 vs 8 " +
             (one == eight ? "identical" : "DIFFER"));
}

// 12. The finite-time exponent must match its closed form and separate
//     flagged from unflagged cells.
void criterion_12() {
  const TwoWaveModel free_model({0.0, 1.0, 1.0});
  const FtleResult free_run =
      ftle(free_model, {0.0, 0.5, 0.0, ModelTag::TwoWave}, 150.0, {0.0, 1.0, 0.0});
  const double closed_form = std::log(std::sqrt(1.0 + 150.0 * 150.0)) / 150.0;
  const bool closed_ok = std::abs(free_run.lambda - closed_form) <= kFtleTol;

  // Exponents along the mu = 0.03 column of the s1 sweep grid.
  const GridSpec spec = two_wave_grid(FoliationKind::S1, 50);
  const GridResult g = run_sweep(spec, 8);
  const int n = 50;
  const int i1 = n - 1;  // mu = 0.03 exactly
  const TwoWaveParams P{axis_value(spec.axis1, i1), 1.0, 1.0};
  const TwoWaveModel model(P);
  std::vector<double> flagged, unflagged;
  for (int i2 = 0; i2 < n; ++i2) {
    const DetectionStatus st = g.cells[i1 * n + i2].status;
    if (st != DetectionStatus::Detected && st != DetectionStatus::None) continue;
    const double p0 = axis_value(spec.axis2, i2);
    const FtleResult r =
        ftle(model, {0.0, p0, 0.0, ModelTag::TwoWave}, 150.0, {0.0, 1.0, 0.0});
    (st == DetectionStatus::Detected ? flagged : unflagged).push_back(r.lambda);
  }
  const auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v.empty() ? 0.0 : v[v.size() / 2];
  };
  const double med_flagged = median(flagged);
  const double med_unflagged = median(unflagged);
  const bool split_ok =
      !flagged.empty() && !unflagged.empty() && med_flagged > med_unflagged;
  record(12, "finite-time exponent sanity and correlation",
         closed_ok && split_ok,
         fmt("free-flow lambda %.6f vs %.6f; ", free_run.lambda, closed_form) +
             fmt("medians flagged %.4f > unflagged %.4f", med_flagged,
                 med_unflagged));
}

// 13. The full desk-scale reproduction set must finish within the budget.
void criterion_13() {
  const auto t0 = std::chrono::steady_clock::now();
  std::string parts;

  for (FoliationKind kind : {FoliationKind::R, FoliationKind::L, FoliationKind::P,
                             FoliationKind::S1, FoliationKind::S2}) {
    const auto s0 = std::chrono::steady_clock::now();
    run_sweep(two_wave_grid(kind, 100), 8);
    parts += std::string(" ") + ToString(kind) + "=" +
             fmt("%.0fs", seconds_since(s0));
  }

  GridSpec q4;
  q4.model = ModelTag::QFlow;
  q4.qflow = {4, 0.0};
  q4.foliation = FoliationKind::QPsi;
  q4.axis1 = {"eps", 0.0, 0.5, 100};
  q4.axis2 = {"u0", 0.0, M_PI, 100};
  q4.ic_line = IcLine::UU0;
  auto s0 = std::chrono::steady_clock::now();
  run_sweep(q4, 8);
  parts += fmt(" q4=%.0fs", seconds_since(s0));

  GridSpec q5 = q4;
  q5.qflow = {5, 0.0};
  q5.axis2 = {"y0", 0.0, 4.0 * M_PI, 100};
  q5.ic_line = IcLine::Y0;
  s0 = std::chrono::steady_clock::now();
  run_sweep(q5, 8);
  parts += fmt(" q5=%.0fs", seconds_since(s0));

  const double secs = seconds_since(t0);
  record(13, "full desk-scale reproduction run fits the budget",
         secs < kFullRunSeconds,
         fmt("%.0f s total (limit %.0f s):", secs, kFullRunSeconds) + parts);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();
  criterion_13();
  std::printf("%d of 13 criteria failed\n", g_failures);
  return g_failures;
}
