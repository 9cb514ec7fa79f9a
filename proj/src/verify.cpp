#include "ckam/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

#include "ckam/detector.hpp"
#include "ckam/foliation.hpp"
#include "ckam/model.hpp"

namespace ckam {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double rel_err(double got, double want) {
  return std::abs(got - want) / (1.0 + std::abs(want));
}

TangentVec random_vec(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {u(rng), u(rng), u(rng)};
}

// ---------------------------------------------------------------- forms ----

VerifyCheck forms_check_twowave(unsigned seed, int n_points) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> mu(0.0, 0.05);
  std::uniform_real_distribution<double> nu(0.0, 2.0);
  std::uniform_int_distribution<int> kk(1, 3);
  std::uniform_real_distribution<double> coord(-2.0, 3.0);
  double worst = 0.0;
  for (int i = 0; i < n_points; ++i) {
    const TwoWaveModel model({mu(rng), nu(rng), static_cast<double>(kk(rng))});
    const State s{coord(rng), coord(rng), coord(rng), ModelTag::TwoWave};
    const TangentVec a = random_vec(rng);
    const TangentVec b = random_vec(rng);
    const double lhs = model.two_form(s, a, b);
    const double rhs = model.volume_form(s, model.velocity(s), a, b);
    worst = std::max(worst, rel_err(lhs, rhs));
  }
  VerifyCheck c;
  c.name = "forms.twowave.dalpha-vs-volume";
  c.worst = worst;
  c.pass = worst <= 1e-10;
  c.detail = std::to_string(n_points) + " random (state,a,b), tol 1e-10";
  return c;
}

VerifyCheck forms_check_qflow(unsigned seed, int n_points) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> qd(3, 5);
  std::uniform_real_distribution<double> ed(0.0, 0.6);
  std::uniform_real_distribution<double> xy(-7.0, 7.0);
  std::uniform_real_distribution<double> zd(0.0, kTwoPi);
  double worst = 0.0;
  for (int i = 0; i < n_points; ++i) {
    const QFlowModel model({qd(rng), ed(rng)});
    const State s{xy(rng), xy(rng), zd(rng), ModelTag::QFlow};
    const TangentVec a = random_vec(rng);
    const TangentVec b = random_vec(rng);
    const double lhs = model.two_form(s, a, b);
    const double rhs = model.volume_form(s, model.velocity(s), a, b);
    worst = std::max(worst, rel_err(lhs, rhs));
  }
  VerifyCheck c;
  c.name = "forms.qflow.dalpha-vs-volume";
  c.worst = worst;
  c.pass = worst <= 1e-10;
  c.detail = std::to_string(n_points) + " random (state,a,b), tol 1e-10";
  return c;
}

// ------------------------------------------------------------- beltrami ----

VerifyCheck beltrami_check(int q, double eps, unsigned seed, int n_points) {
  const QFlowModel model({q, eps});
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> xy(-6.0, 6.0);
  std::uniform_real_distribution<double> zd(0.0, kTwoPi);
  const double h = 1e-5;
  double worst_curl = 0.0;
  double worst_div = 0.0;

  const auto vel = [&](double x, double y, double z) {
    return model.velocity({x, y, z, ModelTag::QFlow});
  };
  for (int i = 0; i < n_points; ++i) {
    const double x = xy(rng), y = xy(rng), z = zd(rng);
    const TangentVec v = vel(x, y, z);
    const TangentVec dx = (1.0 / (2.0 * h)) * (vel(x + h, y, z) - vel(x - h, y, z));
    const TangentVec dy = (1.0 / (2.0 * h)) * (vel(x, y + h, z) - vel(x, y - h, z));
    const TangentVec dz = (1.0 / (2.0 * h)) * (vel(x, y, z + h) - vel(x, y, z - h));
    const TangentVec curl{dy.v2 - dz.v1, dz.v0 - dx.v2, dx.v1 - dy.v0};
    worst_curl = std::max(worst_curl, norm3(curl - v));
    worst_div = std::max(worst_div, std::abs(dx.v0 + dy.v1 + dz.v2));
  }
  VerifyCheck c;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "beltrami.q%d.eps%g", q, eps);
  c.name = buf;
  c.worst = std::max(worst_curl, worst_div);
  c.pass = c.worst <= 1e-5;
  std::snprintf(buf, sizeof(buf), "max|curl v - v| = %.3e, max|div v| = %.3e, tol 1e-5",
                worst_curl, worst_div);
  c.detail = buf;
  return c;
}

// ------------------------------------------------------------ gradients ----

VerifyCheck gradient_check(FoliationKind kind, unsigned seed, int n_points) {
  const double h = 1e-5;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> pd(-0.5, 1.5);
  std::uniform_real_distribution<double> mud(0.005, 0.03);
  std::uniform_real_distribution<double> xy(-6.0, 6.0);
  std::uniform_real_distribution<double> zd(0.0, kTwoPi);
  std::uniform_int_distribution<int> qd(4, 5);
  std::uniform_real_distribution<double> ed(0.0, 0.6);

  double worst = 0.0;
  int used = 0;
  while (used < n_points) {
    Foliation fol = [&] {
      if (IsTwoWaveFoliation(kind)) {
        return Foliation(kind, TwoWaveParams{mud(rng), 1.0, 1.0});
      }
      return Foliation(kind, QFlowParams{qd(rng), ed(rng)});
    }();
    State s;
    if (IsTwoWaveFoliation(kind)) {
      s = {unit(rng), pd(rng), unit(rng), ModelTag::TwoWave};
      // The l generator's re-centered angle chart has a seam at q = 1/2 where
      // finite differences straddle the jump; sample away from it.
      if (kind == FoliationKind::L && std::abs(s.c0 - 0.5) < 10.0 * h) continue;
    } else {
      s = {xy(rng), xy(rng), zd(rng), ModelTag::QFlow};
    }
    if (fol.is_singular(s)) continue;
    ++used;

    const auto at = [&](double d0, double d1, double d2) {
      return fol.value({s.c0 + d0, s.c1 + d1, s.c2 + d2, s.tag});
    };
    const TangentVec fd{(at(h, 0, 0) - at(-h, 0, 0)) / (2.0 * h),
                        (at(0, h, 0) - at(0, -h, 0)) / (2.0 * h),
                        (at(0, 0, h) - at(0, 0, -h)) / (2.0 * h)};
    const TangentVec an = fol.gradient(s);
    worst = std::max(worst, norm3(an - fd) / (1.0 + norm3(fd)));
  }
  VerifyCheck c;
  c.name = std::string("gradients.") + ToString(kind);
  c.worst = worst;
  c.pass = worst <= 1e-6;
  c.detail = std::to_string(n_points) + " non-singular states, central FD h=1e-5, tol 1e-6";
  return c;
}

// ------------------------------------------------------------ residuals ----

// First-order construction with the resonant choice J0' = 1: amplitudes
// A = -1/p, B = -nu/(p-1) blow up at the removed resonances. The bracket still
// scales as mu^2 exactly; what degrades near p = 1 is its coefficient.
double singular_choice_residual(const State& s, const TwoWaveParams& P) {
  const double p = s.c1;
  const double th1 = kTwoPi * s.c0;
  const double thk = kTwoPi * P.k * (s.c0 - s.c2);
  const double Jq = kTwoPi * P.mu * std::sin(th1) / p +
                    kTwoPi * P.mu * P.nu * P.k * std::sin(thk) / (p - 1.0);
  const double Jp = 1.0 + P.mu * (std::cos(th1) / (p * p) +
                                  P.nu * std::cos(thk) / ((p - 1.0) * (p - 1.0)));
  const double Jt = -kTwoPi * P.mu * P.nu * P.k * std::sin(thk) / (p - 1.0);
  const double Hp = p;
  const double Hq = kTwoPi * P.mu * std::sin(th1) +
                    kTwoPi * P.mu * P.nu * P.k * std::sin(thk);
  return Hp * Jq - Hq * Jp + Jt;
}

VerifyCheck residual_order_check(FoliationKind kind, unsigned seed, int n_samples) {
  const double target = (kind == FoliationKind::S1) ? 2.0 : 3.0;
  const ResidualScalingReport rep =
      residual_scaling_test(kind, n_samples, 0.01, 1.0, seed);
  VerifyCheck c;
  c.name = std::string("residuals.") + ToString(kind) + ".order";
  c.worst = std::abs(rep.median_exponent - target);
  c.pass = c.worst <= 0.4;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "median exponent %.4f over %d samples (target %g +- 0.4, mu pair 1e-2/5e-3)",
                rep.median_exponent, rep.n_samples, target);
  c.detail = buf;
  return c;
}

VerifyCheck residual_negative_control(unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const TwoWaveParams P{0.01, 1.0, 1.0};

  // Exponent stays 2 (the construction cancels the mu^1 term for any J0), but
  // the coefficient blows up like 1/(p-1)^2 near the untreated resonance.
  double med_near = 0.0, med_far = 0.0;
  std::vector<double> near, far, expo;
  for (int i = 0; i < 50; ++i) {
    const State s_far{unit(rng), 0.5, unit(rng), ModelTag::TwoWave};
    const State s_near{unit(rng), 0.93, unit(rng), ModelTag::TwoWave};
    far.push_back(std::abs(singular_choice_residual(s_far, P)));
    near.push_back(std::abs(singular_choice_residual(s_near, P)));
    TwoWaveParams half = P;
    half.mu = 0.5 * P.mu;
    const double r1 = std::abs(singular_choice_residual(s_far, P));
    const double r2 = std::abs(singular_choice_residual(s_far, half));
    if (r2 > 1e-300) expo.push_back(std::log2(r1 / r2));
  }
  const auto median = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  med_near = median(near);
  med_far = median(far);
  const double med_expo = median(expo);
  const double blowup = med_near / med_far;

  VerifyCheck c;
  c.name = "residuals.singular-choice.control";
  c.worst = std::abs(med_expo - 2.0);
  c.pass = blowup > 20.0 && std::abs(med_expo - 2.0) <= 0.4;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "J0'=1 control: coefficient blow-up x%.1f at p=0.93 vs p=0.5 "
                "(require > 20), exponent %.3f stays near 2",
                blowup, med_expo);
  c.detail = buf;
  return c;
}

// ---------------------------------------------------------- invariances ----

VerifyReport invariance_checks(unsigned seed, int n_orbits) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> mud(0.015, 0.03);
  std::uniform_real_distribution<double> p0d(0.05, 1.0);
  std::uniform_real_distribution<double> logc(-1.0, 1.0);

  double worst_scale = 0.0;
  double worst_flip = 0.0;
  bool status_ok = true;
  int found = 0;
  int attempts = 0;
  const int max_attempts = 50 * n_orbits;
  while (found < n_orbits && attempts < max_attempts) {
    ++attempts;
    const TwoWaveParams P{mud(rng), 1.0, 1.0};
    const State s0{0.0, p0d(rng), 0.0, ModelTag::TwoWave};
    const double c = std::pow(10.0, logc(rng));
    const TwoWaveModel model(P);
    const Foliation fol(FoliationKind::R, P);

    const DetectionResult base = detect(model, fol, s0);
    if (base.status != DetectionStatus::Detected) continue;
    ++found;

    DetectorOptions scaled;
    scaled.xi0_scale = c;
    const DetectionResult r_scale = detect(model, fol, s0, scaled);
    const DetectionResult r_flip = detect(model, fol.flipped(), s0);

    if (r_scale.status != DetectionStatus::Detected ||
        r_flip.status != DetectionStatus::Detected) {
      status_ok = false;
      continue;
    }
    worst_scale = std::max(worst_scale, std::abs(r_scale.t_c - base.t_c));
    worst_flip = std::max(worst_flip, std::abs(r_flip.t_c - base.t_c));
  }

  VerifyReport rep;
  VerifyCheck scale;
  scale.name = "invariances.detector.scale";
  scale.worst = worst_scale;
  scale.pass = status_ok && found == n_orbits && worst_scale <= 1e-9;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "xi0 -> c*xi0 (c in [0.1,10]) on %d detected orbits, worst |dt_c| = %.3e, tol 1e-9",
                found, worst_scale);
  scale.detail = buf;
  rep.checks.push_back(scale);

  VerifyCheck flip;
  flip.name = "invariances.detector.flip";
  flip.worst = worst_flip;
  flip.pass = status_ok && found == n_orbits && worst_flip <= 1e-9;
  std::snprintf(buf, sizeof(buf),
                "J -> -J on %d detected orbits, worst |dt_c| = %.3e, tol 1e-9",
                found, worst_flip);
  flip.detail = buf;
  rep.checks.push_back(flip);
  return rep;
}

}  // namespace

VerifyReport verify_forms(unsigned seed, int n_points) {
  VerifyReport rep;
  rep.checks.push_back(forms_check_twowave(seed, n_points));
  rep.checks.push_back(forms_check_qflow(seed + 1, n_points));
  return rep;
}

VerifyReport verify_beltrami_suite(unsigned seed, int n_points) {
  VerifyReport rep;
  int offset = 0;
  for (int q : {4, 5}) {
    for (double eps : {0.15, 0.5}) {
      rep.checks.push_back(beltrami_check(q, eps, seed + offset++, n_points));
    }
  }
  return rep;
}

VerifyReport verify_gradients(unsigned seed, int n_points) {
  VerifyReport rep;
  int offset = 0;
  for (FoliationKind kind :
       {FoliationKind::R, FoliationKind::L, FoliationKind::P, FoliationKind::S1,
        FoliationKind::S2, FoliationKind::QL, FoliationKind::QPsi}) {
    rep.checks.push_back(gradient_check(kind, seed + offset++, n_points));
  }
  return rep;
}

VerifyReport verify_residuals(unsigned seed, int n_samples) {
  VerifyReport rep;
  rep.checks.push_back(residual_order_check(FoliationKind::S1, seed, n_samples));
  rep.checks.push_back(residual_order_check(FoliationKind::S2, seed + 1, n_samples));
  rep.checks.push_back(residual_negative_control(seed + 2));
  return rep;
}

VerifyReport verify_invariances(unsigned seed, int n_orbits) {
  return invariance_checks(seed, n_orbits);
}

VerifyReport run_verify(const std::string& suite, unsigned seed) {
  VerifyReport rep;
  const auto append = [&rep](const VerifyReport& part) {
    rep.checks.insert(rep.checks.end(), part.checks.begin(), part.checks.end());
  };
  if (suite == "forms" || suite == "all") append(verify_forms(seed));
  if (suite == "beltrami" || suite == "all") append(verify_beltrami_suite(seed));
  if (suite == "gradients" || suite == "all") append(verify_gradients(seed));
  if (suite == "residuals" || suite == "all") append(verify_residuals(seed));
  if (suite == "invariances" || suite == "all") append(verify_invariances(seed));
  if (rep.checks.empty()) {
    throw std::invalid_argument("unknown verify suite: " + suite);
  }
  return rep;
}

int print_verify_report(const VerifyReport& report) {
  for (const auto& c : report.checks) {
    std::printf("%s %-40s worst=%.3e  %s\n", c.pass ? "PASS" : "FAIL",
                c.name.c_str(), c.worst, c.detail.c_str());
  }
  const bool ok = report.all_pass();
  std::printf("%s (%zu checks)\n", ok ? "ALL PASS" : "FAILURES PRESENT",
              report.checks.size());
  return ok ? 0 : 1;
}

}  // namespace ckam
