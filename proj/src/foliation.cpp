#include "ckam/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace ckam {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// Re-center q into [-1/2, 1/2); the l-foliation measures angle from (q,p)=(0,0).
double recenter_q(double q) { return wrap_coord(q + 0.5, 1.0) - 0.5; }

// ---- s2 invariant, k = 1. Phases shared by value and gradient. ----
struct S2Phases {
  double c1, s1;  // 2 pi q
  double c2, s2;  // 2 pi (q - t)
  double c3, s3;  // 4 pi (q - t)
  double c4, s4;  // 2 pi (2q - t)
  double c5, s5;  // 2 pi t
  double c6, s6;  // 4 pi q
};

S2Phases s2_phases(double q, double t) {
  S2Phases ph;
  ph.c1 = std::cos(kTwoPi * q);
  ph.s1 = std::sin(kTwoPi * q);
  ph.c2 = std::cos(kTwoPi * (q - t));
  ph.s2 = std::sin(kTwoPi * (q - t));
  ph.c3 = std::cos(2.0 * kTwoPi * (q - t));
  ph.s3 = std::sin(2.0 * kTwoPi * (q - t));
  ph.c4 = std::cos(kTwoPi * (2.0 * q - t));
  ph.s4 = std::sin(kTwoPi * (2.0 * q - t));
  ph.c5 = std::cos(kTwoPi * t);
  ph.s5 = std::sin(kTwoPi * t);
  ph.c6 = std::cos(2.0 * kTwoPi * q);
  ph.s6 = std::sin(2.0 * kTwoPi * q);
  return ph;
}

// p-polynomial coefficients of the s2 invariant and their p-derivatives.
struct S2Polys {
  double lead;   // (1/4) p^4 (p-1)^4
  double a1;     // coefficient of cos(2 pi q)          at order mu
  double a2;     //   "          cos(2 pi (q-t))        at order mu
  double b0;     // mu^2/4 constant-in-angle pieces
  double b3;     //   "          cos(4 pi (q-t))
  double b4;     //   "          cos(2 pi (2q-t))
  double b5;     //   "          cos(2 pi t)
  double b6;     //   "          cos(4 pi q)
  double b7;     // second constant-in-angle piece
  double dlead, da1, da2, db0, db3, db4, db5, db6, db7;
};

S2Polys s2_polys(double p, double nu) {
  const double pm1 = p - 1.0;
  S2Polys c;
  c.lead = 0.25 * std::pow(p, 4) * std::pow(pm1, 4);
  c.a1 = p * p * (2.0 * p - 1.0) * pm1 * pm1 * pm1;
  c.a2 = nu * p * p * p * (2.0 * p - 1.0) * pm1 * pm1;
  c.b0 = nu * nu * p * p * (10.0 * p * p - 12.0 * p + 3.0);
  c.b3 = nu * nu * p * p * (3.0 * p - 1.0) * (4.0 * p - 3.0);
  c.b4 = 4.0 * nu * p * pm1 * (6.0 * p * p - 6.0 * p + 1.0);
  c.b5 = 4.0 * nu * p * pm1 * (5.0 * p * p - 5.0 * p + 1.0);
  c.b6 = (3.0 * p - 2.0) * (4.0 * p - 1.0) * pm1 * pm1;
  c.b7 = (10.0 * p * p - 8.0 * p + 1.0) * pm1 * pm1;

  c.dlead = p * p * p * pm1 * pm1 * pm1 * (2.0 * p - 1.0);
  c.da1 = p * pm1 * pm1 * (12.0 * p * p - 11.0 * p + 2.0);
  c.da2 = nu * p * p * pm1 * (12.0 * p * p - 13.0 * p + 3.0);
  c.db0 = nu * nu * (40.0 * p * p * p - 36.0 * p * p + 6.0 * p);
  c.db3 = nu * nu * (48.0 * p * p * p - 39.0 * p * p + 6.0 * p);
  c.db4 = 4.0 * nu * (24.0 * p * p * p - 36.0 * p * p + 14.0 * p - 1.0);
  c.db5 = 4.0 * nu * (20.0 * p * p * p - 30.0 * p * p + 12.0 * p - 1.0);
  c.db6 = 3.0 * pm1 * (16.0 * p * p - 19.0 * p + 5.0);
  c.db7 = 2.0 * pm1 * (20.0 * p * p - 22.0 * p + 5.0);
  return c;
}

double s2_value(const State& s, const TwoWaveParams& P) {
  const S2Phases ph = s2_phases(s.c0, s.c2);
  const S2Polys c = s2_polys(s.c1, P.nu);
  const double mu2_4 = 0.25 * P.mu * P.mu;
  return c.lead - P.mu * (c.a1 * ph.c1 + c.a2 * ph.c2) +
         mu2_4 * (c.b0 + c.b3 * ph.c3 + c.b4 * ph.c4 + c.b5 * ph.c5 +
                  c.b6 * ph.c6 + c.b7);
}

TangentVec s2_gradient(const State& s, const TwoWaveParams& P) {
  const S2Phases ph = s2_phases(s.c0, s.c2);
  const S2Polys c = s2_polys(s.c1, P.nu);
  const double mu = P.mu;
  const double mu2 = mu * mu;
  const double Jq = kTwoPi * mu * (c.a1 * ph.s1 + c.a2 * ph.s2) -
                    M_PI * mu2 * (c.b3 * ph.s3 + c.b4 * ph.s4 + c.b6 * ph.s6);
  const double Jp =
      c.dlead - mu * (c.da1 * ph.c1 + c.da2 * ph.c2) +
      0.25 * mu2 * (c.db0 + c.db3 * ph.c3 + c.db4 * ph.c4 + c.db5 * ph.c5 +
                    c.db6 * ph.c6 + c.db7);
  const double Jt = -kTwoPi * mu * c.a2 * ph.s2 + M_PI * mu2 * c.b3 * ph.s3 +
                    0.5 * M_PI * mu2 * (c.b4 * ph.s4 - c.b5 * ph.s5);
  return {Jq, Jp, Jt};
}

double s1_value(const State& s, const TwoWaveParams& P) {
  const double p = s.c1;
  return -0.5 * p * p + p * p * p / 3.0 -
         P.mu * ((p - 1.0) * std::cos(kTwoPi * s.c0) +
                 P.nu * p * std::cos(kTwoPi * P.k * (s.c0 - s.c2)));
}

TangentVec s1_gradient(const State& s, const TwoWaveParams& P) {
  const double p = s.c1;
  const double s1 = std::sin(kTwoPi * s.c0);
  const double c1 = std::cos(kTwoPi * s.c0);
  const double sk = std::sin(kTwoPi * P.k * (s.c0 - s.c2));
  const double ck = std::cos(kTwoPi * P.k * (s.c0 - s.c2));
  const double Jq = kTwoPi * P.mu * (p - 1.0) * s1 + kTwoPi * P.mu * P.nu * P.k * p * sk;
  const double Jp = -p + p * p - P.mu * (c1 + P.nu * ck);
  const double Jt = -kTwoPi * P.mu * P.nu * P.k * p * sk;
  return {Jq, Jp, Jt};
}

}  // namespace

const char* ToString(FoliationKind kind) {
  switch (kind) {
    case FoliationKind::R: return "r";
    case FoliationKind::L: return "l";
    case FoliationKind::P: return "p";
    case FoliationKind::S1: return "s1";
    case FoliationKind::S2: return "s2";
    case FoliationKind::QL: return "ql";
    case FoliationKind::QPsi: return "qpsi";
  }
  return "unknown";
}

FoliationKind FoliationKindFromLabel(const std::string& label) {
  if (label == "r") return FoliationKind::R;
  if (label == "l") return FoliationKind::L;
  if (label == "p") return FoliationKind::P;
  if (label == "s1") return FoliationKind::S1;
  if (label == "s2") return FoliationKind::S2;
  if (label == "ql") return FoliationKind::QL;
  if (label == "qpsi") return FoliationKind::QPsi;
  throw std::invalid_argument("unknown foliation label: " + label);
}

bool IsTwoWaveFoliation(FoliationKind kind) {
  return kind == FoliationKind::R || kind == FoliationKind::L ||
         kind == FoliationKind::P || kind == FoliationKind::S1 ||
         kind == FoliationKind::S2;
}

Foliation::Foliation(FoliationKind kind, const TwoWaveParams& params,
                     double singular_tol)
    : kind_(kind), twp_(params), singular_tol_(singular_tol) {
  if (!IsTwoWaveFoliation(kind)) {
    throw std::invalid_argument("foliation requires Q-flow parameters");
  }
  if (kind == FoliationKind::S2 && params.k != 1.0) {
    throw std::invalid_argument("s2 foliation is defined for k = 1 only");
  }
}

Foliation::Foliation(FoliationKind kind, const QFlowParams& params,
                     double singular_tol)
    : kind_(kind), qfp_(params), singular_tol_(singular_tol) {
  if (IsTwoWaveFoliation(kind)) {
    throw std::invalid_argument("foliation requires two-wave parameters");
  }
}

double Foliation::value(const State& s) const {
  double J = 0.0;
  switch (kind_) {
    case FoliationKind::R:
      J = 0.5 * s.c1 * s.c1;
      break;
    case FoliationKind::L: {
      const double qt = recenter_q(s.c0);
      J = 0.5 * (qt * qt + s.c1 * s.c1);
      break;
    }
    case FoliationKind::P:
      J = 0.5 * s.c1 * s.c1 - twp_.mu * std::cos(kTwoPi * s.c0);
      break;
    case FoliationKind::S1:
      J = s1_value(s, twp_);
      break;
    case FoliationKind::S2:
      J = s2_value(s, twp_);
      break;
    case FoliationKind::QL:
      J = 0.5 * (s.c0 * s.c0 + s.c1 * s.c1);
      break;
    case FoliationKind::QPsi:
      J = psi_q(s.c0, s.c1, qfp_.q);
      break;
  }
  return sign_ * J;
}

TangentVec Foliation::gradient(const State& s) const {
  TangentVec g;
  switch (kind_) {
    case FoliationKind::R:
      g = {0.0, s.c1, 0.0};
      break;
    case FoliationKind::L:
      g = {recenter_q(s.c0), s.c1, 0.0};
      break;
    case FoliationKind::P:
      g = {kTwoPi * twp_.mu * std::sin(kTwoPi * s.c0), s.c1, 0.0};
      break;
    case FoliationKind::S1:
      g = s1_gradient(s, twp_);
      break;
    case FoliationKind::S2:
      g = s2_gradient(s, twp_);
      break;
    case FoliationKind::QL:
      g = {s.c0, s.c1, 0.0};
      break;
    case FoliationKind::QPsi: {
      double px, py;
      psi_q_grad(s.c0, s.c1, qfp_.q, px, py);
      g = {px, py, 0.0};
      break;
    }
  }
  return sign_ * g;
}

bool Foliation::is_singular(const State& s) const {
  return norm3(gradient(s)) < singular_tol_;
}

Foliation Foliation::flipped() const {
  Foliation f = *this;
  f.sign_ = -sign_;
  return f;
}

double poisson_residual(FoliationKind kind, const State& s,
                        const TwoWaveParams& P) {
  if (kind != FoliationKind::S1 && kind != FoliationKind::S2) {
    throw std::invalid_argument("poisson_residual: kind must be s1 or s2");
  }
  const TangentVec g = (kind == FoliationKind::S1) ? s1_gradient(s, P)
                                                   : s2_gradient(s, P);
  const double Hp = s.c1;
  const double Hq = kTwoPi * P.mu * std::sin(kTwoPi * s.c0) +
                    kTwoPi * P.mu * P.nu * P.k *
                        std::sin(kTwoPi * P.k * (s.c0 - s.c2));
  return Hp * g.v0 - Hq * g.v1 + g.v2;
}

ResidualScalingReport residual_scaling_test(FoliationKind kind, int n_samples,
                                            double mu, double nu, unsigned seed) {
  const double target = (kind == FoliationKind::S1) ? 2.0 : 3.0;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> pdist(0.1, 0.9);  // 0.1 off both resonances

  TwoWaveParams hi{mu, nu, 1.0};
  TwoWaveParams lo{0.5 * mu, nu, 1.0};

  ResidualScalingReport rep;
  rep.kind = kind;
  std::vector<double> exponents;
  exponents.reserve(n_samples);
  double worst_dev = -1.0;
  for (int i = 0; i < n_samples; ++i) {
    State s{unit(rng), pdist(rng), unit(rng), ModelTag::TwoWave};
    const double r_hi = std::abs(poisson_residual(kind, s, hi));
    const double r_lo = std::abs(poisson_residual(kind, s, lo));
    if (r_lo < 1e-300) continue;  // degenerate angle combination, skip
    const double e = std::log2(r_hi / r_lo);
    exponents.push_back(e);
    if (std::abs(e - target) > worst_dev) {
      worst_dev = std::abs(e - target);
      rep.worst_exponent = e;
      rep.worst_state = s;
    }
  }
  rep.n_samples = static_cast<int>(exponents.size());
  std::sort(exponents.begin(), exponents.end());
  if (!exponents.empty()) {
    const size_t n = exponents.size();
    rep.median_exponent = (n % 2 == 1)
                              ? exponents[n / 2]
                              : 0.5 * (exponents[n / 2 - 1] + exponents[n / 2]);
  }
  return rep;
}

}  // namespace ckam
