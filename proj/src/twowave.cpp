#include <cmath>

#include "ckam/model.hpp"

namespace ckam {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// dH/dq at the wrapped state; the only place the potential enters the flow.
double h_q(const State& w, const TwoWaveParams& P) {
  return kTwoPi * P.mu * std::sin(kTwoPi * w.c0) +
         kTwoPi * P.mu * P.nu * P.k * std::sin(kTwoPi * P.k * (w.c0 - w.c2));
}

}  // namespace

TangentVec TwoWaveModel::velocity(const State& s) const {
  const State w = wrap(s);
  return {w.c1, -h_q(w, p_), 1.0};
}

Mat3 TwoWaveModel::jacobian(const State& s) const {
  const State w = wrap(s);
  const double cq = std::cos(kTwoPi * w.c0);
  const double ck = std::cos(kTwoPi * p_.k * (w.c0 - w.c2));
  const double fourpi2mu = kTwoPi * kTwoPi * p_.mu;
  const double wave = fourpi2mu * p_.nu * p_.k * p_.k * ck;
  Mat3 m;
  m(0, 0) = 0.0;
  m(0, 1) = 1.0;
  m(0, 2) = 0.0;
  m(1, 0) = -(fourpi2mu * cq + wave);
  m(1, 1) = 0.0;
  m(1, 2) = wave;
  m(2, 0) = 0.0;
  m(2, 1) = 0.0;
  m(2, 2) = 0.0;
  return m;
}

double TwoWaveModel::two_form(const State& s, const TangentVec& a,
                              const TangentVec& b) const {
  const State w = wrap(s);
  const double Hq = h_q(w, p_);
  const double Hp = w.c1;
  return (a.v1 * b.v0 - a.v0 * b.v1) - Hq * (a.v0 * b.v2 - a.v2 * b.v0) -
         Hp * (a.v1 * b.v2 - a.v2 * b.v1);
}

double TwoWaveModel::volume_form(const State&, const TangentVec& a,
                                 const TangentVec& b, const TangentVec& c) const {
  // Reorder each vector from (q,p,t) to (p,q,t) rows before taking det3.
  const TangentVec ra{a.v1, a.v0, a.v2};
  const TangentVec rb{b.v1, b.v0, b.v2};
  const TangentVec rc{c.v1, c.v0, c.v2};
  return det3(ra, rb, rc);
}

}  // namespace ckam
