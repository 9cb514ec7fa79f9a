#include <cmath>

#include "ckam/model.hpp"

namespace ckam {

double psi_q(double x, double y, int q) {
  double sum = 0.0;
  for (int j = 1; j <= q; ++j) {
    const double ang = 2.0 * M_PI * j / q;
    sum += std::cos(x * std::cos(ang) + y * std::sin(ang));
  }
  return sum;
}

void psi_q_grad(double x, double y, int q, double& px, double& py) {
  px = 0.0;
  py = 0.0;
  for (int j = 1; j <= q; ++j) {
    const double ang = 2.0 * M_PI * j / q;
    const double cj = std::cos(ang);
    const double sj = std::sin(ang);
    const double sn = std::sin(x * cj + y * sj);
    px -= cj * sn;
    py -= sj * sn;
  }
}

void psi_q_hess(double x, double y, int q, double& pxx, double& pxy, double& pyy) {
  pxx = 0.0;
  pxy = 0.0;
  pyy = 0.0;
  for (int j = 1; j <= q; ++j) {
    const double ang = 2.0 * M_PI * j / q;
    const double cj = std::cos(ang);
    const double sj = std::sin(ang);
    const double cn = std::cos(x * cj + y * sj);
    pxx -= cj * cj * cn;
    pxy -= cj * sj * cn;
    pyy -= sj * sj * cn;
  }
}

TangentVec QFlowModel::velocity(const State& s) const {
  double px, py;
  psi_q_grad(s.c0, s.c1, p_.q, px, py);
  const double sz = std::sin(s.c2);
  const double cz = std::cos(s.c2);
  return {py + p_.eps * sz, -px + p_.eps * cz, psi_q(s.c0, s.c1, p_.q)};
}

Mat3 QFlowModel::jacobian(const State& s) const {
  double px, py, pxx, pxy, pyy;
  psi_q_grad(s.c0, s.c1, p_.q, px, py);
  psi_q_hess(s.c0, s.c1, p_.q, pxx, pxy, pyy);
  const double sz = std::sin(s.c2);
  const double cz = std::cos(s.c2);
  Mat3 m;
  m(0, 0) = pxy;
  m(0, 1) = pyy;
  m(0, 2) = p_.eps * cz;
  m(1, 0) = -pxx;
  m(1, 1) = -pxy;
  m(1, 2) = -p_.eps * sz;
  m(2, 0) = px;
  m(2, 1) = py;
  m(2, 2) = 0.0;
  return m;
}

double QFlowModel::two_form(const State& s, const TangentVec& a,
                            const TangentVec& b) const {
  double px, py;
  psi_q_grad(s.c0, s.c1, p_.q, px, py);
  const double sz = std::sin(s.c2);
  const double cz = std::cos(s.c2);
  const double Hx = px - p_.eps * cz;
  const double Hy = py + p_.eps * sz;
  const double Hz = p_.eps * (s.c1 * cz + s.c0 * sz);
  const double dHa = Hx * a.v0 + Hy * a.v1 + Hz * a.v2;
  const double dHb = Hx * b.v0 + Hy * b.v1 + Hz * b.v2;
  return psi_q(s.c0, s.c1, p_.q) * (a.v1 * b.v0 - a.v0 * b.v1) -
         (dHa * b.v2 - dHb * a.v2);
}

double QFlowModel::volume_form(const State&, const TangentVec& a,
                               const TangentVec& b, const TangentVec& c) const {
  // Reorder each vector from (x,y,z) to (y,x,z) rows before taking det3.
  const TangentVec ra{a.v1, a.v0, a.v2};
  const TangentVec rb{b.v1, b.v0, b.v2};
  const TangentVec rc{c.v1, c.v0, c.v2};
  return det3(ra, rb, rc);
}

}  // namespace ckam
