#include "perifact/incident.hpp"

#include <cmath>

namespace perifact {

namespace {

CVec3 tilde(const CVec3& p) { return CVec3(p.x(), p.y(), -p.z()); }

}  // namespace

std::pair<CVec3, CVec3> polarizations(const LatticeParams& params, ModeIndex m) {
  const ModeData d = mode_data(params, m);
  const Complex beta = d.beta_m;
  const Real a1 = d.alpha_m.x(), a2 = d.alpha_m.y();
  const Real b2 = std::norm(beta);
  const Real n1 = std::sqrt(a2 * a2 + b2);
  const Real n2 = std::sqrt(a1 * a1 + b2);
  CVec3 p1(Complex(0.0), beta, Complex(-a2));
  CVec3 p2(-beta, Complex(0.0), Complex(a1));
  return {p1 / n1, p2 / n2};
}

PlaneWaveField plane_wave(const LatticeParams& params, const PlaneWaveLabel& label,
                          const Vec3& x) {
  const ModeData d = mode_data(params, label.m);
  const auto [p1, p2] = polarizations(params, label.m);
  const CVec3 p = label.l == 1 ? p1 : p2;
  const CVec3 pt = tilde(p);
  const Real s = sign_value(label.sign);

  const Real ax = d.alpha_m.x() * x.x() + d.alpha_m.y() * x.y();
  const Complex eu = std::exp(iu * ax + iu * d.beta_m * x.z());  // upward factor
  const Complex ed = std::exp(iu * ax - iu * d.beta_m * x.z());  // downward factor

  const CVec3 ku(Complex(d.alpha_m.x()), Complex(d.alpha_m.y()), d.beta_m);
  const CVec3 kd(Complex(d.alpha_m.x()), Complex(d.alpha_m.y()), -d.beta_m);

  PlaneWaveField out;
  out.value = p * eu + s * pt * ed;
  out.curl_value = iu * ku.cross(p) * eu + s * iu * kd.cross(pt) * ed;
  return out;
}

std::pair<Complex, Complex> herglotz_weights(const LatticeParams& params, ModeIndex m) {
  const ModeData d = mode_data(params, m);
  if (d.propagating) return {iu, Complex(1.0)};
  const Complex w = std::exp(-iu * d.beta_m * params.h);
  return {w, w};
}

HerglotzField herglotz_synthesis(const LatticeParams& params, const CoeffSeq& a, const Vec3& x) {
  HerglotzField out{CVec3::Zero(), CVec3::Zero()};
  for (const auto& [m, tuple] : a.entries) {
    const ModeData d = mode_data(params, m);
    const auto [wp, wm] = herglotz_weights(params, m);
    // Tuple slots: (a^+_1, a^-_1, a^+_2, a^-_2).
    const struct {
      int l;
      Sign sign;
      Complex coeff;
      Complex weight;
    } terms[4] = {{1, Sign::plus, tuple(0), wp},
                  {1, Sign::minus, tuple(1), wm},
                  {2, Sign::plus, tuple(2), wp},
                  {2, Sign::minus, tuple(3), wm}};
    for (const auto& t : terms) {
      if (t.coeff == Complex(0.0)) continue;
      const PlaneWaveField pw = plane_wave(params, {m, t.l, t.sign}, x);
      const Complex scale = t.coeff / (d.beta_m * t.weight);
      out.g += scale * pw.value;
      out.f += scale * pw.curl_value;
    }
  }
  return out;
}

}  // namespace perifact
