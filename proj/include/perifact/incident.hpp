/* incident.hpp — quasiperiodic incident plane waves, their polarizations,
 * the superposition weights, and field synthesis from coefficient sequences
 * (used as right-hand sides for the forward solver and as oracles). */

#pragma once

#include <utility>
#include <vector>

#include "perifact/lattice.hpp"
#include "perifact/types.hpp"

namespace perifact {

/// Label of one incident plane wave: mode m, polarization index l in {1,2},
/// and the +- superposition sign.
struct PlaneWaveLabel {
  ModeIndex m;
  int l = 1;
  Sign sign = Sign::plus;
};

/// Finitely supported coefficient sequence over Z^2_M; each entry is the
/// 4-tuple (a^+_1, a^-_1, a^+_2, a^-_2) attached to one mode.
struct CoeffSeq {
  std::vector<std::pair<ModeIndex, CVec4>> entries;
};

/// The two unit polarization vectors of mode m,
///   p1 = (0, beta_m, -alpha_{m,2}) / sqrt(|alpha_{m,2}|^2 + |beta_m|^2),
///   p2 = (-beta_m, 0, alpha_{m,1}) / sqrt(|alpha_{m,1}|^2 + |beta_m|^2);
/// complex entries for evanescent modes, normalized in the complex
/// Euclidean norm.
std::pair<CVec3, CVec3> polarizations(const LatticeParams& params, ModeIndex m);

struct PlaneWaveField {
  CVec3 value;
  CVec3 curl_value;
};

/// phi = p exp(i(alpha_m.x + beta_m x3)) +- ptilde exp(i(alpha_m.x - beta_m x3))
/// with ptilde the third-component sign flip of p; the curl is evaluated
/// analytically from the two exponentials.
PlaneWaveField plane_wave(const LatticeParams& params, const PlaneWaveLabel& label,
                          const Vec3& x);

/// Superposition weights (w^+_m, w^-_m): (i, 1) for propagating modes and
/// (exp(-i beta_m h), exp(-i beta_m h)) for evanescent ones.
std::pair<Complex, Complex> herglotz_weights(const LatticeParams& params, ModeIndex m);

/// Evaluates the weighted two-row superposition at x: g sums the plane waves
/// scaled by a / (beta_m w^{+-}_m), f sums the matching curls.
struct HerglotzField {
  CVec3 f;
  CVec3 g;
};

HerglotzField herglotz_synthesis(const LatticeParams& params, const CoeffSeq& a, const Vec3& x);

}  // namespace perifact
