/* lattice.hpp — quasiperiodic mode arithmetic, the alpha-quasiperiodic Green's
 * function of the 3-D Helmholtz equation as a lattice sum, and the closed-form
 * Rayleigh coefficients of the Green's function. */

#pragma once

#include <vector>

#include "perifact/types.hpp"

namespace perifact {

/// Mode index m = (m1, m2).  Membership in the truncated set Z^2_M means
/// -M/2+1 <= m1, m2 <= M/2.
struct ModeIndex {
  int m1 = 0;
  int m2 = 0;

  friend bool operator==(const ModeIndex&, const ModeIndex&) = default;
};

/// Lattice/measurement parameters shared by every mode computation.
///
/// Invariants enforced at construction: k > 0, h > 0, M even and >= 2, and no
/// Wood's anomaly on the truncated mode set (|beta_m| >= 1e-12 * k for every
/// m in Z^2_M).
struct LatticeParams {
  Real k;       // wavenumber
  Vec2 alpha;   // quasimomentum (third component implicitly 0)
  Real h;       // measurement height, planes x3 = +-h
  int M;        // truncation order (even)

  LatticeParams(Real k, Vec2 alpha, Real h, int M);
};

/// In-plane wave vector and vertical wavenumber of one Rayleigh mode.
struct ModeData {
  Vec3 alpha_m;       // (alpha1 + m1, alpha2 + m2, 0)
  Complex beta_m;     // positive real (propagating) or positive imaginary
  bool propagating;   // |alpha_m| <= k
};

/// Z^2_M in the canonical linear order (m1 slowest).
std::vector<ModeIndex> mode_set(int M);

/// Linear index of m within mode_set(M).
int mode_linear_index(int M, ModeIndex m);

bool in_mode_set(int M, ModeIndex m);

/// Mode data per the two-branch rule; throws WoodAnomalyError when
/// |beta_m| < 1e-12 * k.
ModeData mode_data(const LatticeParams& params, ModeIndex m);

/// Number of modes m in Z^2_M with |alpha_m| <= k.
int count_propagating(const LatticeParams& params);

/// Truncation order used by green_eval when none is given.
int default_green_truncation(const LatticeParams& params);

/// Partial lattice sum of the quasiperiodic Green's function over
/// max(|m1|,|m2|) <= N.  Requires x3 != 0 (DomainError otherwise);
/// converges pointwise for x3 != 0 by evanescent decay.
Complex green_eval(const LatticeParams& params, const Vec3& x, int N);
Complex green_eval(const LatticeParams& params, const Vec3& x);

/// Closed-form Rayleigh coefficient of G_k(. - z) at mode m on the plane
/// x3 = +h (sign = plus) or x3 = -h (sign = minus):
///
///   Ghat^{+-}_m(z) = i / (8 pi^2 beta_m) * exp(-i alpha_m . z)
///                                        * exp(i beta_m (h -+ z3)).
///
/// Requires |z3| < h.  Validated against the plane-quadrature oracle in the
/// test suite before being used anywhere else.
Complex green_rayleigh(const LatticeParams& params, ModeIndex m, const Vec3& z, Sign sign);

}  // namespace perifact
