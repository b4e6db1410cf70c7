/* materials.hpp — material coefficient fields, contrasts, the preset
 * geometries and coefficients used by the imaging experiments, and runtime
 * verification of the absorption/coupling inequalities the factorization
 * theory requires. */

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "perifact/types.hpp"

namespace perifact {

/// Scatterer support inside one period (-pi,pi)^2 x R.  Membership uses
/// strict inequalities; boundary points classify as outside.
struct Geometry {
  std::function<bool(const Vec3&)> inside;
  Real bounding_height = 0.0;  // sup of |x3| over the support
  std::string name;
};

enum class GeometryKind { balls, bars, cubes, strip_with_holes };

GeometryKind geometry_kind_from_name(const std::string& name);
std::string geometry_kind_name(GeometryKind kind);

/// Exact set membership for the four preset structures:
///   balls            four balls of radius 0.6 centered at (+-pi/2, +-pi/2, 0)
///   bars             bars along x2: x1^2 + x3^2 < (pi/6)^2 and copies at x1 = +-pi
///   cubes            |x1| < pi/2, |x2| < pi/2, |x3| < 0.3
///   strip_with_holes x1^2 + x2^2 > (pi/2)^2, |x3| < 0.3
Geometry preset_geometry(GeometryKind kind);

/// Position-dependent coefficient fields.  All three equal their vacuum
/// values (I, I, 0) outside the support; symmetric at every point; xi real.
struct MaterialCoefficients {
  std::function<CMat3(const Vec3&)> eps_r;     // relative permittivity
  std::function<CMat3(const Vec3&)> mu_r_inv;  // inverse relative permeability
  std::function<Mat3(const Vec3&)> xi;         // magnetoelectric coupling
  Geometry geometry;
};

/// The absorbing diagonal coefficients used in the imaging experiments:
/// eps_r = diag(1+0.75i, 1+0.9i, 1+0.8i), mu_r^-1 = diag(1-0.7i, 1-i, 1-0.9i),
/// xi = diag(0.01, 0.02, 0.05) inside the support, vacuum outside.
MaterialCoefficients preset_materials(const Geometry& geometry);

/// Piecewise-constant diagonal coefficients from user-supplied diagonals.
MaterialCoefficients diagonal_materials(const Geometry& geometry, const CVec3& eps_diag,
                                        const CVec3& mu_inv_diag, const Vec3& xi_diag);

/// Contrasts P = eps_r - I and Q = I - mu_r^-1; both vanish outside the
/// support.
struct Contrasts {
  std::function<CMat3(const Vec3&)> P;
  std::function<CMat3(const Vec3&)> Q;
};

Contrasts contrasts(const MaterialCoefficients& coeffs);

/// Constants of the two material assumptions, evaluated over a sample set:
///   C1 = min eig of -Im(mu_r^-1), C2 = min eig of Im(eps_r - xi mu_r^-1 xi),
///   frob_bound = max Frobenius norm of mu_r^-1 xi,
///   gamma1/gamma2 = the analogous real-part constants (vacuum included),
/// with pass flags
///   passes_a1  <=>  gamma1 > 0, gamma2 > 0, frob_bound < gamma1 * gamma2
///   passes_a2  <=>  C1 > 0, C2 > 0, (frob_bound^2 + 1)/2 <= min(C1, C2).
struct AssumptionReport {
  Real C1 = 0.0;
  Real C2 = 0.0;
  Real frob_bound = 0.0;
  Real gamma1 = 0.0;
  Real gamma2 = 0.0;
  bool passes_a1 = false;
  bool passes_a2 = false;
};

/// Evaluates the report over the given interior sample points (piecewise
/// constant presets are exact with a single interior point).  Throws
/// EmptySampleSetError on an empty set.
AssumptionReport check_assumptions(const MaterialCoefficients& coeffs,
                                   const std::vector<Vec3>& sample_points);

/// One interior point per preset, sufficient for the piecewise-constant
/// coefficient fields.
std::vector<Vec3> default_sample_points(const Geometry& geometry);

}  // namespace perifact
