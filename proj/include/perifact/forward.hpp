/* forward.hpp — spectral volume-integral forward solver.
 *
 * The scattered field u solves the second-kind equation
 *
 *   u = A S(u,f,g) + B T(u,f,g),
 *
 * where A = (k^2 + grad div) of the Green volume potential and B = curl of
 * it.  Discretization: trigonometric collocation on one period
 * (-pi,pi)^2 x (-rho,rho).  In plane the Green's function is an exact
 * Fourier series; in x3 the kernel exp(i beta |x3|)/beta is sliced to the
 * cell and 2 rho-periodized, whose Fourier coefficients have closed form.
 * Both operators then act as exact per-mode multipliers on the trigonometric
 * space, and the equation is solved by restarted GMRES.
 *
 * Grid arrays store the periodic factor U = u exp(-i alpha . x) sampled at
 * the wrapped collocation nodes, so plain FFTs apply; the quasimomentum
 * enters only through the mode wave vectors kappa = (alpha + m, pi j / rho).
 */

#pragma once

#include <array>
#include <memory>
#include <vector>

#include "perifact/fft.hpp"
#include "perifact/incident.hpp"
#include "perifact/lattice.hpp"
#include "perifact/materials.hpp"
#include "perifact/types.hpp"

namespace perifact {

/// Collocation grid over (-pi,pi)^2 x (-rho,rho); counts are powers of two
/// and n3 is a multiple of four so the planes x3 = +-h lie on the grid when
/// rho = 2 h.
struct SolverGrid {
  int n1 = 0, n2 = 0, n3 = 0;
  Real rho = 0.0;

  SolverGrid() = default;
  SolverGrid(int n1, int n2, int n3, Real rho);

  /// Default cell for the given measurement height: rho = 2 h.
  static SolverGrid for_params(const LatticeParams& params, int n);
  static SolverGrid for_params(const LatticeParams& params, int n1, int n2, int n3);

  int size() const { return n1 * n2 * n3; }
  size_t index(int i1, int i2, int i3) const {
    return (static_cast<size_t>(i1) * n2 + i2) * n3 + i3;
  }
  /// Wrapped physical coordinate of a node along each axis.
  Real coord1(int i1) const;
  Real coord2(int i2) const;
  Real coord3(int i3) const;
  Vec3 node(int i1, int i2, int i3) const;

  /// Grid plane index holding x3 = +h or -h; PlaneMismatchError when the
  /// plane is not a collocation plane.
  int plane_index(Real h, Sign sign) const;

  friend bool operator==(const SolverGrid&, const SolverGrid&) = default;
};

/// Per-mode multiplier tables for the volume potential.  The scalar
/// multiplier lambda_G(kappa) is stored; the 3x3 symbols derive from it:
///   symbol_A = (k^2 I - kappa kappa^T) lambda_G   (symmetric),
///   symbol_B = i [kappa]_x lambda_G               (antisymmetric).
class SpectralTables {
 public:
  SpectralTables(const LatticeParams& params, const SolverGrid& grid, Real bounding_height);

  const LatticeParams& params() const { return params_; }
  const SolverGrid& grid() const { return grid_; }

  Complex lambda(size_t mode) const { return lambda_[mode]; }
  /// Wave vector kappa of a grid mode (q1, q2, q3), indices in FFT order.
  Vec3 kappa(int q1, int q2, int q3) const;

  CMat3 symbol_A(int q1, int q2, int q3) const;
  CMat3 symbol_B(int q1, int q2, int q3) const;

 private:
  LatticeParams params_;
  SolverGrid grid_;
  std::vector<Complex> lambda_;
  std::vector<Real> kap1_, kap2_, kap3_;

  friend class ScatterOperator;
};

/// Complex 3-vector values on the collocation grid (periodic factor, wrapped
/// nodes), tagged with the quasimomentum they belong to.
struct FieldGrid {
  SolverGrid grid;
  Vec2 alpha = Vec2::Zero();
  std::array<std::vector<Complex>, 3> v;

  FieldGrid() = default;
  FieldGrid(const SolverGrid& g, const Vec2& alpha);

  Real norm() const;
};

/// Material combination matrices sampled at the collocation nodes inside the
/// scatterer support (they vanish elsewhere):
///   sigma1 = P - xi mu^-1 xi, sigma2 = (i/k) xi mu^-1,
///   q      = Q,               sigma3 = -i k mu^-1 xi.
struct MaterialGrid {
  std::vector<size_t> nodes;
  std::vector<CMat3> sigma1, sigma2, q, sigma3;

  bool empty() const { return nodes.empty(); }
};

MaterialGrid sample_materials(const LatticeParams& params, const MaterialCoefficients& coeffs,
                              const SolverGrid& grid);

/// Sources S = sigma1 (g+u) + sigma2 (f+curl u), T = q (f+curl u) + sigma3 (g+u),
/// evaluated nodewise; zero outside the support.
void assemble_sources(const MaterialGrid& mats, const FieldGrid& f, const FieldGrid& g,
                      const FieldGrid& u, const FieldGrid& curl_u, FieldGrid& S, FieldGrid& T);

/// Convenience wrapper sampling the coefficient fields first.
std::pair<FieldGrid, FieldGrid> assemble_sources(const LatticeParams& params,
                                                 const MaterialCoefficients& coeffs,
                                                 const FieldGrid& f, const FieldGrid& g,
                                                 const FieldGrid& u, const FieldGrid& curl_u);

/// Incident plane wave (value, curl) sampled on the grid as (g, f).
std::pair<FieldGrid, FieldGrid> sample_plane_wave(const LatticeParams& params,
                                                  const PlaneWaveLabel& label,
                                                  const SolverGrid& grid);

struct SolveOptions {
  Real tol = 1e-6;
  int restart = 50;
  int max_iterations = 2000;
};

struct SolveResult {
  FieldGrid u;
  FieldGrid curl_u;
  int iterations = 0;
  Real residual = 0.0;
};

/// Workspace with FFT plans and scratch arrays; one per thread.  All solver
/// entry points below share it.
class ScatterOperator {
 public:
  ScatterOperator(const SpectralTables& tables, const MaterialGrid& mats);

  /// y = A s + B t for densities (s, t) given as stacked grids.
  void apply_potentials(const FieldGrid& s, const FieldGrid& t, FieldGrid& y);

  /// Born approximation A S(0,f,g) + B T(0,f,g); equals the equation's
  /// right-hand side.
  FieldGrid born(const FieldGrid& f, const FieldGrid& g);

  /// Full solve by restarted GMRES; throws NoConvergenceError when the
  /// iteration budget is exhausted.
  SolveResult solve(const FieldGrid& f, const FieldGrid& g, const SolveOptions& opts);

  /// Spectral curl of a grid field.
  FieldGrid curl(const FieldGrid& u);

  const SpectralTables& tables() const { return tables_; }

 private:
  void apply_operator(const CVector& in, CVector& out);
  void gather(const CVector& stacked, FieldGrid& fg) const;
  void scatter(const FieldGrid& fg, CVector& stacked) const;

  const SpectralTables& tables_;
  const MaterialGrid& mats_;
  Fft3 fft_;
  std::array<std::vector<Complex>, 3> wa_, wb_, wc_;
};

/// Standalone application of A (k^2 + grad div potential) and B (curl
/// potential) to a density grid; used by the quadrature oracles.
FieldGrid apply_A(const SpectralTables& tables, const FieldGrid& density);
FieldGrid apply_B(const SpectralTables& tables, const FieldGrid& density);

/// One-call forward solve per the module contract.
SolveResult scatter_solve(const LatticeParams& params, const MaterialCoefficients& coeffs,
                          const FieldGrid& f, const FieldGrid& g, const SolveOptions& opts);

/// Rayleigh coefficients of the first two components over Z^2_M, extracted
/// by the discrete plane transform at x3 = +-h.
RayleighSeq4 rayleigh_extract(const LatticeParams& params, const FieldGrid& u);

/// All three components, for flux/consistency tests.
struct RayleighFull {
  int M = 0;
  std::vector<CVec3> plus, minus;
};
RayleighFull rayleigh_extract_full(const LatticeParams& params, const FieldGrid& u);

}  // namespace perifact
