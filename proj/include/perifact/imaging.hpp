/* imaging.hpp — factorization-method inverse solver: the per-mode W blocks,
 * the Hermitian part Im(WN), its regularized spectral decomposition, the
 * point test sequences, and the Picard indicator swept over a sampling grid.
 *
 * Two W variants are provided.  WKind::paper is the published 4x4 display
 * (conjugated polarization components with the w*+- weights).  WKind::adjoint
 * is the block that makes W exactly the left factor of the adjoint of the
 * weighted superposition operator acting on two-component Rayleigh data; it
 * is derived by eliminating the third field component through the
 * divergence-free relation and is validated against a quadrature oracle in
 * the test suite.  Only the adjoint variant makes Im(WN) provably positive
 * on weighted data, so it is the pipeline default. */

#pragma once

#include <string>
#include <vector>

#include "perifact/data.hpp"
#include "perifact/lattice.hpp"
#include "perifact/types.hpp"

namespace perifact {

enum class WKind { paper, adjoint };

WKind w_kind_from_name(const std::string& name);
std::string w_kind_name(WKind kind);

/// 4x4 per-mode block acting on tuples (a^+_1, a^-_1, a^+_2, a^-_2).
CMat4 w_block(const LatticeParams& params, ModeIndex m);          // published display
CMat4 w_block_adjoint(const LatticeParams& params, ModeIndex m);  // exact adjoint factor
CMat4 w_block(const LatticeParams& params, ModeIndex m, WKind kind);

/// Row channel holding tuple slot s of a mode (slots (+1), (-1), (+2), (-2)
/// map to row blocks 0, 2, 1, 3).  Involutive.
int tuple_slot_to_block_channel(int slot);

/// Left-multiplication by the block-diagonal W in the documented mode order;
/// rows are permuted from the Eq-block layout to per-mode tuples, multiplied,
/// and permuted back.
CMatrix apply_W(const LatticeParams& params, const CMatrix& matrix, WKind kind);

/// Apply the per-mode blocks to a 4-tuple sequence (test sequences).
RayleighSeq4 apply_W(const LatticeParams& params, const RayleighSeq4& seq, WKind kind);

/// (A - A^H) / (2i), symmetrized so the result is exactly Hermitian.
CMatrix imaginary_part(const CMatrix& a);

/// Spectral data of Im(WN): eigenvalues descending with their vectors, or for
/// noisy data singular values with left singular vectors.  The first
/// retained_count entries meet the truncation threshold; the full spectrum is
/// kept for diagnostics.
struct EigenSystem {
  RVector lambda;       // descending
  CMatrix vectors;      // column n pairs with lambda(n)
  Real tau = 0.0;
  int retained_count = 0;
};

EigenSystem spectral_decompose(const CMatrix& hermitian, Real tau, bool noisy);

/// Rayleigh 4-tuples of the first two components of the point field
/// k^2 G(., z) p, in closed form through the Green Rayleigh coefficients.
RayleighSeq4 test_sequence(const LatticeParams& params, const Vec3& z, const Vec3& p);

/// Picard value [ sum_n |<w_psi, phi_n>|^2 / lambda_n ]^{-1} over the
/// retained spectrum; 0 when the sum overflows or w_psi has no projection.
Real picard_indicator(const EigenSystem& eigsys, const CVector& w_psi);

/// Cell-centered sampling grid.
struct GridSpec {
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Zero();
  int nx = 0, ny = 0, nz = 0;

  int size() const { return nx * ny * nz; }
  /// Node (ix, iy, iz); values are stored x fastest, then y, then z.
  Vec3 node(int ix, int iy, int iz) const;
  size_t index(int ix, int iy, int iz) const {
    return (static_cast<size_t>(iz) * ny + iy) * nx + ix;
  }
  Vec3 spacing() const;
};

struct IndicatorGrid {
  GridSpec spec;
  std::vector<Real> values;  // x fastest
  // Run metadata.
  int M = 0;
  Real k = 0.0;
  Vec2 alpha = Vec2::Zero();
  Real tau = 0.0;
  Vec3 p = Vec3::Zero();
  Real noise_level = 0.0;
  int retained = 0;

  Real max_value() const;
  Vec3 argmax() const;
};

/// Indicator values over the grid: test sequence -> per-mode W blocks ->
/// Picard reciprocal sum; deterministic, nodes evaluated concurrently.
IndicatorGrid sweep_grid(const LatticeParams& params, const EigenSystem& eigsys,
                         const GridSpec& spec, const Vec3& p, WKind kind, int threads = 0);

}  // namespace perifact
