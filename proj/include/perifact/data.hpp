/* data.hpp — assembly of the discrete near-field data matrix (one forward
 * solve per incident wave), the multiplicative-Frobenius noise model, and the
 * on-disk matrix format.
 *
 * Block layout of the 4M^2 x 4M^2 matrix:
 *   row blocks (receiver channel):   (+,1), (+,2), (-,1), (-,2)
 *   column blocks (incident wave):   (1,+), (1,-), (2,+), (2,-)
 * with modes inside each block in the canonical linear order (m1 slowest,
 * indices -M/2+1 .. M/2).  Columns hold raw plane-wave responses; the
 * superposition weights 1/(beta_m w_m^{+-}) are not folded in (they can be
 * applied column-wise downstream). */

#pragma once

#include <cstdint>
#include <string>

#include "perifact/forward.hpp"
#include "perifact/incident.hpp"
#include "perifact/lattice.hpp"
#include "perifact/materials.hpp"
#include "perifact/types.hpp"

namespace perifact {

/// Receiver channel (row block) order.
enum class RowChannel { plus_1 = 0, plus_2 = 1, minus_1 = 2, minus_2 = 3 };
/// Incident wave (column block) order.
enum class ColChannel { l1_plus = 0, l1_minus = 1, l2_plus = 2, l2_minus = 3 };

inline int row_index(int M, RowChannel ch, int mode_linear) {
  return static_cast<int>(ch) * M * M + mode_linear;
}
inline int col_index(int M, ColChannel ch, int mode_linear) {
  return static_cast<int>(ch) * M * M + mode_linear;
}

PlaneWaveLabel column_label(int M, int col);

/// Scatter a per-mode 4-tuple sequence into a block-layout column vector.
CVector to_block_vector(const RayleighSeq4& seq);

struct NearFieldMatrix {
  CMatrix entries;          // 4 M^2 x 4 M^2
  Real k = 0.0;
  Vec2 alpha = Vec2::Zero();
  Real h = 0.0;
  int M = 0;
  Real noise_level = 0.0;

  LatticeParams params() const { return LatticeParams(k, alpha, h, M); }
  int dim() const { return 4 * M * M; }
};

struct AssemblyOptions {
  int n1 = 32, n2 = 32, n3 = 32;  // collocation counts
  SolveOptions solve;
  int threads = 0;                // 0 = hardware concurrency
  bool verbose = false;
};

/// Solves the forward problem for all 4 M^2 incident plane waves and collects
/// the Rayleigh responses per the block layout above.  Solver failures abort
/// the assembly, annotated with the offending incident label.
NearFieldMatrix assemble_near_field(const LatticeParams& params,
                                    const MaterialCoefficients& coeffs,
                                    const AssemblyOptions& opts);

/// N + delta * (X/||X||_F) * ||N||_F with Re X, Im X iid uniform on (-1,1),
/// generated from the seed; deterministic for a fixed seed.
NearFieldMatrix add_noise(const NearFieldMatrix& matrix, Real delta, std::uint64_t seed);

/// Divides every column by beta_j w_j^{+-} of its incident wave, turning raw
/// plane-wave responses into the matrix of the near-field operator on
/// coefficient sequences.
NearFieldMatrix apply_herglotz_weighting(const NearFieldMatrix& matrix);

/// Versioned file format: text header (magic, version, M, k, alpha, h, noise
/// level, layout statement) followed by little-endian binary (re, im) f64
/// pairs, row-major.  Round trips are bit-exact.
void save(const NearFieldMatrix& matrix, const std::string& path);
NearFieldMatrix load(const std::string& path);

}  // namespace perifact
