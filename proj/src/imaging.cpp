#include "perifact/imaging.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "perifact/incident.hpp"

namespace perifact {

WKind w_kind_from_name(const std::string& name) {
  if (name == "paper") return WKind::paper;
  if (name == "adjoint") return WKind::adjoint;
  throw ValidationError("unknown W variant: " + name);
}

std::string w_kind_name(WKind kind) { return kind == WKind::paper ? "paper" : "adjoint"; }

CMat4 w_block(const LatticeParams& params, ModeIndex m) {
  const ModeData d = mode_data(params, m);
  const auto [p1, p2] = polarizations(params, m);
  const Complex wsp = d.propagating ? std::exp(-iu * d.beta_m * params.h) : iu;
  const Complex wsm = d.propagating ? iu * std::exp(-iu * d.beta_m * params.h) : iu;
  const Complex c11 = std::conj(p1(0)), c12 = std::conj(p1(1));
  const Complex c21 = std::conj(p2(0)), c22 = std::conj(p2(1));
  CMat4 w;
  w << wsp * c11, wsp * c12, wsp * c11, wsp * c12,
       wsp * c21, wsp * c22, wsp * c21, wsp * c22,
       wsm * c11, wsm * c12, -wsm * c11, -wsm * c12,
       wsm * c21, wsm * c22, -wsm * c21, -wsm * c22;
  w *= 8.0 * pi * pi;
  return w;
}

CMat4 w_block_adjoint(const LatticeParams& params, ModeIndex m) {
  const ModeData d = mode_data(params, m);
  const Real k = params.k;
  const Real a1 = d.alpha_m.x(), a2 = d.alpha_m.y();
  const Complex beta = d.beta_m;
  const Real n1 = std::sqrt(a2 * a2 + std::norm(beta));
  const Real n2 = std::sqrt(a1 * a1 + std::norm(beta));

  // Row vectors contracting (u_1, u_2) into p . u with u_3 eliminated via
  // kappa . u = 0.
  const Complex r11 = a1 * a2 / (beta * n1);
  const Complex r12 = (k * k - a1 * a1) / (beta * n1);
  const Complex r21 = -(k * k - a2 * a2) / (beta * n2);
  const Complex r22 = -a1 * a2 / (beta * n2);

  const Real f = 8.0 * pi * pi;
  Complex wp, wm;  // prefactors of the (+) and (-) coefficient rows
  if (d.propagating) {
    const Complex e = std::exp(-iu * beta * params.h);
    wp = f * e;
    wm = -iu * f * e;
  } else {
    wp = -iu * f;
    wm = iu * f;
  }

  CMat4 w;
  w << wp * r11, wp * r11, wp * r12, wp * r12,
       wm * r11, -wm * r11, wm * r12, -wm * r12,
       wp * r21, wp * r21, wp * r22, wp * r22,
       wm * r21, -wm * r21, wm * r22, -wm * r22;
  return w;
}

CMat4 w_block(const LatticeParams& params, ModeIndex m, WKind kind) {
  return kind == WKind::paper ? w_block(params, m) : w_block_adjoint(params, m);
}

int tuple_slot_to_block_channel(int slot) {
  static constexpr int map[4] = {0, 2, 1, 3};
  return map[slot];
}

CMatrix apply_W(const LatticeParams& params, const CMatrix& matrix, WKind kind) {
  const int M = params.M;
  const int dim = 4 * M * M;
  if (matrix.rows() != dim || matrix.cols() != dim)
    throw DimensionMismatchError("apply_W: matrix must be 4M^2 x 4M^2");

  CMatrix out(dim, dim);
  const auto modes = mode_set(M);
  Eigen::Matrix<Complex, 4, Eigen::Dynamic> rows(4, dim);
  for (int r = 0; r < M * M; ++r) {
    const CMat4 w = w_block(params, modes[static_cast<size_t>(r)], kind);
    for (int slot = 0; slot < 4; ++slot)
      rows.row(slot) = matrix.row(tuple_slot_to_block_channel(slot) * M * M + r);
    rows = (w * rows).eval();
    for (int slot = 0; slot < 4; ++slot)
      out.row(tuple_slot_to_block_channel(slot) * M * M + r) = rows.row(slot);
  }
  return out;
}

RayleighSeq4 apply_W(const LatticeParams& params, const RayleighSeq4& seq, WKind kind) {
  if (seq.M != params.M) throw DimensionMismatchError("apply_W: sequence order mismatch");
  RayleighSeq4 out(seq.M);
  const auto modes = mode_set(seq.M);
  for (size_t r = 0; r < modes.size(); ++r)
    out.a[r] = w_block(params, modes[r], kind) * seq.a[r];
  return out;
}

CMatrix imaginary_part(const CMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatchError("imaginary_part: matrix not square");
  CMatrix b = (a - a.adjoint()) / (2.0 * iu);
  b = ((b + b.adjoint()) / 2.0).eval();
  return b;
}

EigenSystem spectral_decompose(const CMatrix& hermitian, Real tau, bool noisy) {
  if (hermitian.rows() != hermitian.cols())
    throw DimensionMismatchError("spectral_decompose: matrix not square");
  const int n = static_cast<int>(hermitian.rows());
  EigenSystem es;
  es.tau = tau;

  if (!noisy) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian);
    if (solver.info() != Eigen::Success)
      throw DecompositionError("spectral_decompose: eigendecomposition failed");
    // Ascending from Eigen; flip to descending.
    es.lambda.resize(n);
    es.vectors.resize(n, n);
    for (int i = 0; i < n; ++i) {
      es.lambda(i) = solver.eigenvalues()(n - 1 - i);
      es.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
    }
  } else {
    Eigen::BDCSVD<CMatrix> svd(hermitian, Eigen::ComputeThinU);
    if (svd.info() != Eigen::Success)
      throw DecompositionError("spectral_decompose: SVD failed");
    es.lambda = svd.singularValues();
    es.vectors = svd.matrixU();
  }

  es.retained_count = 0;
  for (int i = 0; i < n; ++i)
    if (es.lambda(i) >= tau) ++es.retained_count;
  return es;
}

RayleighSeq4 test_sequence(const LatticeParams& params, const Vec3& z, const Vec3& p) {
  if (std::abs(z.z()) >= params.h)
    throw DomainError("test_sequence: require |z3| < h");
  RayleighSeq4 seq(params.M);
  const auto modes = mode_set(params.M);
  const Real k2 = params.k * params.k;
  for (size_t i = 0; i < modes.size(); ++i) {
    const ModeData d = mode_data(params, modes[i]);
    const Real a1 = d.alpha_m.x(), a2 = d.alpha_m.y();
    const Complex gp = green_rayleigh(params, modes[i], z, Sign::plus);
    const Complex gm = green_rayleigh(params, modes[i], z, Sign::minus);
    const Complex b = d.beta_m;
    seq.a[i](0) = gp * ((k2 - a1 * a1) * p.x() - a1 * a2 * p.y() - a1 * b * p.z());
    seq.a[i](1) = gm * ((k2 - a1 * a1) * p.x() - a1 * a2 * p.y() + a1 * b * p.z());
    seq.a[i](2) = gp * (-a1 * a2 * p.x() + (k2 - a2 * a2) * p.y() - a2 * b * p.z());
    seq.a[i](3) = gm * (-a1 * a2 * p.x() + (k2 - a2 * a2) * p.y() + a2 * b * p.z());
  }
  return seq;
}

Real picard_indicator(const EigenSystem& eigsys, const CVector& w_psi) {
  if (eigsys.retained_count < 1)
    throw EmptySpectrumError("picard_indicator: no retained spectral terms");
  if (eigsys.vectors.rows() != w_psi.size())
    throw DimensionMismatchError("picard_indicator: vector length mismatch");
  Real sum = 0.0;
  for (int n = 0; n < eigsys.retained_count; ++n) {
    const Complex an = eigsys.vectors.col(n).dot(w_psi);
    sum += std::norm(an) / eigsys.lambda(n);
  }
  if (!std::isfinite(sum) || sum == 0.0) return 0.0;
  return 1.0 / sum;
}

Vec3 GridSpec::node(int ix, int iy, int iz) const {
  const Vec3 d = spacing();
  return Vec3(lo.x() + (ix + 0.5) * d.x(), lo.y() + (iy + 0.5) * d.y(),
              lo.z() + (iz + 0.5) * d.z());
}

Vec3 GridSpec::spacing() const {
  return Vec3((hi.x() - lo.x()) / nx, (hi.y() - lo.y()) / ny, (hi.z() - lo.z()) / nz);
}

Real IndicatorGrid::max_value() const {
  Real m = 0.0;
  for (Real v : values) m = std::max(m, v);
  return m;
}

Vec3 IndicatorGrid::argmax() const {
  size_t best = 0;
  for (size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  const size_t ix = best % static_cast<size_t>(spec.nx);
  const size_t iy = (best / static_cast<size_t>(spec.nx)) % static_cast<size_t>(spec.ny);
  const size_t iz = best / (static_cast<size_t>(spec.nx) * spec.ny);
  return spec.node(static_cast<int>(ix), static_cast<int>(iy), static_cast<int>(iz));
}

IndicatorGrid sweep_grid(const LatticeParams& params, const EigenSystem& eigsys,
                         const GridSpec& spec, const Vec3& p, WKind kind, int threads) {
  if (spec.nx < 1 || spec.ny < 1 || spec.nz < 1)
    throw ValidationError("sweep_grid: counts must be positive");
  IndicatorGrid grid;
  grid.spec = spec;
  grid.values.assign(static_cast<size_t>(spec.size()), 0.0);
  grid.M = params.M;
  grid.k = params.k;
  grid.alpha = params.alpha;
  grid.tau = eigsys.tau;
  grid.p = p;
  grid.retained = eigsys.retained_count;

  int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (nthreads < 1) nthreads = 1;

  std::atomic<int> next{0};
  const int total = spec.size();
  auto worker = [&]() {
    while (true) {
      const int idx = next.fetch_add(1);
      if (idx >= total) return;
      const int ix = idx % spec.nx;
      const int iy = (idx / spec.nx) % spec.ny;
      const int iz = idx / (spec.nx * spec.ny);
      const Vec3 z = spec.node(ix, iy, iz);
      const RayleighSeq4 psi = test_sequence(params, z, p);
      const CVector w_psi = to_block_vector(apply_W(params, psi, kind));
      grid.values[grid.spec.index(ix, iy, iz)] = picard_indicator(eigsys, w_psi);
    }
  };
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return grid;
}

}  // namespace perifact
