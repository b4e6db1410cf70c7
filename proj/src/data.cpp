#include "perifact/data.hpp"

#include <atomic>
#include <bit>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

namespace perifact {

static_assert(std::endian::native == std::endian::little,
              "matrix files are little-endian; big-endian hosts unsupported");

PlaneWaveLabel column_label(int M, int col) {
  const int block = col / (M * M);
  const int mode_linear = col % (M * M);
  const int m1 = mode_linear / M - M / 2 + 1;
  const int m2 = mode_linear % M - M / 2 + 1;
  PlaneWaveLabel label;
  label.m = {m1, m2};
  label.l = block < 2 ? 1 : 2;
  label.sign = (block % 2 == 0) ? Sign::plus : Sign::minus;
  return label;
}

CVector to_block_vector(const RayleighSeq4& seq) {
  const int M = seq.M;
  CVector out = CVector::Zero(4 * M * M);
  for (int r = 0; r < M * M; ++r) {
    out(row_index(M, RowChannel::plus_1, r)) = seq.a[static_cast<size_t>(r)](0);
    out(row_index(M, RowChannel::minus_1, r)) = seq.a[static_cast<size_t>(r)](1);
    out(row_index(M, RowChannel::plus_2, r)) = seq.a[static_cast<size_t>(r)](2);
    out(row_index(M, RowChannel::minus_2, r)) = seq.a[static_cast<size_t>(r)](3);
  }
  return out;
}

NearFieldMatrix assemble_near_field(const LatticeParams& params,
                                    const MaterialCoefficients& coeffs,
                                    const AssemblyOptions& opts) {
  const int M = params.M;
  const int dim = 4 * M * M;
  NearFieldMatrix nf;
  nf.entries = CMatrix::Zero(dim, dim);
  nf.k = params.k;
  nf.alpha = params.alpha;
  nf.h = params.h;
  nf.M = M;
  nf.noise_level = 0.0;

  const SolverGrid grid = SolverGrid::for_params(params, opts.n1, opts.n2, opts.n3);
  const SpectralTables tables(params, grid, coeffs.geometry.bounding_height);
  const MaterialGrid mats = sample_materials(params, coeffs, grid);

  int nthreads = opts.threads > 0 ? opts.threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
  if (nthreads < 1) nthreads = 1;
  nthreads = std::min(nthreads, dim);

  std::atomic<int> next{0};
  std::mutex mtx;
  std::exception_ptr first_error;
  std::vector<int> iteration_log(static_cast<size_t>(dim), 0);

  auto worker = [&]() {
    ScatterOperator op(tables, mats);
    while (true) {
      const int col = next.fetch_add(1);
      if (col >= dim) return;
      {
        std::lock_guard<std::mutex> lock(mtx);
        if (first_error) return;
      }
      const PlaneWaveLabel label = column_label(M, col);
      try {
        auto [g, f] = sample_plane_wave(params, label, grid);
        const SolveResult sol = op.solve(f, g, opts.solve);
        const RayleighSeq4 seq = rayleigh_extract(params, sol.u);
        const CVector colv = to_block_vector(seq);
        std::lock_guard<std::mutex> lock(mtx);
        nf.entries.col(col) = colv;
        iteration_log[static_cast<size_t>(col)] = sol.iterations;
      } catch (const NoConvergenceError& e) {
        std::lock_guard<std::mutex> lock(mtx);
        if (!first_error) {
          std::ostringstream oss;
          oss << e.what() << " [incident wave l=" << label.l
              << (label.sign == Sign::plus ? "+" : "-") << " m=(" << label.m.m1 << ","
              << label.m.m2 << ")]";
          first_error = std::make_exception_ptr(NoConvergenceError(oss.str()));
        }
        return;
      } catch (...) {
        std::lock_guard<std::mutex> lock(mtx);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  if (opts.verbose) {
    long total = 0;
    int worst = 0;
    for (int it : iteration_log) {
      total += it;
      worst = std::max(worst, it);
    }
    std::fprintf(stderr, "assemble_near_field: %d columns, mean %.1f / max %d iterations\n",
                 dim, static_cast<double>(total) / dim, worst);
  }
  return nf;
}

namespace {

// Uniform on [-1, 1) from the raw 64-bit stream; fixed mapping so the noise
// matrix is identical across platforms for a given seed.
Real uniform_pm1(std::mt19937_64& rng) {
  const std::uint64_t r = rng();
  const Real u = static_cast<Real>(r >> 11) * 0x1.0p-53;  // [0,1)
  return 2.0 * u - 1.0;
}

}  // namespace

NearFieldMatrix add_noise(const NearFieldMatrix& matrix, Real delta, std::uint64_t seed) {
  if (delta < 0.0) throw ValidationError("add_noise: delta must be nonnegative");
  NearFieldMatrix out = matrix;
  if (delta == 0.0) return out;

  const int dim = matrix.dim();
  std::mt19937_64 rng(seed);
  CMatrix X(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      const Real re = uniform_pm1(rng);
      const Real im = uniform_pm1(rng);
      X(r, c) = Complex(re, im);
    }
  }
  out.entries = matrix.entries + (delta * matrix.entries.norm() / X.norm()) * X;
  out.noise_level = delta;
  return out;
}

NearFieldMatrix apply_herglotz_weighting(const NearFieldMatrix& matrix) {
  NearFieldMatrix out = matrix;
  const LatticeParams params = matrix.params();
  const int dim = matrix.dim();
  for (int c = 0; c < dim; ++c) {
    const PlaneWaveLabel label = column_label(matrix.M, c);
    const ModeData d = mode_data(params, label.m);
    const auto [wp, wm] = herglotz_weights(params, label.m);
    const Complex w = label.sign == Sign::plus ? wp : wm;
    out.entries.col(c) /= d.beta_m * w;
  }
  return out;
}

namespace {

constexpr const char* kMagic = "PERIFACT-NFD";
constexpr int kVersion = 1;

std::string format_real(Real v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void save(const NearFieldMatrix& matrix, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("save: cannot open " + path);
  out << kMagic << " " << kVersion << "\n";
  out << "M " << matrix.M << "\n";
  out << "k " << format_real(matrix.k) << "\n";
  out << "alpha " << format_real(matrix.alpha.x()) << " " << format_real(matrix.alpha.y())
      << "\n";
  out << "h " << format_real(matrix.h) << "\n";
  out << "noise " << format_real(matrix.noise_level) << "\n";
  out << "modes m1-major -M/2+1..M/2; rows (+,1)(+,2)(-,1)(-,2); cols (1,+)(1,-)(2,+)(2,-)\n";
  out << "data little-endian f64 (re,im) row-major\n";
  out << "DATA\n";
  const int dim = matrix.dim();
  std::vector<double> row(static_cast<size_t>(dim) * 2);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      row[static_cast<size_t>(c) * 2] = matrix.entries(r, c).real();
      row[static_cast<size_t>(c) * 2 + 1] = matrix.entries(r, c).imag();
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(double)));
  }
  if (!out) throw IoError("save: write failed for " + path);
}

NearFieldMatrix load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("load: cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw FormatError("load: empty file");
  {
    std::istringstream hs(line);
    std::string magic;
    int version = -1;
    hs >> magic >> version;
    if (magic != kMagic) throw FormatError("load: bad magic '" + magic + "'");
    if (version != kVersion)
      throw FormatError("load: unsupported format version " + std::to_string(version));
  }

  NearFieldMatrix nf;
  bool have_M = false;
  while (std::getline(in, line)) {
    if (line == "DATA") break;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "M") {
      ls >> nf.M;
      have_M = true;
    } else if (key == "k") {
      ls >> nf.k;
    } else if (key == "alpha") {
      double a1 = 0, a2 = 0;
      ls >> a1 >> a2;
      nf.alpha = Vec2(a1, a2);
    } else if (key == "h") {
      ls >> nf.h;
    } else if (key == "noise") {
      ls >> nf.noise_level;
    } else if (key == "modes" || key == "data") {
      // layout statements, informational
    } else {
      throw FormatError("load: unknown header line '" + line + "'");
    }
    if (!ls && key != "modes" && key != "data")
      throw FormatError("load: malformed header line '" + line + "'");
  }
  if (!have_M || nf.M < 2) throw FormatError("load: missing or invalid M");

  const int dim = 4 * nf.M * nf.M;
  nf.entries.resize(dim, dim);
  std::vector<double> row(static_cast<size_t>(dim) * 2);
  for (int r = 0; r < dim; ++r) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(row.size() * sizeof(double)))
      throw TruncatedFileError("load: body shorter than header dimensions imply");
    for (int c = 0; c < dim; ++c)
      nf.entries(r, c) = Complex(row[static_cast<size_t>(c) * 2], row[static_cast<size_t>(c) * 2 + 1]);
  }
  return nf;
}

}  // namespace perifact
