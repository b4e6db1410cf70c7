#include "perifact/lattice.hpp"

#include <cmath>

namespace perifact {

namespace {

constexpr Real wood_guard_rel = 1e-12;

Complex beta_of(Real k, const Vec3& alpha_m) {
  const Real a2 = alpha_m.squaredNorm();
  const Real k2 = k * k;
  if (a2 <= k2) return Complex(std::sqrt(k2 - a2), 0.0);
  return Complex(0.0, std::sqrt(a2 - k2));
}

}  // namespace

LatticeParams::LatticeParams(Real k_, Vec2 alpha_, Real h_, int M_)
    : k(k_), alpha(alpha_), h(h_), M(M_) {
  if (!(k > 0.0)) throw ValidationError("LatticeParams: k must be positive");
  if (!(h > 0.0)) throw ValidationError("LatticeParams: h must be positive");
  if (M < 2 || M % 2 != 0) throw ValidationError("LatticeParams: M must be even and >= 2");
  // No Wood's anomaly on the truncated set.
  for (int m1 = -M / 2 + 1; m1 <= M / 2; ++m1) {
    for (int m2 = -M / 2 + 1; m2 <= M / 2; ++m2) {
      const Vec3 am(alpha.x() + m1, alpha.y() + m2, 0.0);
      if (std::abs(beta_of(k, am)) < wood_guard_rel * k) {
        throw WoodAnomalyError("LatticeParams: Wood's anomaly at mode (" +
                               std::to_string(m1) + "," + std::to_string(m2) + ")");
      }
    }
  }
}

std::vector<ModeIndex> mode_set(int M) {
  std::vector<ModeIndex> out;
  out.reserve(static_cast<size_t>(M) * M);
  for (int m1 = -M / 2 + 1; m1 <= M / 2; ++m1)
    for (int m2 = -M / 2 + 1; m2 <= M / 2; ++m2)
      out.push_back({m1, m2});
  return out;
}

int mode_linear_index(int M, ModeIndex m) {
  return (m.m1 + M / 2 - 1) * M + (m.m2 + M / 2 - 1);
}

bool in_mode_set(int M, ModeIndex m) {
  return m.m1 >= -M / 2 + 1 && m.m1 <= M / 2 && m.m2 >= -M / 2 + 1 && m.m2 <= M / 2;
}

ModeData mode_data(const LatticeParams& params, ModeIndex m) {
  ModeData d;
  d.alpha_m = Vec3(params.alpha.x() + m.m1, params.alpha.y() + m.m2, 0.0);
  d.beta_m = beta_of(params.k, d.alpha_m);
  d.propagating = d.alpha_m.squaredNorm() <= params.k * params.k;
  if (std::abs(d.beta_m) < wood_guard_rel * params.k) {
    throw WoodAnomalyError("mode_data: Wood's anomaly at mode (" + std::to_string(m.m1) +
                           "," + std::to_string(m.m2) + ")");
  }
  return d;
}

int count_propagating(const LatticeParams& params) {
  int count = 0;
  const Real k2 = params.k * params.k;
  for (const ModeIndex& m : mode_set(params.M)) {
    const Vec3 am(params.alpha.x() + m.m1, params.alpha.y() + m.m2, 0.0);
    if (am.squaredNorm() <= k2) ++count;
  }
  return count;
}

int default_green_truncation(const LatticeParams& params) { return 4 * params.M; }

Complex green_eval(const LatticeParams& params, const Vec3& x, int N) {
  if (x.z() == 0.0) throw DomainError("green_eval: x3 must be nonzero");
  const Real az = std::abs(x.z());
  Complex sum = 0.0;
  for (int m1 = -N; m1 <= N; ++m1) {
    for (int m2 = -N; m2 <= N; ++m2) {
      const Real a1 = params.alpha.x() + m1;
      const Real a2 = params.alpha.y() + m2;
      const Complex beta = beta_of(params.k, Vec3(a1, a2, 0.0));
      const Complex phase = iu * (a1 * x.x() + a2 * x.y()) + iu * beta * az;
      sum += std::exp(phase) / beta;
    }
  }
  return iu / (8.0 * pi * pi) * sum;
}

Complex green_eval(const LatticeParams& params, const Vec3& x) {
  return green_eval(params, x, default_green_truncation(params));
}

Complex green_rayleigh(const LatticeParams& params, ModeIndex m, const Vec3& z, Sign sign) {
  if (std::abs(z.z()) >= params.h)
    throw DomainError("green_rayleigh: require |z3| < h");
  const ModeData d = mode_data(params, m);
  const Real az = d.alpha_m.x() * z.x() + d.alpha_m.y() * z.y();
  const Real zterm = sign == Sign::plus ? params.h - z.z() : params.h + z.z();
  return iu / (8.0 * pi * pi * d.beta_m) * std::exp(-iu * az + iu * d.beta_m * zterm);
}

}  // namespace perifact
