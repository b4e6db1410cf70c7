#include "perifact/materials.hpp"

#include <cmath>

namespace perifact {

namespace {

bool in_ball(const Vec3& x, Real cx, Real cy, Real r) {
  const Real dx = x.x() - cx, dy = x.y() - cy;
  return dx * dx + dy * dy + x.z() * x.z() < r * r;
}

Real min_eig_sym(const Mat3& s) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(s);
  return es.eigenvalues().minCoeff();
}

}  // namespace

GeometryKind geometry_kind_from_name(const std::string& name) {
  if (name == "balls") return GeometryKind::balls;
  if (name == "bars") return GeometryKind::bars;
  if (name == "cubes") return GeometryKind::cubes;
  if (name == "strip_with_holes") return GeometryKind::strip_with_holes;
  throw ValidationError("unknown geometry preset: " + name);
}

std::string geometry_kind_name(GeometryKind kind) {
  switch (kind) {
    case GeometryKind::balls: return "balls";
    case GeometryKind::bars: return "bars";
    case GeometryKind::cubes: return "cubes";
    case GeometryKind::strip_with_holes: return "strip_with_holes";
  }
  return "?";
}

Geometry preset_geometry(GeometryKind kind) {
  Geometry g;
  g.name = geometry_kind_name(kind);
  switch (kind) {
    case GeometryKind::balls: {
      const Real r = 0.6, c = pi / 2;
      g.inside = [r, c](const Vec3& x) {
        return in_ball(x, c, c, r) || in_ball(x, -c, c, r) || in_ball(x, c, -c, r) ||
               in_ball(x, -c, -c, r);
      };
      g.bounding_height = r;
      break;
    }
    case GeometryKind::bars: {
      const Real r = pi / 6;
      g.inside = [r](const Vec3& x) {
        auto bar = [&](Real cx) {
          const Real dx = x.x() - cx;
          return dx * dx + x.z() * x.z() < r * r;
        };
        return bar(0.0) || bar(pi) || bar(-pi);
      };
      g.bounding_height = r;
      break;
    }
    case GeometryKind::cubes: {
      g.inside = [](const Vec3& x) {
        return std::abs(x.x()) < pi / 2 && std::abs(x.y()) < pi / 2 && std::abs(x.z()) < 0.3;
      };
      g.bounding_height = 0.3;
      break;
    }
    case GeometryKind::strip_with_holes: {
      g.inside = [](const Vec3& x) {
        return x.x() * x.x() + x.y() * x.y() > (pi / 2) * (pi / 2) && std::abs(x.z()) < 0.3;
      };
      g.bounding_height = 0.3;
      break;
    }
  }
  return g;
}

MaterialCoefficients diagonal_materials(const Geometry& geometry, const CVec3& eps_diag,
                                        const CVec3& mu_inv_diag, const Vec3& xi_diag) {
  MaterialCoefficients mc;
  mc.geometry = geometry;
  auto inside = geometry.inside;
  mc.eps_r = [inside, eps_diag](const Vec3& x) -> CMat3 {
    return inside(x) ? CMat3(eps_diag.asDiagonal()) : CMat3(CMat3::Identity());
  };
  mc.mu_r_inv = [inside, mu_inv_diag](const Vec3& x) -> CMat3 {
    return inside(x) ? CMat3(mu_inv_diag.asDiagonal()) : CMat3(CMat3::Identity());
  };
  mc.xi = [inside, xi_diag](const Vec3& x) -> Mat3 {
    return inside(x) ? Mat3(xi_diag.asDiagonal()) : Mat3(Mat3::Zero());
  };
  return mc;
}

MaterialCoefficients preset_materials(const Geometry& geometry) {
  const CVec3 eps(Complex(1, 0.75), Complex(1, 0.9), Complex(1, 0.8));
  const CVec3 mu_inv(Complex(1, -0.7), Complex(1, -1.0), Complex(1, -0.9));
  const Vec3 xi(0.01, 0.02, 0.05);
  return diagonal_materials(geometry, eps, mu_inv, xi);
}

Contrasts contrasts(const MaterialCoefficients& coeffs) {
  Contrasts c;
  auto eps = coeffs.eps_r;
  auto mu_inv = coeffs.mu_r_inv;
  c.P = [eps](const Vec3& x) -> CMat3 { return eps(x) - CMat3::Identity(); };
  c.Q = [mu_inv](const Vec3& x) -> CMat3 { return CMat3::Identity() - mu_inv(x); };
  return c;
}

AssumptionReport check_assumptions(const MaterialCoefficients& coeffs,
                                   const std::vector<Vec3>& sample_points) {
  if (sample_points.empty())
    throw EmptySampleSetError("check_assumptions: sample set is empty");

  AssumptionReport r;
  bool first = true;
  // The real-part constants hold almost everywhere, vacuum included.
  r.gamma1 = 1.0;
  r.gamma2 = 1.0;
  for (const Vec3& x : sample_points) {
    const CMat3 mu_inv = coeffs.mu_r_inv(x);
    const CMat3 eps = coeffs.eps_r(x);
    const Mat3 xi = coeffs.xi(x);
    const CMat3 mu_xi = mu_inv * xi.cast<Complex>();
    const CMat3 eps_eff = eps - xi.cast<Complex>() * mu_xi;

    const Real c1 = min_eig_sym(Mat3(-mu_inv.imag()));
    const Real c2 = min_eig_sym(Mat3(eps_eff.imag()));
    const Real fr = mu_xi.norm();

    if (first) {
      r.C1 = c1;
      r.C2 = c2;
      r.frob_bound = fr;
      first = false;
    } else {
      r.C1 = std::min(r.C1, c1);
      r.C2 = std::min(r.C2, c2);
      r.frob_bound = std::max(r.frob_bound, fr);
    }
    r.gamma1 = std::min(r.gamma1, min_eig_sym(Mat3(mu_inv.real())));
    r.gamma2 = std::min(r.gamma2, min_eig_sym(Mat3(eps_eff.real())));
  }

  r.passes_a1 = r.gamma1 > 0.0 && r.gamma2 > 0.0 && r.frob_bound < r.gamma1 * r.gamma2;
  r.passes_a2 =
      r.C1 > 0.0 && r.C2 > 0.0 && 0.5 * (r.frob_bound * r.frob_bound + 1.0) <= std::min(r.C1, r.C2);
  return r;
}

std::vector<Vec3> default_sample_points(const Geometry& geometry) {
  // One representative interior point per preset; fall back to a scan if the
  // geometry is custom.
  const std::vector<Vec3> candidates = {
      {pi / 2, pi / 2, 0.0}, {0.0, 0.0, 0.0}, {0.0, pi / 2, 0.0},
      {pi * 0.9, 0.0, 0.0},  {pi / 2, 0.0, 0.0}};
  for (const Vec3& c : candidates)
    if (geometry.inside(c)) return {c};
  for (Real x = -pi; x < pi; x += pi / 16)
    for (Real y = -pi; y < pi; y += pi / 16)
      for (Real z = -0.9; z < 0.9; z += 0.1)
        if (geometry.inside({x, y, z})) return {{x, y, z}};
  throw EmptySampleSetError("default_sample_points: no interior point found");
}

}  // namespace perifact
