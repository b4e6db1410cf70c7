#include "perifact/pipeline.hpp"

#include <ostream>

#include "perifact/output.hpp"

namespace perifact {

namespace {

LatticeParams lattice_of(const RunConfig& c) {
  return LatticeParams(c.k, Vec2(c.alpha1, c.alpha2), c.h, c.M);
}

}  // namespace

AssumptionReport pipeline_check(const RunConfig& config, std::ostream& log) {
  config.validate();
  const LatticeParams params = lattice_of(config);
  const MaterialCoefficients coeffs = config.make_materials();
  const AssumptionReport rep =
      check_assumptions(coeffs, default_sample_points(coeffs.geometry));

  log << "material check: C1 = " << rep.C1 << ", C2 = " << rep.C2
      << ", frob_bound = " << rep.frob_bound << ", gamma1 = " << rep.gamma1
      << ", gamma2 = " << rep.gamma2 << "\n";
  log << "  coercivity condition: " << (rep.passes_a2 ? "pass" : "FAIL") << "\n";
  log << "  invertibility condition: " << (rep.passes_a1 ? "pass" : "FAIL") << "\n";
  log << "propagating modes: " << count_propagating(params) << " of " << config.M * config.M
      << "\n";

  if (!rep.passes_a2 && !config.force_assumptions)
    throw ValidationError(
        "material coefficients fail the coercivity check; pass force_assumptions to proceed");
  if (!rep.passes_a2 && config.force_assumptions)
    log << "warning: coercivity check failed, continuing because force_assumptions is set;"
           " the indicator has no theoretical backing for these coefficients\n";
  return rep;
}

NearFieldMatrix pipeline_generate(const RunConfig& config, std::ostream& log) {
  pipeline_check(config, log);
  const LatticeParams params = lattice_of(config);
  const MaterialCoefficients coeffs = config.make_materials();

  AssemblyOptions opts;
  opts.n1 = opts.n2 = opts.n3 = config.solver_n;
  opts.solve.tol = config.solver_tol;
  opts.solve.restart = config.solver_restart;
  opts.solve.max_iterations = config.solver_max_iterations;
  opts.threads = config.threads;
  opts.verbose = config.verbose;

  log << "assembling near-field matrix: " << 4 * config.M * config.M << " incident waves on a "
      << config.solver_n << "^3 grid\n";
  NearFieldMatrix nf = assemble_near_field(params, coeffs, opts);
  if (config.noise > 0.0) {
    nf = add_noise(nf, config.noise, config.seed);
    log << "noise applied: delta = " << config.noise << ", seed = " << config.seed << "\n";
  }
  save(nf, config.data_out);
  log << "data written to " << config.data_out << "\n";
  return nf;
}

NearFieldMatrix pipeline_noise(const RunConfig& config, const std::string& in_path,
                               const std::string& out_path, std::ostream& log) {
  NearFieldMatrix nf = load(in_path);
  nf = add_noise(nf, config.noise, config.seed);
  save(nf, out_path);
  log << "noise applied: delta = " << config.noise << ", seed = " << config.seed << " -> "
      << out_path << "\n";
  return nf;
}

IndicatorGrid pipeline_image(const RunConfig& config, const NearFieldMatrix& data,
                             std::ostream& log) {
  config.validate();
  const LatticeParams params = data.params();
  const WKind kind = w_kind_from_name(config.w_variant);

  const NearFieldMatrix weighted =
      config.herglotz_weighting ? apply_herglotz_weighting(data) : data;
  const CMatrix wn = apply_W(params, weighted.entries, kind);
  const CMatrix im_wn = imaginary_part(wn);
  const bool noisy = data.noise_level > 0.0;
  const EigenSystem eigsys = spectral_decompose(im_wn, config.tau, noisy);
  log << "spectral decomposition (" << (noisy ? "svd" : "eig") << "): retained "
      << eigsys.retained_count << " of " << eigsys.lambda.size() << " terms at tau = "
      << config.tau << "\n";
  if (eigsys.retained_count == 0)
    throw EmptySpectrumError("image: no spectral terms at or above tau");

  GridSpec spec;
  spec.lo = Vec3(-pi, -pi, -config.sample_zmax);
  spec.hi = Vec3(pi, pi, config.sample_zmax);
  spec.nx = config.sample_nx;
  spec.ny = config.sample_ny;
  spec.nz = config.sample_nz;

  IndicatorGrid grid;
  if (config.averaged_polarization) {
    // Sum of indicators over the three axis polarizations.
    for (int axis = 0; axis < 3; ++axis) {
      Vec3 p = Vec3::Zero();
      p(axis) = 1.0;
      IndicatorGrid part = sweep_grid(params, eigsys, spec, p, kind, config.threads);
      if (axis == 0) {
        grid = part;
      } else {
        for (size_t i = 0; i < grid.values.size(); ++i) grid.values[i] += part.values[i];
      }
    }
    grid.p = Vec3::Zero();
  } else {
    grid = sweep_grid(params, eigsys, spec, config.p, kind, config.threads);
  }
  grid.noise_level = data.noise_level;
  log << "indicator: max " << grid.max_value() << " at ("
      << grid.argmax().x() << ", " << grid.argmax().y() << ", " << grid.argmax().z()
      << "), isovalue " << grid.max_value() / 3.0 << "\n";
  return grid;
}

IndicatorGrid pipeline_run(const RunConfig& config, std::ostream& log) {
  const NearFieldMatrix nf = pipeline_generate(config, log);
  IndicatorGrid grid = pipeline_image(config, nf, log);
  write_outputs(grid, config.image_out);
  log << "indicator written to " << config.image_out << ".{vtk,csv} and "
      << config.image_out << "_summary.txt\n";
  return grid;
}

}  // namespace perifact
