/* config.hpp — run configuration: plain-text `key = value` files, validation
 * of the physical constraints, and the documented key set shared by the CLI
 * and the pipeline. */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "perifact/materials.hpp"
#include "perifact/types.hpp"

namespace perifact {

struct RunConfig {
  // Lattice / measurement.
  Real k = pi;
  Real alpha1 = pi / 2;
  Real alpha2 = pi / 2;
  Real h = 1.0;
  int M = 8;

  // Scatterer.
  std::string geometry = "balls";
  std::string material = "paper";  // "paper" or "custom"
  CVec3 eps_diag = CVec3::Ones();
  CVec3 mu_inv_diag = CVec3::Ones();
  Vec3 xi_diag = Vec3::Zero();

  // Forward solver.
  int solver_n = 32;
  Real solver_tol = 1e-6;
  int solver_restart = 50;
  int solver_max_iterations = 2000;

  // Data.
  Real noise = 0.0;
  std::uint64_t seed = 1;

  // Imaging.
  Real tau = 1e-2;
  int sample_nx = 16, sample_ny = 16, sample_nz = 16;
  Real sample_zmax = 1.0;  // sampling box (-pi,pi)^2 x (-zmax, zmax), cell-centered
  Vec3 p = Vec3(1, 1, 1) / std::sqrt(3.0);
  std::string w_variant = "adjoint";

  // Flags.
  bool force_assumptions = false;
  bool herglotz_weighting = true;
  bool averaged_polarization = false;

  // Paths / misc.
  std::string data_out = "nearfield.nfd";
  std::string image_out = "indicator";
  int threads = 0;
  bool verbose = false;

  /// Throws ValidationError naming the violated constraint.
  void validate() const;

  GeometryKind geometry_kind() const { return geometry_kind_from_name(geometry); }
  MaterialCoefficients make_materials() const;
};

/// Parses a `key = value` file ('#' comments, blank lines allowed); throws
/// ParseError with the key and line number on malformed input.
RunConfig parse_config(const std::string& path);

/// Applies one `key = value` assignment (shared by the file parser and CLI
/// overrides); throws ParseError on unknown keys or bad values.
void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value,
                        int line_number = 0);

/// The desk-scale and full-scale parameter profiles.
RunConfig desk_profile();
RunConfig paper_profile();

void print_config(const RunConfig& config, std::ostream& out);

}  // namespace perifact
