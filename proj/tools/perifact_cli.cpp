/* perifact_cli.cpp — command-line front end.
 *
 * Subcommands: check, generate, noise, image, run.  Parameters come from an
 * optional `key = value` config file and are overridable per flag.  Exit
 * codes: 0 success, 2 validation/parse failure, 3 solver failure, 4 I/O or
 * file-format failure. */

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "perifact/output.hpp"
#include "perifact/pipeline.hpp"

using namespace perifact;

namespace {

struct CliState {
  std::string config_path;
  bool paper_scale = false;
  std::vector<std::pair<std::string, std::string>> overrides;
};

RunConfig build_config(const CliState& state) {
  RunConfig config = state.paper_scale ? paper_profile() : desk_profile();
  if (!state.config_path.empty()) {
    config = parse_config(state.config_path);
    if (state.paper_scale)
      throw ValidationError("--paper-scale cannot be combined with --config");
  }
  for (const auto& [key, value] : state.overrides) apply_config_entry(config, key, value);
  config.validate();
  return config;
}

void add_common_options(CLI::App* cmd, CliState& state) {
  cmd->add_option("-c,--config", state.config_path, "config file (key = value lines)");
  cmd->add_flag("--paper-scale", state.paper_scale,
                "start from the full-scale profile (M = 20, 32^3 sampling; long-running)");
  auto add_override = [cmd, &state](const std::string& flag, const std::string& key,
                                    const std::string& help) {
    cmd->add_option_function<std::string>(
        flag, [&state, key](const std::string& v) { state.overrides.emplace_back(key, v); },
        help);
  };
  add_override("--k", "k", "wavenumber");
  add_override("--alpha1", "alpha1", "quasimomentum component 1");
  add_override("--alpha2", "alpha2", "quasimomentum component 2");
  add_override("--h", "h", "measurement height");
  add_override("--M", "M", "truncation order (even)");
  add_override("--geometry", "geometry", "balls | bars | cubes | strip_with_holes");
  add_override("--material", "material", "paper | custom");
  add_override("--eps-diag", "eps_diag", "custom eps_r diagonal, e.g. '1+0.75i,1+0.9i,1+0.8i'");
  add_override("--mu-inv-diag", "mu_inv_diag", "custom mu_r^-1 diagonal");
  add_override("--xi-diag", "xi_diag", "custom xi diagonal (real)");
  add_override("--solver-n", "solver_n", "collocation count per axis (power of two)");
  add_override("--solver-tol", "solver_tol", "forward solver relative residual");
  add_override("--noise", "noise", "relative Frobenius noise level delta");
  add_override("--seed", "seed", "noise RNG seed");
  add_override("--tau", "tau", "spectral truncation threshold");
  add_override("--sample-n", "sample_n", "sampling nodes per axis");
  add_override("--sample-zmax", "sample_zmax", "vertical half-extent of the sampling box");
  add_override("--p", "p", "test polarization, e.g. '1,1,1'");
  add_override("--w-variant", "w_variant", "W blocks: adjoint (default) | paper");
  add_override("--data-out", "data_out", "near-field data path");
  add_override("--image-out", "image_out", "indicator output base path");
  add_override("--threads", "threads", "worker threads (0 = auto)");
  cmd->add_option_function<bool>(
      "--force-assumptions",
      [&state](bool v) {
        state.overrides.emplace_back("force_assumptions", v ? "true" : "false");
      },
      "continue even if the material coercivity check fails");
  cmd->add_option_function<bool>(
      "--herglotz-weighting",
      [&state](bool v) {
        state.overrides.emplace_back("herglotz_weighting", v ? "true" : "false");
      },
      "divide data columns by beta_m w_m^± before imaging (default true)");
  cmd->add_option_function<bool>(
      "--averaged-polarization",
      [&state](bool v) {
        state.overrides.emplace_back("averaged_polarization", v ? "true" : "false");
      },
      "sum the indicator over the three axis polarizations");
  cmd->add_option_function<bool>(
      "--verbose", [&state](bool v) { state.overrides.emplace_back("verbose", v ? "true" : "false"); },
      "per-column solver reporting");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"synthetic near-field scattering data and factorization-method imaging "
               "for bi-anisotropic periodic structures"};
  app.require_subcommand(1);

  CliState check_state, gen_state, noise_state, image_state, run_state;
  std::string noise_in, noise_out, image_in;

  CLI::App* cmd_check = app.add_subcommand("check", "material check and mode count");
  add_common_options(cmd_check, check_state);

  CLI::App* cmd_gen = app.add_subcommand("generate", "solve the forward problems and save the data matrix");
  add_common_options(cmd_gen, gen_state);

  CLI::App* cmd_noise = app.add_subcommand("noise", "add noise to a stored data matrix");
  add_common_options(cmd_noise, noise_state);
  cmd_noise->add_option("input", noise_in, "input data file")->required();
  cmd_noise->add_option("output", noise_out, "output data file")->required();

  CLI::App* cmd_image = app.add_subcommand("image", "reconstruct the indicator from a data matrix");
  add_common_options(cmd_image, image_state);
  cmd_image->add_option("input", image_in, "input data file")->required();

  CLI::App* cmd_run = app.add_subcommand("run", "full pipeline: generate, noise, image");
  add_common_options(cmd_run, run_state);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_check->parsed()) {
      pipeline_check(build_config(check_state), std::cout);
    } else if (cmd_gen->parsed()) {
      pipeline_generate(build_config(gen_state), std::cout);
    } else if (cmd_noise->parsed()) {
      pipeline_noise(build_config(noise_state), noise_in, noise_out, std::cout);
    } else if (cmd_image->parsed()) {
      RunConfig config = build_config(image_state);
      const NearFieldMatrix nf = load(image_in);
      const IndicatorGrid grid = pipeline_image(config, nf, std::cout);
      write_outputs(grid, config.image_out);
      std::cout << "indicator written to " << config.image_out << ".{vtk,csv} and "
                << config.image_out << "_summary.txt\n";
    } else if (cmd_run->parsed()) {
      pipeline_run(build_config(run_state), std::cout);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const WoodAnomalyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NoConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const TruncatedFileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
