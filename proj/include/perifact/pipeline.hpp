/* pipeline.hpp — end-to-end orchestration shared by the CLI and the test
 * suites: assumption gate, data generation, noise injection, and imaging. */

#pragma once

#include <iosfwd>
#include <string>

#include "perifact/config.hpp"
#include "perifact/data.hpp"
#include "perifact/imaging.hpp"

namespace perifact {

/// Assumption report + propagating-mode count; throws ValidationError when
/// the material check fails and force_assumptions is off.
AssumptionReport pipeline_check(const RunConfig& config, std::ostream& log);

/// generate: assumption gate, forward solves, optional noise, save to
/// config.data_out.
NearFieldMatrix pipeline_generate(const RunConfig& config, std::ostream& log);

/// noise: load, perturb per config.noise/config.seed, save.
NearFieldMatrix pipeline_noise(const RunConfig& config, const std::string& in_path,
                               const std::string& out_path, std::ostream& log);

/// image: weighting, W, imaginary part, decomposition, grid sweep, outputs.
IndicatorGrid pipeline_image(const RunConfig& config, const NearFieldMatrix& data,
                             std::ostream& log);

/// Full pipeline: generate -> noise -> image, writing all outputs.
IndicatorGrid pipeline_run(const RunConfig& config, std::ostream& log);

}  // namespace perifact
