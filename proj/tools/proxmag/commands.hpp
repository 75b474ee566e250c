#pragma once

#include <filesystem>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "proxmag/config.hpp"

namespace proxmag::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// SAR operator for the configured model on a single-channel grid, stacked
/// channels times when channels > 1.
[[nodiscard]] std::shared_ptr<const LinearOperator> make_operator(const OperatorConfig& op,
                                                                  const SarGeometry& geometry,
                                                                  const SceneGrid& grid,
                                                                  std::size_t channels);

[[nodiscard]] SarGeometry make_geometry(const GeometryConfig& g);

/// Writes truth.cimg, phase_history.cimg, geometry.json, scene.json and
/// truth_db.pgm into config.output_dir.
int cmd_simulate(const ExperimentConfig& config, std::ostream& log);

/// Reads a simulate directory (config.input_dir) and writes recon.cimg,
/// backprojection.cimg, recon_db.pgm, recon_db.png, recon_phase.png,
/// trace.csv and metrics.json into config.output_dir. With no input_dir the
/// scene is simulated into output_dir first.
int cmd_reconstruct(const ExperimentConfig& config, std::ostream& log);

enum class RenderMode { mag_db, phase, phase_diff };

struct RenderRequest {
  RenderMode mode = RenderMode::mag_db;
  std::vector<std::filesystem::path> inputs;
  std::filesystem::path output;
  std::size_t channel = 0;
  double db_min = -31.0;
  double db_max = -6.0;
};

int cmd_render(const RenderRequest& request, std::ostream& log);

/// Prints the suite report to out; 0 iff every check passes.
int cmd_prox_test(const std::string& suite, std::uint64_t seed, std::ostream& out);

}  // namespace proxmag::cli
