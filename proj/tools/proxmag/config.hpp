#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "proxmag/error.hpp"
#include "proxmag/prox.hpp"
#include "proxmag/sar.hpp"
#include "proxmag/solvers.hpp"

namespace proxmag::cli {

/// Bad or unknown configuration; maps to exit code 2.
class ConfigError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

struct SceneConfig {
  std::size_t height = 64;
  std::size_t width = 64;
  double spacing = 0.3;  // meters
  /// default, zero or custom (background + shapes).
  std::string phantom = "default";
  double background = 0.1;
  std::vector<PhantomShape> shapes;
  /// Channels share the geometry; each gets its own random phase.
  std::size_t channels = 1;
};

struct GeometryConfig {
  /// linear or circular.
  std::string trajectory = "linear";
  CollectionOptions collection = [] {
    CollectionOptions c;
    c.aperture_deg = 1.5;
    return c;
  }();
};

struct OperatorConfig {
  /// time (FFT-based, default) or frequency (exact sum).
  std::string model = "time";
  std::size_t upsample = 64;
};

struct NoiseConfig {
  std::optional<double> snr_db = 10.0;
  double sigma = 0.0;
};

struct RegularizerConfig {
  std::string name = "tv-iso";
  double lambda = 0.003;
  nlohmann::json params = nlohmann::json::object();
};

struct RenderConfig {
  double db_min = -31.0;
  double db_max = -6.0;
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  /// Directory holding a previous simulate run (reconstruct only).
  std::string input_dir;
  SceneConfig scene;
  GeometryConfig geometry;
  OperatorConfig op;
  NoiseConfig noise;
  RegularizerConfig regularizer;
  SolverConfig solver;
  bool normalize_operator = true;
  MagLiftOptions lift;
  RenderConfig render;

  void validate() const;
};

/// Throws ConfigError on unknown keys or wrong types.
[[nodiscard]] ExperimentConfig parse_config(const nlohmann::json& j);
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& path);
[[nodiscard]] nlohmann::json to_json(const ExperimentConfig& c);

}  // namespace proxmag::cli
