#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "proxmag/commands.hpp"
#include "proxmag/suites.hpp"

using namespace proxmag;
using namespace proxmag::cli;

namespace {

template <class T>
void apply(const std::optional<T>& flag, T& field) {
  if (flag) field = *flag;
}

struct ExperimentFlags {
  std::string config;
  std::optional<std::string> out, input, phantom, trajectory, model, regularizer, params;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> size, height, width, channels, pulses, frequencies, upsample, iters;
  std::optional<double> spacing, snr_db, noise_sigma, aperture, lambda, db_min, db_max;

  void add_scene(CLI::App* app) {
    app->add_option("--size", size, "Square scene size (pixels)");
    app->add_option("--height", height, "Scene height (pixels)");
    app->add_option("--width", width, "Scene width (pixels)");
    app->add_option("--spacing", spacing, "Pixel spacing (m)");
    app->add_option("--channels", channels, "Number of image channels");
    app->add_option("--phantom", phantom, "default, zero or custom");
    app->add_option("--snr-db", snr_db, "Data SNR in dB");
    app->add_option("--noise-sigma", noise_sigma, "Noise standard deviation (overrides SNR)");
    app->add_option("--pulses", pulses, "Number of pulses");
    app->add_option("--frequencies", frequencies, "Frequency samples per pulse");
    app->add_option("--aperture", aperture, "Aperture angle (degrees)");
    app->add_option("--trajectory", trajectory, "linear or circular");
  }
  void add_common(CLI::App* app) {
    app->add_option("--config", config, "JSON experiment config")->check(CLI::ExistingFile);
    app->add_option("-o,--out", out, "Output directory");
    app->add_option("--seed", seed, "Random seed");
    app->add_option("--operator", model, "SAR operator model: time or frequency");
    app->add_option("--upsample", upsample, "Time-domain upsampling factor");
    app->add_option("--db-min", db_min, "Lower end of the dB display window");
    app->add_option("--db-max", db_max, "Upper end of the dB display window");
  }
  void add_solver(CLI::App* app) {
    app->add_option("-i,--input", input, "Directory written by simulate");
    app->add_option("-r,--regularizer", regularizer, "Regulariser name");
    app->add_option("-l,--lambda", lambda, "Regularisation weight");
    app->add_option("--params", params, "Regulariser parameters as a JSON object");
    app->add_option("--iters", iters, "PDHG iterations");
  }

  [[nodiscard]] ExperimentConfig resolve() const {
    ExperimentConfig c = config.empty() ? ExperimentConfig{} : load_config(config);
    apply(out, c.output_dir);
    apply(input, c.input_dir);
    apply(seed, c.seed);
    if (size) c.scene.height = c.scene.width = *size;
    apply(height, c.scene.height);
    apply(width, c.scene.width);
    apply(spacing, c.scene.spacing);
    apply(channels, c.scene.channels);
    apply(phantom, c.scene.phantom);
    if (snr_db) c.noise.snr_db = *snr_db;
    if (noise_sigma) {
      c.noise.sigma = *noise_sigma;
      c.noise.snr_db.reset();
    }
    apply(pulses, c.geometry.collection.pulses);
    apply(frequencies, c.geometry.collection.frequencies);
    apply(aperture, c.geometry.collection.aperture_deg);
    apply(trajectory, c.geometry.trajectory);
    apply(model, c.op.model);
    apply(upsample, c.op.upsample);
    apply(regularizer, c.regularizer.name);
    apply(lambda, c.regularizer.lambda);
    if (params) {
      try {
        c.regularizer.params = nlohmann::json::parse(*params);
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("--params: ") + e.what());
      }
      if (!c.regularizer.params.is_object()) throw ConfigError("--params: expected a JSON object");
    }
    apply(iters, c.solver.max_iters);
    apply(db_min, c.render.db_min);
    apply(db_max, c.render.db_max);
    c.validate();
    return c;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Magnitude-regularised reconstruction of complex images"};
  app.require_subcommand(1);
  std::optional<std::size_t> threads;
  app.add_option("--threads", threads, "Worker threads (overrides PROXMAG_THREADS, 0 = auto)");

  ExperimentFlags sim_flags;
  auto* sim = app.add_subcommand("simulate", "Simulate a phantom and its phase history");
  sim_flags.add_common(sim);
  sim_flags.add_scene(sim);

  ExperimentFlags rec_flags;
  auto* rec = app.add_subcommand("reconstruct", "Regularised reconstruction from phase history");
  rec_flags.add_common(rec);
  rec_flags.add_scene(rec);
  rec_flags.add_solver(rec);

  RenderRequest render;
  std::string mode = "mag-db";
  std::vector<std::string> render_inputs;
  auto* ren = app.add_subcommand("render", "Render a CIMG file as an image");
  ren->add_option("inputs", render_inputs, "Input CIMG file(s); phase-diff takes two")
      ->required()
      ->expected(1, 2);
  ren->add_option("-o,--output", render.output, "Output image (.pgm, .ppm or .png)")->required();
  ren->add_option("--mode", mode, "mag-db, phase or phase-diff")
      ->check(CLI::IsMember({"mag-db", "phase", "phase-diff"}));
  ren->add_option("--channel", render.channel, "Channel to render");
  ren->add_option("--db-min", render.db_min, "Lower end of the dB window");
  ren->add_option("--db-max", render.db_max, "Upper end of the dB window");

  std::string suite;
  std::uint64_t suite_seed = 1;
  auto* pt = app.add_subcommand("prox-test", "Run a proximal-map verification suite");
  pt->add_option("suite", suite, "Suite name")->required();
  pt->add_option("--seed", suite_seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (threads) {
    const std::string v = std::to_string(*threads);
    ::setenv("PROXMAG_THREADS", v.c_str(), 1);
  }

  try {
    if (*sim) return cmd_simulate(sim_flags.resolve(), std::cerr);
    if (*rec) return cmd_reconstruct(rec_flags.resolve(), std::cerr);
    if (*ren) {
      render.mode = mode == "phase"        ? RenderMode::phase
                    : mode == "phase-diff" ? RenderMode::phase_diff
                                           : RenderMode::mag_db;
      for (const auto& p : render_inputs) render.inputs.emplace_back(p);
      return cmd_render(render, std::cerr);
    }
    if (*pt) {
      if (!suites::known(suite)) {
        std::cerr << "prox-test: unknown suite '" << suite << "'; choose one of:";
        for (const auto& n : suites::names()) std::cerr << " " << n;
        std::cerr << "\n";
        return kExitUsage;
      }
      return cmd_prox_test(suite, suite_seed, std::cout);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SolverNumericalError& e) {
    std::cerr << "solver error: " << e.what() << " (" << e.trace().entries.size()
              << " trace entries)\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
