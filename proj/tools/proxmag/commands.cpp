#include "proxmag/commands.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>

#include "proxmag/cimg.hpp"
#include "proxmag/images.hpp"
#include "proxmag/registry.hpp"
#include "proxmag/suites.hpp"

namespace proxmag::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << std::setw(2) << j << "\n";
  if (!out) throw IoError("write failed: " + path.string());
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("missing input " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::span<const cplx> plane(const ComplexImage& img, std::size_t c) {
  const std::size_t n = img.shape().plane();
  return img.data().subspan(c * n, n);
}

Phantom make_phantom(const SceneConfig& s, const SceneGrid& grid) {
  if (s.phantom == "default") return default_phantom(grid);
  Phantom p;
  if (s.phantom == "custom") {
    p.background = s.background;
    p.shapes = s.shapes;
  }
  return p;
}

}  // namespace

SarGeometry make_geometry(const GeometryConfig& g) {
  return g.trajectory == "circular" ? circular_collection(g.collection)
                                    : linear_collection(g.collection);
}

std::shared_ptr<const LinearOperator> make_operator(const OperatorConfig& op,
                                                    const SarGeometry& geometry,
                                                    const SceneGrid& grid, std::size_t channels) {
  std::shared_ptr<const LinearOperator> single;
  if (op.model == "frequency") {
    single = std::make_shared<FrequencyDomainSarOperator>(geometry, grid);
  } else {
    single = std::make_shared<TimeDomainSarOperator>(geometry, grid, op.upsample);
  }
  if (channels == 1) return single;
  return std::make_shared<MultiChannelOperator>(
      std::vector<std::shared_ptr<const LinearOperator>>(channels, single));
}

int cmd_simulate(const ExperimentConfig& config, std::ostream& log) {
  const fs::path dir = config.output_dir;
  fs::create_directories(dir);

  const SceneGrid grid = SceneGrid::centered(config.scene.height, config.scene.width,
                                             config.scene.spacing);
  const SarGeometry geometry = make_geometry(config.geometry);
  const auto op = make_operator(config.op, geometry, grid, config.scene.channels);

  const std::vector<double> one = rasterize(make_phantom(config.scene, grid), grid);
  std::vector<double> magnitude;
  for (std::size_t c = 0; c < config.scene.channels; ++c) {
    magnitude.insert(magnitude.end(), one.begin(), one.end());
  }
  NoiseSpec noise;
  noise.sigma = config.noise.sigma;
  noise.snr_db = config.noise.snr_db;
  const Simulation sim = simulate(*op, magnitude, noise, config.seed);

  write_cimg(dir / "truth.cimg", sim.truth);
  write_cimg(dir / "phase_history.cimg", sim.data);
  write_json(dir / "geometry.json", json(geometry));
  json recorded = to_json(config);
  recorded.erase("output_dir");
  recorded.erase("input_dir");
  json scene = {{"grid", json(grid)},
                {"channels", config.scene.channels},
                {"seed", config.seed},
                {"sigma", sim.sigma},
                {"config", recorded}};
  write_json(dir / "scene.json", scene);
  write_pnm(dir / "truth_db.pgm", render_mag_db(plane(sim.truth, 0), grid.height, grid.width,
                                                config.render.db_min, config.render.db_max));
  log << "simulate: " << grid.height << "x" << grid.width << " x " << config.scene.channels
      << " channel(s), " << geometry.pulses() << " pulses x " << geometry.frequencies()
      << " frequencies, noise sigma " << sim.sigma << " -> " << dir.string() << "\n";
  return kExitOk;
}

int cmd_reconstruct(const ExperimentConfig& config, std::ostream& log) {
  fs::path in = config.input_dir;
  if (in.empty()) {
    cmd_simulate(config, log);
    in = config.output_dir;
  }
  const fs::path out = config.output_dir;
  fs::create_directories(out);

  const json scene = read_json(in / "scene.json");
  const SceneGrid grid = scene.at("grid").get<SceneGrid>();
  const auto channels = scene.value("channels", std::size_t{1});
  const SarGeometry geometry = read_json(in / "geometry.json").get<SarGeometry>();
  if (!fs::exists(in / "phase_history.cimg")) {
    throw IoError("missing input " + (in / "phase_history.cimg").string());
  }
  const ComplexImage data = read_cimg(in / "phase_history.cimg");
  const auto op = make_operator(config.op, geometry, grid, channels);

  ReconstructOptions options;
  options.solver = config.solver;
  options.lift = config.lift;
  options.normalize_operator = config.normalize_operator;

  std::unique_ptr<ProxFunction> h;
  try {
    h = make_regularizer(config.regularizer.name, op->domain(), config.regularizer.lambda,
                         config.regularizer.params);
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("regularizer: ") + e.what());
  }
  const auto t0 = std::chrono::steady_clock::now();
  const ReconstructResult r = reconstruct(*op, data, *h, options);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  write_cimg(out / "recon.cimg", r.image);
  write_cimg(out / "backprojection.cimg", r.initial);
  write_trace_csv((out / "trace.csv").string(), r.trace);
  const auto recon0 = plane(r.image, 0);
  const Raster db = render_mag_db(recon0, grid.height, grid.width, config.render.db_min,
                                  config.render.db_max);
  write_pnm(out / "recon_db.pgm", db);
  write_png(out / "recon_db.png", db);
  write_png(out / "recon_phase.png", render_phase(recon0, grid.height, grid.width));

  json metrics = {{"regularizer", config.regularizer.name},
                  {"lambda", config.regularizer.lambda},
                  {"iterations", r.iterations},
                  {"operator_norm", r.operator_norm},
                  {"fallback_calls", r.fallback_calls},
                  {"dr_iterations", r.dr_iterations},
                  {"seconds", seconds}};
  if (!r.trace.entries.empty()) {
    const TraceEntry& last = r.trace.entries.back();
    metrics["final_objective"] = last.objective;
    metrics["final_misfit"] = last.misfit;
    metrics["final_reg"] = last.reg;
  }
  const fs::path truth_path = in / "truth.cimg";
  if (fs::exists(truth_path)) {
    const ComplexImage truth = read_cimg(truth_path);
    if (truth.shape() == r.image.shape()) {
      metrics["psnr_recon_db"] = magnitude_psnr(r.image.data(), truth.data());
      metrics["psnr_backprojection_db"] = magnitude_psnr(r.initial.data(), truth.data());
      const double s = best_magnitude_scale(r.initial.data(), truth.data());
      std::vector<cplx> scaled(r.initial.data().begin(), r.initial.data().end());
      for (auto& v : scaled) v *= s;
      metrics["psnr_backprojection_best_scale_db"] = magnitude_psnr(scaled, truth.data());
    }
  }
  write_json(out / "metrics.json", metrics);
  log << "reconstruct: " << config.regularizer.name << " lambda " << config.regularizer.lambda
      << ", " << r.iterations << " iterations";
  if (metrics.contains("psnr_recon_db")) {
    log << ", PSNR " << metrics["psnr_recon_db"].get<double>() << " dB (backprojection "
        << metrics["psnr_backprojection_best_scale_db"].get<double>() << " dB)";
  }
  log << " -> " << out.string() << "\n";
  return kExitOk;
}

int cmd_render(const RenderRequest& req, std::ostream& log) {
  const std::size_t needed = req.mode == RenderMode::phase_diff ? 2 : 1;
  if (req.inputs.size() != needed) {
    throw InvalidInput(req.mode == RenderMode::phase_diff ? "phase-diff needs two inputs"
                                                          : "render needs one input");
  }
  std::vector<ComplexImage> images;
  for (const auto& p : req.inputs) {
    if (!fs::exists(p)) throw IoError("missing input " + p.string());
    images.push_back(read_cimg(p));
  }
  const Shape s = images[0].shape();
  if (req.channel >= s.channels) throw InvalidInput("render: channel out of range");
  Raster r;
  switch (req.mode) {
    case RenderMode::mag_db:
      r = render_mag_db(plane(images[0], req.channel), s.height, s.width, req.db_min, req.db_max);
      break;
    case RenderMode::phase:
      r = render_phase(plane(images[0], req.channel), s.height, s.width);
      break;
    case RenderMode::phase_diff:
      if (images[1].shape() != s) throw InvalidInput("phase-diff: inputs differ in shape");
      r = render_phase_diff(plane(images[0], req.channel), plane(images[1], req.channel),
                            s.height, s.width);
      break;
  }
  write_raster(req.output, r);
  log << "render: wrote " << req.output.string() << "\n";
  return kExitOk;
}

int cmd_prox_test(const std::string& suite, std::uint64_t seed, std::ostream& out) {
  const suites::Report rep = suites::run(suite, seed);
  out << rep.text();
  return rep.all_pass() ? kExitOk : kExitFailure;
}

}  // namespace proxmag::cli
