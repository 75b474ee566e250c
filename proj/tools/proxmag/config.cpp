#include "proxmag/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>

#include "proxmag/registry.hpp"

namespace proxmag::cli {
namespace {

using nlohmann::json;

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return key == k; })) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

PhantomShape parse_shape(const json& j, const std::string& where) {
  check_keys(j, {"kind", "center_x", "center_y", "half_x", "half_y", "radius", "level"}, where);
  PhantomShape s;
  std::string kind = "rectangle";
  read(j, "kind", kind, where);
  if (kind == "rectangle") {
    s.kind = PhantomShape::Kind::rectangle;
  } else if (kind == "disk") {
    s.kind = PhantomShape::Kind::disk;
  } else {
    throw ConfigError(where + ".kind: expected rectangle or disk");
  }
  read(j, "center_x", s.center_x, where);
  read(j, "center_y", s.center_y, where);
  read(j, "half_x", s.half_x, where);
  read(j, "half_y", s.half_y, where);
  read(j, "radius", s.half_x, where);
  read(j, "level", s.level, where);
  return s;
}

json shape_json(const PhantomShape& s) {
  if (s.kind == PhantomShape::Kind::disk) {
    return {{"kind", "disk"}, {"center_x", s.center_x}, {"center_y", s.center_y},
            {"radius", s.half_x}, {"level", s.level}};
  }
  return {{"kind", "rectangle"}, {"center_x", s.center_x}, {"center_y", s.center_y},
          {"half_x", s.half_x},  {"half_y", s.half_y},     {"level", s.level}};
}

}  // namespace

void ExperimentConfig::validate() const {
  if (scene.height == 0 || scene.width == 0) throw ConfigError("scene: size must be positive");
  if (!(scene.spacing > 0.0)) throw ConfigError("scene.spacing must be > 0");
  if (scene.channels == 0) throw ConfigError("scene.channels must be >= 1");
  if (scene.phantom != "default" && scene.phantom != "zero" && scene.phantom != "custom") {
    throw ConfigError("scene.phantom must be default, zero or custom");
  }
  if (geometry.trajectory != "linear" && geometry.trajectory != "circular") {
    throw ConfigError("geometry.trajectory must be linear or circular");
  }
  const auto& c = geometry.collection;
  if (c.pulses == 0 || c.frequencies == 0) throw ConfigError("geometry: pulses and frequencies must be >= 1");
  if (!(c.center_frequency > 0.0) || !(c.bandwidth > 0.0) || !(c.standoff > 0.0)) {
    throw ConfigError("geometry: center_frequency, bandwidth and standoff must be > 0");
  }
  if (op.model != "time" && op.model != "frequency") {
    throw ConfigError("operator.model must be time or frequency");
  }
  if (op.upsample == 0 || (op.upsample & (op.upsample - 1)) != 0) {
    throw ConfigError("operator.upsample must be a power of two");
  }
  if (noise.snr_db && !std::isfinite(*noise.snr_db)) throw ConfigError("noise.snr_db must be finite");
  if (!(noise.sigma >= 0.0)) throw ConfigError("noise.sigma must be >= 0");
  const auto& names = regularizer_names();
  if (std::find(names.begin(), names.end(), regularizer.name) == names.end()) {
    throw ConfigError("regularizer.name: unknown regularizer '" + regularizer.name + "'");
  }
  if (!(regularizer.lambda >= 0.0)) throw ConfigError("regularizer.lambda must be >= 0");
  if (solver.max_iters == 0) throw ConfigError("solver.max_iters must be >= 1");
  if (solver.trace_stride == 0) throw ConfigError("solver.trace_stride must be >= 1");
  if (!(render.db_min < render.db_max)) throw ConfigError("render: need db_min < db_max");
}

ExperimentConfig parse_config(const json& j) {
  check_keys(j, {"seed", "output_dir", "input_dir", "scene", "geometry", "operator", "noise",
                 "regularizer", "solver", "render"},
             "config");
  ExperimentConfig c;
  read(j, "seed", c.seed, "config");
  read(j, "output_dir", c.output_dir, "config");
  read(j, "input_dir", c.input_dir, "config");

  if (j.contains("scene")) {
    const json& s = j["scene"];
    check_keys(s, {"height", "width", "spacing", "phantom", "background", "shapes", "channels"},
               "scene");
    read(s, "height", c.scene.height, "scene");
    read(s, "width", c.scene.width, "scene");
    read(s, "spacing", c.scene.spacing, "scene");
    read(s, "phantom", c.scene.phantom, "scene");
    read(s, "background", c.scene.background, "scene");
    read(s, "channels", c.scene.channels, "scene");
    if (s.contains("shapes")) {
      if (!s["shapes"].is_array()) throw ConfigError("scene.shapes: expected an array");
      for (std::size_t k = 0; k < s["shapes"].size(); ++k) {
        c.scene.shapes.push_back(parse_shape(s["shapes"][k], "scene.shapes[" + std::to_string(k) + "]"));
      }
    }
  }
  if (j.contains("geometry")) {
    const json& g = j["geometry"];
    check_keys(g, {"trajectory", "pulses", "frequencies", "center_frequency", "bandwidth",
                   "standoff", "elevation_deg", "aperture_deg", "azimuth_deg"},
               "geometry");
    auto& o = c.geometry.collection;
    read(g, "trajectory", c.geometry.trajectory, "geometry");
    read(g, "pulses", o.pulses, "geometry");
    read(g, "frequencies", o.frequencies, "geometry");
    read(g, "center_frequency", o.center_frequency, "geometry");
    read(g, "bandwidth", o.bandwidth, "geometry");
    read(g, "standoff", o.standoff, "geometry");
    read(g, "elevation_deg", o.elevation_deg, "geometry");
    read(g, "aperture_deg", o.aperture_deg, "geometry");
    read(g, "azimuth_deg", o.azimuth_deg, "geometry");
  }
  if (j.contains("operator")) {
    const json& o = j["operator"];
    check_keys(o, {"model", "upsample"}, "operator");
    read(o, "model", c.op.model, "operator");
    read(o, "upsample", c.op.upsample, "operator");
  }
  if (j.contains("noise")) {
    const json& n = j["noise"];
    check_keys(n, {"snr_db", "sigma"}, "noise");
    if (n.contains("sigma")) c.noise.snr_db.reset();
    read(n, "sigma", c.noise.sigma, "noise");
    if (n.contains("snr_db")) {
      if (n["snr_db"].is_null()) {
        c.noise.snr_db.reset();
      } else {
        double v = 0.0;
        read(n, "snr_db", v, "noise");
        c.noise.snr_db = v;
      }
    }
  }
  if (j.contains("regularizer")) {
    const json& r = j["regularizer"];
    check_keys(r, {"name", "lambda", "params"}, "regularizer");
    read(r, "name", c.regularizer.name, "regularizer");
    read(r, "lambda", c.regularizer.lambda, "regularizer");
    if (r.contains("params")) {
      if (!r["params"].is_object()) throw ConfigError("regularizer.params: expected an object");
      c.regularizer.params = r["params"];
    }
  }
  if (j.contains("solver")) {
    const json& s = j["solver"];
    check_keys(s, {"max_iters", "tau", "sigma", "theta", "tol", "trace_stride", "normalize_operator",
                   "dr_max_iters", "dr_tol"},
               "solver");
    read(s, "max_iters", c.solver.max_iters, "solver");
    if (s.contains("tau")) {
      double v = 0.0;
      read(s, "tau", v, "solver");
      c.solver.tau = v;
    }
    if (s.contains("sigma")) {
      double v = 0.0;
      read(s, "sigma", v, "solver");
      c.solver.sigma = v;
    }
    read(s, "theta", c.solver.theta, "solver");
    read(s, "tol", c.solver.tol, "solver");
    read(s, "trace_stride", c.solver.trace_stride, "solver");
    read(s, "normalize_operator", c.normalize_operator, "solver");
    read(s, "dr_max_iters", c.lift.max_dr_iters, "solver");
    read(s, "dr_tol", c.lift.dr_tol, "solver");
  }
  if (j.contains("render")) {
    const json& r = j["render"];
    check_keys(r, {"db_min", "db_max"}, "render");
    read(r, "db_min", c.render.db_min, "render");
    read(r, "db_max", c.render.db_max, "render");
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const ExperimentConfig& c) {
  const auto& o = c.geometry.collection;
  json shapes = json::array();
  for (const auto& s : c.scene.shapes) shapes.push_back(shape_json(s));
  json solver = {{"max_iters", c.solver.max_iters},
                 {"theta", c.solver.theta},
                 {"tol", c.solver.tol},
                 {"trace_stride", c.solver.trace_stride},
                 {"normalize_operator", c.normalize_operator},
                 {"dr_max_iters", c.lift.max_dr_iters},
                 {"dr_tol", c.lift.dr_tol}};
  if (c.solver.tau) solver["tau"] = *c.solver.tau;
  if (c.solver.sigma) solver["sigma"] = *c.solver.sigma;
  json noise = {{"sigma", c.noise.sigma}};
  noise["snr_db"] = c.noise.snr_db ? json(*c.noise.snr_db) : json(nullptr);
  return {{"seed", c.seed},
          {"output_dir", c.output_dir},
          {"input_dir", c.input_dir},
          {"scene",
           {{"height", c.scene.height},
            {"width", c.scene.width},
            {"spacing", c.scene.spacing},
            {"phantom", c.scene.phantom},
            {"background", c.scene.background},
            {"shapes", shapes},
            {"channels", c.scene.channels}}},
          {"geometry",
           {{"trajectory", c.geometry.trajectory},
            {"pulses", o.pulses},
            {"frequencies", o.frequencies},
            {"center_frequency", o.center_frequency},
            {"bandwidth", o.bandwidth},
            {"standoff", o.standoff},
            {"elevation_deg", o.elevation_deg},
            {"aperture_deg", o.aperture_deg},
            {"azimuth_deg", o.azimuth_deg}}},
          {"operator", {{"model", c.op.model}, {"upsample", c.op.upsample}}},
          {"noise", noise},
          {"regularizer",
           {{"name", c.regularizer.name},
            {"lambda", c.regularizer.lambda},
            {"params", c.regularizer.params}}},
          {"solver", solver},
          {"render", {{"db_min", c.render.db_min}, {"db_max", c.render.db_max}}}};
}

}  // namespace proxmag::cli
