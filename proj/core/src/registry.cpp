#include "proxmag/registry.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "proxmag/regularizers.hpp"

namespace proxmag {
namespace {

using nlohmann::json;

void allow_keys(const std::string& name, const json& params, std::set<std::string> allowed) {
  if (params.is_null()) return;
  if (!params.is_object()) throw InvalidInput("regularizer " + name + ": params must be an object");
  for (const auto& [key, value] : params.items()) {
    if (!allowed.contains(key)) {
      throw InvalidInput("regularizer " + name + ": unknown parameter '" + key + "'");
    }
  }
}

template <typename T>
T get_or(const json& params, const char* key, T fallback) {
  if (params.is_null() || !params.contains(key)) return fallback;
  try {
    return params.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("regularizer parameter '") + key + "': " + e.what());
  }
}

std::vector<double> per_pixel(const json& params, const char* key, Shape shape, double fallback) {
  if (params.is_null() || !params.contains(key)) return std::vector<double>(shape.size(), fallback);
  const json& v = params.at(key);
  if (v.is_number()) return std::vector<double>(shape.size(), v.get<double>());
  auto out = get_or<std::vector<double>>(params, key, {});
  if (out.size() != shape.size()) {
    throw InvalidInput(std::string("regularizer parameter '") + key + "' needs " +
                       std::to_string(shape.size()) + " entries");
  }
  return out;
}

TvOptions tv_options(const json& params) {
  TvOptions o;
  o.inner_iters = get_or<std::size_t>(params, "inner_iters", o.inner_iters);
  o.gap_tol = get_or<double>(params, "gap_tol", o.gap_tol);
  o.channel_weight = get_or<double>(params, "channel_weight", o.channel_weight);
  return o;
}

}  // namespace

const std::vector<std::string>& regularizer_names() {
  static const std::vector<std::string> names = {"l1",     "l2",  "l2sq",  "wl1-matrix",
                                                 "tv-iso", "tv-aniso", "vtv", "tv-st",
                                                 "gtik",   "multibang", "box", "tgv2"};
  return names;
}

std::unique_ptr<ProxFunction> make_regularizer(const std::string& name, Shape shape, double lambda,
                                               const json& params) {
  if (!(lambda >= 0.0)) throw InvalidInput("regularizer " + name + ": lambda must be >= 0");
  const auto& names = regularizer_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw InvalidInput("unknown regularizer '" + name + "'");
  }

  if (name == "l1" || name == "l2") {
    allow_keys(name, params, {"weights"});
    std::vector<double> w;
    if (!params.is_null() && params.contains("weights")) w = per_pixel(params, "weights", shape, 1.0);
    return std::make_unique<WeightedLpNorm>(shape, name == "l1" ? 1 : 2, lambda, std::move(w));
  }
  if (name == "l2sq") {
    allow_keys(name, params, {});
    return std::make_unique<SquaredL2>(shape, lambda);
  }
  if (name == "wl1-matrix") {
    allow_keys(name, params, {"matrix", "max_iters", "tol"});
    const auto rows = get_or<std::vector<std::vector<double>>>(params, "matrix", {});
    if (rows.empty()) throw InvalidInput("regularizer wl1-matrix: 'matrix' is required");
    std::vector<double> flat;
    for (const auto& r : rows) {
      if (r.size() != shape.size()) {
        throw InvalidInput("regularizer wl1-matrix: matrix rows must have one entry per pixel");
      }
      flat.insert(flat.end(), r.begin(), r.end());
    }
    MatrixL1Options o;
    o.max_iters = get_or<std::size_t>(params, "max_iters", o.max_iters);
    o.tol = get_or<double>(params, "tol", o.tol);
    return std::make_unique<MatrixWeightedL1>(shape, std::move(flat), lambda, o);
  }
  if (name == "tv-iso" || name == "tv-aniso" || name == "vtv" || name == "tv-st") {
    allow_keys(name, params, {"inner_iters", "gap_tol", "channel_weight"});
    TvVariant v = TvVariant::vectorial;
    if (name == "tv-iso") v = shape.channels == 1 ? TvVariant::iso2d : TvVariant::iso3d;
    if (name == "tv-aniso") v = shape.channels == 1 ? TvVariant::aniso2d : TvVariant::aniso3d;
    if (name == "tv-st") v = TvVariant::spatio_temporal;
    return std::make_unique<TotalVariation>(shape, v, lambda, tv_options(params));
  }
  if (name == "gtik") {
    allow_keys(name, params, {"channel_weight", "cg_iters", "cg_tol"});
    std::vector<ScaledAxis> axes;
    if (shape.channels > 1) axes.push_back({Axis::channel, get_or<double>(params, "channel_weight", 1.0)});
    axes.push_back({Axis::row, 1.0});
    axes.push_back({Axis::col, 1.0});
    CgOptions o;
    o.max_iters = get_or<std::size_t>(params, "cg_iters", o.max_iters);
    o.tol = get_or<double>(params, "cg_tol", o.tol);
    return std::make_unique<GenTikhonov>(shape, std::move(axes), lambda, o);
  }
  if (name == "box") {
    allow_keys(name, params, {"lo", "hi"});
    return std::make_unique<BoxIndicator>(
        shape, per_pixel(params, "lo", shape, 0.0),
        per_pixel(params, "hi", shape, std::numeric_limits<double>::infinity()));
  }

  // The remaining terms need a positive weight.
  if (lambda == 0.0) return std::make_unique<ZeroFunction>(shape);
  if (name == "multibang") {
    allow_keys(name, params, {"levels"});
    auto levels = get_or<std::vector<double>>(params, "levels", {});
    if (levels.empty()) throw InvalidInput("regularizer multibang: 'levels' is required");
    return std::make_unique<MultiBang>(shape, MultiBangLevels(std::move(levels)), lambda);
  }
  allow_keys(name, params, {"alpha", "beta", "inner_iters", "tol"});
  TgvOptions o;
  o.inner_iters = get_or<std::size_t>(params, "inner_iters", o.inner_iters);
  o.tol = get_or<double>(params, "tol", o.tol);
  return std::make_unique<Tgv2>(shape, get_or<double>(params, "alpha", 1.0),
                                get_or<double>(params, "beta", 2.0), lambda, o);
}

}  // namespace proxmag
