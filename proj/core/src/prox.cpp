#include "proxmag/prox.hpp"

#include <algorithm>
#include <cmath>

#include "proxmag/douglas_rachford.hpp"

namespace proxmag {

std::vector<double> ProxFunction::prox(std::span<const double> x, double step) const {
  std::vector<double> out(x.size());
  prox(x, step, out);
  return out;
}

void ZeroFunction::prox(std::span<const double> x, double, std::span<double> out) const {
  std::copy(x.begin(), x.end(), out.begin());
}

namespace {

void check_lift_args(const ProxFunction& h, std::size_t n, double step) {
  if (h.size() != n) {
    throw InvalidInput("magnitude_lift: regulariser " + h.name() + " has shape " +
                       to_string(h.shape()) + ", input has " + std::to_string(n) + " samples");
  }
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidInput("magnitude_lift: step must be > 0");
}

// Shared bounded-prox loop. Writes max(x, 0) to out.
MagLiftReport lift_magnitudes(const ProxFunction& h, std::span<const double> r, double step,
                              const MagLiftOptions& opt, std::span<double> out) {
  check_lift_args(h, r.size(), step);
  const double tol = opt.dr_tol;

  const RealProx prox_h = [&](std::span<const double> in, std::span<double> o) {
    h.prox(in, step, o);
  };
  const RealProx prox_f = [&](std::span<const double> in, std::span<double> o) {
    for (std::size_t i = 0; i < in.size(); ++i) o[i] = std::max(0.5 * (in[i] + r[i]), 0.0);
  };
  const DrStop stop = [&](std::span<const double> x, std::span<const double> x_prev,
                          std::size_t k) {
    const double lowest = x.empty() ? 0.0 : *std::min_element(x.begin(), x.end());
    if (lowest >= -tol) return true;
    if (k == 0) return false;
    double change = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) change = std::max(change, std::abs(x[i] - x_prev[i]));
    return change < tol;
  };

  DrState state = douglas_rachford_loop(prox_h, prox_f, r, opt.max_dr_iters, stop);

  MagLiftReport report;
  report.dr_iterations = state.iterations;
  report.entered_fallback = state.iterations > 0;
  report.final_min_component =
      state.x.empty() ? 0.0 : *std::min_element(state.x.begin(), state.x.end());
  if (!state.stopped) {
    throw MagLiftConvergenceError("magnitude_lift: Douglas-Rachford budget of " +
                                      std::to_string(opt.max_dr_iters) +
                                      " iterations exhausted, min component " +
                                      std::to_string(report.final_min_component),
                                  report);
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(state.x[i], 0.0);
  return report;
}

}  // namespace

MagLiftReport magnitude_lift(const ProxFunction& h, std::span<const cplx> z, double step,
                             const MagLiftOptions& options, std::span<cplx> out) {
  const MagPhase mp = decompose(z, h.shape());
  std::vector<double> x(z.size());
  const MagLiftReport report = lift_magnitudes(h, mp.magnitude, step, options, x);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * mp.phase[i];
  return report;
}

MagLiftResult magnitude_lift(const ProxFunction& h, const ComplexImage& z, double step,
                             const MagLiftOptions& options) {
  check_lift_args(h, z.size(), step);
  MagPhase mp = decompose(z);
  std::vector<double> x(z.size());
  const MagLiftReport report = lift_magnitudes(h, mp.magnitude, step, options, x);
  MagLiftResult result{ComplexImage{}, MagPhase{z.shape(), std::move(x), std::move(mp.phase)},
                       report};
  result.image = recompose(result.lifted);
  return result;
}

std::vector<double> bounded_prox(const ProxFunction& h, std::span<const double> r, double step,
                                 const MagLiftOptions& options, MagLiftReport* report) {
  for (double v : r) {
    if (!(v >= 0.0)) throw InvalidInput("bounded_prox: input must be nonnegative and finite");
  }
  std::vector<double> out(r.size());
  const MagLiftReport rep = lift_magnitudes(h, r, step, options, out);
  if (report) *report = rep;
  return out;
}

std::vector<double> project_nonneg(std::span<const double> x) {
  std::vector<double> out(x.size());
  std::transform(x.begin(), x.end(), out.begin(), [](double v) { return std::max(v, 0.0); });
  return out;
}

std::vector<double> prox_F_shifted(std::span<const double> y, std::span<const double> r) {
  if (y.size() != r.size()) throw InvalidInput("prox_F_shifted: shape mismatch");
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = std::max(0.5 * (r[i] + y[i]), 0.0);
  return out;
}

}  // namespace proxmag
