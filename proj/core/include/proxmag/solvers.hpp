#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "proxmag/core.hpp"
#include "proxmag/douglas_rachford.hpp"
#include "proxmag/linear_operator.hpp"
#include "proxmag/prox.hpp"

namespace proxmag {

/// out = prox_{step g}(in) on complex vectors.
using ComplexProx = std::function<void(std::span<const cplx> in, double step, std::span<cplx> out)>;

struct SolverConfig {
  std::size_t max_iters = 200;
  /// Primal and dual steps; when unset both default to 0.99 / ||K||.
  std::optional<double> tau;
  std::optional<double> sigma;
  double theta = 1.0;
  /// Stop when ||x_{k+1} - x_k|| <= tol ||x_{k+1}|| (0 = run the full budget).
  double tol = 0.0;
  std::size_t trace_stride = 1;
};

struct TraceEntry {
  std::size_t iteration = 0;
  double objective = 0.0;
  double misfit = 0.0;
  double reg = 0.0;
  double step_change = 0.0;
  double seconds = 0.0;
};

struct SolverTrace {
  std::vector<TraceEntry> entries;
};

/// Header: iteration,objective,misfit,reg,step_change,seconds
[[nodiscard]] std::string trace_csv(const SolverTrace& trace);
void write_trace_csv(const std::string& path, const SolverTrace& trace);

/// Misfit and regulariser value at x, for tracing.
struct ObjectiveParts {
  double misfit = 0.0;
  double reg = 0.0;
};
using ObjectiveFn = std::function<ObjectiveParts(std::span<const cplx> x)>;

class SolverNumericalError : public NumericalError {
 public:
  SolverNumericalError(const std::string& what, SolverTrace trace)
      : NumericalError(what), trace_(std::move(trace)) {}
  [[nodiscard]] const SolverTrace& trace() const { return trace_; }

 private:
  SolverTrace trace_;
};

struct PdhgResult {
  std::vector<cplx> x;
  std::vector<cplx> y;
  SolverTrace trace;
  std::size_t iterations = 0;
  double tau = 0.0;
  double sigma = 0.0;
  /// Input to the final primal prox call.
  std::vector<cplx> last_prox_input;
};

/// Chambolle-Pock for min_x f(K x) + g(x):
///   y <- prox_{sigma f*}(y + sigma K xbar)
///   x <- prox_{tau g}(x - tau K^H y)
///   xbar <- x + theta (x - x_old)
/// Throws InvalidInput if sigma tau ||K||^2 > 1 and SolverNumericalError on a
/// non-finite iterate. Trace entries are written every trace_stride
/// iterations (entry 0 is x0) when objective is set.
[[nodiscard]] PdhgResult pdhg(const ComplexProx& f_conj_prox, const ComplexProx& g_prox,
                              const LinearOperator& k, std::span<const cplx> x0,
                              const SolverConfig& config, const ObjectiveFn& objective = {});

/// (y - sigma d) / (1 + sigma): prox of sigma f* for f = 0.5 ||. - d||^2.
/// sigma below 1e-12 is rejected.
[[nodiscard]] std::vector<cplx> prox_l2_data_conjugate(std::span<const cplx> y, double sigma,
                                                       std::span<const cplx> d);

class DrConvergenceError : public ConvergenceError {
 public:
  DrConvergenceError(const std::string& what, DrState state)
      : ConvergenceError(what), state_(std::move(state)) {}
  [[nodiscard]] const DrState& state() const { return state_; }

 private:
  DrState state_;
};

/// Douglas-Rachford on real vectors, stopping when ||x_{k+1} - x_k||_inf < tol.
/// Returns the last x with the per-iteration change history; throws
/// DrConvergenceError when the budget runs out.
[[nodiscard]] DrState douglas_rachford(const RealProx& prox_a, const RealProx& prox_b,
                                       std::span<const double> y0, std::size_t max_iters,
                                       double tol);

// ---------------------------------------------------------------------------
// Reconstruction

struct ReconstructOptions {
  SolverConfig solver;
  MagLiftOptions lift;
  /// Solve with A / ||A|| and d / ||A||, so lambda does not depend on the
  /// operator's gain.
  bool normalize_operator = true;
};

struct ReconstructResult {
  ComplexImage image;
  /// Starting point A^H d / ||A||^2.
  ComplexImage initial;
  SolverTrace trace;
  std::size_t iterations = 0;
  double operator_norm = 0.0;
  /// Most recent magnitude_lift input and its phase-preserving output.
  std::vector<cplx> last_prox_input;
  std::size_t fallback_calls = 0;
  std::size_t dr_iterations = 0;
};

/// min_z 0.5 ||A z - d||^2 + lambda H(|z|) by PDHG with K = A, f = 0.5 ||. - d||^2
/// and g = lambda H(|.|) evaluated via magnitude_lift. H comes from the
/// regulariser registry.
[[nodiscard]] ReconstructResult reconstruct(const LinearOperator& a, const ComplexImage& data,
                                            const std::string& regularizer, double lambda,
                                            const nlohmann::json& params,
                                            const ReconstructOptions& options = {});

/// Same, with a caller-supplied regulariser (already scaled by lambda).
[[nodiscard]] ReconstructResult reconstruct(const LinearOperator& a, const ComplexImage& data,
                                            const ProxFunction& h,
                                            const ReconstructOptions& options = {});

/// 10 log10(peak^2 / MSE) between magnitudes, peak = max |truth|.
[[nodiscard]] double magnitude_psnr(std::span<const cplx> estimate, std::span<const cplx> truth);

/// Scalar s >= 0 minimising || s |estimate| - |truth| ||.
[[nodiscard]] double best_magnitude_scale(std::span<const cplx> estimate,
                                          std::span<const cplx> truth);

}  // namespace proxmag
