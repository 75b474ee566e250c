#include <algorithm>
#include <cmath>

#include "proxmag/registry.hpp"
#include "proxmag/solvers.hpp"

namespace proxmag {
namespace {

class ScaledOperator final : public LinearOperator {
 public:
  ScaledOperator(const LinearOperator& base, double scale) : base_(base), scale_(scale) {}
  [[nodiscard]] Shape domain() const override { return base_.domain(); }
  [[nodiscard]] Shape range() const override { return base_.range(); }
  void apply(std::span<const cplx> x, std::span<cplx> y) const override {
    base_.apply(x, y);
    for (auto& v : y) v *= scale_;
  }
  void adjoint(std::span<const cplx> y, std::span<cplx> x) const override {
    base_.adjoint(y, x);
    for (auto& v : x) v *= scale_;
  }
  using LinearOperator::adjoint;
  using LinearOperator::apply;

 protected:
  [[nodiscard]] double compute_norm_estimate() const override {
    return scale_ * base_.norm_estimate();
  }

 private:
  const LinearOperator& base_;
  double scale_;
};

}  // namespace

ReconstructResult reconstruct(const LinearOperator& a, const ComplexImage& data,
                              const ProxFunction& h, const ReconstructOptions& options) {
  if (data.shape() != a.range() && data.size() != a.range().size()) {
    throw InvalidInput("reconstruct: data shape " + to_string(data.shape()) +
                       " does not match operator range " + to_string(a.range()));
  }
  if (h.shape() != a.domain() && h.size() != a.domain().size()) {
    throw InvalidInput("reconstruct: regulariser shape does not match the operator domain");
  }

  ReconstructResult out;
  out.operator_norm = a.norm_estimate();
  if (!(out.operator_norm > 0.0)) throw InvalidInput("reconstruct: operator is zero");

  const double scale = options.normalize_operator ? 1.0 / out.operator_norm : 1.0;
  const ScaledOperator k(a, scale);
  std::vector<cplx> d(data.data().begin(), data.data().end());
  for (auto& v : d) v *= scale;

  // x0 = A^H d / ||A||^2 in either scaling.
  std::vector<cplx> x0 = a.adjoint(data.data());
  const double inv = 1.0 / (out.operator_norm * out.operator_norm);
  for (auto& v : x0) v *= inv;
  out.initial = ComplexImage(a.domain(), x0);

  const ComplexProx f_conj = [&](std::span<const cplx> y, double sigma, std::span<cplx> o) {
    const auto r = prox_l2_data_conjugate(y, sigma, d);
    std::copy(r.begin(), r.end(), o.begin());
  };
  const ComplexProx g = [&](std::span<const cplx> in, double tau, std::span<cplx> o) {
    const MagLiftReport rep = magnitude_lift(h, in, tau, options.lift, o);
    if (rep.entered_fallback) ++out.fallback_calls;
    out.dr_iterations += rep.dr_iterations;
  };
  std::vector<cplx> kx(k.range().size());
  std::vector<double> mag(k.domain().size());
  const ObjectiveFn objective = [&](std::span<const cplx> x) {
    k.apply(x, kx);
    double misfit = 0.0;
    for (std::size_t i = 0; i < kx.size(); ++i) misfit += std::norm(kx[i] - d[i]);
    for (std::size_t i = 0; i < x.size(); ++i) mag[i] = std::abs(x[i]);
    return ObjectiveParts{0.5 * misfit, h.eval(mag)};
  };

  PdhgResult r = pdhg(f_conj, g, k, x0, options.solver, objective);
  out.image = ComplexImage(a.domain(), std::move(r.x));
  out.trace = std::move(r.trace);
  out.iterations = r.iterations;
  out.last_prox_input = std::move(r.last_prox_input);
  return out;
}

ReconstructResult reconstruct(const LinearOperator& a, const ComplexImage& data,
                              const std::string& regularizer, double lambda,
                              const nlohmann::json& params, const ReconstructOptions& options) {
  const auto h = make_regularizer(regularizer, a.domain(), lambda, params);
  return reconstruct(a, data, *h, options);
}

double best_magnitude_scale(std::span<const cplx> estimate, std::span<const cplx> truth) {
  if (estimate.size() != truth.size()) throw InvalidInput("best_magnitude_scale: size mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    num += std::abs(estimate[i]) * std::abs(truth[i]);
    den += std::norm(estimate[i]);
  }
  return den > 0.0 ? std::max(num / den, 0.0) : 0.0;
}

double magnitude_psnr(std::span<const cplx> estimate, std::span<const cplx> truth) {
  if (estimate.size() != truth.size() || truth.empty()) {
    throw InvalidInput("magnitude_psnr: size mismatch");
  }
  double peak = 0.0, mse = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    peak = std::max(peak, std::abs(truth[i]));
    const double e = std::abs(estimate[i]) - std::abs(truth[i]);
    mse += e * e;
  }
  mse /= static_cast<double>(truth.size());
  if (mse == 0.0) return kInfinity;
  return 10.0 * std::log10(peak * peak / mse);
}

}  // namespace proxmag
