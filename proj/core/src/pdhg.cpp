#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "proxmag/solvers.hpp"

namespace proxmag {

std::string trace_csv(const SolverTrace& trace) {
  std::ostringstream os;
  os.precision(17);
  os << "iteration,objective,misfit,reg,step_change,seconds\n";
  for (const auto& e : trace.entries) {
    os << e.iteration << ',' << e.objective << ',' << e.misfit << ',' << e.reg << ','
       << e.step_change << ',' << e.seconds << '\n';
  }
  return os.str();
}

void write_trace_csv(const std::string& path, const SolverTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << trace_csv(trace);
  if (!out) throw IoError("failed writing " + path);
}

std::vector<cplx> prox_l2_data_conjugate(std::span<const cplx> y, double sigma,
                                         std::span<const cplx> d) {
  if (!(sigma >= 1e-12)) throw InvalidInput("prox_l2_data_conjugate: sigma must be >= 1e-12");
  if (y.size() != d.size()) throw InvalidInput("prox_l2_data_conjugate: size mismatch");
  std::vector<cplx> out(y.size());
  const double s = 1.0 / (1.0 + sigma);
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = (y[i] - sigma * d[i]) * s;
  return out;
}

PdhgResult pdhg(const ComplexProx& f_conj_prox, const ComplexProx& g_prox, const LinearOperator& k,
                std::span<const cplx> x0, const SolverConfig& config, const ObjectiveFn& objective) {
  const std::size_t n = k.domain().size(), m = k.range().size();
  if (x0.size() != n) throw InvalidInput("pdhg: x0 does not match the operator domain");
  if (config.trace_stride == 0) throw InvalidInput("pdhg: trace_stride must be >= 1");
  const double knorm = k.norm_estimate();

  PdhgResult r;
  const double auto_step = knorm > 0.0 ? 0.99 / knorm : 1.0;
  r.tau = config.tau.value_or(auto_step);
  r.sigma = config.sigma.value_or(auto_step);
  if (!(r.tau > 0.0) || !(r.sigma > 0.0)) throw InvalidInput("pdhg: steps must be > 0");
  if (r.sigma * r.tau * knorm * knorm > 1.0 + 1e-12) {
    throw InvalidInput("pdhg: step sizes violate sigma tau ||K||^2 <= 1");
  }

  const auto start = std::chrono::steady_clock::now();
  auto seconds = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  auto record = [&](std::size_t it, double change) {
    if (!objective) return;
    const ObjectiveParts p = objective(r.x);
    r.trace.entries.push_back({it, p.misfit + p.reg, p.misfit, p.reg, change, seconds()});
  };

  r.x.assign(x0.begin(), x0.end());
  r.y.assign(m, cplx{});
  std::vector<cplx> x_bar = r.x, kx(m), y_in(m), kty(n), x_in(n), x_new(n);
  record(0, 0.0);

  for (std::size_t it = 1; it <= config.max_iters; ++it) {
    k.apply(x_bar, kx);
    for (std::size_t i = 0; i < m; ++i) y_in[i] = r.y[i] + r.sigma * kx[i];
    f_conj_prox(y_in, r.sigma, r.y);

    k.adjoint(r.y, kty);
    for (std::size_t i = 0; i < n; ++i) x_in[i] = r.x[i] - r.tau * kty[i];
    g_prox(x_in, r.tau, x_new);
    if (!all_finite(std::span<const cplx>(x_new))) {
      throw SolverNumericalError("pdhg: non-finite iterate at iteration " + std::to_string(it),
                                 r.trace);
    }

    double diff2 = 0.0, norm2x = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx d = x_new[i] - r.x[i];
      diff2 += std::norm(d);
      norm2x += std::norm(x_new[i]);
      x_bar[i] = x_new[i] + config.theta * d;
    }
    r.x.swap(x_new);
    r.iterations = it;
    const double change = std::sqrt(diff2);
    const bool done = config.tol > 0.0 && change <= config.tol * std::sqrt(norm2x);
    if (it % config.trace_stride == 0 || it == config.max_iters || done) record(it, change);
    if (done) break;
  }
  r.last_prox_input = std::move(x_in);
  return r;
}

DrState douglas_rachford(const RealProx& prox_a, const RealProx& prox_b,
                         std::span<const double> y0, std::size_t max_iters, double tol) {
  const DrStop stop = [&](std::span<const double> x, std::span<const double> x_prev,
                          std::size_t k) {
    if (k == 0) return false;
    double change = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) change = std::max(change, std::abs(x[i] - x_prev[i]));
    return change < tol;
  };
  DrState s = douglas_rachford_loop(prox_a, prox_b, y0, max_iters, stop);
  if (!s.stopped) {
    throw DrConvergenceError("douglas_rachford: budget of " + std::to_string(max_iters) +
                                 " iterations exhausted",
                             std::move(s));
  }
  return s;
}

}  // namespace proxmag
