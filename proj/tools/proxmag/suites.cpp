#include "proxmag/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "proxmag/exact_oracles.hpp"
#include "proxmag/grid.hpp"
#include "proxmag/levelset.hpp"
#include "proxmag/prox.hpp"
#include "proxmag/regularizers.hpp"

namespace proxmag::suites {
namespace {

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string vec(std::span<const double> v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    // Avoid printing "-0.000000".
    const double x = std::abs(v[i]) < 5e-7 ? 0.0 : v[i];
    s += fmt(i ? ", %.6f" : "%.6f", x);
  }
  return s + "]";
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(gen_);
  }
  cplx phase() { return std::polar(1.0, uniform(-std::numbers::pi, std::numbers::pi)); }
  std::uint64_t bits() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

ComplexImage with_random_phase(std::span<const double> r, Rng& rng) {
  std::vector<cplx> z(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) z[i] = r[i] * rng.phase();
  return ComplexImage({1, 1, r.size()}, std::move(z));
}

double min_of(std::span<const double> v) { return *std::min_element(v.begin(), v.end()); }

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

void add(Report& r, std::string name, bool pass, std::string detail) {
  r.checks.push_back({std::move(name), pass, std::move(detail)});
}

// ---------------------------------------------------------------------------

const std::vector<double> kCounterW = {1.0, -0.7, 0.35, -0.7, 1.0, -0.9, 0.35, -0.9, 1.0};

void counterexample(Report& rep, std::uint64_t) {
  const std::vector<double> r = {2.0, 1e-9, 1e-9};
  const ComplexImage z({1, 1, 3}, {cplx{2.0, 0.0}, cplx{1e-9, 0.0}, cplx{1e-9, 0.0}});
  const MatrixWeightedL1 h({1, 1, 3}, kCounterW, 1.0);

  const auto unconstrained = h.prox(r, 1.0);
  const MagLiftResult lift = magnitude_lift(h, z, 1.0);
  const auto& lifted = lift.lifted.magnitude;

  rep.lines.push_back("W = [[1, -0.7, 0.35], [-0.7, 1, -0.9], [0.35, -0.9, 1]], z = [2, 1e-9, 1e-9]");
  rep.lines.push_back("prox_{||W.||_1}(|z|)   = " + vec(unconstrained));
  rep.lines.push_back("prox_{||W|.|||_1}(z)   = " + vec(lifted));
  rep.lines.push_back(fmt("fallback entered: %s, DR iterations: %zu",
                          lift.report.entered_fallback ? "yes" : "no", lift.report.dr_iterations));

  const auto exact_free = oracles::l1_matrix_prox_enumerate(r, kCounterW, 1.0, false);
  const auto exact_pos = oracles::l1_matrix_prox_enumerate(r, kCounterW, 1.0, true);
  rep.lines.push_back("enumeration oracle: unconstrained " + vec(exact_free.x) + ", orthant " +
                      vec(exact_pos.x));

  const double e1 = max_abs_diff(unconstrained, exact_free.x);
  add(rep, "unconstrained-vs-oracle", e1 <= 1e-8, fmt("max|err| = %.3e (tol 1e-8)", e1));
  add(rep, "unconstrained-leaves-orthant", min_of(unconstrained) < 0.0,
      fmt("min = %.6f", min_of(unconstrained)));
  add(rep, "lift-enters-fallback", lift.report.entered_fallback,
      fmt("DR iterations = %zu", lift.report.dr_iterations));
  add(rep, "lift-nonnegative", min_of(lifted) >= 0.0, fmt("min = %.3e", min_of(lifted)));
  const double e2 = max_abs_diff(lifted, exact_pos.x);
  add(rep, "lift-vs-oracle", e2 <= 1e-6, fmt("max|err| = %.3e (tol 1e-6)", e2));
  const double gap = oracles::l1_matrix_objective(lifted, r, kCounterW, 1.0) - exact_pos.objective;
  add(rep, "lift-objective-gap", gap <= 1e-9, fmt("gap = %.3e (tol 1e-9)", gap));

  const double eu = max_abs_diff(unconstrained, kReferenceUnconstrained);
  add(rep, "reference-unconstrained", eu <= kReferenceTolerance,
      fmt("want [0.826, 0.555, -0.025], max|err| = %.4f (tol %.4f)", eu, kReferenceTolerance));
  const double el = max_abs_diff(lifted, kReferenceLifted);
  add(rep, "reference-lifted", el <= kReferenceTolerance,
      fmt("want [0.815, 0.576, 0.005], max|err| = %.4f (tol %.4f)", el, kReferenceTolerance));
}

// ---------------------------------------------------------------------------

struct Instance {
  std::unique_ptr<ProxFunction> h;
  ComplexImage z;
  double step = 1.0;
  std::vector<cplx> feasible;
};

using Family = std::function<Instance(Rng&)>;

void theorem1(Report& rep, std::uint64_t seed) {
  constexpr std::size_t kInstances = 100;
  const std::vector<std::pair<std::string, Family>> families = {
      {"weighted-l1",
       [](Rng& g) {
         const std::size_t n = g.index(1, 4);
         std::vector<double> w(n), r(n);
         for (auto& v : w) v = g.uniform(0.1, 1.5);
         for (auto& v : r) v = g.uniform(0.0, 2.0);
         Instance in;
         in.h = std::make_unique<WeightedLpNorm>(Shape{1, 1, n}, 1, 1.0, w);
         in.z = with_random_phase(r, g);
         in.step = g.uniform(0.2, 1.5);
         return in;
       }},
      {"l2-squared",
       [](Rng& g) {
         const std::size_t n = g.index(1, 4);
         std::vector<double> r(n);
         for (auto& v : r) v = g.uniform(0.0, 2.0);
         Instance in;
         in.h = std::make_unique<SquaredL2>(Shape{1, 1, n}, g.uniform(0.1, 2.0));
         in.z = with_random_phase(r, g);
         in.step = g.uniform(0.2, 1.5);
         return in;
       }},
      {"box",
       [](Rng& g) {
         const std::size_t n = g.index(1, 4);
         std::vector<double> lo(n), hi(n), r(n);
         for (std::size_t i = 0; i < n; ++i) {
           lo[i] = g.uniform(0.0, 0.5);
           hi[i] = lo[i] + g.uniform(0.1, 1.5);
           r[i] = g.uniform(0.0, 2.0);
         }
         Instance in;
         in.h = std::make_unique<BoxIndicator>(Shape{1, 1, n}, lo, hi);
         in.z = with_random_phase(r, g);
         for (std::size_t i = 0; i < n; ++i) {
           in.feasible.push_back(0.5 * (lo[i] + hi[i]) * unit_phase(in.z.data()[i]));
         }
         in.step = g.uniform(0.2, 1.5);
         return in;
       }},
      {"tv-1d",
       [](Rng& g) {
         const std::size_t n = g.index(1, 4);
         std::vector<double> r(n);
         for (auto& v : r) v = g.uniform(0.0, 2.0);
         Instance in;
         TvOptions opt;
         opt.inner_iters = 5000;
         opt.gap_tol = 1e-13;
         in.h = std::make_unique<TotalVariation>(Shape{1, 1, n}, TvVariant::iso2d,
                                                 g.uniform(0.05, 1.0), opt);
         in.z = with_random_phase(r, g);
         in.step = g.uniform(0.2, 1.5);
         return in;
       }},
  };

  Rng rng(seed);
  for (const auto& [label, make] : families) {
    std::size_t exact = 0, fast = 0, beats = 0;
    double worst_excess = -kInfinity;
    for (std::size_t k = 0; k < kInstances; ++k) {
      const Instance in = make(rng);
      const MagLiftResult lift = magnitude_lift(*in.h, in.z, in.step);

      MagPhase expected = decompose(in.z);
      expected.magnitude = in.h->prox(expected.magnitude, in.step);
      const ComplexImage want = recompose(expected);
      if (want == lift.image) ++exact;
      if (!lift.report.entered_fallback && lift.report.dr_iterations == 0) ++fast;

      OracleOptions opt;
      opt.seed = rng.bits();
      opt.start = in.feasible;
      const ComplexImage brute = brute_force_prox_oracle(*in.h, in.z, in.step, opt);
      const double ours = complex_prox_objective(*in.h, lift.image.data(), in.z.data(), in.step);
      const double theirs = complex_prox_objective(*in.h, brute.data(), in.z.data(), in.step);
      const double excess = ours - theirs;
      if (excess <= 1e-6) ++beats;
      worst_excess = std::max(worst_excess, excess);
    }
    add(rep, "exact-" + label, exact == kInstances,
        fmt("%zu/%zu bitwise equal to prox_H(|z|) o phase(z)", exact, kInstances));
    add(rep, "no-fallback-" + label, fast == kInstances,
        fmt("%zu/%zu with 0 DR iterations", fast, kInstances));
    add(rep, "oracle-" + label, beats == kInstances,
        fmt("%zu/%zu within 1e-6 of brute force, worst excess %.3e", beats, kInstances,
            worst_excess));
  }
}

// ---------------------------------------------------------------------------

void theorem2(Report& rep, std::uint64_t seed) {
  constexpr std::size_t kPerFamily = 25;
  Rng rng(seed);

  {
    std::size_t nonneg = 0, fallback = 0, close = 0;
    double worst_gap = 0.0;
    for (std::size_t k = 0; k < kPerFamily;) {
      const std::size_t n = rng.index(2, 4);
      const std::size_t m = rng.index(2, 4);
      std::vector<double> w(m * n), r(n);
      for (auto& v : w) v = rng.uniform(-1.0, 1.0);
      for (auto& v : r) v = rng.uniform(0.0, 2.0);
      const double t = rng.uniform(0.3, 1.5);
      const auto free = oracles::l1_matrix_prox_enumerate(r, w, t, false);
      if (min_of(free.x) > -1e-3) continue;
      ++k;
      const auto exact = oracles::l1_matrix_prox_enumerate(r, w, t, true);
      const MatrixWeightedL1 h({1, 1, n}, w, 1.0);
      const ComplexImage z = with_random_phase(r, rng);
      const MagLiftResult lift = magnitude_lift(h, z, t);
      const auto& x = lift.lifted.magnitude;
      if (min_of(x) >= 0.0) ++nonneg;
      if (lift.report.entered_fallback) ++fallback;
      const double gap = oracles::l1_matrix_objective(x, r, w, t) - exact.objective;
      worst_gap = std::max(worst_gap, gap);
      if (gap <= 1e-5) ++close;
    }
    add(rep, "nonnegative-matrix-l1", nonneg == kPerFamily, fmt("%zu/%zu", nonneg, kPerFamily));
    add(rep, "fallback-matrix-l1", fallback == kPerFamily, fmt("%zu/%zu", fallback, kPerFamily));
    add(rep, "oracle-matrix-l1", close == kPerFamily,
        fmt("%zu/%zu within 1e-5 of the enumeration optimum, worst gap %.3e", close, kPerFamily,
            worst_gap));
  }

  {
    std::size_t nonneg = 0, fallback = 0, close = 0;
    double worst_gap = 0.0;
    for (std::size_t k = 0; k < kPerFamily;) {
      const std::size_t n = rng.index(5, 7);
      std::vector<double> r(n);
      for (auto& v : r) v = rng.uniform(0.0, 0.2);
      const bool left = rng.uniform(0.0, 1.0) < 0.5;
      r[left ? 0 : n - 1] = rng.uniform(1.5, 3.0);
      const double a = rng.uniform(0.3, 0.7);
      const double b = rng.uniform(0.5, 1.5);
      const auto free = oracles::tgv1d_bounded_prox(r, a, b, false, 50000);
      if (min_of(free.u) > -1e-3) continue;
      ++k;
      const auto cert = oracles::tgv1d_bounded_prox(r, a, b, true);
      TgvOptions opt;
      opt.inner_iters = 4000;
      const Tgv2 h({1, 1, n}, a, b, 1.0, opt);
      const ComplexImage z = with_random_phase(r, rng);
      MagLiftResult lift;
      try {
        lift = magnitude_lift(h, z, 1.0);
      } catch (const MagLiftConvergenceError&) {
        continue;
      }
      const auto& x = lift.lifted.magnitude;
      if (min_of(x) >= 0.0) ++nonneg;
      if (lift.report.entered_fallback) ++fallback;
      const double gap = oracles::tgv1d_prox_objective(x, r, a, b) - cert.lower_bound;
      worst_gap = std::max(worst_gap, gap);
      if (gap <= 1e-5) ++close;
    }
    add(rep, "nonnegative-tgv2-1d", nonneg == kPerFamily, fmt("%zu/%zu", nonneg, kPerFamily));
    add(rep, "fallback-tgv2-1d", fallback == kPerFamily, fmt("%zu/%zu", fallback, kPerFamily));
    add(rep, "oracle-tgv2-1d", close == kPerFamily,
        fmt("%zu/%zu within 1e-5 of the certified lower bound, worst gap %.3e", close, kPerFamily,
            worst_gap));
  }
}

// ---------------------------------------------------------------------------

double multibang_grid_oracle(double x, const MultiBangLevels& levels, double tau, double h) {
  const auto& a = levels.values();
  const auto steps = static_cast<std::size_t>(std::llround((a.back() - a.front()) / h));
  double best = kInfinity, arg = a.front();
  for (std::size_t k = 0; k <= steps; ++k) {
    const double y = a.front() + static_cast<double>(k) * h;
    const double v = tau * multibang_eval(std::span<const double>(&y, 1), levels) +
                     0.5 * (y - x) * (y - x);
    if (v < best) {
      best = v;
      arg = y;
    }
  }
  return arg;
}

void multibang(Report& rep, std::uint64_t seed) {
  constexpr std::size_t kSamples = 1000;
  constexpr double kGrid = 1e-4;
  const MultiBangLevels levels({0.0, 0.5, 1.0});
  Rng rng(seed);
  for (const double tau : {0.1, 0.25, 0.4}) {
    std::size_t ok = 0;
    double worst = 0.0;
    for (std::size_t k = 0; k < kSamples; ++k) {
      const double x = rng.uniform(-0.5, 1.5);
      const double ours = multibang_prox_scalar(x, levels, tau);
      const double grid = multibang_grid_oracle(x, levels, tau, kGrid);
      const double err = std::abs(ours - grid);
      worst = std::max(worst, err);
      if (err <= kGrid) ++ok;
    }
    add(rep, fmt("grid-oracle-tau-%.2f", tau), ok == kSamples,
        fmt("%zu/%zu within one grid step (%.0e), worst %.3e", ok, kSamples, kGrid, worst));
  }
}

// ---------------------------------------------------------------------------

void tgv_fallback(Report& rep, std::uint64_t) {
  const std::vector<double> r = {2.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  const double a = 0.5, b = 1.0;
  TgvOptions opt;
  opt.inner_iters = 4000;
  const Tgv2 h({1, 1, 6}, a, b, 1.0, opt);

  const auto free = h.prox(r, 1.0);
  const auto free_oracle = oracles::tgv1d_bounded_prox(r, a, b, false);
  rep.lines.push_back("r = [2, 0, 0, 0, 0, 0], alpha = 0.5, beta = 1");
  rep.lines.push_back("unconstrained prox = " + vec(free));
  add(rep, "unconstrained-leaves-orthant", min_of(free) < 0.0, fmt("min = %.6f", min_of(free)));
  const double e = max_abs_diff(free, free_oracle.u);
  add(rep, "unconstrained-vs-oracle", e <= 1e-4, fmt("max|err| = %.3e (tol 1e-4)", e));

  const ComplexImage z({1, 1, 6}, {r.begin(), r.end()});
  const MagLiftResult lift = magnitude_lift(h, z, 1.0);
  const auto& x = lift.lifted.magnitude;
  rep.lines.push_back("magnitude prox     = " + vec(x));
  add(rep, "lift-enters-fallback", lift.report.entered_fallback,
      fmt("DR iterations = %zu", lift.report.dr_iterations));
  add(rep, "lift-nonnegative", min_of(x) >= 0.0, fmt("min = %.3e", min_of(x)));
  const auto cert = oracles::tgv1d_bounded_prox(r, a, b, true);
  const double gap = oracles::tgv1d_prox_objective(x, r, a, b) - cert.lower_bound;
  add(rep, "lift-objective-gap", gap <= 1e-5, fmt("gap = %.3e (tol 1e-5)", gap));

  // Constants and affine ramps lie in the kernel of TGV2.
  const Shape s{1, 16, 16};
  std::vector<double> constant(s.size(), 0.7), ramp(s.size());
  for (std::size_t i = 0; i < 16; ++i) {
    for (std::size_t j = 0; j < 16; ++j) ramp[i * 16 + j] = 0.2 + 0.05 * i + 0.03 * j;
  }
  for (const auto& [label, u] : {std::pair{"constant", constant}, std::pair{"ramp", ramp}}) {
    const auto p = tgv2_prox(u, s, 1.0, 1.0, 1.0, TgvOptions{});
    const double d = max_abs_diff(p, u);
    add(rep, std::string("fixed-point-") + label, d <= 1e-4,
        fmt("max|prox(u) - u| = %.3e after 100 inner iterations (tol 1e-4)", d));
  }
}

// ---------------------------------------------------------------------------

LevelSetParams two_blobs() {
  LevelSetParams p;
  p.alpha = {1.0, 0.6};
  p.centers = {{-0.35, 0.1}, {0.4, -0.2}};
  p.beta = {{std::log(2.2), std::log(3.0)}, {std::log(2.8), std::log(2.4)}};
  p.gamma = {0.3, -0.5};
  p.c_high = 1.0;
  p.c_low = 0.1;
  p.level = 0.05;
  p.width = 0.0025;
  return p;
}

void levelset(Report& rep, std::uint64_t seed) {
  const SceneGrid grid = SceneGrid::centered(48, 48, 2.0 / 47.0);
  const LevelSetParams truth = two_blobs();
  const std::vector<double> r = palentir_render(truth, grid);

  Rng rng(seed);
  LevelSetParams start = truth;
  std::vector<double> packed = start.pack();
  for (double& v : packed) v += 0.05 * std::max(std::abs(v), 0.1) * (rng.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0);
  start.unpack(packed);

  // Jacobian against central differences at the perturbed point.
  const auto jac = palentir_jacobian(start, grid);
  const std::size_t cols = start.free_count();
  double worst = 0.0;
  for (std::size_t c = 0; c < cols; ++c) {
    const double h = 1e-6;
    auto plus = packed, minus = packed;
    plus[c] += h;
    minus[c] -= h;
    LevelSetParams pp = start, pm = start;
    pp.unpack(plus);
    pm.unpack(minus);
    const auto fp = palentir_render(pp, grid);
    const auto fm = palentir_render(pm, grid);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double fd = (fp[i] - fm[i]) / (2.0 * h);
      num = std::max(num, std::abs(fd - jac[i * cols + c]));
      den = std::max(den, std::abs(fd));
    }
    worst = std::max(worst, num / std::max(den, 1e-12));
  }
  add(rep, "jacobian-finite-difference", worst < 1e-5,
      fmt("max column-relative error %.3e (tol 1e-5)", worst));

  const LevelSetProjection proj = levelset_project(r, grid, start);
  double res = 0.0, nr = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    res += (proj.image[i] - r[i]) * (proj.image[i] - r[i]);
    nr += r[i] * r[i];
  }
  const double rel = std::sqrt(res / nr);
  rep.lines.push_back(fmt("Gauss-Newton: %zu accepted steps, objective %.3e -> %.3e",
                          proj.iterations, proj.objective.front(), proj.objective.back()));
  add(rep, "self-recovery", rel < 1e-3, fmt("||f(p) - r|| / ||r|| = %.3e (tol 1e-3)", rel));
  bool monotone = true;
  for (std::size_t k = 1; k < proj.objective.size(); ++k) {
    monotone &= proj.objective[k] < proj.objective[k - 1];
  }
  add(rep, "objective-decreasing", monotone, fmt("%zu values", proj.objective.size()));

  // Complex prox keeps the phase of its input.
  std::vector<cplx> zv(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) zv[i] = (r[i] + 0.5) * rng.phase();
  const ComplexImage z({1, grid.height, grid.width}, std::move(zv));
  const LevelSetProx lp = levelset_prox_complex(z, grid, start);
  double phase_err = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    phase_err = std::max(phase_err, std::abs(unit_phase(lp.image.data()[i]) - unit_phase(z.data()[i])));
  }
  add(rep, "phase-preserved", phase_err <= 1e-12, fmt("max phase error %.3e", phase_err));
}

}  // namespace

// ---------------------------------------------------------------------------

bool Report::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Check* Report::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string Report::text() const {
  std::ostringstream os;
  os << "suite " << suite << " (seed " << seed << ")\n";
  for (const auto& l : lines) os << "  " << l << "\n";
  std::size_t passed = 0;
  for (const auto& c : checks) {
    os << "  " << (c.pass ? "PASS" : "FAIL") << "  " << c.name << ": " << c.detail << "\n";
    passed += c.pass ? 1 : 0;
  }
  os << (passed == checks.size() ? "PASS" : "FAIL") << " " << suite << ": " << passed << "/"
     << checks.size() << " checks passed\n";
  return os.str();
}

const std::vector<std::string>& names() {
  static const std::vector<std::string> n = {"counterexample", "theorem1", "theorem2",
                                             "multibang", "tgv-fallback", "levelset"};
  return n;
}

bool known(const std::string& name) {
  return std::find(names().begin(), names().end(), name) != names().end();
}

Report run(const std::string& name, std::uint64_t seed) {
  static const std::map<std::string, void (*)(Report&, std::uint64_t)> table = {
      {"counterexample", counterexample}, {"theorem1", theorem1},
      {"theorem2", theorem2},             {"multibang", multibang},
      {"tgv-fallback", tgv_fallback},     {"levelset", levelset},
  };
  const auto it = table.find(name);
  if (it == table.end()) throw std::invalid_argument("unknown suite '" + name + "'");
  Report rep;
  rep.suite = name;
  rep.seed = seed;
  it->second(rep, seed);
  return rep;
}

}  // namespace proxmag::suites
