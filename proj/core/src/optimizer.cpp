#include "qeed/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include <Eigen/Dense>

#include "qeed/model.hpp"

namespace qeed {

namespace {

constexpr double kPi = std::numbers::pi;

struct Evaluation {
  double infidelity = 0.0;
  double distance = 0.0;  // sum over axes of |r^j(T)|
};

// Noisy final unitary and error-curve endpoints in a single pass.
Evaluation evaluate(const Hamiltonian2& h, double duration, int steps, const Mat2& target, const std::set<Axis>& axes) {
  const double dt = duration / steps;
  Mat2 u = Mat2::Identity();
  std::vector<Axis> ax(axes.begin(), axes.end());
  std::vector<Vec3> prev(ax.size()), r(ax.size(), Vec3::Zero());
  for (std::size_t i = 0; i < ax.size(); ++i) prev[i] = Vec3::Unit(axis_index(ax[i]));
  for (int k = 0; k < steps; ++k) {
    u = pauli_exponential(h((k + 0.5) * dt), dt) * u;
    for (std::size_t i = 0; i < ax.size(); ++i) {
      const Vec3 t = conjugated_axis(u, ax[i]);
      r[i] += 0.5 * dt * (t + prev[i]);
      prev[i] = t;
    }
  }
  Evaluation e;
  e.infidelity = 1.0 - gate_fidelity(u, target);
  for (const auto& v : r) e.distance += v.norm();
  return e;
}

}  // namespace

void OptimizationConfig::validate() const {
  if (!(tolerance > 0.0)) throw std::invalid_argument("OptimizationConfig: tolerance must be positive");
  if (restarts < 1) throw std::invalid_argument("OptimizationConfig: restarts must be at least 1");
  if (max_iterations < 0) throw std::invalid_argument("OptimizationConfig: max_iterations must be non-negative");
  if (!(fd_step > 0.0)) throw std::invalid_argument("OptimizationConfig: fd_step must be positive");
}

std::vector<double> OptimizationConfig::detuning_grid(double duration) const {
  if (!extended) return {0.0};
  if (!detunings.empty()) return detunings;
  return {0.0, kPi / duration};
}

CostBreakdown cost(const FourierPulseParams& params, const Mat2& target, const OptimizationConfig& config) {
  const ControlPulse pulse = fourier_waveform(params);
  const Hamiltonian2 drive = drive_hamiltonian(pulse);
  const double duration = params.duration;
  const int steps = config.steps > 0 ? config.steps : default_steps(duration);
  CostBreakdown c;
  for (double delta : config.detuning_grid(duration)) {
    Hamiltonian2 h = drive;
    if (delta != 0.0) {
      const PauliCoefficients v = NoiseSpec::detuning(delta).coefficients();
      h = [drive, v](double t) { return drive(t) + v; };
    }
    const Evaluation e = evaluate(h, duration, steps, target, config.axes);
    c.infidelity += e.infidelity;
    c.xi += e.distance / duration;
  }
  c.total = c.infidelity + c.xi;
  return c;
}

namespace {

class Objective {
 public:
  Objective(FourierPulseParams base, Mat2 target, const OptimizationConfig& config)
      : base_(std::move(base)), target_(std::move(target)), config_(config) {}

  CostBreakdown operator()(const Eigen::VectorXd& x) const {
    FourierPulseParams p = base_;
    p.unpack(std::vector<double>(x.data(), x.data() + x.size()), config_.optimize_phase);
    return cost(p, target_, config_);
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const {
    const Eigen::Index n = x.size();
    Eigen::VectorXd g(n);
    auto component = [&](Eigen::Index i) {
      const double h = config_.fd_step * std::max(1.0, std::abs(x[i]));
      Eigen::VectorXd xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      g[i] = ((*this)(xp).total - (*this)(xm).total) / (2.0 * h);
    };
    const int threads = std::max(1, std::min<int>(config_.threads, static_cast<int>(n)));
    if (threads == 1) {
      for (Eigen::Index i = 0; i < n; ++i) component(i);
      return g;
    }
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (Eigen::Index i = w; i < n; i += threads) component(i);
      });
    }
    for (auto& t : pool) t.join();
    return g;
  }

 private:
  FourierPulseParams base_;
  Mat2 target_;
  const OptimizationConfig& config_;
};

struct AttemptResult {
  Eigen::VectorXd x;
  CostBreakdown cost;
};

AttemptResult bfgs(const Objective& f, Eigen::VectorXd x, const OptimizationConfig& config, int attempt,
                   std::vector<TraceEntry>& trace) {
  const Eigen::Index n = x.size();
  CostBreakdown fx = f(x);
  trace.push_back({attempt, 0, fx.total, fx.infidelity, fx.xi, 0.0});
  if (n == 0) return {x, fx};
  Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd g = f.gradient(x);
  for (int it = 1; it <= config.max_iterations && fx.total >= config.tolerance; ++it) {
    Eigen::VectorXd d = -hinv * g;
    double slope = g.dot(d);
    if (!(slope < 0.0)) {
      hinv.setIdentity();
      d = -g;
      slope = -g.squaredNorm();
    }
    if (slope == 0.0) break;
    // Keep each trial step local; far jumps land on high-amplitude solutions.
    const double longest = d.lpNorm<Eigen::Infinity>();
    double step = longest > config.max_step ? config.max_step / longest : 1.0;
    bool accepted = false;
    Eigen::VectorXd xn;
    CostBreakdown fn;
    while (step > 1e-12) {
      xn = x + step * d;
      fn = f(xn);
      if (fn.total <= fx.total + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const Eigen::VectorXd gn = f.gradient(xn);
    const Eigen::VectorXd s = xn - x, y = gn - g;
    const double sy = s.dot(y);
    if (sy > 1e-16) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
      hinv = (id - rho * s * y.transpose()) * hinv * (id - rho * y * s.transpose()) + rho * s * s.transpose();
    }
    x = xn;
    fx = fn;
    g = gn;
    trace.push_back({attempt, it, fx.total, fx.infidelity, fx.xi, step});
  }
  return {x, fx};
}

}  // namespace

OptimizationResult optimize(const FourierPulseParams& init, const Mat2& target, const OptimizationConfig& config) {
  config.validate();
  init.validate();
  const Objective f(init, target, config);
  const std::vector<double> x0v = init.pack(config.optimize_phase);
  const Eigen::VectorXd x0 = Eigen::Map<const Eigen::VectorXd>(x0v.data(), static_cast<Eigen::Index>(x0v.size()));

  std::mt19937_64 rng(config.seed);
  const double sigma = config.perturbation * 50.0 / init.duration;
  std::normal_distribution<double> normal(0.0, sigma);
  std::uniform_real_distribution<double> uniform(-kPi, kPi);

  OptimizationResult out;
  AttemptResult best{x0, {std::numeric_limits<double>::infinity(), 0.0, 0.0}};
  for (int attempt = 0; attempt < config.restarts; ++attempt) {
    Eigen::VectorXd start = x0;
    if (attempt > 0) {
      // Amplitude coefficients get Gaussian kicks, harmonic phases are redrawn.
      const auto na = static_cast<Eigen::Index>(init.a.size());
      const auto np = static_cast<Eigen::Index>(init.phi.size());
      for (Eigen::Index i = 0; i < na; ++i) start[i] += normal(rng);
      for (Eigen::Index i = 0; i < np; ++i) start[na + i] = uniform(rng);
      if (config.optimize_phase) {
        const auto nb = static_cast<Eigen::Index>(init.b.size());
        const auto ns = static_cast<Eigen::Index>(init.psi.size());
        const double kick = init.scheme == DriveScheme::InPhaseQuadrature ? sigma : 0.5;
        for (Eigen::Index i = 0; i < nb; ++i) start[na + np + i] += kick * normal(rng) / sigma;
        for (Eigen::Index i = 0; i < ns; ++i) start[na + np + nb + i] = uniform(rng);
      }
    }
    AttemptResult r = bfgs(f, start, config, attempt, out.trace.entries);
    out.trace.attempts = attempt + 1;
    if (r.cost.total < best.cost.total) {
      best = r;
      out.trace.best_attempt = attempt;
    }
    if (best.cost.total < config.tolerance) break;
  }
  out.params = init;
  out.params.unpack(std::vector<double>(best.x.data(), best.x.data() + best.x.size()), config.optimize_phase);
  out.trace.params = out.params;
  out.trace.final_cost = best.cost;
  out.trace.converged = best.cost.total < config.tolerance;
  return out;
}

FourierPulseParams initial_params(double angle, double duration, int n, int n_phase, DriveScheme scheme,
                                  std::uint64_t seed) {
  if (n < 0) throw std::invalid_argument("initial_params: n must be non-negative");
  if (!(duration > 0.0)) throw std::invalid_argument("initial_params: duration must be positive");
  FourierPulseParams p;
  p.duration = duration;
  p.scheme = scheme;
  p.a.assign(static_cast<std::size_t>(n) + 1, 0.0);
  p.phi.assign(static_cast<std::size_t>(n), 0.0);
  // \int_0^T a0 sin(pi t/T) dt = 2 a0 T / pi.
  p.a[0] = std::abs(angle) * kPi / (2.0 * duration);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 0.05 * 50.0 / duration);
  std::uniform_real_distribution<double> uniform(-kPi, kPi);
  for (int j = 1; j <= n; ++j) {
    p.a[static_cast<std::size_t>(j)] = normal(rng);
    p.phi[static_cast<std::size_t>(j) - 1] = uniform(rng);
  }
  if (n_phase >= 0) {
    p.b.assign(static_cast<std::size_t>(n_phase) + 1, 0.0);
    p.psi.assign(static_cast<std::size_t>(n_phase), 0.0);
    const double scale = scheme == DriveScheme::InPhaseQuadrature ? 0.05 * 50.0 / duration : 0.5;
    std::normal_distribution<double> kick(0.0, scale);
    for (int j = 1; j <= n_phase; ++j) {
      p.b[static_cast<std::size_t>(j)] = kick(rng);
      p.psi[static_cast<std::size_t>(j) - 1] = uniform(rng);
    }
  }
  p.n = p.inferred_components();
  return p;
}

}  // namespace qeed
