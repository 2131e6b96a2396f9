#include "qeed/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace qeed {

namespace {

constexpr double kPi = std::numbers::pi;

double central_difference(const Waveform::Function& f, double t) {
  const double h = 1e-5 * std::max(1.0, std::abs(t));
  return (f(t + h) - f(t - h)) / (2.0 * h);
}

// Wraps phi into (-pi/2, pi/2] and flips the amplitude sign to compensate.
void canonicalize_harmonic(double& amplitude, double& phase) {
  phase = std::remainder(phase, 2.0 * kPi);
  if (phase > kPi / 2.0) {
    phase -= kPi;
    amplitude = -amplitude;
  } else if (phase <= -kPi / 2.0) {
    phase += kPi;
    amplitude = -amplitude;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Waveform

Waveform::Waveform()
    : value_([](double) { return 0.0; }), derivative_([](double) { return 0.0; }) {}

Waveform Waveform::constant(double value) {
  Waveform w;
  w.value_ = [value](double) { return value; };
  w.derivative_ = [](double) { return 0.0; };
  return w;
}

Waveform Waveform::function(Function value, Function derivative) {
  if (!value) throw std::invalid_argument("Waveform::function: empty value function");
  Waveform w;
  w.value_ = std::move(value);
  if (derivative) {
    w.derivative_ = std::move(derivative);
  } else {
    w.derivative_ = [f = w.value_](double t) { return central_difference(f, t); };
  }
  return w;
}

Waveform Waveform::sampled(std::vector<double> values, double duration) {
  if (values.size() < 2) throw std::invalid_argument("Waveform::sampled: need at least two samples");
  if (!(duration > 0.0)) throw std::invalid_argument("Waveform::sampled: duration must be positive");
  struct Spline {
    std::vector<double> y;
    std::vector<double> slope;  // dy/dt at the nodes
    double h;
    double duration;

    std::pair<std::size_t, double> locate(double t) const {
      const double x = std::clamp(t, 0.0, duration) / h;
      auto k = static_cast<std::size_t>(x);
      if (k >= y.size() - 1) k = y.size() - 2;
      return {k, x - static_cast<double>(k)};
    }
    double value(double t) const {
      auto [k, u] = locate(t);
      const double u2 = u * u, u3 = u2 * u;
      return (2 * u3 - 3 * u2 + 1) * y[k] + (u3 - 2 * u2 + u) * h * slope[k] + (-2 * u3 + 3 * u2) * y[k + 1] +
             (u3 - u2) * h * slope[k + 1];
    }
    double derivative(double t) const {
      auto [k, u] = locate(t);
      const double u2 = u * u;
      return ((6 * u2 - 6 * u) * y[k] + (3 * u2 - 4 * u + 1) * h * slope[k] + (-6 * u2 + 6 * u) * y[k + 1] +
              (3 * u2 - 2 * u) * h * slope[k + 1]) /
             h;
    }
  };
  auto s = std::make_shared<Spline>();
  s->y = std::move(values);
  s->duration = duration;
  const std::size_t n = s->y.size();
  s->h = duration / static_cast<double>(n - 1);
  s->slope.resize(n);
  const auto& y = s->y;
  const double h = s->h;
  if (n == 2) {
    s->slope[0] = s->slope[1] = (y[1] - y[0]) / h;
  } else {
    for (std::size_t k = 1; k + 1 < n; ++k) s->slope[k] = (y[k + 1] - y[k - 1]) / (2 * h);
    s->slope[0] = (-3 * y[0] + 4 * y[1] - y[2]) / (2 * h);
    s->slope[n - 1] = (3 * y[n - 1] - 4 * y[n - 2] + y[n - 3]) / (2 * h);
  }
  Waveform w;
  w.value_ = [s](double t) { return s->value(t); };
  w.derivative_ = [s](double t) { return s->derivative(t); };
  return w;
}

double Waveform::derivative(double t) const { return derivative_(t); }

// ---------------------------------------------------------------------------
// Units

double amplitude_scale(AmplitudeUnit unit) {
  return unit == AmplitudeUnit::GHzLinear ? 2.0 * kPi : 1.0;
}

std::string to_string(AmplitudeUnit unit) {
  return unit == AmplitudeUnit::GHzLinear ? "GHz-linear" : "rad-per-ns";
}

AmplitudeUnit parse_amplitude_unit(const std::string& s) {
  if (s == "rad-per-ns" || s == "rad/ns") return AmplitudeUnit::RadPerNs;
  if (s == "GHz-linear" || s == "GHz") return AmplitudeUnit::GHzLinear;
  throw std::invalid_argument("unknown amplitude unit '" + s + "' (expected rad-per-ns or GHz-linear)");
}

// ---------------------------------------------------------------------------
// ControlPulse

ControlPulse::ControlPulse(double duration, Waveform amplitude, Waveform phase)
    : duration_(duration), first_(std::move(amplitude)), second_(std::move(phase)) {
  if (!(duration > 0.0)) throw std::invalid_argument("ControlPulse: duration must be positive");
}

ControlPulse ControlPulse::in_phase_quadrature(double duration, Waveform x, Waveform y) {
  ControlPulse p(duration, std::move(x), std::move(y));
  p.scheme_ = DriveScheme::InPhaseQuadrature;
  return p;
}

double ControlPulse::phase(double t) const {
  if (scheme_ == DriveScheme::AmplitudePhase) return second_(t);
  return std::atan2(second_(t), first_(t));
}

double ControlPulse::phase_rate(double t) const {
  if (scheme_ == DriveScheme::AmplitudePhase) return second_.derivative(t);
  const double x = first_(t), y = second_(t);
  const double r2 = x * x + y * y;
  if (r2 == 0.0) return 0.0;
  return (x * second_.derivative(t) - y * first_.derivative(t)) / r2;
}

double ControlPulse::in_phase(double t) const {
  if (scheme_ == DriveScheme::InPhaseQuadrature) return first_(t);
  return first_(t) * std::cos(second_(t));
}

double ControlPulse::quadrature(double t) const {
  if (scheme_ == DriveScheme::InPhaseQuadrature) return second_(t);
  return first_(t) * std::sin(second_(t));
}

double ControlPulse::max_amplitude(int samples) const {
  double m = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double t = duration_ * k / (samples - 1);
    const double v = scheme_ == DriveScheme::AmplitudePhase ? std::abs(first_(t))
                                                            : std::hypot(first_(t), second_(t));
    m = std::max(m, v);
  }
  return m;
}

double ControlPulse::area(int samples) const {
  if (samples % 2 == 0) ++samples;
  const int intervals = samples - 1;
  const double h = duration_ / intervals;
  double sum = first_(0.0) + first_(duration_);
  for (int k = 1; k < intervals; ++k) sum += (k % 2 ? 4.0 : 2.0) * first_(k * h);
  return sum * h / 3.0;
}

ControlPulse ControlPulse::with_phase_offset(double offset) const {
  if (scheme_ == DriveScheme::AmplitudePhase) {
    const Waveform phi = second_;
    return ControlPulse(duration_, first_,
                        Waveform::function([phi, offset](double t) { return phi(t) + offset; },
                                           [phi](double t) { return phi.derivative(t); }));
  }
  // Rotate the (x, y) quadratures by `offset`.
  const Waveform x = first_, y = second_;
  const double c = std::cos(offset), s = std::sin(offset);
  return in_phase_quadrature(
      duration_,
      Waveform::function([=](double t) { return c * x(t) - s * y(t); },
                         [=](double t) { return c * x.derivative(t) - s * y.derivative(t); }),
      Waveform::function([=](double t) { return s * x(t) + c * y(t); },
                         [=](double t) { return s * x.derivative(t) + c * y.derivative(t); }));
}

// ---------------------------------------------------------------------------
// Fourier ansatz

void FourierPulseParams::validate() const {
  if (!(duration > 0.0)) throw std::invalid_argument("FourierPulseParams: T must be positive");
  if (a.empty()) throw std::invalid_argument("FourierPulseParams: 'a' needs at least a0");
  if (phi.size() + 1 != a.size()) {
    throw std::invalid_argument("FourierPulseParams: 'phi' must have one entry fewer than 'a'");
  }
  if (!b.empty() && psi.size() + 1 != b.size()) {
    throw std::invalid_argument("FourierPulseParams: 'psi' must have one entry fewer than 'b'");
  }
  if (b.empty() && !psi.empty()) throw std::invalid_argument("FourierPulseParams: 'psi' given without 'b'");
  if (n != inferred_components()) {
    throw std::invalid_argument("FourierPulseParams: n = " + std::to_string(n) +
                                " disagrees with array lengths (implies " + std::to_string(inferred_components()) +
                                ")");
  }
}

int FourierPulseParams::inferred_components() const {
  const int na = a.empty() ? 0 : static_cast<int>(a.size()) - 1;
  const int nb = b.empty() ? 0 : static_cast<int>(b.size()) - 1;
  return std::max(na, nb);
}

std::vector<double> FourierPulseParams::pack(bool include_phase) const {
  std::vector<double> x(a);
  x.insert(x.end(), phi.begin(), phi.end());
  if (include_phase) {
    x.insert(x.end(), b.begin(), b.end());
    x.insert(x.end(), psi.begin(), psi.end());
  }
  return x;
}

void FourierPulseParams::unpack(const std::vector<double>& x, bool include_phase) {
  const std::size_t need = a.size() + phi.size() + (include_phase ? b.size() + psi.size() : 0);
  if (x.size() != need) throw std::invalid_argument("FourierPulseParams::unpack: size mismatch");
  auto it = x.begin();
  for (auto& v : a) v = *it++;
  for (auto& v : phi) v = *it++;
  if (include_phase) {
    for (auto& v : b) v = *it++;
    for (auto& v : psi) v = *it++;
  }
}

FourierPulseParams FourierPulseParams::with_components(int n_amplitude, int n_phase) const {
  FourierPulseParams p = *this;
  p.a.resize(static_cast<std::size_t>(n_amplitude) + 1, 0.0);
  p.phi.resize(static_cast<std::size_t>(n_amplitude), 0.0);
  if (n_phase >= 0) {
    p.b.resize(static_cast<std::size_t>(n_phase) + 1, 0.0);
    p.psi.resize(static_cast<std::size_t>(n_phase), 0.0);
  } else {
    p.b.clear();
    p.psi.clear();
  }
  p.n = p.inferred_components();
  return p;
}

namespace {

// c0 + sum c_j cos(w j t + p_j) and its derivative.
struct CosineSeries {
  std::vector<double> c;
  std::vector<double> p;
  double w;

  double value(double t) const {
    double s = c[0];
    for (std::size_t j = 1; j < c.size(); ++j) s += c[j] * std::cos(w * j * t + p[j - 1]);
    return s;
  }
  double derivative(double t) const {
    double s = 0.0;
    for (std::size_t j = 1; j < c.size(); ++j) s -= c[j] * w * j * std::sin(w * j * t + p[j - 1]);
    return s;
  }
};

Waveform enveloped(CosineSeries series, double duration) {
  const double k = kPi / duration;
  return Waveform::function(
      [series, k](double t) { return std::sin(k * t) * series.value(t); },
      [series, k](double t) {
        return k * std::cos(k * t) * series.value(t) + std::sin(k * t) * series.derivative(t);
      });
}

Waveform bare(CosineSeries series) {
  return Waveform::function([series](double t) { return series.value(t); },
                            [series](double t) { return series.derivative(t); });
}

}  // namespace

ControlPulse fourier_waveform(const FourierPulseParams& params) {
  params.validate();
  const double scale = amplitude_scale(params.unit);
  const double w = 2.0 * kPi / params.duration;
  CosineSeries amp{params.a, params.phi, w};
  for (auto& v : amp.c) v *= scale;
  if (params.scheme == DriveScheme::InPhaseQuadrature) {
    CosineSeries y{params.b.empty() ? std::vector<double>{0.0} : params.b, params.psi, w};
    for (auto& v : y.c) v *= scale;
    return ControlPulse::in_phase_quadrature(params.duration, enveloped(amp, params.duration),
                                             enveloped(y, params.duration));
  }
  if (params.b.empty()) return ControlPulse(params.duration, enveloped(amp, params.duration));
  return ControlPulse(params.duration, enveloped(amp, params.duration), bare(CosineSeries{params.b, params.psi, w}));
}

namespace {

struct LinearFit {
  Eigen::VectorXd coefficients;
  double condition = 0.0;
  bool regularized = false;
};

LinearFit solve_least_squares(const Eigen::MatrixXd& basis, const Eigen::VectorXd& y) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(basis, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  LinearFit fit;
  fit.condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
  if (fit.condition > 1e10) {
    // Tikhonov with lambda tied to the largest singular value.
    const double lambda = 1e-10 * sv(0);
    Eigen::VectorXd filtered = Eigen::VectorXd::Zero(sv.size());
    const Eigen::VectorXd uty = svd.matrixU().transpose() * y;
    for (Eigen::Index i = 0; i < sv.size(); ++i) filtered(i) = sv(i) * uty(i) / (sv(i) * sv(i) + lambda * lambda);
    fit.coefficients = svd.matrixV() * filtered;
    fit.regularized = true;
  } else {
    fit.coefficients = svd.solve(y);
  }
  return fit;
}

// Columns: env, env cos(wjt), -env sin(wjt) for j = 1..n.
Eigen::MatrixXd cosine_basis(const std::vector<double>& t, double duration, int n, bool envelope) {
  const double w = 2.0 * kPi / duration;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(t.size()), 1 + 2 * n);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double env = envelope ? std::sin(kPi * t[i] / duration) : 1.0;
    const auto r = static_cast<Eigen::Index>(i);
    m(r, 0) = env;
    for (int j = 1; j <= n; ++j) {
      m(r, 2 * j - 1) = env * std::cos(w * j * t[i]);
      m(r, 2 * j) = -env * std::sin(w * j * t[i]);
    }
  }
  return m;
}

void unpack_harmonics(const Eigen::VectorXd& coef, int n, std::vector<double>& amp, std::vector<double>& phase) {
  amp.assign(static_cast<std::size_t>(n) + 1, 0.0);
  phase.assign(static_cast<std::size_t>(n), 0.0);
  amp[0] = coef(0);
  for (int j = 1; j <= n; ++j) {
    const double c = coef(2 * j - 1), s = coef(2 * j);
    double a = std::hypot(c, s);
    double p = std::atan2(s, c);
    canonicalize_harmonic(a, p);
    amp[static_cast<std::size_t>(j)] = a;
    phase[static_cast<std::size_t>(j) - 1] = p;
  }
}

}  // namespace

FourierFit fit_fourier(const std::vector<double>& amplitude, double duration, int n,
                       const std::vector<double>& phase, int n_phase) {
  if (n < 0) throw std::invalid_argument("fit_fourier: n must be non-negative");
  if (amplitude.size() < static_cast<std::size_t>(2 * n + 3)) {
    throw std::invalid_argument("fit_fourier: too few samples for the requested number of components");
  }
  if (!phase.empty() && phase.size() != amplitude.size()) {
    throw std::invalid_argument("fit_fourier: amplitude and phase must share the grid");
  }
  const std::size_t m = amplitude.size();
  std::vector<double> t(m);
  for (std::size_t i = 0; i < m; ++i) t[i] = duration * static_cast<double>(i) / static_cast<double>(m - 1);

  FourierFit out;
  out.params.duration = duration;
  const Eigen::Map<const Eigen::VectorXd> y(amplitude.data(), static_cast<Eigen::Index>(m));
  const Eigen::MatrixXd basis = cosine_basis(t, duration, n, true);
  const LinearFit fit = solve_least_squares(basis, y);
  unpack_harmonics(fit.coefficients, n, out.params.a, out.params.phi);
  out.condition_number = fit.condition;
  out.regularized = fit.regularized;
  if (fit.regularized) out.warnings.push_back("amplitude fit ill-conditioned; Tikhonov-regularized");

  double sq = (basis * fit.coefficients - y).squaredNorm();
  double norm2 = y.squaredNorm();
  std::size_t count = m;

  if (!phase.empty()) {
    if (n_phase < 0) n_phase = n;
    const Eigen::Map<const Eigen::VectorXd> yp(phase.data(), static_cast<Eigen::Index>(m));
    const Eigen::MatrixXd pb = cosine_basis(t, duration, n_phase, false);
    const LinearFit pf = solve_least_squares(pb, yp);
    unpack_harmonics(pf.coefficients, n_phase, out.params.b, out.params.psi);
    if (pf.regularized) {
      out.regularized = true;
      out.warnings.push_back("phase fit ill-conditioned; Tikhonov-regularized");
    }
    out.condition_number = std::max(out.condition_number, pf.condition);
    sq += (pb * pf.coefficients - yp).squaredNorm();
    norm2 += yp.squaredNorm();
    count += m;
  }
  out.params.n = out.params.inferred_components();
  out.residual_rms = std::sqrt(sq / static_cast<double>(count));
  const double rms = std::sqrt(norm2 / static_cast<double>(count));
  out.relative_residual = rms > 0.0 ? out.residual_rms / rms : out.residual_rms;
  out.poor_fit = out.relative_residual > kPoorFitThreshold;
  if (out.poor_fit) out.warnings.push_back("waveform not well represented by the truncated ansatz");
  return out;
}

// ---------------------------------------------------------------------------
// Rescaling and reference pulses

ControlPulse rescale_pulse(const ControlPulse& pulse, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("rescale_pulse: alpha must be positive");
  if (alpha == 1.0) return pulse;
  const Waveform f = pulse.first_channel();
  const Waveform g = pulse.second_channel();
  Waveform amp = Waveform::function([f, alpha](double t) { return f(t / alpha) / alpha; },
                                    [f, alpha](double t) { return f.derivative(t / alpha) / (alpha * alpha); });
  if (pulse.scheme() == DriveScheme::InPhaseQuadrature) {
    Waveform y = Waveform::function([g, alpha](double t) { return g(t / alpha) / alpha; },
                                    [g, alpha](double t) { return g.derivative(t / alpha) / (alpha * alpha); });
    return ControlPulse::in_phase_quadrature(pulse.duration() * alpha, amp, y);
  }
  Waveform phase = Waveform::function([g, alpha](double t) { return g(t / alpha); },
                                      [g, alpha](double t) { return g.derivative(t / alpha) / alpha; });
  return ControlPulse(pulse.duration() * alpha, amp, phase);
}

FourierPulseParams rescale_params(const FourierPulseParams& params, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("rescale_params: alpha must be positive");
  FourierPulseParams p = params;
  if (alpha == 1.0) return p;
  p.duration *= alpha;
  for (auto& v : p.a) v /= alpha;
  if (p.scheme == DriveScheme::InPhaseQuadrature) {
    for (auto& v : p.b) v /= alpha;
  }
  return p;
}

ControlPulse cosine_pulse_with_duration(double angle, double duration) {
  const double peak = 2.0 * angle / duration;
  const double w = 2.0 * kPi / duration;
  return ControlPulse(duration, Waveform::function([=](double t) { return 0.5 * peak * (1.0 - std::cos(w * t)); },
                                                   [=](double t) { return 0.5 * peak * w * std::sin(w * t); }));
}

ControlPulse cosine_pulse(double angle, double max_amplitude) {
  if (!(max_amplitude > 0.0)) throw std::invalid_argument("cosine_pulse: max amplitude must be positive");
  return cosine_pulse_with_duration(angle, 2.0 * std::abs(angle) / max_amplitude);
}

ControlPulse sine_pulse(double angle, double duration) {
  const double a = angle * kPi / (2.0 * duration);
  const double k = kPi / duration;
  return ControlPulse(duration, Waveform::function([=](double t) { return a * std::sin(k * t); },
                                                   [=](double t) { return a * k * std::cos(k * t); }));
}

ControlPulse square_pulse(double amplitude, double duration, double phase) {
  return ControlPulse(duration, Waveform::constant(amplitude), Waveform::constant(phase));
}

}  // namespace qeed
