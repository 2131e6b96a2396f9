#include "qeed/devices.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qeed {

namespace {

constexpr Complex kI{0.0, 1.0};

MatN lowering(int levels) {
  MatN a = MatN::Zero(levels, levels);
  for (int n = 1; n < levels; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

MatN kron(const MatN& a, const MatN& b) {
  MatN out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

}  // namespace

QubitModel single_qubit_detuned(const ControlPulse& pulse, double detuning, const Mat2& target) {
  QubitModel m = xy_driven_qubit(pulse, NoiseSpec::detuning(detuning), target);
  m.id = "single_qubit";
  return m;
}

QubitModel xy_driven_qubit(const ControlPulse& pulse, const NoiseSpec& noise, const Mat2& target) {
  QubitModel m;
  m.id = "xy_qubit";
  m.duration = pulse.duration();
  m.control = drive_hamiltonian(pulse);
  m.target = target;
  m.noise = noise;
  return m;
}

DeviceModel double_dot(const QuantumDotParams& params, const ControlPulse& drive, double theta) {
  if (params.exchange < 0.0) throw std::invalid_argument("double_dot: exchange must be non-negative");
  const MatN id2 = MatN::Identity(2, 2);
  const MatN sz = MatN(pauli(Axis::Z));
  const MatN sx2 = kron(id2, MatN(pauli(Axis::X)));
  const MatN sy2 = kron(id2, MatN(pauli(Axis::Y)));
  const MatN zz = kron(sz, sz);
  // s+ s- with s+ = |0><1| on spin 1 (up = index 0): |01> -> |10>.
  MatN flip = MatN::Zero(4, 4);
  flip(2, 1) = 1.0;
  const double j = params.exchange, delta = params.zeeman_difference;
  const Hamiltonian2 h2 = drive_hamiltonian(drive);
  DeviceModel m;
  m.id = "double_dot";
  m.dim = 4;
  m.duration = drive.duration();
  m.hamiltonian = [=](double t) {
    const PauliCoefficients c = h2(t);
    const MatN ff = std::exp(-kI * (delta * t)) * flip;
    MatN h = (j / 4.0) * zz + (j / 2.0) * (ff + MatN(ff.adjoint())) + c.cx * sx2 + c.cy * sy2;
    return h;
  };
  m.target = GateTarget::on_subspace(kron(id2, MatN(rotation(Axis::X, theta))), {0, 1, 2, 3});
  return m;
}

QubitModel swap_subspace(const ControlPulse& exchange, double zeeman_difference) {
  QubitModel m;
  m.id = "swap_subspace";
  m.duration = exchange.duration();
  m.control = [exchange](double t) {
    const double j = exchange.amplitude(t);
    return PauliCoefficients{-0.5 * j, 0.5 * j, 0.0, 0.0};
  };
  m.target = rotation(Axis::X, 3.141592653589793 / 2.0);
  m.noise = NoiseSpec::detuning(zeeman_difference);
  return m;
}

DeviceModel transmon_single(const TransmonParams& params, const ControlPulse& pulse, double theta,
                            double drag_coefficient) {
  if (params.levels < 2) throw std::invalid_argument("transmon_single: at least two levels required");
  if (!(params.anharmonicity != 0.0)) throw std::invalid_argument("transmon_single: anharmonicity must be non-zero");
  const int d = params.levels;
  const MatN a = lowering(d);
  const MatN ad = a.adjoint();
  MatN diag = MatN::Zero(d, d);
  for (int n = 0; n < d; ++n) diag(n, n) = params.detuning * n + 0.5 * params.anharmonicity * n * (n - 1);
  const double alpha = drag_coefficient;
  const double dt = 1e-6 * pulse.duration();
  DeviceModel m;
  m.id = "transmon";
  m.dim = static_cast<std::size_t>(d);
  m.duration = pulse.duration();
  m.hamiltonian = [=](double t) {
    const Complex e(pulse.in_phase(t), pulse.quadrature(t));
    // Derivative of the complex envelope by central differences (both channels).
    const double tp = std::min(t + dt, pulse.duration()), tm = std::max(t - dt, 0.0);
    const Complex ep(pulse.in_phase(tp), pulse.quadrature(tp));
    const Complex em(pulse.in_phase(tm), pulse.quadrature(tm));
    const Complex de = (ep - em) / (tp - tm);
    const Complex xi = e + kI * alpha * de;
    return MatN(diag + 0.5 * (std::conj(xi) * a + xi * ad));
  };
  m.target = GateTarget::on_subspace(MatN(rotation(Axis::X, theta)), {0, 1});
  return m;
}

DragTuning tune_drag(TransmonParams params, const ControlPulse& pulse, double theta, int steps) {
  params.detuning = 0.0;
  const double a0 = default_drag_coefficient(params.anharmonicity);
  const double w = 2.0 / std::abs(params.anharmonicity);
  auto infidelity = [&](double alpha) { return 1.0 - transmon_single(params, pulse, theta, alpha).fidelity(steps); };
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = a0 - w, hi = a0 + w;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = infidelity(x1), f2 = infidelity(x2);
  for (int it = 0; it < 40 && hi - lo > 1e-6 * w; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = infidelity(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = infidelity(x2);
    }
  }
  return f1 < f2 ? DragTuning{x1, f1} : DragTuning{x2, f2};
}

MatN coupled_transmon_hamiltonian(const CoupledTransmonParams& p) {
  const int d = p.levels;
  const MatN a = lowering(d);
  const MatN id = MatN::Identity(d, d);
  const MatN n = a.adjoint() * a;
  const MatN a1 = kron(a, id), a2 = kron(id, a);
  const MatN n1 = kron(n, id), n2 = kron(id, n);
  const MatN one = MatN::Identity(d * d, d * d);
  MatN h = p.omega1 * n1 + 0.5 * p.u1 * n1 * (n1 - one) + p.omega2 * n2 + 0.5 * p.u2 * n2 * (n2 - one);
  h += p.coupling * (a1.adjoint() * a2 + a1 * a2.adjoint());
  return h;
}

double zz_perturbative(const CoupledTransmonParams& p) {
  const double d = p.omega2 - p.omega1;
  return -2.0 * p.coupling * p.coupling * (p.u1 + p.u2) / ((p.u1 + d) * (p.u2 - d));
}

double zz_exact(const CoupledTransmonParams& p, int ramp_steps) {
  if (ramp_steps < 1) throw std::invalid_argument("zz_exact: ramp_steps must be positive");
  const int d = p.levels;
  const int dim = d * d;
  // Bare states |n1 n2> have index n1 d + n2 and are eigenstates at g = 0.
  MatN vectors = MatN::Identity(dim, dim);
  Eigen::VectorXd energies(dim);
  for (int s = 0; s < ramp_steps; ++s) {
    CoupledTransmonParams q = p;
    q.coupling = p.coupling * (s + 1) / ramp_steps;
    Eigen::SelfAdjointEigenSolver<MatN> es(coupled_transmon_hamiltonian(q));
    MatN next(dim, dim);
    std::vector<bool> used(static_cast<std::size_t>(dim), false);
    for (int k = 0; k < dim; ++k) {
      int best = -1;
      double overlap = 0.0;
      for (int e = 0; e < dim; ++e) {
        if (used[static_cast<std::size_t>(e)]) continue;
        const double o = std::abs(vectors.col(k).dot(es.eigenvectors().col(e)));
        if (o > overlap) {
          overlap = o;
          best = e;
        }
      }
      if (overlap < 0.9) {
        std::ostringstream os;
        os << "zz_exact: ambiguous eigenstate labeling at g = " << q.coupling << " (overlap " << overlap
           << "); use more ramp steps";
        throw LabelingError(os.str());
      }
      used[static_cast<std::size_t>(best)] = true;
      next.col(k) = es.eigenvectors().col(best);
      energies[k] = es.eigenvalues()[best];
    }
    vectors = next;
  }
  if (p.coupling == 0.0) {
    for (int k = 0; k < dim; ++k) energies[k] = coupled_transmon_hamiltonian(p)(k, k).real();
  }
  auto e = [&](int n1, int n2) { return energies[n1 * d + n2]; };
  return (e(1, 1) - e(1, 0)) - (e(0, 1) - e(0, 0));
}

ZZValues coupled_transmons(const CoupledTransmonParams& params) {
  return {zz_perturbative(params), zz_exact(params)};
}

double spectator_qubit_fidelity(const TransmonParams& params, const ControlPulse& pulse, double theta,
                                double drag_coefficient, double zz, int steps) {
  double total = 0.0;
  for (double sign : {-1.0, 1.0}) {
    TransmonParams p = params;
    p.detuning += sign * zz / 2.0;
    total += transmon_single(p, pulse, theta, drag_coefficient).fidelity(steps);
  }
  return total / 2.0;
}

QubitModel iswap_coupler(const ControlPulse& coupling, double detuning, double theta) {
  QubitModel m;
  m.id = "iswap";
  m.duration = coupling.duration();
  m.control = [coupling](double t) { return PauliCoefficients{0.0, 0.5 * coupling.amplitude(t), 0.0, 0.0}; };
  m.target = rotation(Axis::X, theta);
  m.noise = NoiseSpec::detuning(detuning);
  return m;
}

}  // namespace qeed
