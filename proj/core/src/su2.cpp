#include "qeed/su2.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qeed {

namespace {

constexpr Complex kI{0.0, 1.0};

Mat2 make_pauli(int k) {
  Mat2 m;
  switch (k) {
    case 0:
      m << 0, 1, 1, 0;
      break;
    case 1:
      m << 0, -kI, kI, 0;
      break;
    default:
      m << 1, 0, 0, -1;
      break;
  }
  return m;
}

}  // namespace

char axis_name(Axis axis) { return "xyz"[axis_index(axis)]; }

Axis parse_axis(char c) {
  switch (c) {
    case 'x':
    case 'X':
      return Axis::X;
    case 'y':
    case 'Y':
      return Axis::Y;
    case 'z':
    case 'Z':
      return Axis::Z;
    default:
      throw std::invalid_argument(std::string("unknown noise axis '") + c + "'");
  }
}

NonHermitianError::NonHermitianError(const std::string& where, double deviation)
    : std::invalid_argument([&] {
        std::ostringstream os;
        os << where << ": matrix is not Hermitian (relative deviation " << deviation << ")";
        return os.str();
      }()),
      deviation_(deviation) {}

const Mat2& pauli(Axis axis) {
  static const Mat2 sx = make_pauli(0);
  static const Mat2 sy = make_pauli(1);
  static const Mat2 sz = make_pauli(2);
  switch (axis) {
    case Axis::X:
      return sx;
    case Axis::Y:
      return sy;
    default:
      return sz;
  }
}

const Mat2& identity2() {
  static const Mat2 id = Mat2::Identity();
  return id;
}

Mat2 to_matrix(const PauliCoefficients& c) {
  Mat2 m;
  m << Complex(c.c0 + c.cz, 0.0), Complex(c.cx, -c.cy), Complex(c.cx, c.cy), Complex(c.c0 - c.cz, 0.0);
  return m;
}

double hermiticity_deviation(const MatN& h) {
  const double norm = h.norm();
  const double anti = (h - h.adjoint()).norm() / 2.0;
  return norm > 0.0 ? anti / norm : anti;
}

double unitarity_deviation(const MatN& u) {
  return (u.adjoint() * u - MatN::Identity(u.rows(), u.cols())).norm();
}

PauliCoefficients pauli_decompose(const Mat2& h, double tolerance) {
  const double dev = hermiticity_deviation(h);
  if (dev > tolerance) throw NonHermitianError("pauli_decompose", dev);
  PauliCoefficients c;
  c.c0 = 0.5 * (h(0, 0) + h(1, 1)).real();
  c.cz = 0.5 * (h(0, 0) - h(1, 1)).real();
  // Tr(sx H) = h01 + h10, Tr(sy H) = i (h01 - h10)
  c.cx = 0.5 * (h(0, 1) + h(1, 0)).real();
  c.cy = 0.5 * (kI * (h(0, 1) - h(1, 0))).real();
  return c;
}

Vec3 pauli_vector(const Mat2& a) {
  return {0.5 * (a(0, 1) + a(1, 0)).real(), 0.5 * (kI * (a(0, 1) - a(1, 0))).real(),
          0.5 * (a(0, 0) - a(1, 1)).real()};
}

Mat2 pauli_exponential(const PauliCoefficients& h, double dt) {
  const Vec3 v = h.vector();
  const double n = v.norm();
  const Complex phase = std::exp(-kI * (h.c0 * dt));
  const double c = std::cos(n * dt);
  // sin(n dt)/n, finite as n -> 0
  const double s = n > 1e-300 ? std::sin(n * dt) / n : dt;
  Mat2 m;
  m << Complex(c, -s * v.z()), Complex(-s * v.y(), -s * v.x()), Complex(s * v.y(), -s * v.x()),
      Complex(c, s * v.z());
  return phase * m;
}

Mat2 rotation(const Vec3& axis, double angle) {
  const Vec3 n = axis.normalized();
  return pauli_exponential(PauliCoefficients::from_vector(n * (angle / 2.0)), 1.0);
}

Mat2 rotation(Axis axis, double angle) { return rotation(Vec3::Unit(axis_index(axis)), angle); }

Vec3 conjugated_axis(const Mat2& u, Axis axis) {
  return pauli_vector(u.adjoint() * pauli(axis) * u);
}

int default_steps(double duration) {
  return std::max(1, static_cast<int>(std::ceil(duration * 80.0 - 1e-9)));
}

namespace {

void check_steps(int steps, double duration) {
  if (steps < 1) throw std::invalid_argument("propagate: steps must be >= 1");
  if (!(duration >= 0.0) || !std::isfinite(duration)) {
    throw std::invalid_argument("propagate: duration must be finite and non-negative");
  }
}

}  // namespace

Trajectory2 propagate(const Hamiltonian2& h, double duration, int steps) {
  check_steps(steps, duration);
  Trajectory2 traj;
  traj.times.resize(static_cast<std::size_t>(steps) + 1);
  traj.unitaries.resize(static_cast<std::size_t>(steps) + 1);
  const double dt = duration / steps;
  Mat2 u = Mat2::Identity();
  traj.times[0] = 0.0;
  traj.unitaries[0] = u;
  for (int k = 0; k < steps; ++k) {
    u = pauli_exponential(h((k + 0.5) * dt), dt) * u;
    traj.times[k + 1] = (k + 1) * dt;
    traj.unitaries[k + 1] = u;
  }
  traj.times.back() = duration;
  // Per-step factors are exactly unitary; only rounding can accumulate.
  traj.max_unitarity_error = unitarity_deviation(u);
  traj.unitarity_warning = traj.max_unitarity_error > kUnitarityWarning;
  return traj;
}

Mat2 propagate_final(const Hamiltonian2& h, double duration, int steps) {
  check_steps(steps, duration);
  const double dt = duration / steps;
  Mat2 u = Mat2::Identity();
  for (int k = 0; k < steps; ++k) u = pauli_exponential(h((k + 0.5) * dt), dt) * u;
  return u;
}

MatN hermitian_exponential(const MatN& h, double dt) {
  const double dev = hermiticity_deviation(h);
  if (dev > 1e-12) throw NonHermitianError("hermitian_exponential", dev);
  Eigen::SelfAdjointEigenSolver<MatN> es(0.5 * (h + h.adjoint()));
  const Eigen::VectorXd& w = es.eigenvalues();
  Eigen::VectorXcd phases(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) phases[i] = std::exp(-kI * (w[i] * dt));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

TrajectoryN propagate(const HamiltonianN& h, std::size_t dim, double duration, int steps) {
  check_steps(steps, duration);
  TrajectoryN traj;
  traj.times.resize(static_cast<std::size_t>(steps) + 1);
  traj.unitaries.resize(static_cast<std::size_t>(steps) + 1);
  const double dt = duration / steps;
  MatN u = MatN::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  traj.times[0] = 0.0;
  traj.unitaries[0] = u;
  for (int k = 0; k < steps; ++k) {
    u = hermitian_exponential(h((k + 0.5) * dt), dt) * u;
    traj.times[k + 1] = (k + 1) * dt;
    traj.unitaries[k + 1] = u;
  }
  traj.times.back() = duration;
  traj.max_unitarity_error = unitarity_deviation(u);
  traj.unitarity_warning = traj.max_unitarity_error > kUnitarityWarning;
  return traj;
}

MatN propagate_final(const HamiltonianN& h, std::size_t dim, double duration, int steps) {
  check_steps(steps, duration);
  const double dt = duration / steps;
  MatN u = MatN::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (int k = 0; k < steps; ++k) u = hermitian_exponential(h((k + 0.5) * dt), dt) * u;
  return u;
}

GateTarget GateTarget::qubit(const Mat2& u) { return on_subspace(MatN(u), {0, 1}); }

GateTarget GateTarget::on_subspace(const MatN& u, std::vector<int> subspace) {
  if (u.rows() != u.cols() || static_cast<std::size_t>(u.rows()) != subspace.size()) {
    throw std::invalid_argument("GateTarget: unitary must be square with one row per subspace index");
  }
  if (unitarity_deviation(u) > 1e-8) {
    throw std::invalid_argument("GateTarget: target is not unitary on its subspace");
  }
  return GateTarget{u, std::move(subspace)};
}

double gate_fidelity(const MatN& u, const GateTarget& target) {
  const auto ds = static_cast<Eigen::Index>(target.subspace.size());
  if (target.unitary.rows() != ds) throw std::invalid_argument("gate_fidelity: malformed target");
  MatN block(ds, ds);
  for (Eigen::Index i = 0; i < ds; ++i) {
    for (Eigen::Index j = 0; j < ds; ++j) {
      const int r = target.subspace[static_cast<std::size_t>(i)];
      const int c = target.subspace[static_cast<std::size_t>(j)];
      if (r < 0 || c < 0 || r >= u.rows() || c >= u.cols()) {
        throw std::invalid_argument("gate_fidelity: subspace index outside the propagator dimension");
      }
      block(i, j) = u(r, c);
    }
  }
  const MatN m = target.unitary.adjoint() * block;
  const double d = static_cast<double>(ds);
  const double f = ((m * m.adjoint()).trace().real() + std::norm(m.trace())) / (d * (d + 1.0));
  return std::clamp(f, 0.0, 1.0);
}

double gate_fidelity(const Mat2& u, const Mat2& target) {
  const Mat2 m = target.adjoint() * u;
  const double f = ((m * m.adjoint()).trace().real() + std::norm(m.trace())) / 6.0;
  return std::clamp(f, 0.0, 1.0);
}

}  // namespace qeed
