#pragma once

// Small-matrix quantum dynamics: Pauli algebra, time-ordered propagation and
// gate fidelity for two-level and few-level (d <= 9) systems.
//
// Units: time in ns, Hamiltonians in rad/ns. A Hamiltonian H generates
// U(t) = T exp(-i \int H dt).

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qeed {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using MatN = Eigen::MatrixXcd;
using Vec3 = Eigen::Vector3d;

enum class Axis { X = 0, Y = 1, Z = 2 };

char axis_name(Axis axis);
Axis parse_axis(char c);
inline int axis_index(Axis axis) { return static_cast<int>(axis); }

// Thrown when a matrix handed to the Pauli/propagation layer is not Hermitian.
class NonHermitianError : public std::invalid_argument {
 public:
  NonHermitianError(const std::string& where, double deviation);
  double deviation() const { return deviation_; }

 private:
  double deviation_;
};

// H = c0 I + cx sx + cy sy + cz sz.
struct PauliCoefficients {
  double c0 = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  double cz = 0.0;

  Vec3 vector() const { return {cx, cy, cz}; }
  static PauliCoefficients from_vector(const Vec3& v, double c0 = 0.0) {
    return {c0, v.x(), v.y(), v.z()};
  }
  PauliCoefficients& operator+=(const PauliCoefficients& o) {
    c0 += o.c0;
    cx += o.cx;
    cy += o.cy;
    cz += o.cz;
    return *this;
  }
  friend PauliCoefficients operator+(PauliCoefficients a, const PauliCoefficients& b) { return a += b; }
};

const Mat2& pauli(Axis axis);
const Mat2& identity2();

Mat2 to_matrix(const PauliCoefficients& c);

// cj = Tr(sj H)/2. Rejects inputs whose anti-Hermitian part exceeds `tolerance`
// relative to the Frobenius norm (absolute for a zero matrix).
PauliCoefficients pauli_decompose(const Mat2& h, double tolerance = 1e-12);

// Real Pauli vector of a traceless Hermitian operator, v_k = Tr(s_k A)/2.
Vec3 pauli_vector(const Mat2& a);

// exp(-i H dt) in closed form.
Mat2 pauli_exponential(const PauliCoefficients& h, double dt);

// exp(-i angle n.s / 2) for a unit axis n.
Mat2 rotation(const Vec3& axis, double angle);
Mat2 rotation(Axis axis, double angle);

// Conjugated operator U^dag s_j U as a Pauli vector (row j of the SO(3) image).
Vec3 conjugated_axis(const Mat2& u, Axis axis);

double hermiticity_deviation(const MatN& h);
double unitarity_deviation(const MatN& u);

using Hamiltonian2 = std::function<PauliCoefficients(double)>;
using HamiltonianN = std::function<MatN(double)>;

// Unitaries U(t_k) on a uniform grid t_k = k tau / steps, U(t_0) = I.
template <class Matrix>
struct PropagatorTrajectory {
  std::vector<double> times;
  std::vector<Matrix> unitaries;
  double max_unitarity_error = 0.0;
  bool unitarity_warning = false;

  std::size_t size() const { return times.size(); }
  double duration() const { return times.empty() ? 0.0 : times.back(); }
  const Matrix& final_unitary() const { return unitaries.back(); }
};

using Trajectory2 = PropagatorTrajectory<Mat2>;
using TrajectoryN = PropagatorTrajectory<MatN>;

// Unitarity drift above this sets PropagatorTrajectory::unitarity_warning.
inline constexpr double kUnitarityWarning = 1e-8;

// Default grid: 4000 steps per 50 ns.
int default_steps(double duration);

// Midpoint-sampled product of exact per-step exponentials,
// U(t_{k+1}) = exp(-i H(t_k + dt/2) dt) U(t_k). Second-order accurate.
Trajectory2 propagate(const Hamiltonian2& h, double duration, int steps);
TrajectoryN propagate(const HamiltonianN& h, std::size_t dim, double duration, int steps);

// Same products without storing the trajectory.
Mat2 propagate_final(const Hamiltonian2& h, double duration, int steps);
MatN propagate_final(const HamiltonianN& h, std::size_t dim, double duration, int steps);

// exp(-i H dt) for a Hermitian H via its eigendecomposition.
MatN hermitian_exponential(const MatN& h, double dt);

// Target gate on a computational subspace. `unitary` is the d_s x d_s block
// acting on the listed basis states of the full space.
struct GateTarget {
  MatN unitary;
  std::vector<int> subspace;

  static GateTarget qubit(const Mat2& u);
  static GateTarget on_subspace(const MatN& u, std::vector<int> subspace);
  std::size_t subspace_dimension() const { return subspace.size(); }
};

// F = [Tr(M M^dag) + |Tr M|^2] / (d_s (d_s + 1)), M = V^dag P U P on the subspace.
double gate_fidelity(const MatN& u, const GateTarget& target);
double gate_fidelity(const Mat2& u, const Mat2& target);

}  // namespace qeed
