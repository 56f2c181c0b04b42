// Jones calculus for polarization qubits: states, waveplate operators,
// Stokes coordinates, and arbitrary-state preparation.
//
// Conventions: a waveplate constructor takes the physical mount half-angle
// (fast axis at half_angle from the horizontal, anticlockwise viewed along
// propagation); the Jones matrix uses the doubled angle. The quarter-wave
// matrix drops a constant global phase. State comparisons are insensitive
// to global phase.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace polsim {

using Complex = std::complex<double>;
using PolarizationOperator = Eigen::Matrix2cd;

/// Normalized complex amplitude pair (h, v) for a single polarization qubit.
class PolarizationState {
 public:
  PolarizationState(Complex amp_h, Complex amp_v) : h_(amp_h), v_(amp_v) {
    const double n = std::sqrt(std::norm(h_) + std::norm(v_));
    if (n < 1e-14) {
      throw std::invalid_argument("PolarizationState: zero amplitude vector");
    }
    h_ /= n;
    v_ /= n;
  }

  static PolarizationState horizontal() { return {1.0, 0.0}; }
  static PolarizationState vertical() { return {0.0, 1.0}; }

  /// cos(beta)|h> + e^{i gamma} sin(beta)|v>
  static PolarizationState from_angles(double beta, double gamma) {
    return {std::cos(beta), std::polar(std::sin(beta), gamma)};
  }

  Complex amp_h() const { return h_; }
  Complex amp_v() const { return v_; }

  Eigen::Vector2cd vec() const { return {h_, v_}; }

  /// Global phase fixed so the first amplitude above threshold is real > 0.
  PolarizationState canonical() const {
    const Complex lead = (std::abs(h_) > 1e-12) ? h_ : v_;
    const Complex phase = std::conj(lead) / std::abs(lead);
    return {h_ * phase, v_ * phase};
  }

 private:
  Complex h_, v_;
};

/// |<a|b>|^2
inline double fidelity(const PolarizationState& a, const PolarizationState& b) {
  return std::norm(std::conj(a.amp_h()) * b.amp_h() +
                   std::conj(a.amp_v()) * b.amp_v());
}

/// Equality up to a global phase.
inline bool approx_equal(const PolarizationState& a, const PolarizationState& b,
                         double tol = 1e-10) {
  const PolarizationState ca = a.canonical();
  const PolarizationState cb = b.canonical();
  return std::abs(ca.amp_h() - cb.amp_h()) <= tol &&
         std::abs(ca.amp_v() - cb.amp_v()) <= tol;
}

struct StokesVector {
  double s1 = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;
};

inline double dot(const StokesVector& a, const StokesVector& b) {
  return a.s1 * b.s1 + a.s2 * b.s2 + a.s3 * b.s3;
}

/// s1 along h/v, s2 along the diagonals, s3 circular. Pure states map to
/// unit vectors on the Poincare sphere; linear polarizations have s3 = 0.
inline StokesVector stokes(const PolarizationState& psi) {
  const Complex h = psi.amp_h();
  const Complex v = psi.amp_v();
  const Complex hv = std::conj(h) * v;
  return {std::norm(h) - std::norm(v), 2.0 * hv.real(), 2.0 * hv.imag()};
}

/// Half waveplate at mount angle half_angle; matrix uses phi = 2*half_angle:
/// [[cos phi, sin phi], [sin phi, -cos phi]].
inline PolarizationOperator half_waveplate(double half_angle) {
  const double phi = 2.0 * half_angle;
  PolarizationOperator op;
  op << std::cos(phi), std::sin(phi), std::sin(phi), -std::cos(phi);
  return op;
}

/// Quarter waveplate at mount angle half_angle; theta = 2*half_angle:
/// (1/sqrt2)[[cos theta - i, sin theta], [sin theta, -cos theta - i]],
/// with the constant phase e^{i 3 pi / 4} dropped.
inline PolarizationOperator quarter_waveplate(double half_angle) {
  const double theta = 2.0 * half_angle;
  const Complex i{0.0, 1.0};
  PolarizationOperator op;
  op << std::cos(theta) - i, Complex(std::sin(theta)), Complex(std::sin(theta)),
      -std::cos(theta) - i;
  return op / std::sqrt(2.0);
}

inline PolarizationState operator*(const PolarizationOperator& op,
                                   const PolarizationState& psi) {
  const Eigen::Vector2cd out = op * psi.vec();
  return {out(0), out(1)};
}

/// Mount angles for the quarter-half-quarter preparation sequence, plus the
/// (theta, phi) pair they were derived from:
///   sin(phi) = -sin(beta) sin(gamma),  tan(theta) = tan(beta) cos(gamma).
struct PlateSettings {
  double wp2 = 0.0;  // first quarter plate
  double wp3 = 0.0;  // half plate
  double wp4 = 0.0;  // second quarter plate
  double theta = 0.0;
  double phi = 0.0;
};

namespace detail {

inline PolarizationState apply_plate_chain(const PlateSettings& s) {
  PolarizationState out = PolarizationState::horizontal();
  out = quarter_waveplate(s.wp2) * out;
  out = half_waveplate(s.wp3) * out;
  out = quarter_waveplate(s.wp4) * out;
  return out;
}

}  // namespace detail

/// Plate angles that turn |h> into cos(beta)|h> + e^{i gamma} sin(beta)|v>
/// up to a global phase. beta at 0 or pi/2 makes gamma irrelevant; it is
/// treated as 0 there. Candidate assignments of (theta, phi) to the three
/// plates are tried in a fixed order (smallest total mount angle first) and
/// the first reaching fidelity 1 - 1e-10 wins.
inline PlateSettings prepare_state(double beta, double gamma) {
  if (std::abs(std::sin(beta)) < 1e-12 || std::abs(std::cos(beta)) < 1e-12) {
    gamma = 0.0;
  }
  const double theta = std::atan2(std::sin(beta) * std::cos(gamma), std::cos(beta));
  const double sphi = std::clamp(-std::sin(beta) * std::sin(gamma), -1.0, 1.0);
  const double phi = std::asin(sphi);

  const PolarizationState target = PolarizationState::from_angles(beta, gamma);
  const PlateSettings candidates[] = {
      {-theta / 2, phi / 2, theta / 2, theta, phi},
      {theta / 2, -phi / 2, -theta / 2, theta, phi},
      {-theta / 2, -phi / 2, theta / 2, theta, phi},
      {theta / 2, phi / 2, -theta / 2, theta, phi},
  };
  for (const PlateSettings& c : candidates) {
    if (fidelity(detail::apply_plate_chain(c), target) >= 1.0 - 1e-10) {
      return c;
    }
  }
  throw std::runtime_error("prepare_state: no plate assignment reached the fidelity bound");
}

}  // namespace polsim
