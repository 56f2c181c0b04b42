// The trine, tetrad, antitrine and antitetrad ensembles, generic ensembles
// of pure states with prior probabilities, and the overcompleteness check.
//
// Amplitude signs follow the standard printed forms exactly (including the
// leading minus signs); comparisons elsewhere are phase-insensitive.
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "polsim/polarization.hpp"

namespace polsim {

/// Ordered list of normalized pure states with prior probabilities.
/// States may live in any dimension; the built-in ensembles are qubits.
class Ensemble {
 public:
  Ensemble(std::string label, std::vector<Eigen::VectorXcd> states,
           std::vector<double> priors)
      : label_(std::move(label)), states_(std::move(states)), priors_(std::move(priors)) {
    if (states_.empty()) {
      throw std::invalid_argument("Ensemble: empty state list");
    }
    if (priors_.size() != states_.size()) {
      throw std::invalid_argument("Ensemble: priors/states size mismatch");
    }
    const Eigen::Index dim = states_.front().size();
    double total = 0.0;
    for (std::size_t k = 0; k < states_.size(); ++k) {
      if (states_[k].size() != dim) {
        throw std::invalid_argument("Ensemble: inconsistent state dimensions");
      }
      if (std::abs(states_[k].norm() - 1.0) > 1e-12) {
        throw std::invalid_argument("Ensemble: state " + std::to_string(k) +
                                    " is not normalized");
      }
      if (priors_[k] < 0.0) {
        throw std::invalid_argument("Ensemble: negative prior");
      }
      total += priors_[k];
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw std::invalid_argument("Ensemble: priors do not sum to 1");
    }
  }

  Ensemble(std::string label, const std::vector<PolarizationState>& states,
           std::vector<double> priors)
      : Ensemble(std::move(label), to_vectors(states), std::move(priors)) {}

  const std::string& label() const { return label_; }
  std::size_t size() const { return states_.size(); }
  int dim() const { return static_cast<int>(states_.front().size()); }
  const Eigen::VectorXcd& state(std::size_t k) const { return states_.at(k); }
  double prior(std::size_t k) const { return priors_.at(k); }
  const std::vector<double>& priors() const { return priors_; }

  PolarizationState polarization_state(std::size_t k) const {
    if (dim() != 2) {
      throw std::invalid_argument("Ensemble: not a qubit ensemble");
    }
    const Eigen::VectorXcd& s = states_.at(k);
    return {s(0), s(1)};
  }

 private:
  static std::vector<Eigen::VectorXcd> to_vectors(
      const std::vector<PolarizationState>& states) {
    std::vector<Eigen::VectorXcd> out;
    out.reserve(states.size());
    for (const PolarizationState& s : states) {
      out.push_back(s.vec());
    }
    return out;
  }

  std::string label_;
  std::vector<Eigen::VectorXcd> states_;
  std::vector<double> priors_;
};

/// Three equiprobable linear polarizations separated by 60 degrees.
inline Ensemble trine() {
  const double r3 = std::sqrt(3.0);
  const std::vector<PolarizationState> states = {
      {-0.5, -r3 / 2.0},
      {-0.5, +r3 / 2.0},
      {1.0, 0.0},
  };
  return {"trine", states, {1.0 / 3, 1.0 / 3, 1.0 / 3}};
}

/// Four equiprobable states at the vertices of a Poincare-sphere tetrahedron;
/// the first two are elliptical, the last two linear.
inline Ensemble tetrad() {
  const double r3 = std::sqrt(3.0);
  const Complex w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  const std::vector<PolarizationState> states = {
      {-1.0 / r3, std::sqrt(2.0) * std::conj(w) / r3},
      {-1.0 / r3, std::sqrt(2.0) * w / r3},
      {-1.0 / r3, std::sqrt(2.0) / r3},
      {1.0, 0.0},
  };
  return {"tetrad", states, {0.25, 0.25, 0.25, 0.25}};
}

/// States orthogonal to the trine states, index by index.
inline Ensemble antitrine() {
  const double r3 = std::sqrt(3.0);
  const std::vector<PolarizationState> states = {
      {+r3 / 2.0, -0.5},
      {-r3 / 2.0, -0.5},
      {0.0, 1.0},
  };
  return {"antitrine", states, {1.0 / 3, 1.0 / 3, 1.0 / 3}};
}

/// States orthogonal to the tetrad states, index by index.
inline Ensemble antitetrad() {
  const double r3 = std::sqrt(3.0);
  const Complex w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  const std::vector<PolarizationState> states = {
      {-std::sqrt(2.0) * w / r3, -1.0 / r3},
      {-std::sqrt(2.0) * std::conj(w) / r3, -1.0 / r3},
      {-std::sqrt(2.0) / r3, -1.0 / r3},
      {0.0, 1.0},
  };
  return {"antitetrad", states, {0.25, 0.25, 0.25, 0.25}};
}

/// True iff (dim/N) sum_k |psi_k><psi_k| is the identity within 1e-10
/// elementwise, i.e. the states resolve the identity.
inline bool verify_overcomplete(const Ensemble& ensemble, int dim) {
  if (dim != ensemble.dim()) {
    throw std::invalid_argument("verify_overcomplete: dim does not match state length");
  }
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t k = 0; k < ensemble.size(); ++k) {
    sum += ensemble.state(k) * ensemble.state(k).adjoint();
  }
  sum *= static_cast<double>(dim) / static_cast<double>(ensemble.size());
  const Eigen::MatrixXcd dev = sum - Eigen::MatrixXcd::Identity(dim, dim);
  return dev.cwiseAbs().maxCoeff() <= 1e-10;
}

}  // namespace polsim
