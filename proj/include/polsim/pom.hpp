// Probability operator measures: the element/measure data model, outcome
// probabilities, the minimum-error POM for symmetric overcomplete ensembles,
// and the Helstrom optimality conditions.
//
// Generic dimension D is supported throughout; the built-in ensembles use
// D = 2. Element count M may differ from the ensemble size N except in
// error_probability and check_optimality, which pair element j with state j.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "polsim/ensembles.hpp"
#include "polsim/polarization.hpp"

namespace polsim {

namespace detail {

inline bool is_hermitian(const Eigen::MatrixXcd& m, double tol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline double min_eigenvalue(const Eigen::MatrixXcd& hermitian) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian,
                                                         Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace detail

/// Hermitian positive semidefinite operator for one measurement outcome.
class PomElement {
 public:
  explicit PomElement(Eigen::MatrixXcd matrix) : m_(std::move(matrix)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0) {
      throw std::invalid_argument("PomElement: matrix is not square");
    }
    if (!detail::is_hermitian(m_, 1e-12)) {
      throw std::invalid_argument("PomElement: matrix is not Hermitian");
    }
    if (detail::min_eigenvalue(m_) < -1e-10) {
      throw std::invalid_argument("PomElement: matrix has a negative eigenvalue");
    }
  }

  const Eigen::MatrixXcd& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }

 private:
  Eigen::MatrixXcd m_;
};

/// Complete set of POM elements: sum_j Pi_j = identity within 1e-10.
class Pom {
 public:
  explicit Pom(std::vector<PomElement> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) {
      throw std::invalid_argument("Pom: no elements");
    }
    const int d = elements_.front().dim();
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
    for (const PomElement& e : elements_) {
      if (e.dim() != d) {
        throw std::invalid_argument("Pom: inconsistent element dimensions");
      }
      sum += e.matrix();
    }
    if ((sum - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10) {
      throw std::invalid_argument("Pom: elements do not sum to the identity");
    }
  }

  std::size_t size() const { return elements_.size(); }
  int dim() const { return elements_.front().dim(); }
  const PomElement& element(std::size_t j) const { return elements_.at(j); }
  const std::vector<PomElement>& elements() const { return elements_; }

 private:
  std::vector<PomElement> elements_;
};

/// Hermitian PSD matrix with unit trace.
class DensityMatrix {
 public:
  explicit DensityMatrix(Eigen::MatrixXcd matrix) : m_(std::move(matrix)) {
    if (!detail::is_hermitian(m_, 1e-12)) {
      throw std::invalid_argument("DensityMatrix: not Hermitian");
    }
    if (detail::min_eigenvalue(m_) < -1e-10) {
      throw std::invalid_argument("DensityMatrix: not positive semidefinite");
    }
    if (std::abs(m_.trace().real() - 1.0) > 1e-12 || std::abs(m_.trace().imag()) > 1e-12) {
      throw std::invalid_argument("DensityMatrix: trace is not 1");
    }
  }

  static DensityMatrix from_pure(const Eigen::VectorXcd& psi) {
    return DensityMatrix(psi * psi.adjoint());
  }

  const Eigen::MatrixXcd& matrix() const { return m_; }

 private:
  Eigen::MatrixXcd m_;
};

/// <psi|Pi|psi>, clamped to [0, 1].
inline double outcome_probability(const PomElement& element,
                                  const Eigen::VectorXcd& psi) {
  if (psi.size() != element.dim()) {
    throw std::invalid_argument("outcome_probability: dimension mismatch");
  }
  const double p = (psi.adjoint() * element.matrix() * psi)(0).real();
  return std::clamp(p, 0.0, 1.0);
}

inline double outcome_probability(const PomElement& element,
                                  const PolarizationState& psi) {
  return outcome_probability(element, Eigen::VectorXcd(psi.vec()));
}

/// Minimum-error POM for a symmetric overcomplete ensemble with uniform
/// priors: Pi_k = (dim/N) |psi_k><psi_k|.
inline Pom min_error_pom(const Ensemble& ensemble, int dim) {
  const double n = static_cast<double>(ensemble.size());
  for (std::size_t k = 0; k < ensemble.size(); ++k) {
    if (std::abs(ensemble.prior(k) - 1.0 / n) > 1e-12) {
      throw std::invalid_argument("min_error_pom: priors are not uniform");
    }
  }
  if (!verify_overcomplete(ensemble, dim)) {
    throw std::invalid_argument("min_error_pom: ensemble is not overcomplete");
  }
  std::vector<PomElement> elements;
  elements.reserve(ensemble.size());
  for (std::size_t k = 0; k < ensemble.size(); ++k) {
    elements.emplace_back(
        Eigen::MatrixXcd(static_cast<double>(dim) / n * ensemble.state(k) *
                         ensemble.state(k).adjoint()));
  }
  return Pom(std::move(elements));
}

/// P_e = 1 - sum_k p_k Tr(rho_k Pi_k), with element k declaring state k.
inline double error_probability(const Pom& pom, const Ensemble& ensemble) {
  if (pom.size() != ensemble.size()) {
    throw std::invalid_argument("error_probability: element/state count mismatch");
  }
  double correct = 0.0;
  for (std::size_t k = 0; k < ensemble.size(); ++k) {
    correct += ensemble.prior(k) *
               outcome_probability(pom.element(k), ensemble.state(k));
  }
  return 1.0 - correct;
}

/// Necessary and sufficient minimum-error conditions:
///   (a) Pi_j (p_j rho_j - p_k rho_k) Pi_k = 0 for all j, k;
///   (b) (sum_k p_k rho_k Pi_k) - p_j rho_j >= 0 for all j,
/// with (b) evaluated on the Hermitian part, since the operator need not be
/// Hermitian for an arbitrary candidate POM.
inline bool check_optimality(const Pom& pom, const Ensemble& ensemble,
                             double tol = 1e-9) {
  if (pom.size() != ensemble.size()) {
    throw std::invalid_argument("check_optimality: element/state count mismatch");
  }
  const std::size_t n = ensemble.size();
  const int d = pom.dim();
  std::vector<Eigen::MatrixXcd> weighted;  // p_k rho_k
  weighted.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    weighted.push_back(ensemble.prior(k) * ensemble.state(k) *
                       ensemble.state(k).adjoint());
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      const Eigen::MatrixXcd lhs = pom.element(j).matrix() *
                                   (weighted[j] - weighted[k]) *
                                   pom.element(k).matrix();
      if (lhs.cwiseAbs().maxCoeff() > tol) {
        return false;
      }
    }
  }
  Eigen::MatrixXcd gamma = Eigen::MatrixXcd::Zero(d, d);
  for (std::size_t k = 0; k < n; ++k) {
    gamma += weighted[k] * pom.element(k).matrix();
  }
  for (std::size_t j = 0; j < n; ++j) {
    const Eigen::MatrixXcd m = gamma - weighted[j];
    const Eigen::MatrixXcd herm = 0.5 * (m + m.adjoint());
    if (detail::min_eigenvalue(herm) < -tol) {
      return false;
    }
  }
  return true;
}

}  // namespace polsim
