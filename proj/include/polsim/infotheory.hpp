// Shannon-information analytics for (ensemble, POM) pairs: entropy, Bayes
// posteriors, conditional entropy, mutual information, reference accessible
// information values, and brute-force maximization over von Neumann
// (two-outcome projective) measurements.
//
// All logarithms are base 2; terms with zero probability contribute zero.
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "polsim/ensembles.hpp"
#include "polsim/pom.hpp"

namespace polsim {

namespace detail {

inline double plog2p(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

}  // namespace detail

/// -sum p log2 p over a probability distribution.
inline double shannon_entropy(const std::vector<double>& priors) {
  double total = 0.0;
  double h = 0.0;
  for (double p : priors) {
    if (p < -1e-12 || p > 1.0 + 1e-12) {
      throw std::invalid_argument("shannon_entropy: entry outside [0, 1]");
    }
    total += p;
    h -= detail::plog2p(std::max(p, 0.0));
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("shannon_entropy: probabilities do not sum to 1");
  }
  return h;
}

/// N x M matrix of P(y_j | psi_k): rows indexed by prepared state, columns by
/// measurement outcome. Rows must sum to 1 within 1e-9.
struct ConditionalTable {
  Eigen::MatrixXd probs;

  explicit ConditionalTable(Eigen::MatrixXd p) : probs(std::move(p)) {
    for (Eigen::Index k = 0; k < probs.rows(); ++k) {
      double row = 0.0;
      for (Eigen::Index j = 0; j < probs.cols(); ++j) {
        if (probs(k, j) < -1e-12 || probs(k, j) > 1.0 + 1e-12) {
          throw std::invalid_argument("ConditionalTable: entry outside [0, 1]");
        }
        probs(k, j) = std::clamp(probs(k, j), 0.0, 1.0);
        row += probs(k, j);
      }
      if (std::abs(row - 1.0) > 1e-9) {
        throw std::invalid_argument("ConditionalTable: row " + std::to_string(k) +
                                    " does not sum to 1");
      }
    }
  }

  std::size_t states() const { return static_cast<std::size_t>(probs.rows()); }
  std::size_t outcomes() const { return static_cast<std::size_t>(probs.cols()); }
};

/// Table of outcome probabilities for every ensemble state.
inline ConditionalTable conditional_table(const Ensemble& ensemble, const Pom& pom) {
  if (ensemble.dim() != pom.dim()) {
    throw std::invalid_argument("conditional_table: dimension mismatch");
  }
  Eigen::MatrixXd t(ensemble.size(), pom.size());
  for (std::size_t k = 0; k < ensemble.size(); ++k) {
    for (std::size_t j = 0; j < pom.size(); ++j) {
      t(k, j) = outcome_probability(pom.element(j), ensemble.state(k));
    }
  }
  return ConditionalTable(std::move(t));
}

/// Bayes posterior P(psi_k | y_j) for a single outcome j.
inline std::vector<double> posterior(const ConditionalTable& table,
                                     const std::vector<double>& priors,
                                     std::size_t outcome) {
  if (priors.size() != table.states() || outcome >= table.outcomes()) {
    throw std::invalid_argument("posterior: shape mismatch");
  }
  double py = 0.0;
  for (std::size_t k = 0; k < table.states(); ++k) {
    py += priors[k] * table.probs(k, outcome);
  }
  if (py <= 0.0) {
    throw std::invalid_argument("posterior: outcome has zero probability");
  }
  std::vector<double> post(table.states());
  for (std::size_t k = 0; k < table.states(); ++k) {
    post[k] = priors[k] * table.probs(k, outcome) / py;
  }
  return post;
}

/// H(X|Y): average entropy of the posterior, outcomes with P(y_j) = 0
/// contributing zero.
inline double conditional_entropy(const ConditionalTable& table,
                                  const std::vector<double>& priors) {
  if (priors.size() != table.states()) {
    throw std::invalid_argument("conditional_entropy: priors size mismatch");
  }
  double h = 0.0;
  for (std::size_t j = 0; j < table.outcomes(); ++j) {
    double py = 0.0;
    for (std::size_t k = 0; k < table.states(); ++k) {
      py += priors[k] * table.probs(k, j);
    }
    if (py <= 0.0) {
      continue;
    }
    for (std::size_t k = 0; k < table.states(); ++k) {
      const double joint = priors[k] * table.probs(k, j);
      if (joint > 0.0) {
        h -= joint * std::log2(joint / py);
      }
    }
  }
  return h;
}

struct MiReport {
  double mutual_info_bits = 0.0;
  double entropy_bits = 0.0;
  double conditional_entropy_bits = 0.0;
};

namespace detail {

// I(X:Y) alone; used in inner optimization loops.
inline double mutual_information_bits(const Eigen::MatrixXd& table,
                                      const std::vector<double>& priors) {
  const Eigen::Index n = table.rows();
  const Eigen::Index m = table.cols();
  double info = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    double py = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      py += priors[static_cast<std::size_t>(k)] * table(k, j);
    }
    if (py <= 0.0) {
      continue;
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      const double p = table(k, j);
      if (p > 0.0) {
        info += priors[static_cast<std::size_t>(k)] * p * std::log2(p / py);
      }
    }
  }
  return info;
}

}  // namespace detail

inline MiReport mutual_information(const ConditionalTable& table,
                                   const std::vector<double>& priors) {
  MiReport r;
  r.entropy_bits = shannon_entropy(priors);
  r.conditional_entropy_bits = conditional_entropy(table, priors);
  r.mutual_info_bits = detail::mutual_information_bits(table.probs, priors);
  return r;
}

/// Shannon mutual information of the channel formed by preparing an ensemble
/// state and measuring the POM.
inline MiReport mutual_information(const Ensemble& ensemble, const Pom& pom) {
  return mutual_information(conditional_table(ensemble, pom), ensemble.priors());
}

/// Closed-form accessible information for the built-in symmetric ensembles.
inline double accessible_info_reference(const std::string& label) {
  if (label == "trine") {
    return std::log2(3.0 / 2.0);
  }
  if (label == "tetrad") {
    return std::log2(4.0 / 3.0);
  }
  throw std::invalid_argument("accessible_info_reference: unknown label '" + label + "'");
}

struct VonNeumannResult {
  double bits = 0.0;
  double polar = 0.0;    // measurement axis, polar angle from the s3 pole
  double azimuth = 0.0;  // azimuth in the s1-s2 plane
  StokesVector axis;
};

namespace detail {

inline StokesVector axis_from_angles(double polar, double azimuth) {
  return {std::sin(polar) * std::cos(azimuth), std::sin(polar) * std::sin(azimuth),
          std::cos(polar)};
}

// MI of the two-outcome projective measurement along the given axis.
inline double von_neumann_mi(const std::vector<StokesVector>& stokes_vecs,
                             const std::vector<double>& priors, double polar,
                             double azimuth) {
  const StokesVector n = axis_from_angles(polar, azimuth);
  const std::size_t count = stokes_vecs.size();
  double py = 0.0;
  std::vector<double> pplus(count);
  for (std::size_t k = 0; k < count; ++k) {
    pplus[k] = std::clamp(0.5 * (1.0 + dot(stokes_vecs[k], n)), 0.0, 1.0);
    py += priors[k] * pplus[k];
  }
  double info = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    if (pplus[k] > 0.0 && py > 0.0) {
      info += priors[k] * pplus[k] * std::log2(pplus[k] / py);
    }
    const double pm = 1.0 - pplus[k];
    if (pm > 0.0 && py < 1.0) {
      info += priors[k] * pm * std::log2(pm / (1.0 - py));
    }
  }
  return info;
}

// Golden-section maximization over [lo, hi], assuming a locally unimodal
// objective; tol is the final bracket width in angle.
template <typename F>
double golden_max(F f, double lo, double hi, double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

/// Maximizes the mutual information over all two-outcome projective
/// measurements of a qubit ensemble. Coarse grid over the half-sphere
/// (azimuth resolution x polar resolution/2+1), then golden-section
/// refinement of each angle to 1e-6. Ties on the grid are broken toward the
/// smallest polar angle, then the smallest azimuth.
inline VonNeumannResult best_von_neumann_mi(const Ensemble& ensemble,
                                            int resolution = 721) {
  if (ensemble.dim() != 2) {
    throw std::invalid_argument("best_von_neumann_mi: qubit ensembles only");
  }
  if (resolution < 4) {
    throw std::invalid_argument("best_von_neumann_mi: resolution too small");
  }
  std::vector<StokesVector> vecs;
  vecs.reserve(ensemble.size());
  for (std::size_t k = 0; k < ensemble.size(); ++k) {
    vecs.push_back(stokes(ensemble.polarization_state(k)));
  }
  const std::vector<double>& priors = ensemble.priors();

  const int n_az = resolution;
  const int n_pol = resolution / 2 + 1;
  const double pol_step = (std::numbers::pi / 2) / (n_pol - 1);
  const double az_step = (2 * std::numbers::pi) / n_az;

  double best = -1.0;
  double best_pol = 0.0, best_az = 0.0;
  for (int ip = 0; ip < n_pol; ++ip) {
    const double pol = ip * pol_step;
    for (int ia = 0; ia < n_az; ++ia) {
      const double az = ia * az_step;
      const double value = detail::von_neumann_mi(vecs, priors, pol, az);
      if (value > best) {
        best = value;
        best_pol = pol;
        best_az = az;
      }
    }
  }

  // Coordinate-wise refinement around the grid maximum; keep the grid point
  // if refinement does not improve on it (maxima of the built-in ensembles
  // fall exactly on grid points).
  double ref_pol = best_pol, ref_az = best_az;
  for (int pass = 0; pass < 2; ++pass) {
    ref_pol = detail::golden_max(
        [&](double p) { return detail::von_neumann_mi(vecs, priors, p, ref_az); },
        std::max(0.0, ref_pol - pol_step), std::min(std::numbers::pi / 2, ref_pol + pol_step),
        1e-6);
    ref_az = detail::golden_max(
        [&](double a) { return detail::von_neumann_mi(vecs, priors, ref_pol, a); },
        ref_az - az_step, ref_az + az_step, 1e-6);
  }
  const double refined = detail::von_neumann_mi(vecs, priors, ref_pol, ref_az);
  VonNeumannResult result;
  if (refined > best) {
    result.bits = refined;
    result.polar = ref_pol;
    result.azimuth = ref_az;
  } else {
    result.bits = best;
    result.polar = best_pol;
    result.azimuth = best_az;
  }
  result.axis = detail::axis_from_angles(result.polar, result.azimuth);
  return result;
}

}  // namespace polsim
