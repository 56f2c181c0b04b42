// Depolarizing detector-noise model: noisy POM construction, closed-form
// noisy mutual information for states and antistates, noise-parameter
// estimation from forbidden-outcome rates, curves over the noise parameter,
// and Monte Carlo error propagation for measured distributions.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "polsim/infotheory.hpp"
#include "polsim/pom.hpp"

namespace polsim {

/// Fraction gamma of detection events governed by the ideal POM; the rest
/// are distributed uniformly over the N outcomes.
struct NoiseModel {
  double gamma = 1.0;
  int outcomes = 0;

  NoiseModel(double gamma_, int outcomes_) : gamma(gamma_), outcomes(outcomes_) {
    if (gamma < 0.0 || gamma > 1.0) {
      throw std::invalid_argument("NoiseModel: gamma outside [0, 1]");
    }
    if (outcomes < 2) {
      throw std::invalid_argument("NoiseModel: needs at least 2 outcomes");
    }
  }
};

/// Pi_j -> gamma Pi_j + (1 - gamma)/N * identity.
inline Pom noisy_pom(const Pom& pom, const NoiseModel& model) {
  if (static_cast<int>(pom.size()) != model.outcomes) {
    throw std::invalid_argument("noisy_pom: element count does not match the model");
  }
  const int d = pom.dim();
  const Eigen::MatrixXcd uniform =
      (1.0 - model.gamma) / model.outcomes * Eigen::MatrixXcd::Identity(d, d);
  std::vector<PomElement> elements;
  elements.reserve(pom.size());
  for (const PomElement& e : pom.elements()) {
    elements.emplace_back(Eigen::MatrixXcd(model.gamma * e.matrix() + uniform));
  }
  return Pom(std::move(elements));
}

namespace detail {

// Closed form for the noisy mutual information of a symmetric N-outcome
// measurement on its own states; the antistate expression is the same
// function of -gamma.
inline double symmetric_noisy_mi(double signed_gamma, int n) {
  const double a = (1.0 + signed_gamma) / n;
  double info = 0.0;
  if (1.0 + signed_gamma > 0.0 && a > 0.0) {
    info += a * std::log2(1.0 + signed_gamma);
  }
  const double rest = 1.0 - a;
  const double arg = 1.0 - signed_gamma / (n - 1);
  if (rest > 0.0 && arg > 0.0) {
    info += rest * std::log2(arg);
  }
  return info;
}

}  // namespace detail

/// Noisy mutual information with the ensemble's own states as input:
/// ((1+G)/N) log2(1+G) + (1 - (1+G)/N) log2(1 - G/(N-1)).
inline double mi_states(const NoiseModel& model) {
  return detail::symmetric_noisy_mi(model.gamma, model.outcomes);
}

/// Noisy mutual information with the antistates as input:
/// ((1-G)/N) log2(1-G) + (1 - (1-G)/N) log2(1 + G/(N-1)); the G -> 1 limit
/// is log2(N/(N-1)).
inline double mi_antistates(const NoiseModel& model) {
  return detail::symmetric_noisy_mi(-model.gamma, model.outcomes);
}

/// Gamma from the empirical rate of a forbidden outcome: G = 1 - N * rate.
inline NoiseModel estimate_gamma(double forbidden_rate, int outcomes) {
  if (forbidden_rate < 0.0) {
    throw std::invalid_argument("estimate_gamma: negative rate");
  }
  if (forbidden_rate > 1.0 / outcomes) {
    throw std::invalid_argument("estimate_gamma: rate above 1/N implies gamma < 0");
  }
  return NoiseModel(1.0 - outcomes * forbidden_rate, outcomes);
}

struct GammaSweepPoint {
  double gamma = 0.0;
  double states_bits = 0.0;
  double antistates_bits = 0.0;
};

/// Both closed forms on a uniform gamma grid over [0, 1].
inline std::vector<GammaSweepPoint> gamma_sweep(int outcomes, int samples) {
  if (samples < 2) {
    throw std::invalid_argument("gamma_sweep: needs at least 2 samples");
  }
  std::vector<GammaSweepPoint> curve;
  curve.reserve(samples);
  for (int s = 0; s < samples; ++s) {
    const double g = static_cast<double>(s) / (samples - 1);
    const NoiseModel model(g, outcomes);
    curve.push_back({g, mi_states(model), mi_antistates(model)});
  }
  return curve;
}

/// Measured outcome probabilities, one row per input state; rows are
/// normalized on construction (mirroring the experimental normalization).
struct MeasuredDistribution {
  Eigen::MatrixXd probs;

  explicit MeasuredDistribution(Eigen::MatrixXd raw) : probs(std::move(raw)) {
    if (probs.rows() == 0 || probs.cols() == 0) {
      throw std::invalid_argument("MeasuredDistribution: empty matrix");
    }
    for (Eigen::Index k = 0; k < probs.rows(); ++k) {
      double row = 0.0;
      for (Eigen::Index j = 0; j < probs.cols(); ++j) {
        if (!std::isfinite(probs(k, j)) || probs(k, j) < -1e-12) {
          throw std::invalid_argument("MeasuredDistribution: invalid entry at row " +
                                      std::to_string(k) + ", column " +
                                      std::to_string(j));
        }
        probs(k, j) = std::max(probs(k, j), 0.0);
        row += probs(k, j);
      }
      if (row <= 0.0) {
        throw std::invalid_argument("MeasuredDistribution: row " + std::to_string(k) +
                                    " has no counts");
      }
      probs.row(k) /= row;
    }
  }
};

struct MonteCarloOptions {
  double half_width = 0.025;
  int trials = 100000;
  std::uint64_t seed = 1;
  double lower_percentile = 0.16;
  double upper_percentile = 0.84;
};

struct MonteCarloReport {
  double point = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Uniform in [0, 1) from the top 53 bits; avoids the implementation-defined
// std::uniform_real_distribution so output is identical everywhere.
inline double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline double percentile(std::vector<double> sorted_values, double q) {
  const std::size_t n = sorted_values.size();
  if (n == 1) {
    return sorted_values[0];
  }
  const double pos = q * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted_values[lo] + frac * (sorted_values[hi] - sorted_values[lo]);
}

}  // namespace detail

/// Monte Carlo error propagation: each table entry is perturbed by an
/// independent uniform draw in [-half_width, +half_width], clamped to
/// [0, 1], rows renormalized, and the mutual information recomputed per
/// trial. Returns the unperturbed value with the lower/upper percentile
/// bounds (16th/84th by default). Trials use per-trial substreams derived
/// from the seed, so the result is independent of evaluation order.
inline MonteCarloReport monte_carlo_mi(const MeasuredDistribution& measured,
                                       const std::vector<double>& priors,
                                       const MonteCarloOptions& opt = {}) {
  if (opt.half_width < 0.0) {
    throw std::invalid_argument("monte_carlo_mi: negative half_width");
  }
  if (opt.trials < 1) {
    throw std::invalid_argument("monte_carlo_mi: needs at least one trial");
  }
  if (priors.size() != static_cast<std::size_t>(measured.probs.rows())) {
    throw std::invalid_argument("monte_carlo_mi: priors size mismatch");
  }
  const Eigen::MatrixXd& base = measured.probs;
  std::vector<double> samples(static_cast<std::size_t>(opt.trials));
  Eigen::MatrixXd pert(base.rows(), base.cols());
  for (int t = 0; t < opt.trials; ++t) {
    std::mt19937_64 eng(detail::splitmix64(opt.seed ^ (0x9E3779B97F4A7C15ULL *
                                                       (static_cast<std::uint64_t>(t) + 1))));
    for (Eigen::Index k = 0; k < base.rows(); ++k) {
      double row = 0.0;
      for (Eigen::Index j = 0; j < base.cols(); ++j) {
        const double u = detail::uniform01(eng);
        const double v = base(k, j) + (2.0 * u - 1.0) * opt.half_width;
        pert(k, j) = std::clamp(v, 0.0, 1.0);
        row += pert(k, j);
      }
      if (row <= 0.0) {
        throw std::runtime_error("monte_carlo_mi: degenerate row after clamping");
      }
      pert.row(k) /= row;
    }
    samples[static_cast<std::size_t>(t)] =
        detail::mutual_information_bits(pert, priors);
  }
  std::sort(samples.begin(), samples.end());
  MonteCarloReport report;
  report.point = detail::mutual_information_bits(base, priors);
  report.lower = detail::percentile(samples, opt.lower_percentile);
  report.upper = detail::percentile(std::move(samples), opt.upper_percentile);
  report.trials = opt.trials;
  report.seed = opt.seed;
  return report;
}

}  // namespace polsim
