#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "polsim/ensembles.hpp"
#include "polsim/infotheory.hpp"
#include "polsim/noise.hpp"
#include "polsim/pom.hpp"

using namespace polsim;

namespace {

Eigen::MatrixXd ideal_antistate_table(int n) {
  Eigen::MatrixXd t(n, n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      t(k, j) = (j == k) ? 0.0 : 1.0 / (n - 1);
    }
  }
  return t;
}

Eigen::MatrixXd ideal_state_table(int n) {
  Eigen::MatrixXd t(n, n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      t(k, j) = (j == k) ? 2.0 / n : (1.0 - 2.0 / n) / (n - 1);
    }
  }
  return t;
}

}  // namespace

TEST_CASE("noisy POM limits", "[noise]") {
  const Pom ideal = min_error_pom(trine(), 2);
  const Pom same = noisy_pom(ideal, NoiseModel(1.0, 3));
  for (std::size_t j = 0; j < 3; ++j) {
    REQUIRE((same.element(j).matrix() - ideal.element(j).matrix())
                .cwiseAbs()
                .maxCoeff() < 1e-15);
  }
  const Pom flat = noisy_pom(ideal, NoiseModel(0.0, 3));
  for (std::size_t j = 0; j < 3; ++j) {
    REQUIRE((flat.element(j).matrix() - Eigen::MatrixXcd::Identity(2, 2) / 3.0)
                .cwiseAbs()
                .maxCoeff() < 1e-15);
  }
  REQUIRE_THROWS_AS(noisy_pom(ideal, NoiseModel(0.5, 4)), std::invalid_argument);
}

TEST_CASE("forbidden outcome probability under noise", "[noise]") {
  const Pom noisy = noisy_pom(min_error_pom(trine(), 2), NoiseModel(0.952, 3));
  const Ensemble anti = antitrine();
  for (std::size_t j = 0; j < 3; ++j) {
    const double p = outcome_probability(noisy.element(j), anti.state(j));
    REQUIRE(std::abs(p - 0.016) < 1e-12);
  }
}

TEST_CASE("closed-form noisy mutual information values", "[noise]") {
  // Frozen from the closed forms; the direct-table evaluations below act as
  // the independent oracle.
  REQUIRE(std::abs(mi_states(NoiseModel(0.952, 3)) - 0.3021579115159135) < 1e-12);
  REQUIRE(std::abs(mi_antistates(NoiseModel(0.952, 3)) - 0.48261248931288103) < 1e-12);
  REQUIRE(std::abs(mi_states(NoiseModel(0.964, 4)) - 0.19348781635188772) < 1e-12);
  REQUIRE(std::abs(mi_antistates(NoiseModel(0.964, 4)) - 0.35521377809803767) < 1e-12);

  REQUIRE(std::abs(mi_states(NoiseModel(1.0, 3)) - 1.0 / 3.0) < 1e-12);
  REQUIRE(mi_states(NoiseModel(0.0, 3)) == 0.0);
  REQUIRE(mi_states(NoiseModel(0.0, 7)) == 0.0);
  REQUIRE(std::abs(mi_antistates(NoiseModel(1.0, 3)) - std::log2(1.5)) < 1e-12);
  REQUIRE(std::abs(mi_antistates(NoiseModel(1.0, 4)) - std::log2(4.0 / 3.0)) < 1e-12);
}

TEST_CASE("closed forms agree with a direct conditional-table evaluation",
          "[noise]") {
  for (const double g : {0.25, 0.6, 0.952}) {
    for (const int n : {3, 4}) {
      Eigen::MatrixXd ts = ideal_state_table(n);
      Eigen::MatrixXd ta = ideal_antistate_table(n);
      for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
          ts(k, j) = g * ts(k, j) + (1.0 - g) / n;
          ta(k, j) = g * ta(k, j) + (1.0 - g) / n;
        }
      }
      const std::vector<double> priors(n, 1.0 / n);
      REQUIRE(std::abs(mutual_information(ConditionalTable(ts), priors).mutual_info_bits -
                       mi_states(NoiseModel(g, n))) < 1e-12);
      REQUIRE(std::abs(mutual_information(ConditionalTable(ta), priors).mutual_info_bits -
                       mi_antistates(NoiseModel(g, n))) < 1e-12);
    }
  }
}

TEST_CASE("noisy POM through the full pipeline matches the closed forms",
          "[noise]") {
  std::mt19937_64 eng(501);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Ensemble sets[] = {trine(), tetrad()};
  const Ensemble antis[] = {antitrine(), antitetrad()};
  for (int e = 0; e < 2; ++e) {
    const Pom ideal = min_error_pom(sets[e], 2);
    const int n = static_cast<int>(ideal.size());
    for (int trial = 0; trial < 50; ++trial) {
      const NoiseModel model(unit(eng), n);
      const Pom noisy = noisy_pom(ideal, model);
      REQUIRE(std::abs(mutual_information(sets[e], noisy).mutual_info_bits -
                       mi_states(model)) < 1e-10);
      REQUIRE(std::abs(mutual_information(antis[e], noisy).mutual_info_bits -
                       mi_antistates(model)) < 1e-10);
    }
  }
}

TEST_CASE("state and antistate forms differ only by the sign of gamma", "[noise]") {
  for (int i = 0; i <= 20; ++i) {
    const double g = i / 20.0;
    for (const int n : {3, 4, 5}) {
      REQUIRE(std::abs(detail::symmetric_noisy_mi(-g, n) -
                       mi_antistates(NoiseModel(g, n))) < 1e-15);
      REQUIRE(std::abs(detail::symmetric_noisy_mi(g, n) -
                       mi_states(NoiseModel(g, n))) < 1e-15);
    }
  }
}

TEST_CASE("gamma estimation", "[noise]") {
  REQUIRE(std::abs(estimate_gamma(0.016, 3).gamma - 0.952) < 1e-12);
  REQUIRE(std::abs(estimate_gamma(0.009, 4).gamma - 0.964) < 1e-12);
  REQUIRE(estimate_gamma(0.0, 5).gamma == 1.0);
  REQUIRE_THROWS_AS(estimate_gamma(0.4, 3), std::invalid_argument);
  REQUIRE_THROWS_AS(estimate_gamma(-0.01, 3), std::invalid_argument);
}

TEST_CASE("gamma estimation inverts the noisy forbidden rate", "[noise]") {
  const Pom ideal = min_error_pom(trine(), 2);
  const Ensemble anti = antitrine();
  for (const double g : {0.1, 0.5, 0.93}) {
    const Pom noisy = noisy_pom(ideal, NoiseModel(g, 3));
    const double rate = outcome_probability(noisy.element(0), anti.state(0));
    REQUIRE(std::abs(estimate_gamma(rate, 3).gamma - g) < 1e-12);
  }
}

TEST_CASE("gamma sweep grid contract", "[noise]") {
  const auto two = gamma_sweep(3, 2);
  REQUIRE(two.size() == 2);
  REQUIRE(two[0].gamma == 0.0);
  REQUIRE(two[1].gamma == 1.0);
  REQUIRE(two[0].states_bits == 0.0);
  REQUIRE(two[0].antistates_bits == 0.0);
  REQUIRE(two[1].antistates_bits > two[1].states_bits);
  REQUIRE_THROWS_AS(gamma_sweep(3, 1), std::invalid_argument);
}

TEST_CASE("noisy curves are monotone and steepest for the antistates", "[noise]") {
  for (const int n : {3, 4}) {
    const auto curve = gamma_sweep(n, 1000);
    for (std::size_t i = 1; i < curve.size(); ++i) {
      REQUIRE(curve[i].states_bits >= curve[i - 1].states_bits - 1e-12);
      REQUIRE(curve[i].antistates_bits >= curve[i - 1].antistates_bits - 1e-12);
    }
    // The antistate curve has the divergent slope near gamma = 1.
    const std::size_t last = curve.size() - 1;
    const double slope_states = curve[last].states_bits - curve[last - 1].states_bits;
    const double slope_antis =
        curve[last].antistates_bits - curve[last - 1].antistates_bits;
    REQUIRE(slope_antis > slope_states);
  }
}

TEST_CASE("Monte Carlo with zero half-width collapses to the point", "[noise]") {
  const MeasuredDistribution measured(ideal_antistate_table(3));
  MonteCarloOptions opt;
  opt.half_width = 0.0;
  opt.trials = 10;
  const MonteCarloReport r =
      monte_carlo_mi(measured, {1.0 / 3, 1.0 / 3, 1.0 / 3}, opt);
  REQUIRE(r.lower == r.point);
  REQUIRE(r.upper == r.point);
  REQUIRE(std::abs(r.point - std::log2(1.5)) < 1e-12);
}

TEST_CASE("Monte Carlo is deterministic given the seed", "[noise]") {
  const MeasuredDistribution measured(ideal_antistate_table(3));
  MonteCarloOptions opt;
  opt.trials = 2000;
  opt.seed = 42;
  const std::vector<double> priors = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  const MonteCarloReport a = monte_carlo_mi(measured, priors, opt);
  const MonteCarloReport b = monte_carlo_mi(measured, priors, opt);
  REQUIRE(a.lower == b.lower);
  REQUIRE(a.upper == b.upper);
  opt.seed = 43;
  const MonteCarloReport c = monte_carlo_mi(measured, priors, opt);
  REQUIRE((a.lower != c.lower || a.upper != c.upper));
}

TEST_CASE("Monte Carlo interval for the antistate table is asymmetric", "[noise]") {
  const MeasuredDistribution measured(ideal_antistate_table(3));
  MonteCarloOptions opt;
  opt.trials = 100000;
  opt.seed = 7;
  const MonteCarloReport r =
      monte_carlo_mi(measured, {1.0 / 3, 1.0 / 3, 1.0 / 3}, opt);
  REQUIRE(std::abs(r.point - std::log2(1.5)) < 1e-12);
  REQUIRE(r.lower < r.point);
  REQUIRE(std::abs(r.point - r.lower) > std::abs(r.upper - r.point));
}

TEST_CASE("Monte Carlo interval for the trine table is narrow", "[noise]") {
  const MeasuredDistribution measured(ideal_state_table(3));
  MonteCarloOptions opt;
  opt.trials = 20000;
  opt.seed = 11;
  const MonteCarloReport r =
      monte_carlo_mi(measured, {1.0 / 3, 1.0 / 3, 1.0 / 3}, opt);
  REQUIRE(r.upper - r.lower < 0.1);
}

TEST_CASE("Monte Carlo rejects rows that clamp to zero", "[noise]") {
  // With a half width of 1 every entry of a (0.5, 0.5) row clamps to zero in
  // roughly one trial in sixteen.
  Eigen::MatrixXd flat(2, 2);
  flat << 0.5, 0.5, 0.5, 0.5;
  const MeasuredDistribution measured(flat);
  MonteCarloOptions opt;
  opt.half_width = 1.0;
  opt.trials = 500;
  opt.seed = 3;
  REQUIRE_THROWS_AS(monte_carlo_mi(measured, {0.5, 0.5}, opt), std::runtime_error);
}

TEST_CASE("measured distribution validation", "[noise]") {
  Eigen::MatrixXd scaled(2, 2);
  scaled << 2.0, 6.0, 1.0, 3.0;
  const MeasuredDistribution m(scaled);
  REQUIRE(std::abs(m.probs(0, 0) - 0.25) < 1e-15);
  REQUIRE(std::abs(m.probs(1, 1) - 0.75) < 1e-15);
  Eigen::MatrixXd negative(1, 2);
  negative << 0.5, -0.5;
  REQUIRE_THROWS_AS(MeasuredDistribution(negative), std::invalid_argument);
}

TEST_CASE("noise model invariants", "[noise]") {
  REQUIRE_THROWS_AS(NoiseModel(1.2, 3), std::invalid_argument);
  REQUIRE_THROWS_AS(NoiseModel(-0.1, 3), std::invalid_argument);
  REQUIRE_THROWS_AS(NoiseModel(0.5, 1), std::invalid_argument);
}
