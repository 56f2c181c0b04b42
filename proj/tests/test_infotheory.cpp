#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "polsim/ensembles.hpp"
#include "polsim/infotheory.hpp"
#include "polsim/pom.hpp"
#include "test_helpers.hpp"

using namespace polsim;
using test_helpers::random_state;

namespace {

const double kLog2_3 = std::log2(3.0);

Eigen::MatrixXd trine_min_error_table() {
  Eigen::MatrixXd t(3, 3);
  for (int k = 0; k < 3; ++k) {
    for (int j = 0; j < 3; ++j) {
      t(k, j) = (j == k) ? 2.0 / 3.0 : 1.0 / 6.0;
    }
  }
  return t;
}

Eigen::MatrixXd antitrine_table() {
  Eigen::MatrixXd t(3, 3);
  for (int k = 0; k < 3; ++k) {
    for (int j = 0; j < 3; ++j) {
      t(k, j) = (j == k) ? 0.0 : 0.5;
    }
  }
  return t;
}

Ensemble random_qubit_ensemble(std::mt19937_64& eng, int n) {
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  std::vector<Eigen::VectorXcd> states;
  std::vector<double> priors(n);
  double total = 0.0;
  for (int k = 0; k < n; ++k) {
    states.push_back(random_state(eng).vec());
    priors[k] = unit(eng);
    total += priors[k];
  }
  for (double& p : priors) {
    p /= total;
  }
  // Re-fix the sum exactly.
  double s = 0.0;
  for (int k = 0; k + 1 < n; ++k) s += priors[k];
  priors[n - 1] = 1.0 - s;
  return {"random", states, priors};
}

Pom random_pom(std::mt19937_64& eng, int outcomes) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Eigen::MatrixXcd> blocks;
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(2, 2);
  for (int j = 0; j < outcomes; ++j) {
    Eigen::MatrixXcd g(2, 2);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        g(r, c) = Complex(normal(eng), normal(eng));
      }
    }
    blocks.push_back(g * g.adjoint());
    total += blocks.back();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(total);
  const Eigen::MatrixXcd inv_sqrt = solver.operatorInverseSqrt();
  std::vector<PomElement> elements;
  for (const Eigen::MatrixXcd& b : blocks) {
    Eigen::MatrixXcd e = inv_sqrt * b * inv_sqrt;
    elements.emplace_back(Eigen::MatrixXcd(0.5 * (e + e.adjoint())));
  }
  return Pom(std::move(elements));
}

}  // namespace

TEST_CASE("shannon entropy anchors", "[infotheory]") {
  REQUIRE(std::abs(shannon_entropy({1.0 / 3, 1.0 / 3, 1.0 / 3}) - kLog2_3) < 1e-12);
  REQUIRE(shannon_entropy({1.0, 0.0, 0.0}) == 0.0);
  REQUIRE(std::abs(shannon_entropy({0.25, 0.25, 0.25, 0.25}) - 2.0) < 1e-15);
  REQUIRE_THROWS_AS(shannon_entropy({0.5, 0.1}), std::invalid_argument);
  REQUIRE_THROWS_AS(shannon_entropy({1.2, -0.2}), std::invalid_argument);
}

TEST_CASE("posterior anchors", "[infotheory]") {
  const std::vector<double> uniform3 = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  const ConditionalTable trine_table(trine_min_error_table());
  const std::vector<double> post = posterior(trine_table, uniform3, 2);
  REQUIRE(std::abs(post[0] - 1.0 / 6.0) < 1e-12);
  REQUIRE(std::abs(post[1] - 1.0 / 6.0) < 1e-12);
  REQUIRE(std::abs(post[2] - 2.0 / 3.0) < 1e-12);

  const ConditionalTable flat(Eigen::MatrixXd::Constant(3, 3, 1.0 / 3.0));
  const std::vector<double> priors = {0.5, 0.3, 0.2};
  const std::vector<double> same = posterior(flat, priors, 1);
  for (int k = 0; k < 3; ++k) {
    REQUIRE(std::abs(same[k] - priors[k]) < 1e-12);
  }

  const ConditionalTable anti(antitrine_table());
  for (std::size_t j = 0; j < 3; ++j) {
    REQUIRE(posterior(anti, uniform3, j)[j] == 0.0);
  }

  Eigen::MatrixXd dead(2, 2);
  dead << 1.0, 0.0, 1.0, 0.0;
  REQUIRE_THROWS_AS(posterior(ConditionalTable(dead), {0.5, 0.5}, 1),
                    std::invalid_argument);
}

TEST_CASE("conditional entropy anchors", "[infotheory]") {
  const std::vector<double> uniform3 = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  REQUIRE(conditional_entropy(ConditionalTable(Eigen::MatrixXd::Identity(3, 3)),
                              uniform3) == 0.0);
  REQUIRE(std::abs(conditional_entropy(ConditionalTable(trine_min_error_table()),
                                       uniform3) -
                   (kLog2_3 - 1.0 / 3.0)) < 1e-12);
  const std::vector<double> priors = {0.5, 0.25, 0.25};
  REQUIRE(std::abs(conditional_entropy(
                       ConditionalTable(Eigen::MatrixXd::Constant(3, 4, 0.25)), priors) -
                   shannon_entropy(priors)) < 1e-12);
}

TEST_CASE("mutual information reproduces the ideal reference values",
          "[infotheory]") {
  const Pom p3 = min_error_pom(trine(), 2);
  const Pom p4 = min_error_pom(tetrad(), 2);
  REQUIRE(std::abs(mutual_information(trine(), p3).mutual_info_bits - 1.0 / 3.0) <
          1e-12);
  REQUIRE(std::abs(mutual_information(antitrine(), p3).mutual_info_bits -
                   std::log2(1.5)) < 1e-12);
  REQUIRE(std::abs(mutual_information(tetrad(), p4).mutual_info_bits -
                   (1.0 - 0.5 * kLog2_3)) < 1e-12);
  REQUIRE(std::abs(mutual_information(antitetrad(), p4).mutual_info_bits -
                   std::log2(4.0 / 3.0)) < 1e-12);
}

TEST_CASE("MiReport identity I = H - H(X|Y)", "[infotheory]") {
  std::mt19937_64 eng(301);
  for (int trial = 0; trial < 50; ++trial) {
    const Ensemble ens = random_qubit_ensemble(eng, 2 + trial % 3);
    const Pom pom = random_pom(eng, 2 + (trial + 1) % 4);
    const MiReport r = mutual_information(ens, pom);
    REQUIRE(std::abs(r.mutual_info_bits -
                     (r.entropy_bits - r.conditional_entropy_bits)) < 1e-10);
    REQUIRE(r.mutual_info_bits >= -1e-12);
    REQUIRE(r.mutual_info_bits <= r.entropy_bits + 1e-12);
    REQUIRE(r.mutual_info_bits <=
            std::log2(static_cast<double>(pom.size())) + 1e-12);
  }
}

TEST_CASE("merging outcomes never increases mutual information", "[infotheory]") {
  std::mt19937_64 eng(302);
  std::uniform_int_distribution<int> pick(0, 100);
  for (int trial = 0; trial < 100; ++trial) {
    const Ensemble ens = random_qubit_ensemble(eng, 2 + trial % 3);
    const int m = 3 + trial % 3;
    const Pom pom = random_pom(eng, m);
    const int a = pick(eng) % m;
    int b = pick(eng) % m;
    if (b == a) {
      b = (a + 1) % m;
    }
    std::vector<PomElement> merged;
    merged.emplace_back(
        Eigen::MatrixXcd(pom.element(a).matrix() + pom.element(b).matrix()));
    for (int j = 0; j < m; ++j) {
      if (j != a && j != b) {
        merged.push_back(pom.element(j));
      }
    }
    const double before = mutual_information(ens, pom).mutual_info_bits;
    const double after =
        mutual_information(ens, Pom(std::move(merged))).mutual_info_bits;
    REQUIRE(after <= before + 1e-10);
  }
}

TEST_CASE("mutual information is invariant under outcome and state permutations",
          "[infotheory]") {
  const Ensemble ens = trine();
  const Pom pom = min_error_pom(ens, 2);
  const double base = mutual_information(ens, pom).mutual_info_bits;

  std::vector<PomElement> shuffled = {pom.element(2), pom.element(0), pom.element(1)};
  REQUIRE(std::abs(mutual_information(ens, Pom(std::move(shuffled))).mutual_info_bits -
                   base) < 1e-12);

  std::vector<Eigen::VectorXcd> states = {ens.state(1), ens.state(2), ens.state(0)};
  const Ensemble permuted("permuted", states, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  REQUIRE(std::abs(mutual_information(permuted, pom).mutual_info_bits - base) < 1e-12);
}

TEST_CASE("accessible information references", "[infotheory]") {
  REQUIRE(accessible_info_reference("trine") == std::log2(3.0 / 2.0));
  REQUIRE(accessible_info_reference("tetrad") == std::log2(4.0 / 3.0));
  REQUIRE_THROWS_AS(accessible_info_reference("quintet"), std::invalid_argument);
}

TEST_CASE("best von Neumann measurement for the trine", "[infotheory]") {
  const VonNeumannResult r = best_von_neumann_mi(trine(), 181);
  const double closed = -1.0 / 3.0 + 0.5 * kLog2_3;
  REQUIRE(std::abs(r.bits - closed) < 1e-6);
  REQUIRE(std::abs(r.bits - 0.459) < 1e-3);
}

TEST_CASE("best von Neumann measurement for the tetrad", "[infotheory]") {
  const VonNeumannResult r = best_von_neumann_mi(tetrad(), 181);
  const double closed = 1.5 * (1.0 - 0.5 * kLog2_3);
  REQUIRE(std::abs(r.bits - closed) < 1e-6);
  REQUIRE(std::abs(r.bits - 0.311) < 1e-3);
}

TEST_CASE("orthogonal pair reaches exactly one bit", "[infotheory]") {
  const std::vector<PolarizationState> hv = {PolarizationState::horizontal(),
                                             PolarizationState::vertical()};
  const VonNeumannResult r = best_von_neumann_mi(Ensemble("hv", hv, {0.5, 0.5}), 181);
  REQUIRE(r.bits == 1.0);
}

TEST_CASE("von Neumann maximum stays below the accessible information",
          "[infotheory]") {
  const double vn = best_von_neumann_mi(trine(), 181).bits;
  REQUIRE(vn <= accessible_info_reference("trine") - 0.12);
}

TEST_CASE("best_von_neumann_mi rejects non-qubit ensembles", "[infotheory]") {
  std::vector<Eigen::VectorXcd> states;
  Eigen::VectorXcd v(3);
  v << 1.0, 0.0, 0.0;
  states.push_back(v);
  REQUIRE_THROWS_AS(best_von_neumann_mi(Ensemble("d3", states, {1.0}), 181),
                    std::invalid_argument);
}

TEST_CASE("conditional table invariants", "[infotheory]") {
  Eigen::MatrixXd bad_row(2, 2);
  bad_row << 0.6, 0.3, 0.5, 0.5;
  REQUIRE_THROWS_AS(ConditionalTable(bad_row), std::invalid_argument);
  Eigen::MatrixXd bad_entry(1, 2);
  bad_entry << 1.4, -0.4;
  REQUIRE_THROWS_AS(ConditionalTable(bad_entry), std::invalid_argument);
  REQUIRE_THROWS_AS(conditional_table(trine(), Pom({PomElement(
                        Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(3, 3)))})),
                    std::invalid_argument);
}
