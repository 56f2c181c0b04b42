// Prints the noisy mutual-information curves for 3- and 4-outcome
// measurements on a coarse noise-parameter grid.

#include <cstdio>

#include "polsim/polsim.hpp"

int main() {
  const auto c3 = polsim::gamma_sweep(3, 11);
  const auto c4 = polsim::gamma_sweep(4, 11);
  std::printf("gamma   trine   antitrine   tetrad   antitetrad\n");
  for (std::size_t s = 0; s < c3.size(); ++s) {
    std::printf("%5.2f  %7.4f  %7.4f  %7.4f  %7.4f\n", c3[s].gamma, c3[s].states_bits,
                c3[s].antistates_bits, c4[s].states_bits, c4[s].antistates_bits);
  }
  return 0;
}
