// Prints the detector probability tables for the trine and tetrad networks
// and the mutual information each measurement attains.

#include <cstdio>

#include "polsim/polsim.hpp"

namespace {

void print_table(const polsim::OpticalNetwork& net, const polsim::Ensemble& ens) {
  std::printf("%s through the %zu-detector network:\n", ens.label().c_str(),
              net.detectors.size());
  for (std::size_t k = 0; k < ens.size(); ++k) {
    std::printf("  state %zu:", k + 1);
    for (double p : polsim::detection_distribution(net, ens.polarization_state(k))) {
      std::printf("  %8.6f", p);
    }
    std::printf("\n");
  }
  const polsim::Pom pom = polsim::effective_pom(net);
  const polsim::MiReport mi = polsim::mutual_information(ens, pom);
  std::printf("  mutual information: %.6f bits\n\n", mi.mutual_info_bits);
}

}  // namespace

int main() {
  const polsim::OpticalNetwork trine_net = polsim::trine_network();
  const polsim::OpticalNetwork tetrad_net = polsim::tetrad_network();
  print_table(trine_net, polsim::trine());
  print_table(trine_net, polsim::antitrine());
  print_table(tetrad_net, polsim::tetrad());
  print_table(tetrad_net, polsim::antitetrad());
  return 0;
}
