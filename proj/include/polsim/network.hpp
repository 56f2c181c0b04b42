// Lossless linear-optics simulation of the trine and tetrad interferometric
// measurement networks: amplitude propagation over (spatial path x
// polarization) modes plus one-way detector registers, named stage
// checkpoints, and tomographic extraction of the POM a network realizes.
//
// Component conventions: a polarizing splitter transmits h and deflects v,
// both with unit coefficient; the non-polarizing splitter applies real
// 1/sqrt2 coefficients with no phase difference between its outputs; mirror
// redirections are ideal identities. Detector taps absorb amplitude
// permanently. All components are norm-preserving.
#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "polsim/polarization.hpp"
#include "polsim/pom.hpp"

namespace polsim {

/// Half-angle of the plate that turns |h> into sqrt(2/3)|h> + sqrt(1/3)|v>;
/// alpha = arcsin(1/sqrt3), mount angle alpha/2 ~ 17.63 degrees.
inline const double kAlpha = std::asin(1.0 / std::sqrt(3.0));

/// Amplitudes over spatial paths (each carrying an (h, v) pair) and
/// detector registers. Total squared norm stays 1 through a network.
struct ModeAmplitudes {
  std::map<std::string, Eigen::Vector2cd> paths;
  std::map<std::string, Complex> detectors;

  double total_norm() const {
    double n = 0.0;
    for (const auto& [name, amp] : paths) {
      n += amp.squaredNorm();
    }
    for (const auto& [name, amp] : detectors) {
      n += std::norm(amp);
    }
    return n;
  }

  double detector_norm() const {
    double n = 0.0;
    for (const auto& [name, amp] : detectors) {
      n += std::norm(amp);
    }
    return n;
  }
};

enum class PlateKind { Half, Quarter };
enum class PolComponent { H, V };

/// h of in_a and v of in_b exit on out_straight; h of in_b and v of in_a
/// exit on out_deflect. An empty input name is the vacuum port.
struct PolarizingSplitter {
  std::string in_a;
  std::string in_b;
  std::string out_straight;
  std::string out_deflect;
};

/// out_sum = (a + b)/sqrt2, out_diff = (a - b)/sqrt2, acting on both
/// polarization components.
struct NonPolarizingSplitter {
  std::string in_a;
  std::string in_b;
  std::string out_sum;
  std::string out_diff;
};

struct WaveplateStage {
  std::string path;
  PlateKind plate = PlateKind::Half;
  double half_angle = 0.0;
};

struct RelativePhaseStage {
  std::string path;
  double phase = 0.0;
};

/// Moves sqrt(fraction) of the selected polarization amplitude into a
/// detector register; fraction 1 is a full tap.
struct DetectorTap {
  std::string path;
  PolComponent polarization = PolComponent::H;
  std::string detector;
  double fraction = 1.0;
};

using Component = std::variant<PolarizingSplitter, NonPolarizingSplitter,
                               WaveplateStage, RelativePhaseStage, DetectorTap>;

/// Ordered component stages with named checkpoints (checkpoint value =
/// number of stages applied before the snapshot). "F" always names the end.
struct OpticalNetwork {
  std::string input_path = "IN";
  std::vector<Component> stages;
  std::vector<std::pair<std::string, std::size_t>> checkpoints;
  std::vector<std::string> detectors;
};

namespace detail {

inline Eigen::Vector2cd path_amplitudes(const ModeAmplitudes& amps,
                                        const std::string& name) {
  if (name.empty()) {
    return Eigen::Vector2cd::Zero();
  }
  const auto it = amps.paths.find(name);
  return it == amps.paths.end() ? Eigen::Vector2cd::Zero() : it->second;
}

struct ComponentAction {
  ModeAmplitudes& amps;

  void operator()(const PolarizingSplitter& c) const {
    const Eigen::Vector2cd a = path_amplitudes(amps, c.in_a);
    const Eigen::Vector2cd b = path_amplitudes(amps, c.in_b);
    if (!c.in_a.empty()) {
      amps.paths.erase(c.in_a);
    }
    if (!c.in_b.empty()) {
      amps.paths.erase(c.in_b);
    }
    amps.paths[c.out_straight] = Eigen::Vector2cd(a(0), b(1));
    amps.paths[c.out_deflect] = Eigen::Vector2cd(b(0), a(1));
  }

  void operator()(const NonPolarizingSplitter& c) const {
    const Eigen::Vector2cd a = path_amplitudes(amps, c.in_a);
    const Eigen::Vector2cd b = path_amplitudes(amps, c.in_b);
    if (!c.in_a.empty()) {
      amps.paths.erase(c.in_a);
    }
    if (!c.in_b.empty()) {
      amps.paths.erase(c.in_b);
    }
    const double r = 1.0 / std::sqrt(2.0);
    amps.paths[c.out_sum] = r * (a + b);
    amps.paths[c.out_diff] = r * (a - b);
  }

  void operator()(const WaveplateStage& c) const {
    const auto it = amps.paths.find(c.path);
    if (it == amps.paths.end()) {
      return;
    }
    const PolarizationOperator op = c.plate == PlateKind::Half
                                        ? half_waveplate(c.half_angle)
                                        : quarter_waveplate(c.half_angle);
    it->second = op * it->second;
  }

  void operator()(const RelativePhaseStage& c) const {
    const auto it = amps.paths.find(c.path);
    if (it != amps.paths.end()) {
      it->second *= std::polar(1.0, c.phase);
    }
  }

  void operator()(const DetectorTap& c) const {
    const auto it = amps.paths.find(c.path);
    if (it == amps.paths.end()) {
      return;
    }
    if (c.fraction < 0.0 || c.fraction > 1.0) {
      throw std::invalid_argument("DetectorTap: fraction outside [0, 1]");
    }
    const int idx = c.polarization == PolComponent::H ? 0 : 1;
    amps.detectors[c.detector] += std::sqrt(c.fraction) * it->second(idx);
    it->second(idx) *= std::sqrt(1.0 - c.fraction);
  }
};

inline std::size_t checkpoint_index(const OpticalNetwork& net,
                                    const std::string& name) {
  if (name == "F") {
    return net.stages.size();
  }
  for (const auto& [label, index] : net.checkpoints) {
    if (label == name) {
      return index;
    }
  }
  throw std::invalid_argument("propagate: unknown checkpoint '" + name + "'");
}

}  // namespace detail

/// Amplitudes after the stages up to the named checkpoint. The total norm is
/// checked to stay 1 within 1e-12 at every stage (lossless propagation).
inline ModeAmplitudes propagate(const OpticalNetwork& net,
                                const PolarizationState& input,
                                const std::string& upto = "F") {
  const std::size_t count = detail::checkpoint_index(net, upto);
  ModeAmplitudes amps;
  amps.paths[net.input_path] = input.vec();
  for (std::size_t s = 0; s < count; ++s) {
    std::visit(detail::ComponentAction{amps}, net.stages[s]);
    if (std::abs(amps.total_norm() - 1.0) > 1e-12) {
      throw std::runtime_error("propagate: norm not conserved at stage " +
                               std::to_string(s));
    }
  }
  return amps;
}

/// |detector amplitude|^2 per detector, in network detector order. The
/// probabilities sum to 1 within 1e-10; amplitude in a path or in a register
/// missing from the detector list is an error (a wiring bug).
inline std::vector<double> detection_distribution(const OpticalNetwork& net,
                                                  const PolarizationState& input) {
  const ModeAmplitudes amps = propagate(net, input, "F");
  if (std::abs(amps.detector_norm() - 1.0) > 1e-10) {
    throw std::runtime_error(
        "detection_distribution: amplitude left outside the detector registers");
  }
  std::vector<double> probs;
  probs.reserve(net.detectors.size());
  double total = 0.0;
  for (const std::string& name : net.detectors) {
    const auto it = amps.detectors.find(name);
    probs.push_back(it == amps.detectors.end() ? 0.0 : std::norm(it->second));
    total += probs.back();
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw std::runtime_error(
        "detection_distribution: amplitude in a register missing from the detector list");
  }
  return probs;
}

struct TrineNetworkOptions {
  double wp5_half_angle = kAlpha / 2.0;
  /// Explicit arm-phase stage on the upper arm before recombination. The
  /// default 0 reproduces the ideal stage amplitudes exactly under the
  /// phase-free splitter convention above.
  double arm_phase = 0.0;
  /// Power fraction lost at the mirror redirections into monitor registers
  /// PD4/PD5; 0 is the ideal network.
  double mirror_leakage = 0.0;
};

/// Minimum-error measurement network for the trine states: PBS split, WP5
/// rotation of the upper arm, PD3 tap, WP6 lower-arm v->h, recombination,
/// WP9 mixing at pi/8, final split onto PD1/PD2. Checkpoints AA, BB, CC, F.
inline OpticalNetwork trine_network(const TrineNetworkOptions& opt = {}) {
  OpticalNetwork net;
  net.input_path = "IN";
  net.detectors = {"PD1", "PD2", "PD3"};
  auto mark = [&net](const char* name) {
    net.checkpoints.emplace_back(name, net.stages.size());
  };
  net.stages.push_back(PolarizingSplitter{"IN", "", "U", "L"});
  net.stages.push_back(WaveplateStage{"U", PlateKind::Half, opt.wp5_half_angle});
  mark("AA");
  net.stages.push_back(DetectorTap{"U", PolComponent::H, "PD3", 1.0});
  net.stages.push_back(WaveplateStage{"L", PlateKind::Half, std::numbers::pi / 4});
  mark("BB");
  if (opt.mirror_leakage > 0.0) {
    net.detectors.push_back("PD4");
    net.detectors.push_back("PD5");
    net.stages.push_back(DetectorTap{"L", PolComponent::H, "PD4", opt.mirror_leakage});
    net.stages.push_back(DetectorTap{"U", PolComponent::V, "PD5", opt.mirror_leakage});
  }
  net.stages.push_back(RelativePhaseStage{"U", opt.arm_phase});
  net.stages.push_back(PolarizingSplitter{"L", "U", "OUT", "WASTE"});
  net.stages.push_back(WaveplateStage{"OUT", PlateKind::Half, std::numbers::pi / 8});
  mark("CC");
  net.stages.push_back(DetectorTap{"OUT", PolComponent::H, "PD1", 1.0});
  net.stages.push_back(DetectorTap{"OUT", PolComponent::V, "PD2", 1.0});
  return net;
}

struct TetradNetworkOptions {
  double wp5_half_angle = std::numbers::pi / 4 + kAlpha / 2.0;
};

/// Minimum-error measurement network for the tetrad states: 50/50
/// non-polarizing split, WP5 at (pi/2 + alpha)/2 in the upper arm, taps to
/// PD3/PD4, WP6, recombination, quarter-wave mixing at pi/4 followed by a
/// pi/2 phase on the output path, final split onto PD1/PD2.
inline OpticalNetwork tetrad_network(const TetradNetworkOptions& opt = {}) {
  OpticalNetwork net;
  net.input_path = "IN";
  net.detectors = {"PD1", "PD2", "PD3", "PD4"};
  auto mark = [&net](const char* name) {
    net.checkpoints.emplace_back(name, net.stages.size());
  };
  net.stages.push_back(NonPolarizingSplitter{"IN", "", "U", "L"});
  net.stages.push_back(WaveplateStage{"U", PlateKind::Half, opt.wp5_half_angle});
  mark("AA");
  net.stages.push_back(DetectorTap{"U", PolComponent::H, "PD3", 1.0});
  net.stages.push_back(DetectorTap{"L", PolComponent::H, "PD4", 1.0});
  net.stages.push_back(WaveplateStage{"L", PlateKind::Half, std::numbers::pi / 4});
  mark("BB");
  net.stages.push_back(PolarizingSplitter{"L", "U", "OUT", "WASTE"});
  net.stages.push_back(WaveplateStage{"OUT", PlateKind::Quarter, std::numbers::pi / 4});
  net.stages.push_back(RelativePhaseStage{"OUT", std::numbers::pi / 2});
  mark("CC");
  net.stages.push_back(DetectorTap{"OUT", PolComponent::H, "PD1", 1.0});
  net.stages.push_back(DetectorTap{"OUT", PolComponent::V, "PD2", 1.0});
  return net;
}

/// Reconstructs the POM the network realizes on the input qubit from the
/// detection statistics of |h>, |v>, (|h>+|v>)/sqrt2 and (|h>+i|v>)/sqrt2,
/// then cross-checks the prediction on a fifth probe. Throws if the
/// reconstruction residual exceeds 1e-9.
inline Pom effective_pom(const OpticalNetwork& net) {
  const Complex i{0.0, 1.0};
  const PolarizationState probes[] = {
      PolarizationState::horizontal(),
      PolarizationState::vertical(),
      PolarizationState(1.0, 1.0),
      PolarizationState(1.0, i),
  };
  std::vector<std::vector<double>> p;
  p.reserve(4);
  for (const PolarizationState& probe : probes) {
    p.push_back(detection_distribution(net, probe));
  }
  const std::size_t m = net.detectors.size();
  std::vector<PomElement> elements;
  elements.reserve(m);
  Eigen::Matrix2cd sum = Eigen::Matrix2cd::Zero();
  std::vector<Eigen::Matrix2cd> mats(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double phh = p[0][j];
    const double pvv = p[1][j];
    const double re = p[2][j] - 0.5 * (phh + pvv);
    const double im = 0.5 * (phh + pvv) - p[3][j];
    Eigen::Matrix2cd pi;
    pi << Complex(phh), Complex(re, im), Complex(re, -im), Complex(pvv);
    mats[j] = pi;
    sum += pi;
  }
  double residual = (sum - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
  const PolarizationState cross_probe(1.0, -1.0);
  const std::vector<double> cross = detection_distribution(net, cross_probe);
  const Eigen::Vector2cd cv = cross_probe.vec();
  for (std::size_t j = 0; j < m; ++j) {
    const double predicted = (cv.adjoint() * mats[j] * cv)(0).real();
    residual = std::max(residual, std::abs(predicted - cross[j]));
    residual = std::max(residual, std::max(0.0, -detail::min_eigenvalue(mats[j])));
  }
  if (residual > 1e-9) {
    throw std::runtime_error("effective_pom: reconstruction residual " +
                             std::to_string(residual));
  }
  for (std::size_t j = 0; j < m; ++j) {
    elements.emplace_back(Eigen::MatrixXcd(mats[j]));
  }
  return Pom(std::move(elements));
}

enum class NetworkKind { Trine, Tetrad };

/// RMS deviation of the 18 trine + antitrine detector probabilities from
/// the ideal (2/3, 1/6, 1/6) and (0, 1/2, 1/2) patterns, for each candidate
/// WP5 mount angle.
inline std::vector<std::pair<double, double>> wp5_sweep(
    NetworkKind kind, const std::vector<double>& half_angles) {
  if (kind != NetworkKind::Trine) {
    throw std::invalid_argument("wp5_sweep: only the trine network is swept");
  }
  const Ensemble states = trine();
  const Ensemble antistates = antitrine();
  std::vector<std::pair<double, double>> out;
  out.reserve(half_angles.size());
  for (const double angle : half_angles) {
    TrineNetworkOptions opt;
    opt.wp5_half_angle = angle;
    const OpticalNetwork net = trine_network(opt);
    double sq = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      const std::vector<double> ps =
          detection_distribution(net, states.polarization_state(k));
      const std::vector<double> pa =
          detection_distribution(net, antistates.polarization_state(k));
      for (std::size_t j = 0; j < 3; ++j) {
        const double ideal_s = (j == k) ? 2.0 / 3.0 : 1.0 / 6.0;
        const double ideal_a = (j == k) ? 0.0 : 0.5;
        sq += (ps[j] - ideal_s) * (ps[j] - ideal_s);
        sq += (pa[j] - ideal_a) * (pa[j] - ideal_a);
      }
    }
    out.emplace_back(angle, std::sqrt(sq / 18.0));
  }
  return out;
}

}  // namespace polsim
