// JSON and CSV interchange for states, ensembles, POMs, networks, measured
// distributions and reports.
//
// Schemas:
//   state     {"h": [re, im], "v": [re, im]}
//   ensemble  {"label": str, "states": [state...], "priors": [..]}
//   pom       {"dim": D, "elements": [[[ [re,im] x D ] x D ]...]}
//   network   {"input": str, "detectors": [..], "components": [..],
//              "checkpoints": {name: stage-count}}
//   mc report {"point":, "lower":, "upper":, "trials":, "seed":}
// CSV is comma-separated with a header row, UNIX newlines, 6 significant
// digits. JSON keeps full double precision and insertion key order.
#pragma once

#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "polsim/ensembles.hpp"
#include "polsim/infotheory.hpp"
#include "polsim/network.hpp"
#include "polsim/noise.hpp"
#include "polsim/pom.hpp"

namespace polsim {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------- states

inline Json state_to_json(const PolarizationState& s) {
  return Json{{"h", {s.amp_h().real(), s.amp_h().imag()}},
              {"v", {s.amp_v().real(), s.amp_v().imag()}}};
}

inline PolarizationState state_from_json(const Json& j) {
  if (!j.contains("h") || !j.contains("v")) {
    throw std::invalid_argument("state: missing 'h' or 'v' amplitude");
  }
  const auto& h = j.at("h");
  const auto& v = j.at("v");
  if (!h.is_array() || h.size() != 2 || !v.is_array() || v.size() != 2) {
    throw std::invalid_argument("state: amplitudes must be [re, im] pairs");
  }
  return {Complex(h[0].get<double>(), h[1].get<double>()),
          Complex(v[0].get<double>(), v[1].get<double>())};
}

// -------------------------------------------------------------- ensembles

inline Json ensemble_to_json(const Ensemble& e) {
  Json states = Json::array();
  for (std::size_t k = 0; k < e.size(); ++k) {
    states.push_back(state_to_json(e.polarization_state(k)));
  }
  return Json{{"label", e.label()}, {"states", states}, {"priors", e.priors()}};
}

inline Ensemble ensemble_from_json(const Json& j) {
  if (!j.contains("states") || !j.contains("priors")) {
    throw std::invalid_argument("ensemble: missing 'states' or 'priors'");
  }
  std::vector<PolarizationState> states;
  for (const Json& js : j.at("states")) {
    states.push_back(state_from_json(js));
  }
  const std::vector<double> priors = j.at("priors").get<std::vector<double>>();
  return {j.value("label", std::string("custom")), states, priors};
}

/// trine | tetrad | antitrine | antitetrad, or a path to an ensemble JSON.
inline Ensemble load_ensemble(const std::string& name_or_path) {
  if (name_or_path == "trine") return trine();
  if (name_or_path == "tetrad") return tetrad();
  if (name_or_path == "antitrine") return antitrine();
  if (name_or_path == "antitetrad") return antitetrad();
  std::ifstream in(name_or_path);
  if (!in) {
    throw std::invalid_argument("ensemble: cannot open '" + name_or_path + "'");
  }
  return ensemble_from_json(Json::parse(in));
}

// ------------------------------------------------------------------- poms

inline Json pom_to_json(const Pom& pom) {
  Json elements = Json::array();
  for (const PomElement& e : pom.elements()) {
    Json rows = Json::array();
    for (int r = 0; r < e.dim(); ++r) {
      Json row = Json::array();
      for (int c = 0; c < e.dim(); ++c) {
        row.push_back({e.matrix()(r, c).real(), e.matrix()(r, c).imag()});
      }
      rows.push_back(row);
    }
    elements.push_back(rows);
  }
  return Json{{"dim", pom.dim()}, {"elements", elements}};
}

inline Pom pom_from_json(const Json& j) {
  if (!j.contains("dim") || !j.contains("elements")) {
    throw std::invalid_argument("pom: missing 'dim' or 'elements'");
  }
  const int dim = j.at("dim").get<int>();
  std::vector<PomElement> elements;
  for (const Json& je : j.at("elements")) {
    if (!je.is_array() || static_cast<int>(je.size()) != dim) {
      throw std::invalid_argument("pom: element is not a dim x dim matrix");
    }
    Eigen::MatrixXcd m(dim, dim);
    for (int r = 0; r < dim; ++r) {
      const Json& row = je.at(r);
      if (!row.is_array() || static_cast<int>(row.size()) != dim) {
        throw std::invalid_argument("pom: element row has wrong length");
      }
      for (int c = 0; c < dim; ++c) {
        m(r, c) = Complex(row.at(c).at(0).get<double>(), row.at(c).at(1).get<double>());
      }
    }
    elements.emplace_back(std::move(m));
  }
  return Pom(std::move(elements));
}

inline Pom load_pom(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("pom: cannot open '" + path + "'");
  }
  return pom_from_json(Json::parse(in));
}

// --------------------------------------------------------------- networks

inline Component component_from_json(const Json& j) {
  const std::string kind = j.value("kind", std::string());
  if (kind == "polarizing-splitter") {
    return PolarizingSplitter{j.value("in_a", std::string()), j.value("in_b", std::string()),
                              j.at("out_straight").get<std::string>(),
                              j.at("out_deflect").get<std::string>()};
  }
  if (kind == "nonpolarizing-splitter") {
    return NonPolarizingSplitter{j.value("in_a", std::string()), j.value("in_b", std::string()),
                                 j.at("out_sum").get<std::string>(),
                                 j.at("out_diff").get<std::string>()};
  }
  if (kind == "waveplate") {
    const std::string plate = j.at("plate").get<std::string>();
    if (plate != "half" && plate != "quarter") {
      throw std::invalid_argument("network: waveplate plate must be 'half' or 'quarter'");
    }
    return WaveplateStage{j.at("path").get<std::string>(),
                          plate == "half" ? PlateKind::Half : PlateKind::Quarter,
                          j.at("half_angle").get<double>()};
  }
  if (kind == "relative-phase") {
    return RelativePhaseStage{j.at("path").get<std::string>(), j.at("phase").get<double>()};
  }
  if (kind == "detector-tap") {
    const std::string pol = j.at("polarization").get<std::string>();
    if (pol != "h" && pol != "v") {
      throw std::invalid_argument("network: tap polarization must be 'h' or 'v'");
    }
    return DetectorTap{j.at("path").get<std::string>(),
                       pol == "h" ? PolComponent::H : PolComponent::V,
                       j.at("detector").get<std::string>(), j.value("fraction", 1.0)};
  }
  throw std::invalid_argument("network: unknown component kind '" + kind + "'");
}

inline OpticalNetwork network_from_json(const Json& j) {
  OpticalNetwork net;
  net.input_path = j.value("input", std::string("IN"));
  if (!j.contains("detectors") || !j.contains("components")) {
    throw std::invalid_argument("network: missing 'detectors' or 'components'");
  }
  net.detectors = j.at("detectors").get<std::vector<std::string>>();
  for (const Json& jc : j.at("components")) {
    net.stages.push_back(component_from_json(jc));
  }
  if (j.contains("checkpoints")) {
    for (const auto& [name, idx] : j.at("checkpoints").items()) {
      const std::size_t index = idx.get<std::size_t>();
      if (index > net.stages.size()) {
        throw std::invalid_argument("network: checkpoint '" + name + "' out of range");
      }
      net.checkpoints.emplace_back(name, index);
    }
  }
  return net;
}

/// trine | tetrad, or a path to a network JSON.
inline OpticalNetwork load_network(const std::string& name_or_path) {
  if (name_or_path == "trine") return trine_network();
  if (name_or_path == "tetrad") return tetrad_network();
  std::ifstream in(name_or_path);
  if (!in) {
    throw std::invalid_argument("network: cannot open '" + name_or_path + "'");
  }
  return network_from_json(Json::parse(in));
}

// ---------------------------------------------------------------- reports

inline Json mi_report_to_json(const MiReport& r) {
  return Json{{"mutual_info_bits", r.mutual_info_bits},
              {"entropy_bits", r.entropy_bits},
              {"conditional_entropy_bits", r.conditional_entropy_bits}};
}

inline Json monte_carlo_report_to_json(const MonteCarloReport& r) {
  return Json{{"point", r.point},
              {"lower", r.lower},
              {"upper", r.upper},
              {"trials", r.trials},
              {"seed", r.seed}};
}

// -------------------------------------------------------------------- csv

/// 6 significant digits, the CSV number format.
inline std::string format_sig6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

inline void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) {
      out << ',';
    }
    out << cells[i];
  }
  out << '\n';
}

/// Measured-distribution CSV: one row per input state, one column per
/// detector; an optional header row is skipped.
inline MeasuredDistribution load_measured_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || (lineno == 1 && !line.empty() &&
                         line.find_first_not_of("0123456789+-.eE, \t\r") != std::string::npos)) {
      continue;  // header or blank
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(ss, cell, ',')) {
      ++col;
      try {
        std::size_t used = 0;
        const double value = std::stod(cell, &used);
        while (used < cell.size() &&
               (cell[used] == ' ' || cell[used] == '\t' || cell[used] == '\r')) {
          ++used;
        }
        if (used != cell.size()) {
          throw std::invalid_argument("trailing characters");
        }
        row.push_back(value);
      } catch (const std::exception&) {
        throw std::invalid_argument("measured csv: cannot parse row " +
                                    std::to_string(lineno) + ", column " +
                                    std::to_string(col));
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::invalid_argument("measured csv: row " + std::to_string(lineno) +
                                  " has " + std::to_string(row.size()) +
                                  " columns, expected " +
                                  std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw std::invalid_argument("measured csv: no data rows");
  }
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return MeasuredDistribution(std::move(m));
}

inline MeasuredDistribution load_measured_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("measured csv: cannot open '" + path + "'");
  }
  return load_measured_csv(in);
}

}  // namespace polsim
