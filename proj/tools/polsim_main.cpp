// polsim command-line front end.
//
// Subcommands: ratios, mi-table, sweep, montecarlo, validate, prepare.
// Output goes to --out (default stdout) as CSV (6 significant digits) or
// JSON (full precision, stable key order). Every command is deterministic
// given its configuration, including the seed.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polsim/polsim.hpp"

namespace {

using polsim::Json;

struct OutputTarget {
  std::string path = "-";
  std::string format = "csv";

  void write(const std::string& text) const {
    if (path == "-") {
      std::cout << text;
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      throw std::invalid_argument("cannot open output file '" + path + "'");
    }
    out << text;
  }
};

void add_output_flags(CLI::App* cmd, OutputTarget* target, const std::string& default_format) {
  target->format = default_format;
  cmd->add_option("--out", target->path, "Output path, '-' for stdout");
  cmd->add_option("--format", target->format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
}

std::string table_to_text(const std::vector<std::string>& header,
                          const std::vector<std::vector<double>>& rows,
                          const std::vector<std::string>& row_labels,
                          const OutputTarget& target) {
  std::ostringstream out;
  if (target.format == "csv") {
    std::vector<std::string> cells;
    if (!row_labels.empty()) {
      cells.push_back("state");
    }
    cells.insert(cells.end(), header.begin(), header.end());
    polsim::write_csv_row(out, cells);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      cells.clear();
      if (!row_labels.empty()) {
        cells.push_back(row_labels[r]);
      }
      for (double v : rows[r]) {
        cells.push_back(polsim::format_sig6(v));
      }
      polsim::write_csv_row(out, cells);
    }
  } else {
    Json jrows = Json::array();
    for (std::size_t r = 0; r < rows.size(); ++r) {
      Json jrow;
      if (!row_labels.empty()) {
        jrow["state"] = row_labels[r];
      }
      for (std::size_t c = 0; c < header.size(); ++c) {
        jrow[header[c]] = rows[r][c];
      }
      jrows.push_back(jrow);
    }
    out << jrows.dump(2) << '\n';
  }
  return out.str();
}

void require_normalized_rows(const std::vector<std::vector<double>>& rows) {
  for (const auto& row : rows) {
    double sum = 0.0;
    for (double v : row) {
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw std::runtime_error("internal: probability row does not sum to 1");
    }
  }
}

int run_ratios(const std::string& network_name, const std::string& ensemble_name,
               const OutputTarget& target) {
  const polsim::OpticalNetwork net = polsim::load_network(network_name);
  const std::string ens_name = ensemble_name.empty() ? network_name : ensemble_name;
  const polsim::Ensemble ens = polsim::load_ensemble(ens_name);
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < ens.size(); ++k) {
    rows.push_back(polsim::detection_distribution(net, ens.polarization_state(k)));
    labels.push_back(ens.label() + "_" + std::to_string(k + 1));
  }
  require_normalized_rows(rows);
  target.write(table_to_text(net.detectors, rows, labels, target));
  return 0;
}

int run_mi_table(double gamma_override, int resolution, const OutputTarget& target) {
  struct Row {
    std::string states;
    polsim::Ensemble input;
    polsim::Ensemble pom_source;
    double default_gamma;
  };
  const std::vector<Row> spec_rows = {
      {"trine", polsim::trine(), polsim::trine(), 0.952},
      {"antitrine", polsim::antitrine(), polsim::trine(), 0.952},
      {"tetrad", polsim::tetrad(), polsim::tetrad(), 0.964},
      {"antitetrad", polsim::antitetrad(), polsim::tetrad(), 0.964},
  };
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  for (const Row& r : spec_rows) {
    const polsim::Pom pom = polsim::min_error_pom(r.pom_source, 2);
    const double gamma = gamma_override >= 0.0 ? gamma_override : r.default_gamma;
    const int n = static_cast<int>(pom.size());
    const polsim::Pom noisy =
        polsim::noisy_pom(pom, polsim::NoiseModel(gamma, n));
    const double ideal = polsim::mutual_information(r.input, pom).mutual_info_bits;
    const double noisy_mi =
        polsim::mutual_information(r.input, noisy).mutual_info_bits;
    const double von_neumann =
        polsim::best_von_neumann_mi(r.input, resolution).bits;
    rows.push_back({ideal, noisy_mi, gamma, von_neumann});
    labels.push_back(r.states);
  }
  target.write(table_to_text({"ideal_bits", "noisy_bits", "gamma", "von_neumann_bits"},
                             rows, labels, target));
  return 0;
}

struct SweepRange {
  double lo = 0.0, hi = 0.0, step = 0.0;
  bool set = false;
};

SweepRange parse_range(const std::string& text) {
  SweepRange r;
  if (text.empty()) {
    return r;
  }
  std::stringstream ss(text);
  std::string part;
  std::vector<double> parts;
  while (std::getline(ss, part, ':')) {
    parts.push_back(std::stod(part));
  }
  if (parts.size() != 3 || parts[2] <= 0.0 || parts[1] < parts[0]) {
    throw std::invalid_argument("--range must be lo:hi:step with step > 0 and hi >= lo");
  }
  r.lo = parts[0];
  r.hi = parts[1];
  r.step = parts[2];
  r.set = true;
  return r;
}

int run_sweep(const std::string& kind, const std::string& range_text,
              const OutputTarget& target) {
  std::ostringstream out;
  if (kind == "wp5") {
    // Range is in degrees, relative to the optimum mount angle alpha/2.
    SweepRange r = parse_range(range_text);
    if (!r.set) {
      r = {-10.0, 10.0, 0.5, true};
    }
    std::vector<double> angles;
    const double center = polsim::kAlpha / 2.0;
    for (double d = r.lo; d <= r.hi + 1e-9; d += r.step) {
      angles.push_back(center + d * std::numbers::pi / 180.0);
    }
    const auto curve = polsim::wp5_sweep(polsim::NetworkKind::Trine, angles);
    if (target.format == "csv") {
      polsim::write_csv_row(out, {"wp5_half_angle_deg", "rms_deviation"});
      for (const auto& [angle, rms] : curve) {
        polsim::write_csv_row(
            out, {polsim::format_sig6(angle * 180.0 / std::numbers::pi),
                  polsim::format_sig6(rms)});
      }
    } else {
      Json jc = Json::array();
      for (const auto& [angle, rms] : curve) {
        jc.push_back({{"wp5_half_angle_deg", angle * 180.0 / std::numbers::pi},
                      {"rms_deviation", rms}});
      }
      out << jc.dump(2) << '\n';
    }
  } else if (kind == "gamma") {
    SweepRange r = parse_range(range_text);
    int samples = 501;
    if (r.set) {
      if (r.lo != 0.0 || r.hi != 1.0) {
        throw std::invalid_argument("gamma sweep range must span 0:1");
      }
      samples = static_cast<int>(std::lround((r.hi - r.lo) / r.step)) + 1;
    }
    const auto c3 = polsim::gamma_sweep(3, samples);
    const auto c4 = polsim::gamma_sweep(4, samples);
    if (target.format == "csv") {
      polsim::write_csv_row(out, {"gamma", "trine", "antitrine", "tetrad", "antitetrad"});
      for (int s = 0; s < samples; ++s) {
        polsim::write_csv_row(out, {polsim::format_sig6(c3[s].gamma),
                                    polsim::format_sig6(c3[s].states_bits),
                                    polsim::format_sig6(c3[s].antistates_bits),
                                    polsim::format_sig6(c4[s].states_bits),
                                    polsim::format_sig6(c4[s].antistates_bits)});
      }
    } else {
      Json jc = Json::array();
      for (int s = 0; s < samples; ++s) {
        jc.push_back({{"gamma", c3[s].gamma},
                      {"trine", c3[s].states_bits},
                      {"antitrine", c3[s].antistates_bits},
                      {"tetrad", c4[s].states_bits},
                      {"antitetrad", c4[s].antistates_bits}});
      }
      out << jc.dump(2) << '\n';
    }
  } else {
    throw std::invalid_argument("unknown sweep kind '" + kind + "'");
  }
  target.write(out.str());
  return 0;
}

int run_montecarlo(const std::string& measured_path, double half_width, int trials,
                   std::uint64_t seed, double lower_q, double upper_q,
                   const OutputTarget& target) {
  const polsim::MeasuredDistribution measured =
      polsim::load_measured_csv_file(measured_path);
  const std::size_t n = static_cast<std::size_t>(measured.probs.rows());
  const std::vector<double> priors(n, 1.0 / static_cast<double>(n));
  polsim::MonteCarloOptions opt;
  opt.half_width = half_width;
  opt.trials = trials;
  opt.seed = seed;
  opt.lower_percentile = lower_q;
  opt.upper_percentile = upper_q;
  const polsim::MonteCarloReport report = polsim::monte_carlo_mi(measured, priors, opt);
  std::ostringstream out;
  if (target.format == "csv") {
    polsim::write_csv_row(out, {"point", "lower", "upper", "trials", "seed"});
    polsim::write_csv_row(out, {polsim::format_sig6(report.point),
                                polsim::format_sig6(report.lower),
                                polsim::format_sig6(report.upper),
                                std::to_string(report.trials),
                                std::to_string(report.seed)});
  } else {
    out << polsim::monte_carlo_report_to_json(report).dump(2) << '\n';
  }
  target.write(out.str());
  return 0;
}

int run_validate(const std::string& ensemble_name, const std::string& pom_path,
                 int dim, double tol, const OutputTarget& target) {
  Json report;
  int failures = 0;
  const polsim::Ensemble ens = polsim::load_ensemble(ensemble_name);
  report["ensemble"] = ens.label();
  report["ensemble_ok"] = true;  // construction already validated invariants
  const bool overcomplete = polsim::verify_overcomplete(ens, dim);
  report["overcomplete"] = overcomplete;
  if (!overcomplete) {
    ++failures;
  }
  if (!pom_path.empty()) {
    const polsim::Pom pom = polsim::load_pom(pom_path);  // validates invariants
    report["pom_ok"] = true;
    const bool optimal = polsim::check_optimality(pom, ens, tol);
    report["optimal"] = optimal;
    if (!optimal) {
      ++failures;
    }
  }
  std::ostringstream out;
  out << report.dump(2) << '\n';
  target.write(out.str());
  return failures == 0 ? 0 : 1;
}

int run_prepare(double beta, double phase, const OutputTarget& target) {
  const polsim::PlateSettings s = polsim::prepare_state(beta, phase);
  const double deg = 180.0 / std::numbers::pi;
  std::ostringstream out;
  if (target.format == "csv") {
    polsim::write_csv_row(out, {"wp2_rad", "wp3_rad", "wp4_rad", "wp2_deg", "wp3_deg", "wp4_deg"});
    polsim::write_csv_row(out, {polsim::format_sig6(s.wp2), polsim::format_sig6(s.wp3),
                                polsim::format_sig6(s.wp4), polsim::format_sig6(s.wp2 * deg),
                                polsim::format_sig6(s.wp3 * deg), polsim::format_sig6(s.wp4 * deg)});
  } else {
    Json j{{"wp2_rad", s.wp2},      {"wp3_rad", s.wp3},      {"wp4_rad", s.wp4},
           {"wp2_deg", s.wp2 * deg}, {"wp3_deg", s.wp3 * deg}, {"wp4_deg", s.wp4 * deg},
           {"theta_rad", s.theta},   {"phi_rad", s.phi}};
    out << j.dump(2) << '\n';
  }
  target.write(out.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for optimal polarization-qubit measurements"};
  app.set_config("--config");
  app.require_subcommand(1);
  app.failure_message([](const CLI::App*, const CLI::Error& e) {
    return std::string("error: ") + e.what() + "\n";
  });

  // ratios
  std::string ratios_network = "trine";
  std::string ratios_ensemble;
  OutputTarget ratios_out;
  CLI::App* ratios = app.add_subcommand("ratios", "Per-state detector probabilities");
  ratios->add_option("--network", ratios_network, "trine|tetrad|PATH");
  ratios->add_option("--ensemble", ratios_ensemble,
                     "trine|tetrad|antitrine|antitetrad|PATH (default: network ensemble)");
  add_output_flags(ratios, &ratios_out, "csv");

  // mi-table
  double mi_gamma = -1.0;
  int mi_resolution = 721;
  OutputTarget mi_out;
  CLI::App* mi_table = app.add_subcommand(
      "mi-table", "Ideal, noisy and best von Neumann mutual information");
  mi_table->add_option("--gamma", mi_gamma,
                       "Noise parameter for every row (default 0.952 / 0.964)")
      ->check(CLI::Range(0.0, 1.0));
  mi_table->add_option("--resolution", mi_resolution,
                       "von Neumann search grid resolution");
  add_output_flags(mi_table, &mi_out, "csv");

  // sweep
  std::string sweep_kind;
  std::string sweep_range;
  OutputTarget sweep_out;
  CLI::App* sweep = app.add_subcommand("sweep", "WP5-angle or noise-parameter curves");
  sweep->add_option("--sweep", sweep_kind, "wp5|gamma")->required();
  sweep->add_option("--range", sweep_range,
                    "lo:hi:step (wp5: degrees around the optimum; gamma: 0:1:step)");
  add_output_flags(sweep, &sweep_out, "csv");

  // montecarlo
  std::string mc_measured;
  double mc_half_width = 0.025;
  int mc_trials = 100000;
  std::uint64_t mc_seed = 1;
  double mc_lower_q = 0.16, mc_upper_q = 0.84;
  OutputTarget mc_out;
  CLI::App* mc = app.add_subcommand(
      "montecarlo", "Mutual-information error bounds for a measured distribution");
  mc->add_option("--measured", mc_measured, "CSV: rows = input states, columns = detectors")
      ->required();
  mc->add_option("--half-width", mc_half_width, "Flat perturbation half width");
  mc->add_option("--trials", mc_trials, "Number of trials")->check(CLI::PositiveNumber);
  mc->add_option("--seed", mc_seed, "RNG seed");
  mc->add_option("--lower-q", mc_lower_q, "Lower percentile (default 0.16)");
  mc->add_option("--upper-q", mc_upper_q, "Upper percentile (default 0.84)");
  add_output_flags(mc, &mc_out, "json");

  // validate
  std::string val_ensemble;
  std::string val_pom;
  int val_dim = 2;
  double val_tol = 1e-9;
  OutputTarget val_out;
  CLI::App* validate = app.add_subcommand(
      "validate", "Check ensemble/POM files: invariants, overcompleteness, optimality");
  validate->add_option("--ensemble", val_ensemble, "Ensemble name or JSON path")->required();
  validate->add_option("--pom", val_pom, "POM JSON path (optional)");
  validate->add_option("--dim", val_dim, "State-space dimension");
  validate->add_option("--tol", val_tol, "Optimality tolerance");
  add_output_flags(validate, &val_out, "json");

  // prepare
  double prep_beta = 0.0, prep_phase = 0.0;
  OutputTarget prep_out;
  CLI::App* prepare = app.add_subcommand(
      "prepare", "Quarter-half-quarter plate angles for cos(b)|h> + e^{ig} sin(b)|v>");
  prepare->add_option("--beta", prep_beta, "Polar amplitude angle (radians)")->required();
  prepare->add_option("--phase", prep_phase, "Relative phase gamma (radians)");
  add_output_flags(prepare, &prep_out, "json");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ratios) {
      return run_ratios(ratios_network, ratios_ensemble, ratios_out);
    }
    if (*mi_table) {
      return run_mi_table(mi_gamma, mi_resolution, mi_out);
    }
    if (*sweep) {
      return run_sweep(sweep_kind, sweep_range, sweep_out);
    }
    if (*mc) {
      return run_montecarlo(mc_measured, mc_half_width, mc_trials, mc_seed, mc_lower_q,
                            mc_upper_q, mc_out);
    }
    if (*validate) {
      return run_validate(val_ensemble, val_pom, val_dim, val_tol, val_out);
    }
    if (*prepare) {
      return run_prepare(prep_beta, prep_phase, prep_out);
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
