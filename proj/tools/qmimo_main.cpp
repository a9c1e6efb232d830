// Copyright 2026 The qmimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "qmimo/analysis.hpp"
#include "qmimo/channel.hpp"
#include "qmimo/design.hpp"
#include "qmimo/harness.hpp"
#include "qmimo/quantizer.hpp"

namespace {

std::vector<double> parse_snr_list(const std::string& csv) {
  std::vector<double> out;
  std::istringstream s(csv);
  std::string item;
  while (std::getline(s, item, ',')) out.push_back(std::stod(item));
  return out;
}

int cmd_simulate(const std::string& config_path, const std::string& snr_csv,
                 const std::string& detector, long trials, long long seed,
                 int workers, const std::string& out_path,
                 const std::string& gnuplot_path) {
  qmimo::ParsedConfig parsed = qmimo::parse_config_file(config_path);
  if (!snr_csv.empty()) parsed.base.snr_db = parse_snr_list(snr_csv);
  if (!detector.empty()) parsed.base.detector = detector;
  if (trials > 0) parsed.base.trials = trials;
  if (seed >= 0) parsed.base.seed = static_cast<std::uint64_t>(seed);
  if (workers > 0) parsed.base.workers = workers;

  std::vector<qmimo::ScenarioResult> results;
  for (const qmimo::ScenarioConfig& cfg :
       qmimo::expand_sweep(parsed.base, parsed.sweep)) {
    std::cerr << "running " << cfg.name << " (" << cfg.detector << ", "
              << cfg.snr_db.size() << " SNR points, " << cfg.trials
              << " trials)\n";
    results.push_back(qmimo::run_scenario(cfg));
    for (const qmimo::SnrPoint& p : results.back().points) {
      std::cerr << "  " << p.snr_db << " dB: BER " << p.ber << " VER " << p.ver
                << " eta " << p.eta << " (" << p.elapsed_ms << " ms)";
      if (p.false_passes > 0) {
        std::cerr << " [" << p.false_passes << " false CRC passes]";
      }
      std::cerr << '\n';
    }
  }

  if (out_path.empty() || out_path == "-") {
    qmimo::write_csv(std::cout, results);
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    qmimo::write_csv(out, results);
    std::cerr << "wrote " << out_path << '\n';
  }
  if (!gnuplot_path.empty()) {
    std::ofstream gp(gnuplot_path);
    if (!gp) throw std::runtime_error("cannot write " + gnuplot_path);
    qmimo::write_gnuplot(gp, out_path.empty() ? "results.csv" : out_path,
                         results);
    std::cerr << "wrote " << gnuplot_path << '\n';
  }
  return 0;
}

int cmd_bound(const std::string& type, const std::string& mod_name, int nt,
              int nr, const std::string& snr_csv, const std::string& out_path) {
  const qmimo::Modulation mod = qmimo::modulation_from_string(mod_name);
  std::ostringstream csv;
  csv << "type,modulation,Nt,Nr,snr_db,value\n";
  if (type == "low-snr") {
    const qmimo::LabelSet ls =
        qmimo::enumerate_labels(qmimo::build_constellation(mod), nt);
    for (double snr_db : parse_snr_list(snr_csv)) {
      const qmimo::NoiseSpec noise = qmimo::NoiseSpec::from_snr_db(snr_db, nt);
      csv << "low-snr," << mod_name << ',' << nt << ',' << nr << ',' << snr_db
          << ',' << qmimo::ver_upper_low_snr(ls, noise.n0, nr) << '\n';
    }
  } else if (type == "asymptotic") {
    csv << "asymptotic," << mod_name << ',' << nt << ',' << nr << ",inf,"
        << qmimo::asymptotic_ver_bound(mod, nt, nr) << '\n';
  } else {
    throw std::invalid_argument("bound type must be low-snr or asymptotic");
  }
  if (out_path.empty() || out_path == "-") {
    std::cout << csv.str();
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << csv.str();
    std::cerr << "wrote " << out_path << '\n';
  }
  return 0;
}

int cmd_design(const std::string& mod_name, int nt, int k_tilde,
               const std::string& method, int restarts, long long seed) {
  const qmimo::LabelSet ls = qmimo::enumerate_labels(
      qmimo::build_constellation(qmimo::modulation_from_string(mod_name)), nt);
  const qmimo::DesignResult res =
      method == "exhaustive"
          ? qmimo::exhaustive_design(ls, k_tilde)
          : qmimo::greedy_design(ls, k_tilde, restarts,
                                 static_cast<std::uint64_t>(seed));
  std::cout << "d_min " << res.d_min << "\nnegation_closed "
            << (res.negation_closed ? "yes" : "no") << '\n';
  for (int idx : res.subset) {
    std::cout << idx << ":";
    for (int a = 0; a < ls.nt; ++a) {
      const auto v = ls.labels(a, idx);
      std::cout << ' ' << v.real() << (v.imag() < 0 ? "-" : "+")
                << std::abs(v.imag()) << 'j';
    }
    std::cout << '\n';
  }
  return 0;
}

int cmd_quantizer(int bits) {
  const double step = qmimo::optimal_standard_step(bits);
  std::cout << "bits " << bits << "\nstep " << step << "\ndistortion "
            << qmimo::gaussian_distortion(bits, step) << '\n';
  for (int l = 1; l < (1 << bits); ++l) {
    std::cout << "threshold[" << l << "] "
              << qmimo::QuantizerSpec(bits, step).threshold(l) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"blind MIMO detection with coarse ADCs: simulation toolkit"};
  app.require_subcommand(1);

  std::string config_path, snr_csv, detector, out_path, gnuplot_path;
  long trials = 0;
  long long seed = -1;
  int workers = 0;
  auto* sim = app.add_subcommand("simulate", "run scenarios from a config");
  sim->add_option("--config", config_path, "key=value config file")
      ->required();
  sim->add_option("--snr-db", snr_csv, "override SNR list, comma separated");
  sim->add_option("--detector", detector, "override detector");
  sim->add_option("--trials", trials, "override trial count");
  sim->add_option("--seed", seed, "override seed");
  sim->add_option("--workers", workers, "override worker count");
  sim->add_option("--out", out_path, "CSV output path (default stdout)");
  sim->add_option("--gnuplot", gnuplot_path, "also write a gnuplot script");

  std::string bound_type = "low-snr", bound_mod = "bpsk",
              bound_snr = "-10,-5,0";
  int bound_nt = 2, bound_nr = 16;
  std::string bound_out;
  auto* bound = app.add_subcommand("bound", "vector-error-rate bounds");
  bound->add_option("--type", bound_type, "low-snr | asymptotic");
  bound->add_option("--mod", bound_mod, "modulation");
  bound->add_option("--nt", bound_nt, "transmit antennas");
  bound->add_option("--nr", bound_nr, "receive antennas");
  bound->add_option("--snr-db", bound_snr, "SNR list for low-snr");
  bound->add_option("--out", bound_out, "CSV output path (default stdout)");

  std::string design_mod = "bpsk", design_method = "greedy";
  int design_nt = 6, design_kt = 4, design_restarts = 50;
  long long design_seed = 1;
  auto* design = app.add_subcommand("design", "max-min distance subsets");
  design->add_option("--mod", design_mod, "modulation");
  design->add_option("--nt", design_nt, "transmit antennas");
  design->add_option("--ktilde", design_kt, "subset size")->required();
  design->add_option("--method", design_method, "greedy | exhaustive");
  design->add_option("--restarts", design_restarts, "greedy restarts");
  design->add_option("--seed", design_seed, "greedy seed");

  int q_bits = 1;
  auto* quant = app.add_subcommand("quantizer", "optimal uniform step");
  quant->add_option("--bits", q_bits, "ADC resolution")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      return cmd_simulate(config_path, snr_csv, detector, trials, seed,
                          workers, out_path, gnuplot_path);
    }
    if (bound->parsed()) {
      return cmd_bound(bound_type, bound_mod, bound_nt, bound_nr, bound_snr,
                       bound_out);
    }
    if (design->parsed()) {
      return cmd_design(design_mod, design_nt, design_kt, design_method,
                        design_restarts, design_seed);
    }
    if (quant->parsed()) return cmd_quantizer(q_bits);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
