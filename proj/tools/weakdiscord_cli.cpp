// Command-line front end: Monte-Carlo histograms and alpha sweeps of
// weak-discord error, single-state analysis reports, and state-file
// generation for every supported family.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "weakdiscord/weakdiscord.hpp"

namespace wd = weakdiscord;

namespace {

std::vector<double> parse_alphas(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    // start:stop:step, endpoints inclusive up to rounding of the count.
    double start, stop, step;
    char c1, c2;
    std::istringstream in(text);
    if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':') {
      throw CLI::ValidationError("--alphas", "range must be start:stop:step");
    }
    if (step <= 0.0 || stop < start) {
      throw CLI::ValidationError("--alphas", "range needs step > 0 and stop >= start");
    }
    auto n = static_cast<long>(std::llround((stop - start) / step));
    for (long k = 0; k <= n; ++k) out.push_back(start + step * k);
    return out;
  }
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  if (out.empty()) {
    throw CLI::ValidationError("--alphas", "expected a comma list or start:stop:step");
  }
  return out;
}

std::vector<int> parse_ranks(const std::string& text) {
  std::vector<int> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

wd::StateFamily parse_family(const std::string& name) {
  if (name == "random-mixed") return wd::StateFamily::random_mixed;
  if (name == "bell-diagonal") return wd::StateFamily::bell_diagonal;
  throw CLI::ValidationError(
      "--family", "must be random-mixed or bell-diagonal, got " + name);
}

/// hist.csv -> hist.hist.json; paths without a .csv suffix just gain one.
std::string sidecar_path(const std::string& out, const std::string& suffix) {
  std::string base = out;
  if (base.size() > 4 && base.substr(base.size() - 4) == ".csv") {
    base.resize(base.size() - 4);
  }
  return base + suffix;
}

int default_workers() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weak quantum discord of bipartite states"};
  app.require_subcommand(1);

  // histogram
  auto* hist = app.add_subcommand(
      "histogram", "sample random states and bin weak_discord - discord");
  long hist_n = 20000;
  std::string hist_ranks = "2,3,4";
  std::string hist_alphas = "0.25,0.75";
  std::uint64_t hist_seed = 42;
  int hist_bins = 100;
  std::string hist_out;
  int hist_workers = default_workers();
  std::string hist_family = "random-mixed";
  hist->add_option("--n", hist_n, "number of states");
  hist->add_option("--ranks", hist_ranks, "comma list drawn from {2,3,4}");
  hist->add_option("--alphas", hist_alphas,
                   "comma list or start:stop:step, each in (0,1]");
  hist->add_option("--seed", hist_seed, "master seed");
  hist->add_option("--bins", hist_bins, "histogram bin count");
  hist->add_option("--out", hist_out, "records CSV path")->required();
  hist->add_option("--workers", hist_workers, "worker threads");
  hist->add_option("--family", hist_family,
                   "state family: random-mixed or bell-diagonal");

  // sweep
  auto* sweep = app.add_subcommand(
      "sweep", "mean and std of weak_discord - discord per alpha");
  long sweep_n = 10000;
  std::string sweep_ranks = "2,3,4";
  std::string sweep_alphas = "0.1:0.9:0.1";
  std::uint64_t sweep_seed = 42;
  std::string sweep_out;
  int sweep_workers = default_workers();
  std::string sweep_family = "random-mixed";
  sweep->add_option("--n", sweep_n, "number of states");
  sweep->add_option("--ranks", sweep_ranks, "comma list drawn from {2,3,4}");
  sweep->add_option("--alphas", sweep_alphas,
                    "comma list or start:stop:step, each in (0,1]");
  sweep->add_option("--seed", sweep_seed, "master seed");
  sweep->add_option("--out", sweep_out, "sweep CSV path")->required();
  sweep->add_option("--workers", sweep_workers, "worker threads");
  sweep->add_option("--family", sweep_family,
                    "state family: random-mixed or bell-diagonal");

  // analyze
  auto* analyze = app.add_subcommand(
      "analyze", "discord and weak-discord report for one state file");
  std::string analyze_path;
  std::string analyze_alphas = "0.25,0.5,0.75";
  std::string analyze_out;
  analyze->add_option("file", analyze_path, "density-matrix JSON file")
      ->required();
  analyze->add_option("--alphas", analyze_alphas, "comma list, each in [0,1]");
  analyze->add_option("--out", analyze_out, "write the report here instead of stdout");

  // make-state
  auto* make = app.add_subcommand("make-state", "write a state file");
  std::string make_family;
  std::string make_c;
  int make_rank = 4;
  int make_n = 2;
  Eigen::Index make_dima = 2, make_dimb = 2;
  std::uint64_t make_seed = 0;
  std::string make_out;
  make->add_option("family", make_family,
                   "bell-diagonal | werner | random-mixed | random-pure | dqc1")
      ->required();
  make->add_option("--c", make_c,
                   "correlation coefficients (three for bell-diagonal, one for werner)");
  make->add_option("--rank", make_rank, "rank for random-mixed (1..4)");
  make->add_option("--n", make_n, "register qubits for dqc1 (1..6)");
  make->add_option("--dima", make_dima, "subsystem A dimension for random-pure");
  make->add_option("--dimb", make_dimb, "subsystem B dimension for random-pure");
  make->add_option("--seed", make_seed, "state seed");
  make->add_option("--out", make_out, "output JSON path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (hist->parsed()) {
      wd::ExperimentConfig cfg;
      cfg.n_states = hist_n;
      cfg.ranks = parse_ranks(hist_ranks);
      cfg.alphas = parse_alphas(hist_alphas);
      cfg.master_seed = hist_seed;
      cfg.bins = hist_bins;
      cfg.out_path = hist_out;
      cfg.workers = hist_workers;
      cfg.family = parse_family(hist_family);
      wd::HistogramResult res = wd::run_histogram(cfg);
      wd::write_text_file(cfg.out_path, wd::records_to_csv(res.records));
      std::string hist_json = sidecar_path(cfg.out_path, ".hist.json");
      wd::write_text_file(hist_json, wd::histogram_to_json(cfg, res));
      std::cout << "master seed " << cfg.master_seed << ", " << cfg.n_states
                << " states, excluded " << res.excluded << "\n"
                << "records: " << cfg.out_path << "\nhistogram: " << hist_json
                << "\n";
    } else if (sweep->parsed()) {
      wd::ExperimentConfig cfg;
      cfg.n_states = sweep_n;
      cfg.ranks = parse_ranks(sweep_ranks);
      cfg.alphas = parse_alphas(sweep_alphas);
      cfg.master_seed = sweep_seed;
      cfg.out_path = sweep_out;
      cfg.workers = sweep_workers;
      cfg.family = parse_family(sweep_family);
      wd::SweepResult res = wd::run_alpha_sweep(cfg);
      wd::write_text_file(cfg.out_path, wd::sweep_to_csv(res));
      std::string meta_json = sidecar_path(cfg.out_path, ".meta.json");
      wd::write_text_file(meta_json, wd::sweep_meta_to_json(cfg, res));
      std::cout << "master seed " << cfg.master_seed << ", " << cfg.n_states
                << " states, excluded " << res.excluded << "\n"
                << "sweep: " << cfg.out_path << "\nmeta: " << meta_json << "\n";
    } else if (analyze->parsed()) {
      std::vector<double> alphas = parse_alphas(analyze_alphas);
      wd::AnalysisReport rep = wd::analyze_state(analyze_path, alphas);
      std::string json = wd::report_to_json(rep);
      if (analyze_out.empty()) {
        std::cout << json;
      } else {
        wd::write_text_file(analyze_out, json);
        std::cout << "report: " << analyze_out << "\n";
      }
    } else if (make->parsed()) {
      auto build = [&]() -> wd::DensityMatrix {
        if (make_family == "bell-diagonal") {
          std::vector<double> c = parse_doubles(make_c);
          if (c.size() != 3) {
            throw std::invalid_argument("make-state bell-diagonal: --c needs three values");
          }
          return wd::bell_diagonal({c[0], c[1], c[2]});
        }
        if (make_family == "werner") {
          std::vector<double> c = parse_doubles(make_c);
          if (c.size() != 1) {
            throw std::invalid_argument("make-state werner: --c needs one value");
          }
          return wd::werner(c[0]);
        }
        if (make_family == "random-mixed") {
          return wd::random_mixed({make_rank, make_seed});
        }
        if (make_family == "random-pure") {
          return wd::random_pure(make_dima, make_dimb, make_seed);
        }
        if (make_family == "dqc1") {
          if (make_n < 1 || make_n > 6) {
            throw std::invalid_argument("make-state dqc1: --n must lie in 1..6");
          }
          return wd::dqc1(wd::haar_unitary(Eigen::Index(1) << make_n, make_seed));
        }
        throw std::invalid_argument("make-state: unknown family " + make_family);
      };
      wd::save_density_matrix(build(), make_out);
      std::cout << "state: " << make_out << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
