#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "weakdiscord/core.hpp"
#include "weakdiscord/correlations.hpp"
#include "weakdiscord/io.hpp"
#include "weakdiscord/rng.hpp"
#include "weakdiscord/states.hpp"
#include "weakdiscord/weak.hpp"

namespace weakdiscord {

enum class StateFamily { random_mixed, bell_diagonal };

inline const char* family_name(StateFamily f) {
  return f == StateFamily::random_mixed ? "random-mixed" : "bell-diagonal";
}

/// Monte-Carlo run description. The same ensemble of states is reused for
/// every alpha, and each sample's randomness derives only from
/// (master_seed, index), so results do not depend on the worker count.
struct ExperimentConfig {
  long n_states = 20000;
  std::vector<int> ranks = {2, 3, 4};
  std::vector<double> alphas = {0.25, 0.75};
  std::uint64_t master_seed = 42;
  int bins = 100;
  std::string out_path;
  int workers = 1;
  StateFamily family = StateFamily::random_mixed;
};

inline void validate(const ExperimentConfig& cfg) {
  if (cfg.n_states < 1) {
    throw std::invalid_argument("ExperimentConfig: n_states must be at least 1");
  }
  if (cfg.bins < 2) {
    throw std::invalid_argument("ExperimentConfig: bins must be at least 2");
  }
  if (cfg.workers < 1) {
    throw std::invalid_argument("ExperimentConfig: workers must be at least 1");
  }
  if (cfg.ranks.empty()) {
    throw std::invalid_argument("ExperimentConfig: ranks must be nonempty");
  }
  for (int r : cfg.ranks) {
    if (r < 2 || r > 4) {
      throw std::invalid_argument("ExperimentConfig: ranks must lie in {2,3,4}");
    }
  }
  if (cfg.alphas.empty()) {
    throw std::invalid_argument("ExperimentConfig: alphas must be nonempty");
  }
  for (double a : cfg.alphas) {
    if (!(a > 0.0 && a <= 1.0)) {
      throw std::invalid_argument("ExperimentConfig: alphas must lie in (0, 1]");
    }
  }
}

/// One Monte-Carlo sample at one alpha.
struct ExperimentRecord {
  long index = 0;
  int rank = 0;
  double alpha = 0.0;
  double discord = 0.0;
  double weak_discord = 0.0;
  double diff = 0.0;
  std::uint64_t seed = 0;
  bool prob_valid = true;
};

namespace detail {

/// Runs fn(i) for i in [0, n) on `workers` threads. Work items are claimed
/// from an atomic counter; the first exception is captured and rethrown on
/// the calling thread after all workers drain.
template <typename F>
void parallel_for(long n, int workers, F&& fn) {
  if (workers <= 1 || n <= 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      long i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

/// Uniform Bell-diagonal parameters by rejection from the cube [-1,1]^3.
inline BellDiagonalParams sample_bell_params(Rng& rng) {
  for (;;) {
    double c1 = 2.0 * rng.uniform01() - 1.0;
    double c2 = 2.0 * rng.uniform01() - 1.0;
    double c3 = 2.0 * rng.uniform01() - 1.0;
    BellDiagonalParams p{c1, c2, c3};
    if (min_bell_eigenvalue(p) >= 0.0) return p;
  }
}

}  // namespace detail

/// Evaluates the configured ensemble: one state per index, discord optimized
/// once, weak discord per alpha reusing the optimal basis. Records are laid
/// out index-major, alpha-minor.
inline std::vector<ExperimentRecord> evaluate_ensemble(
    const ExperimentConfig& cfg) {
  validate(cfg);
  const auto n_alphas = static_cast<long>(cfg.alphas.size());
  std::vector<ExperimentRecord> records(cfg.n_states * n_alphas);
  detail::parallel_for(cfg.n_states, cfg.workers, [&](long i) {
    Rng rng = stream_rng(cfg.master_seed, static_cast<std::uint64_t>(i));
    int rank;
    std::uint64_t state_seed;
    DensityMatrix rho = [&] {
      if (cfg.family == StateFamily::bell_diagonal) {
        state_seed = mix64(cfg.master_seed ^ mix64(static_cast<std::uint64_t>(i)));
        BellDiagonalParams p = detail::sample_bell_params(rng);
        auto lam = bell_spectrum(p);
        rank = 0;
        for (double l : lam) {
          if (l > 1e-10) ++rank;
        }
        return bell_diagonal(p);
      }
      rank = cfg.ranks[rng.next_u64() % cfg.ranks.size()];
      state_seed = rng.next_u64();
      return random_mixed({rank, state_seed});
    }();
    DiscordResult disc = discord(rho);
    for (long j = 0; j < n_alphas; ++j) {
      WeakDiscordResult wd = weak_discord_with(rho, disc, cfg.alphas[j]);
      ExperimentRecord& rec = records[i * n_alphas + j];
      rec.index = i;
      rec.rank = rank;
      rec.alpha = cfg.alphas[j];
      rec.discord = disc.discord;
      rec.weak_discord = wd.weak_discord;
      rec.diff = wd.weak_discord - disc.discord;
      rec.seed = state_seed;
      rec.prob_valid = wd.prob_valid;
    }
  });
  return records;
}

struct Histogram {
  double alpha = 0.0;
  std::vector<double> edges;
  std::vector<long> counts;
};

struct HistogramResult {
  std::vector<ExperimentRecord> records;
  std::vector<Histogram> histograms;
  long excluded = 0;
};

/// Bins weak_discord - discord per alpha with equal-width bins spanning the
/// observed range. Records with prob_valid = false are excluded from the
/// bins and tallied.
inline HistogramResult run_histogram(const ExperimentConfig& cfg) {
  HistogramResult res;
  res.records = evaluate_ensemble(cfg);
  const auto n_alphas = static_cast<long>(cfg.alphas.size());
  for (long j = 0; j < n_alphas; ++j) {
    std::vector<double> diffs;
    diffs.reserve(cfg.n_states);
    for (long i = 0; i < cfg.n_states; ++i) {
      const ExperimentRecord& rec = res.records[i * n_alphas + j];
      if (!rec.prob_valid) {
        ++res.excluded;
        continue;
      }
      diffs.push_back(rec.diff);
    }
    Histogram h;
    h.alpha = cfg.alphas[j];
    double lo = 0.0, hi = 0.0;
    if (!diffs.empty()) {
      lo = *std::min_element(diffs.begin(), diffs.end());
      hi = *std::max_element(diffs.begin(), diffs.end());
    }
    // A degenerate range (all diffs equal) keeps unit-width edges so the
    // JSON stays well-formed; everything lands in the first bin.
    double width = hi > lo ? (hi - lo) / cfg.bins : 1.0;
    h.edges.resize(cfg.bins + 1);
    for (int k = 0; k <= cfg.bins; ++k) h.edges[k] = lo + width * k;
    h.counts.assign(cfg.bins, 0);
    for (double d : diffs) {
      auto idx = static_cast<long>((d - lo) / width);
      if (idx < 0) idx = 0;
      if (idx >= cfg.bins) idx = cfg.bins - 1;
      ++h.counts[idx];
    }
    res.histograms.push_back(std::move(h));
  }
  return res;
}

struct SweepRow {
  double alpha = 0.0;
  double mean_diff = 0.0;
  double std_diff = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  long excluded = 0;
};

/// Mean and sample standard deviation of weak_discord - discord per alpha,
/// over one shared ensemble of states.
inline SweepResult run_alpha_sweep(const ExperimentConfig& cfg) {
  if (cfg.alphas.size() < 2) {
    throw std::invalid_argument("run_alpha_sweep: need at least two alphas");
  }
  std::vector<ExperimentRecord> records = evaluate_ensemble(cfg);
  SweepResult res;
  const auto n_alphas = static_cast<long>(cfg.alphas.size());
  for (long j = 0; j < n_alphas; ++j) {
    double sum = 0.0;
    long n = 0;
    for (long i = 0; i < cfg.n_states; ++i) {
      const ExperimentRecord& rec = records[i * n_alphas + j];
      if (!rec.prob_valid) {
        ++res.excluded;
        continue;
      }
      sum += rec.diff;
      ++n;
    }
    SweepRow row;
    row.alpha = cfg.alphas[j];
    row.mean_diff = n > 0 ? sum / n : 0.0;
    if (n > 1) {
      double sq = 0.0;
      for (long i = 0; i < cfg.n_states; ++i) {
        const ExperimentRecord& rec = records[i * n_alphas + j];
        if (!rec.prob_valid) continue;
        double d = rec.diff - row.mean_diff;
        sq += d * d;
      }
      row.std_diff = std::sqrt(sq / (n - 1));
    }
    res.rows.push_back(row);
  }
  return res;
}

/// Records CSV; the column order is fixed for golden-file comparison.
inline std::string records_to_csv(const std::vector<ExperimentRecord>& records) {
  std::string out = "index,rank,alpha,seed,discord,weak_discord,diff,prob_valid\n";
  for (const ExperimentRecord& r : records) {
    out += std::to_string(r.index);
    out += ',';
    out += std::to_string(r.rank);
    out += ',';
    out += fmt_g17(r.alpha);
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += fmt_g17(r.discord);
    out += ',';
    out += fmt_g17(r.weak_discord);
    out += ',';
    out += fmt_g17(r.diff);
    out += ',';
    out += r.prob_valid ? '1' : '0';
    out += '\n';
  }
  return out;
}

inline std::string sweep_to_csv(const SweepResult& sweep) {
  std::string out = "alpha,mean_diff,std_diff\n";
  for (const SweepRow& row : sweep.rows) {
    out += fmt_g17(row.alpha);
    out += ',';
    out += fmt_g17(row.mean_diff);
    out += ',';
    out += fmt_g17(row.std_diff);
    out += '\n';
  }
  return out;
}

namespace detail {

inline void append_config_json(const ExperimentConfig& cfg, long excluded,
                               std::string& out) {
  out += "  \"n_states\": " + std::to_string(cfg.n_states) + ",\n";
  out += "  \"ranks\": [";
  for (std::size_t k = 0; k < cfg.ranks.size(); ++k) {
    out += std::to_string(cfg.ranks[k]);
    if (k + 1 < cfg.ranks.size()) out += ", ";
  }
  out += "],\n  \"alphas\": [";
  for (std::size_t k = 0; k < cfg.alphas.size(); ++k) {
    out += fmt_g17(cfg.alphas[k]);
    if (k + 1 < cfg.alphas.size()) out += ", ";
  }
  out += "],\n";
  out += "  \"master_seed\": " + std::to_string(cfg.master_seed) + ",\n";
  out += "  \"workers\": " + std::to_string(cfg.workers) + ",\n";
  out += "  \"family\": \"" + std::string(family_name(cfg.family)) + "\",\n";
  out += "  \"diagonal_distribution\": \"uniform01-normalized\",\n";
  out += "  \"shared_ensemble\": true,\n";
  out += "  \"excluded\": " + std::to_string(excluded);
}

}  // namespace detail

inline std::string histogram_to_json(const ExperimentConfig& cfg,
                                     const HistogramResult& res) {
  std::string out = "{\n";
  detail::append_config_json(cfg, res.excluded, out);
  out += ",\n  \"bins\": " + std::to_string(cfg.bins) + ",\n";
  out += "  \"histograms\": [\n";
  for (std::size_t h = 0; h < res.histograms.size(); ++h) {
    const Histogram& hist = res.histograms[h];
    out += "    {\"alpha\": " + fmt_g17(hist.alpha) + ", \"edges\": [";
    for (std::size_t k = 0; k < hist.edges.size(); ++k) {
      out += fmt_g17(hist.edges[k]);
      if (k + 1 < hist.edges.size()) out += ", ";
    }
    out += "], \"counts\": [";
    for (std::size_t k = 0; k < hist.counts.size(); ++k) {
      out += std::to_string(hist.counts[k]);
      if (k + 1 < hist.counts.size()) out += ", ";
    }
    out += "]}";
    if (h + 1 < res.histograms.size()) out += ",";
    out += "\n";
  }
  out += "  ]\n}\n";
  return out;
}

inline std::string sweep_meta_to_json(const ExperimentConfig& cfg,
                                      const SweepResult& res) {
  std::string out = "{\n";
  detail::append_config_json(cfg, res.excluded, out);
  out += "\n}\n";
  return out;
}

/// Weak-discord figures for one alpha in a state report.
struct AnalysisEntry {
  double alpha = 0.0;
  double weak_discord = 0.0;
  double p_plus_w = 0.0;
  double p_minus_w = 0.0;
  double p_f = 0.0;
  bool prob_valid = true;
};

struct AnalysisReport {
  Eigen::Index dim_a = 0;
  Eigen::Index dim_b = 0;
  double mutual_info = 0.0;
  double max_j = 0.0;
  double discord = 0.0;
  QubitMeasurement optimal;
  std::array<double, 2> probs{};
  std::array<double, 2> cond_entropies{};
  bool coincides = false;
  std::vector<AnalysisEntry> entries;
};

/// Full correlation report for one state: discord figures, the optimal
/// measurement, and weak-discord quantities per requested alpha.
inline AnalysisReport analyze_state(const DensityMatrix& rho,
                                    const std::vector<double>& alphas) {
  AnalysisReport rep;
  rep.dim_a = rho.dim_a();
  rep.dim_b = rho.dim_b();
  DiscordResult disc = discord(rho);
  rep.mutual_info = disc.mutual_info;
  rep.max_j = disc.max_j;
  rep.discord = disc.discord;
  rep.optimal = disc.optimal;
  rep.probs = disc.probs;
  rep.cond_entropies = disc.cond_entropies;
  auto projs = measurement_projectors(disc.optimal);
  rep.coincides = coincidence_condition(
      rho, tensor_product(projs[0] - projs[1], identity(rho.dim_b())));
  for (double alpha : alphas) {
    WeakDiscordResult wd = weak_discord_with(rho, disc, alpha);
    AnalysisEntry e;
    e.alpha = alpha;
    e.weak_discord = wd.weak_discord;
    e.p_plus_w = wd.weak_probs[0];
    e.p_minus_w = wd.weak_probs[1];
    e.p_f = disturbance_probability(rho, alpha);
    e.prob_valid = wd.prob_valid;
    rep.entries.push_back(e);
  }
  return rep;
}

inline AnalysisReport analyze_state(const std::string& path,
                                    const std::vector<double>& alphas) {
  return analyze_state(load_density_matrix(path), alphas);
}

inline std::string report_to_json(const AnalysisReport& rep) {
  std::string out = "{\n";
  out += "  \"dimA\": " + std::to_string(rep.dim_a) + ",\n";
  out += "  \"dimB\": " + std::to_string(rep.dim_b) + ",\n";
  out += "  \"mutual_info\": " + fmt_g17(rep.mutual_info) + ",\n";
  out += "  \"max_j\": " + fmt_g17(rep.max_j) + ",\n";
  out += "  \"discord\": " + fmt_g17(rep.discord) + ",\n";
  out += "  \"optimal\": {\"theta\": " + fmt_g17(rep.optimal.theta) +
         ", \"phi\": " + fmt_g17(rep.optimal.phi) + "},\n";
  out += "  \"probs\": [" + fmt_g17(rep.probs[0]) + ", " +
         fmt_g17(rep.probs[1]) + "],\n";
  out += "  \"cond_entropies\": [" + fmt_g17(rep.cond_entropies[0]) + ", " +
         fmt_g17(rep.cond_entropies[1]) + "],\n";
  out += std::string("  \"coincides\": ") + (rep.coincides ? "true" : "false") +
         ",\n";
  out += "  \"entries\": [\n";
  for (std::size_t k = 0; k < rep.entries.size(); ++k) {
    const AnalysisEntry& e = rep.entries[k];
    out += "    {\"alpha\": " + fmt_g17(e.alpha) +
           ", \"weak_discord\": " + fmt_g17(e.weak_discord) +
           ", \"p_plus_w\": " + fmt_g17(e.p_plus_w) +
           ", \"p_minus_w\": " + fmt_g17(e.p_minus_w) +
           ", \"p_f\": " + fmt_g17(e.p_f) + ", \"prob_valid\": " +
           (e.prob_valid ? "true" : "false") + "}";
    if (k + 1 < rep.entries.size()) out += ",";
    out += "\n";
  }
  out += "  ]\n}\n";
  return out;
}

/// Writes `content` to `path`, replacing any existing file.
inline void write_text_file(const std::string& path,
                            const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("write_text_file: cannot write " + path);
  }
  f << content;
}

}  // namespace weakdiscord
