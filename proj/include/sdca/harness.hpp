#pragma once

// Monte Carlo driver: configuration, per-trial randomisation, SNR sweeps and
// RMSE aggregation.
//
// A trial is keyed by (seed, snr_db, trial index). The signal model is not
// part of the key, so both models see the same DOAs, source samples and
// noise; only the practical model additionally draws initial phases.

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <istream>
#include <mutex>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "sdca/coarray.hpp"
#include "sdca/covariance.hpp"
#include "sdca/random.hpp"
#include "sdca/signal_model.hpp"
#include "sdca/ss_music.hpp"

namespace sdca {

struct DoaInterval {
  double lo;
  double hi;
};

enum class NoiseHandling { known, estimated };

struct ExperimentConfig {
  SensorArray array{0, 1, 2, 3, 10, 17};
  std::vector<DoaInterval> doa_intervals{{-20.0, -10.0}, {20.0, 30.0}};
  std::vector<double> doas_deg{-15.0, 25.0};  // fixed DOAs for single-scenario commands
  std::vector<double> phases_rad;             // fixed phases; empty means zero
  double source_power = 1.0;
  double snr_db = 10.0;
  std::vector<double> snr_grid_db{-10, -8, -6, -4, -2, 0, 2, 4, 6, 8, 10};
  std::vector<SignalModel> models{SignalModel::simplified, SignalModel::practical};
  int snapshots = 200;
  int trials = 200;
  std::uint64_t seed = 1;
  SignalModel model = SignalModel::simplified;
  NoiseHandling noise = NoiseHandling::known;
  double grid_step_deg = 0.01;
  double grid_lo_deg = -90.0;
  double grid_hi_deg = 90.0;
  std::optional<int> subarray_len;  // unset: L + 1
  int phi_points = 360;
  double lemma_theta_deg = 10.0;
  PartitionPrecedence precedence = kDifferenceFirst;
  std::string coarray = "sdca";
  std::string output_path;

  int num_sources() const { return static_cast<int>(doa_intervals.size()); }

  void validate() const {
    if (doa_intervals.empty()) throw std::invalid_argument("need at least one DOA interval");
    for (std::size_t i = 0; i < doa_intervals.size(); ++i) {
      const auto& iv = doa_intervals[i];
      if (!(iv.lo <= iv.hi) || !(iv.lo > -90.0) || !(iv.hi < 90.0))
        throw std::invalid_argument("DOA interval must be ordered and inside (-90, 90)");
      if (i > 0 && !(iv.lo > doa_intervals[i - 1].hi))
        throw std::invalid_argument("DOA intervals must be disjoint and ascending");
    }
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");
    if (snapshots < 1) throw std::invalid_argument("snapshots must be at least 1");
    if (snr_grid_db.empty()) throw std::invalid_argument("SNR grid must not be empty");
    if (models.empty()) throw std::invalid_argument("need at least one signal model");
  }

  /// Half-length L of the symmetric contiguous SDCA segment.
  int virtual_half_aperture() const {
    const auto seg = contiguous_segment(sum_difference_coarray(array));
    return std::min(-seg.lo, seg.hi);
  }

  MusicConfig music_config() const {
    MusicConfig m;
    m.grid_step_deg = grid_step_deg;
    m.grid_lo_deg = grid_lo_deg;
    m.grid_hi_deg = grid_hi_deg;
    m.subarray_len = subarray_len.value_or(virtual_half_aperture() + 1);
    m.num_sources = num_sources();
    return m;
  }

  /// The single scenario described by the fixed-DOA keys.
  Scenario fixed_scenario() const {
    Scenario sc;
    sc.array = array;
    sc.doas_deg = doas_deg;
    sc.source_power = source_power;
    sc.phases_rad = phases_rad.empty() ? std::vector<double>(doas_deg.size(), 0.0) : phases_rad;
    sc.snr_db = snr_db;
    sc.snapshots = snapshots;
    sc.seed = seed;
    sc.model = model;
    return sc;
  }
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  return out;
}

inline double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

template <typename Int>
Int parse_int(const std::string& s) {
  Int v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("not an integer: '" + s + "'");
  return v;
}

inline std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split(s, ',')) out.push_back(parse_double(item));
  return out;
}

inline Coarray parse_coarray_name(const std::string& s) {
  if (s == "difference") return Coarray::difference;
  if (s == "positive_sum") return Coarray::positive_sum;
  if (s == "negative_sum") return Coarray::negative_sum;
  throw ConfigError("unknown co-array '" + s + "'");
}

}  // namespace detail

/// Reads `key = value` lines; `#` starts a comment, lists are comma separated
/// and DOA intervals are written `lo:hi`.
inline ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = detail::trim(raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");

    try {
      if (key == "positions") {
        std::vector<int> pos;
        for (const auto& item : detail::split(value, ',')) pos.push_back(detail::parse_int<int>(item));
        cfg.array = SensorArray(pos);
      } else if (key == "doa_intervals") {
        cfg.doa_intervals.clear();
        for (const auto& item : detail::split(value, ',')) {
          const auto colon = item.find(':');
          if (colon == std::string::npos) throw ConfigError("interval '" + item + "' must be written lo:hi");
          cfg.doa_intervals.push_back({detail::parse_double(detail::trim(item.substr(0, colon))),
                                       detail::parse_double(detail::trim(item.substr(colon + 1)))});
        }
      } else if (key == "doas") {
        cfg.doas_deg = detail::parse_doubles(value);
      } else if (key == "phases") {
        cfg.phases_rad = detail::parse_doubles(value);
      } else if (key == "source_power") {
        cfg.source_power = detail::parse_double(value);
      } else if (key == "snr_db") {
        cfg.snr_db = detail::parse_double(value);
      } else if (key == "snr_grid_db") {
        cfg.snr_grid_db = detail::parse_doubles(value);
      } else if (key == "models") {
        cfg.models.clear();
        for (const auto& item : detail::split(value, ',')) cfg.models.push_back(parse_signal_model(item));
      } else if (key == "model") {
        cfg.model = parse_signal_model(value);
      } else if (key == "snapshots") {
        cfg.snapshots = detail::parse_int<int>(value);
      } else if (key == "trials") {
        cfg.trials = detail::parse_int<int>(value);
      } else if (key == "seed") {
        cfg.seed = detail::parse_int<std::uint64_t>(value);
      } else if (key == "noise") {
        if (value == "known") cfg.noise = NoiseHandling::known;
        else if (value == "estimated") cfg.noise = NoiseHandling::estimated;
        else throw ConfigError("noise must be 'known' or 'estimated'");
      } else if (key == "grid_step_deg") {
        cfg.grid_step_deg = detail::parse_double(value);
      } else if (key == "grid_range_deg") {
        const auto r = detail::parse_doubles(value);
        if (r.size() != 2) throw ConfigError("grid_range_deg needs two values");
        cfg.grid_lo_deg = r[0];
        cfg.grid_hi_deg = r[1];
      } else if (key == "subarray_len") {
        if (value == "auto") cfg.subarray_len.reset();
        else cfg.subarray_len = detail::parse_int<int>(value);
      } else if (key == "phi_points") {
        cfg.phi_points = detail::parse_int<int>(value);
      } else if (key == "lemma_theta_deg") {
        cfg.lemma_theta_deg = detail::parse_double(value);
      } else if (key == "precedence") {
        const auto names = detail::split(value, ',');
        if (names.size() != 3) throw ConfigError("precedence lists all three co-arrays");
        PartitionPrecedence p{};
        for (std::size_t i = 0; i < 3; ++i) p[i] = detail::parse_coarray_name(names[i]);
        if (std::set<Coarray>(p.begin(), p.end()).size() != 3) throw ConfigError("precedence repeats a co-array");
        cfg.precedence = p;
      } else if (key == "coarray") {
        if (value != "sdca") detail::parse_coarray_name(value);
        cfg.coarray = value;
      } else if (key == "output") {
        cfg.output_path = value;
      } else {
        throw ConfigError("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  try {
    return parse_config(in);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

struct TrialResult {
  std::vector<double> truth_deg;
  DoaEstimate estimate;
};

/// Everything a trial needs that does not depend on the trial itself.
class Experiment {
 public:
  explicit Experiment(ExperimentConfig cfg)
      : cfg_((cfg.validate(), std::move(cfg))),
        partition_(partition_sdca(cfg_.array, cfg_.precedence)),
        music_(cfg_.music_config()) {}

  const ExperimentConfig& config() const noexcept { return cfg_; }
  const SdcaPartition& partition() const noexcept { return partition_; }
  const MusicEstimator& music() const noexcept { return music_; }

  std::uint64_t trial_seed(double snr_db, int trial_index) const {
    return derive_seed(cfg_.seed, {std::bit_cast<std::uint64_t>(snr_db), static_cast<std::uint64_t>(trial_index)});
  }

  /// Random scenario for one trial: DOAs uniform in each interval, phases
  /// uniform on [0, 2 pi) under the practical model.
  Scenario trial_scenario(double snr_db, SignalModel model, int trial_index) const {
    Scenario sc;
    sc.array = cfg_.array;
    sc.source_power = cfg_.source_power;
    sc.snr_db = snr_db;
    sc.snapshots = cfg_.snapshots;
    sc.seed = trial_seed(snr_db, trial_index);
    sc.model = model;
    auto eng = make_engine(sc.seed, Stream::doas);
    for (const auto& iv : cfg_.doa_intervals)
      sc.doas_deg.push_back(std::uniform_real_distribution<double>(iv.lo, iv.hi)(eng));
    sc.phases_rad = model == SignalModel::practical ? draw_phases(sc.seed, sc.doas_deg.size())
                                                    : std::vector<double>(sc.doas_deg.size(), 0.0);
    return sc;
  }

  NoiseMode noise_mode(const Scenario& sc) const {
    if (cfg_.noise == NoiseHandling::estimated) return EstimatedNoise{static_cast<int>(sc.num_sources())};
    return KnownNoise{std::isfinite(sc.snr_db) ? sc.noise_variance() : 0.0};
  }

  /// Sample statistics -> virtual signal -> SS-MUSIC.
  VirtualSignal virtual_signal(const Scenario& sc) const {
    const auto st = sample_stats(generate_snapshots(sc));
    return assemble_virtual_signal(vectorize_stacked(st, sc.array), partition_, noise_mode(sc));
  }

  TrialResult run_trial(double snr_db, SignalModel model, int trial_index) const {
    const auto sc = trial_scenario(snr_db, model, trial_index);
    return {sc.doas_deg, estimate_doas(virtual_signal(sc), music_)};
  }

 private:
  ExperimentConfig cfg_;
  SdcaPartition partition_;
  MusicEstimator music_;
};

inline TrialResult run_trial(const ExperimentConfig& cfg, double snr_db, SignalModel model, int trial_index) {
  return Experiment(cfg).run_trial(snr_db, model, trial_index);
}

struct SweepRow {
  double snr_db;
  SignalModel model;
  double rmse_deg;
  int trials;
  std::uint64_t seed;
  int padded_trials;  // trials that fell back to the peak padding rule
};

struct SweepResult {
  std::vector<SweepRow> rows;

  const SweepRow& at(double snr_db, SignalModel model) const {
    for (const auto& r : rows)
      if (r.snr_db == snr_db && r.model == model) return r;
    throw std::out_of_range("no sweep row for the requested SNR/model");
  }
};

/// Worker count from SDCA_THREADS, else the hardware concurrency.
inline unsigned default_thread_count() {
  if (const char* env = std::getenv("SDCA_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Rows come out ordered by SNR, then by the configured model order.
/// Results do not depend on the thread count.
inline SweepResult run_sweep(const ExperimentConfig& cfg, unsigned threads = default_thread_count()) {
  const Experiment exp(cfg);
  const auto& c = exp.config();
  const std::size_t per_row = static_cast<std::size_t>(c.trials);
  const std::size_t rows = c.snr_grid_db.size() * c.models.size();
  const std::size_t jobs = rows * per_row;

  std::vector<TrialResult> results(jobs);
  std::vector<std::exception_ptr> errors(jobs);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t j = next++; j < jobs; j = next++) {
      const std::size_t row = j / per_row;
      const int trial = static_cast<int>(j % per_row);
      const double snr = c.snr_grid_db[row / c.models.size()];
      const SignalModel model = c.models[row % c.models.size()];
      try {
        results[j] = exp.run_trial(snr, model, trial);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(jobs)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t j = 0; j < jobs; ++j) {
    if (!errors[j]) continue;
    const std::size_t row = j / per_row;
    std::string what = "unknown error";
    try {
      std::rethrow_exception(errors[j]);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    std::ostringstream msg;
    msg << "trial " << j % per_row << " at SNR " << c.snr_grid_db[row / c.models.size()] << " dB ("
        << to_string(c.models[row % c.models.size()]) << ") failed: " << what;
    throw std::runtime_error(msg.str());
  }

  SweepResult out;
  for (std::size_t row = 0; row < rows; ++row) {
    std::vector<DoaEstimate> est;
    std::vector<std::vector<double>> truth;
    int padded = 0;
    for (std::size_t t = 0; t < per_row; ++t) {
      auto& r = results[row * per_row + t];
      padded += r.estimate.padded ? 1 : 0;
      est.push_back(std::move(r.estimate));
      truth.push_back(std::move(r.truth_deg));
    }
    out.rows.push_back({c.snr_grid_db[row / c.models.size()], c.models[row % c.models.size()], rmse(est, truth),
                        c.trials, c.seed, padded});
  }
  return out;
}

inline void write_sweep_csv(std::ostream& os, const SweepResult& res) {
  const auto old = os.precision(10);
  os << "snr_db,model,rmse_deg,trials,seed\n";
  for (const auto& r : res.rows)
    os << r.snr_db << ',' << to_string(r.model) << ',' << r.rmse_deg << ',' << r.trials << ',' << r.seed << '\n';
  os.precision(old);
}

inline void write_sweep_csv(const std::string& path, const SweepResult& res) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_sweep_csv(out, res);
  if (!out) throw std::runtime_error("error while writing '" + path + "'");
}

}  // namespace sdca
