// Command-line driver for the co-array experiments.
//
//   sdca_lab sweep <config>          RMSE versus SNR for both signal models
//   sdca_lab verify-lemma <config>   span residual over a phase grid
//   sdca_lab coarray <config>        co-array lags and weights
//   sdca_lab spectrum <config>       SS-MUSIC pseudospectrum of one scenario
//
// Worker threads for `sweep` come from SDCA_THREADS.

#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "sdca/sdca.hpp"

namespace {

// Writes to `path`, or stdout when empty.
void with_output(const std::string& path, const std::function<void(std::ostream&)>& write) {
  if (path.empty()) {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(out);
  if (!out) throw std::runtime_error("error while writing '" + path + "'");
}

int run_sweep_cmd(const std::string& config_path, int trials_override, const std::string& output_override) {
  auto cfg = sdca::load_config(config_path);
  if (trials_override > 0) cfg.trials = trials_override;
  const std::string out = output_override.empty() ? cfg.output_path : output_override;
  const auto res = sdca::run_sweep(cfg);
  with_output(out, [&](std::ostream& os) { sdca::write_sweep_csv(os, res); });
  for (const auto& row : res.rows)
    if (row.padded_trials > 0)
      std::cerr << "note: " << row.padded_trials << " trial(s) at " << row.snr_db << " dB ("
                << sdca::to_string(row.model) << ") used peak padding\n";
  return 0;
}

int run_lemma_cmd(const std::string& config_path, const std::string& output_override) {
  const auto cfg = sdca::load_config(config_path);
  const auto points =
      sdca::lemma1_sweep(cfg.array, cfg.lemma_theta_deg, sdca::uniform_phase_grid(cfg.phi_points));
  const std::string out = output_override.empty() ? cfg.output_path : output_override;
  with_output(out, [&](std::ostream& os) { sdca::io::write_lemma_csv(os, points); });
  return 0;
}

int run_coarray_cmd(const std::string& config_path, const std::string& set_override,
                    const std::string& output_override) {
  const auto cfg = sdca::load_config(config_path);
  const std::string which = set_override.empty() ? cfg.coarray : set_override;
  sdca::LagSet lags;
  if (which == "sdca") {
    lags = sdca::sum_difference_coarray(cfg.array);
  } else if (which == "d1bar" || which == "d2bar" || which == "d3bar") {
    const auto part = sdca::partition_sdca(cfg.array, cfg.precedence);
    lags = which == "d1bar" ? part.d1bar : which == "d2bar" ? part.d2bar : part.d3bar;
  } else {
    lags = sdca::coarray(cfg.array, sdca::detail::parse_coarray_name(which));
  }
  const std::string out = output_override.empty() ? cfg.output_path : output_override;
  with_output(out, [&](std::ostream& os) { sdca::io::write_lagset_csv(os, lags); });
  return 0;
}

int run_spectrum_cmd(const std::string& config_path, const std::string& output_override,
                     const std::string& snapshots_path, const std::string& virtual_path) {
  auto cfg = sdca::load_config(config_path);
  const auto sc = cfg.fixed_scenario();
  if (sc.doas_deg.size() != cfg.doa_intervals.size())
    throw sdca::ConfigError("doas must list one angle per DOA interval");
  const sdca::Experiment exp(cfg);

  const auto snap = sdca::generate_snapshots(sc);
  if (!snapshots_path.empty())
    with_output(snapshots_path, [&](std::ostream& os) { sdca::io::write_snapshots_csv(os, snap); });

  const auto vs = sdca::assemble_virtual_signal(sdca::vectorize_stacked(sdca::sample_stats(snap), sc.array),
                                                exp.partition(), exp.noise_mode(sc));
  if (!virtual_path.empty())
    with_output(virtual_path, [&](std::ostream& os) { sdca::io::write_virtual_signal_csv(os, vs); });

  const auto sp = exp.music().spectrum(sdca::spatial_smooth(vs, exp.music().config().subarray_len));
  const std::string out = output_override.empty() ? cfg.output_path : output_override;
  with_output(out, [&](std::ostream& os) { sdca::io::write_spectrum_csv(os, sp); });

  const auto est = sdca::pick_peaks(sp, exp.music().config().num_sources);
  std::cerr << "estimated DOAs:";
  for (double a : est.angles_deg) std::cerr << ' ' << a;
  std::cerr << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sum-difference co-array DOA laboratory"};
  app.require_subcommand(1);

  std::string config;
  std::string output;
  int trials = 0;
  std::string set;
  std::string dump_snapshots;
  std::string dump_virtual;

  auto* sweep = app.add_subcommand("sweep", "RMSE versus SNR for the simplified and practical models");
  sweep->add_option("config", config, "Experiment config file")->required()->check(CLI::ExistingFile);
  sweep->add_option("-o,--output", output, "CSV destination (overrides 'output')");
  sweep->add_option("-t,--trials", trials, "Monte Carlo trials per point (overrides 'trials')")
      ->check(CLI::PositiveNumber);

  auto* lemma = app.add_subcommand("verify-lemma", "Span residual versus initial phase");
  lemma->add_option("config", config, "Experiment config file")->required()->check(CLI::ExistingFile);
  lemma->add_option("-o,--output", output, "CSV destination (overrides 'output')");

  auto* coarray = app.add_subcommand("coarray", "Dump a co-array as lag,weight CSV");
  coarray->add_option("config", config, "Experiment config file")->required()->check(CLI::ExistingFile);
  coarray->add_option("-s,--set", set, "difference | positive_sum | negative_sum | sdca | d1bar | d2bar | d3bar")
      ->check(CLI::IsMember({"difference", "positive_sum", "negative_sum", "sdca", "d1bar", "d2bar", "d3bar"}));
  coarray->add_option("-o,--output", output, "CSV destination (overrides 'output')");

  auto* spectrum = app.add_subcommand("spectrum", "Pseudospectrum of the configured fixed scenario");
  spectrum->add_option("config", config, "Experiment config file")->required()->check(CLI::ExistingFile);
  spectrum->add_option("-o,--output", output, "CSV destination (overrides 'output')");
  spectrum->add_option("--dump-snapshots", dump_snapshots, "Write the snapshot block as CSV");
  spectrum->add_option("--dump-virtual", dump_virtual, "Write the virtual signal as lag,re,im CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep) return run_sweep_cmd(config, trials, output);
    if (*lemma) return run_lemma_cmd(config, output);
    if (*coarray) return run_coarray_cmd(config, set, output);
    if (*spectrum) return run_spectrum_cmd(config, output, dump_snapshots, dump_virtual);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
