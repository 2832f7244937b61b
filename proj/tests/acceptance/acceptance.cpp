// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit status
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../oracle.hpp"
#include "sdca/sdca.hpp"

using namespace sdca;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Runner {
 public:
  void run(const std::string& id, const std::string& title, double time_limit_s, const std::function<Outcome()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = fn();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > time_limit_s) {
      out.pass = false;
      out.detail += " [runtime " + std::to_string(secs) + " s exceeds " + std::to_string(time_limit_s) + " s]";
    }
    std::cout << (out.pass ? "[PASS] " : "[FAIL] ") << id << ' ' << title << " (" << std::fixed << std::setprecision(2)
              << secs << " s)";
    if (!out.detail.empty()) std::cout << " -- " << out.detail;
    std::cout << std::defaultfloat << std::endl;
    failures_ += out.pass ? 0 : 1;
  }
  int failures() const { return failures_; }

 private:
  int failures_ = 0;
};

std::map<int, int> counts_of(const LagSet& s) {
  std::map<int, int> out;
  for (const auto& e : s.entries()) out[e.lag] = e.weight;
  return out;
}

const SensorArray kPaperArray{0, 1, 2, 3, 10, 17};

Outcome coarray_oracle_equivalence() {
  std::mt19937_64 rng(2024);
  int mismatches = 0;
  for (int t = 0; t < 100; ++t) {
    const auto pos = oracle::random_geometry(rng, 8, 50);
    const SensorArray arr(pos);
    const auto d1 = oracle::difference(pos);
    const auto d2 = oracle::positive_sum(pos);
    const auto d3 = oracle::negative_sum(pos);
    std::map<int, int> s;
    for (const auto* m : {&d1, &d2, &d3})
      for (const auto& [lag, w] : *m) s[lag] += w;

    // precedence difference > positive sum > negative sum, by set subtraction
    std::map<int, int> p1 = d1, p2, p3;
    for (const auto& [lag, w] : d2)
      if (!d1.count(lag)) p2[lag] = w;
    for (const auto& [lag, w] : d3)
      if (!d1.count(lag) && !d2.count(lag)) p3[lag] = w;

    const auto part = partition_sdca(arr);
    const bool ok = counts_of(difference_coarray(arr)) == d1 && counts_of(sum_coarray(arr, +1)) == d2 &&
                    counts_of(sum_coarray(arr, -1)) == d3 && counts_of(sum_difference_coarray(arr)) == s &&
                    counts_of(part.d1bar) == p1 && counts_of(part.d2bar) == p2 && counts_of(part.d3bar) == p3;
    mismatches += ok ? 0 : 1;
  }
  return {mismatches == 0, std::to_string(100 - mismatches) + "/100 geometries match"};
}

Outcome paper_geometry_segment() {
  const auto seg = contiguous_segment(sum_difference_coarray(kPaperArray));
  std::ostringstream os;
  os << "segment [" << seg.lo << ", " << seg.hi << "], " << seg.length() << " virtual elements";
  return {seg.lo == -20 && seg.hi == 20 && seg.length() == 41, os.str()};
}

Outcome lemma_iff() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> power(0.1, 5.0);
  std::uniform_int_distribution<int> msrc(1, 3);
  int backward_ok = 0;
  double worst_backward = 0.0;
  for (int t = 0; t < 100; ++t) {
    const SensorArray arr(oracle::random_geometry(rng, 8, 30, 2));
    const int m = msrc(rng);
    const auto phi = build_phi_bars(arr, oracle::random_doas(rng, m));
    Eigen::VectorXcd g(m);
    for (int i = 0; i < m; ++i) g(i) = power(rng);
    const double res = span_residual(phi, g, g).residual;
    worst_backward = std::max(worst_backward, res);
    backward_ok += res < 1e-10 ? 1 : 0;
  }

  const auto grid = uniform_phase_grid(360);
  int forward_violations = 0;
  double max_at_zero = 0.0, min_elsewhere = INFINITY;
  for (const auto& arr : {kPaperArray, SensorArray{0, 1}, SensorArray{0, 2, 5, 9}})
    for (double theta : {-41.0, 0.0, 10.0, 63.5}) {
      const auto pts = lemma1_sweep(arr, theta, grid);
      for (std::size_t k = 0; k < pts.size(); ++k) {
        const bool condition = (k == 0 || k == 180);
        const double r = pts[k].residual;
        if (condition) {
          max_at_zero = std::max(max_at_zero, r);
          forward_violations += r < 1e-8 ? 0 : 1;
        } else {
          forward_violations += r < 1e-8 ? 1 : 0;
          if (std::abs(std::polar(1.0, 2.0 * pts[k].phi_rad) - 1.0) > 0.1) {
            min_elsewhere = std::min(min_elsewhere, r);
            forward_violations += r > 1e-3 ? 0 : 1;
          }
        }
      }
    }
  std::ostringstream os;
  os << "backward " << backward_ok << "/100 (worst " << worst_backward << "); forward: max residual at phi in {0,pi} "
     << max_at_zero << ", min residual where |e^{j2phi}-1|>0.1 " << min_elsewhere << ", violations "
     << forward_violations;
  return {backward_ok == 100 && forward_violations == 0, os.str()};
}

Outcome noiseless_pipeline() {
  Scenario sc;
  sc.array = kPaperArray;
  sc.doas_deg = {-15.0, 25.0};
  sc.phases_rad = {0.0, 0.0};
  sc.snr_db = INFINITY;
  const auto vs =
      assemble_virtual_signal(vectorize_stacked(population_stats(sc), kPaperArray), partition_sdca(kPaperArray));
  MusicConfig cfg;
  cfg.subarray_len = 21;
  cfg.num_sources = 2;
  const auto est = estimate_doas(vs, MusicEstimator(cfg));
  const double e0 = std::abs(est.angles_deg[0] + 15.0), e1 = std::abs(est.angles_deg[1] - 25.0);
  std::ostringstream os;
  os << "estimates " << est.angles_deg[0] << ", " << est.angles_deg[1];
  return {e0 <= 0.01 + 1e-9 && e1 <= 0.01 + 1e-9, os.str()};
}

ExperimentConfig fig1_config() {
  ExperimentConfig cfg;  // six-sensor array, intervals [-20,-10] and [20,30], K = 200, 0.01 deg grid
  cfg.trials = 200;
  cfg.seed = 20190601;
  cfg.snr_grid_db = {-10, -8, -6, -4, -2, 0, 2, 4, 6, 8, 10};
  return cfg;
}

std::string sweep_csv(const SweepResult& res) {
  std::ostringstream os;
  write_sweep_csv(os, res);
  return os.str();
}

std::string fig1_csv;

Outcome fig1_reproduction() {
  const auto res = run_sweep(fig1_config());
  fig1_csv = sweep_csv(res);
  std::cout << fig1_csv;

  const double simp10 = res.at(10.0, SignalModel::simplified).rmse_deg;
  const double prac10 = res.at(10.0, SignalModel::practical).rmse_deg;
  bool ok = simp10 >= 0.01 && simp10 <= 0.15;
  double prac_lo = INFINITY, prac_hi = 0.0;
  for (const auto& row : res.rows)
    if (row.model == SignalModel::practical) {
      prac_lo = std::min(prac_lo, row.rmse_deg);
      prac_hi = std::max(prac_hi, row.rmse_deg);
    }
  ok = ok && prac_lo >= 3.0 && prac_hi <= 25.0 && prac10 / simp10 > 20.0;
  std::ostringstream os;
  os << "simplified@10dB " << simp10 << " in [0.01, 0.15]; practical range [" << prac_lo << ", " << prac_hi
     << "] in [3, 25]; ratio@10dB " << prac10 / simp10 << " > 20";
  return {ok, os.str()};
}

Outcome property_suite() {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> angle(-89.0, 89.0);
  std::vector<std::string> failed;

  double worst_psd = 0.0, worst_herm = 0.0, worst_recon = 0.0;
  for (int t = 0; t < 200; ++t) {
    VirtualSignal vs;
    vs.max_lag = 5 + t % 20;
    vs.values.resize(2 * vs.max_lag + 1);
    for (Eigen::Index i = 0; i < vs.values.size(); ++i) vs.values(i) = {gauss(rng), gauss(rng)};
    const auto r = spatial_smooth(vs, 1 + t % (vs.max_lag + 1));
    const auto eig = hermitian_eigen(r);
    worst_herm = std::max(worst_herm, (r - r.adjoint()).norm());
    worst_psd = std::max(worst_psd, -eig.values.minCoeff() / eig.values.maxCoeff());
    worst_recon = std::max(worst_recon, (eig.reconstruct() - r).norm() / r.norm());
  }
  if (worst_herm != 0.0) failed.push_back("hermitian");
  if (worst_psd > 1e-10) failed.push_back("psd");
  if (!(worst_recon < 1e-10)) failed.push_back("eigen-reconstruction");

  double worst_modulus = 0.0, worst_conj = 0.0;
  for (int t = 0; t < 200; ++t) {
    const SensorArray arr(oracle::random_geometry(rng, 8, 40));
    const double theta = angle(rng);
    const auto a = steering_vector(arr, theta);
    worst_modulus = std::max(worst_modulus, (a.cwiseAbs().array() - 1.0).abs().maxCoeff());
    worst_conj = std::max(worst_conj, (steering_vector(arr, -theta) - a.conjugate()).cwiseAbs().maxCoeff());
  }
  if (worst_modulus > 1e-14) failed.push_back("unit-modulus");
  if (worst_conj > 1e-14) failed.push_back("conjugate-symmetry");

  // same seed, different thread counts, fresh run: byte-identical CSV
  const auto again = sweep_csv(run_sweep(fig1_config(), 1));
  const bool deterministic = !fig1_csv.empty() && again == fig1_csv;
  if (!deterministic) failed.push_back("sweep-determinism");

  std::ostringstream os;
  os << "hermitian err " << worst_herm << ", psd ratio " << worst_psd << ", reconstruction " << worst_recon
     << ", modulus err " << worst_modulus << ", conj err " << worst_conj << ", sweep CSV identical: "
     << (deterministic ? "yes" : "no");
  for (const auto& f : failed) os << " [failed: " << f << "]";
  return {failed.empty(), os.str()};
}

}  // namespace

int main() {
  Runner r;
  r.run("AC1", "co-array oracle equivalence", 5.0, coarray_oracle_equivalence);
  r.run("AC2", "SDCA contiguous segment of {0,1,2,3,10,17}", 1.0, paper_geometry_segment);
  r.run("AC3", "span condition iff g = g~ = conj(g~)", 10.0, lemma_iff);
  r.run("AC4", "noiseless SS-MUSIC recovers -15.00 and 25.00 deg", 5.0, noiseless_pipeline);
  r.run("AC5", "RMSE vs SNR at desk scale (200 trials, K=200)", 600.0, fig1_reproduction);
  r.run("AC6", "property suite", 600.0, property_suite);
  std::cout << (r.failures() == 0 ? "all acceptance criteria passed" : "acceptance criteria failed: ")
            << (r.failures() == 0 ? "" : std::to_string(r.failures())) << std::endl;
  return r.failures() == 0 ? 0 : 1;
}
