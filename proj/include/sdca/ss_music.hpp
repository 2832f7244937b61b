#pragma once

// Spatial-smoothing MUSIC on a contiguous virtual array.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sdca/covariance.hpp"
#include "sdca/linalg.hpp"

namespace sdca {

struct MusicConfig {
  double grid_step_deg = 0.01;
  double grid_lo_deg = -90.0;
  double grid_hi_deg = 90.0;
  int subarray_len = 21;
  int num_sources = 2;

  std::size_t grid_size() const {
    return static_cast<std::size_t>(std::floor((grid_hi_deg - grid_lo_deg) / grid_step_deg + 0.5)) + 1;
  }
  double grid_angle(std::size_t i) const { return grid_lo_deg + static_cast<double>(i) * grid_step_deg; }

  void validate() const {
    if (!(grid_step_deg > 0.0)) throw std::invalid_argument("grid step must be positive");
    if (!(grid_lo_deg < grid_hi_deg) || grid_lo_deg < -90.0 || grid_hi_deg > 90.0)
      throw std::invalid_argument("grid range must be an increasing interval within [-90, 90]");
    if (subarray_len < 1) throw std::invalid_argument("subarray length must be positive");
    if (num_sources < 1) throw std::invalid_argument("number of sources must be positive");
    if (num_sources >= subarray_len)
      throw std::invalid_argument("MUSIC needs fewer sources than the subarray length");
  }
};

/// Average of z_i z_i^H over all length-`subarray_len` windows z_i of the
/// virtual signal.
inline Eigen::MatrixXcd spatial_smooth(const VirtualSignal& vs, int subarray_len) {
  const Eigen::Index len = subarray_len;
  if (len < 1 || len > vs.size())
    throw std::invalid_argument("subarray length " + std::to_string(subarray_len) + " exceeds the " +
                                std::to_string(vs.size()) + " available lags");
  const Eigen::Index windows = vs.size() - len + 1;
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(len, len);
  for (Eigen::Index i = 0; i < windows; ++i) {
    const auto z = vs.values.segment(i, len);
    r.noalias() += z * z.adjoint();
  }
  return hermitian_part(r / static_cast<double>(windows));
}

/// Element n is exp(-j pi n sin(theta)), unit spacing in half wavelengths.
inline Eigen::VectorXcd subarray_steering(int len, double theta_deg) {
  const double s = std::sin(deg2rad(theta_deg));
  Eigen::VectorXcd a(len);
  for (int n = 0; n < len; ++n) a(n) = std::polar(1.0, -std::numbers::pi * n * s);
  return a;
}

struct Spectrum {
  std::vector<double> theta_deg;
  std::vector<double> values;
};

/// Grid and subarray manifold for one MusicConfig, reusable across trials.
class MusicEstimator {
 public:
  explicit MusicEstimator(MusicConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    const auto g = cfg_.grid_size();
    theta_.resize(g);
    manifold_.resize(cfg_.subarray_len, static_cast<Eigen::Index>(g));
    for (std::size_t i = 0; i < g; ++i) {
      theta_[i] = cfg_.grid_angle(i);
      manifold_.col(static_cast<Eigen::Index>(i)) = subarray_steering(cfg_.subarray_len, theta_[i]);
    }
  }

  const MusicConfig& config() const noexcept { return cfg_; }

  /// 1 / ||E_n^H a(theta)||^2 with E_n the eigenvectors of the
  /// subarray_len - M smallest eigenvalues.
  Spectrum spectrum(const Eigen::MatrixXcd& cov) const {
    const Eigen::Index len = cfg_.subarray_len;
    if (cov.rows() != len || cov.cols() != len)
      throw std::invalid_argument("covariance size does not match the subarray length");
    const auto eig = hermitian_eigen(hermitian_part(cov));
    const Eigen::MatrixXcd noise = eig.vectors.leftCols(len - cfg_.num_sources);
    const Eigen::MatrixXcd proj = noise.adjoint() * manifold_;
    const Eigen::VectorXd denom = proj.colwise().squaredNorm().transpose();

    Spectrum out;
    out.theta_deg = theta_;
    out.values.resize(theta_.size());
    for (std::size_t i = 0; i < theta_.size(); ++i)
      out.values[i] = 1.0 / std::max(denom(static_cast<Eigen::Index>(i)), std::numeric_limits<double>::min());
    return out;
  }

 private:
  MusicConfig cfg_;
  std::vector<double> theta_;
  Eigen::MatrixXcd manifold_;
};

inline Spectrum music_spectrum(const Eigen::MatrixXcd& cov, const MusicConfig& cfg) {
  return MusicEstimator(cfg).spectrum(cov);
}

struct DoaEstimate {
  std::vector<double> angles_deg;  // ascending
  bool padded = false;             // fewer than M local maxima were found
};

/// The M largest interior local maxima, sorted by angle. Missing peaks are
/// filled with the global maximum location.
inline DoaEstimate pick_peaks(const Spectrum& sp, int num_sources) {
  const auto& v = sp.values;
  if (v.empty()) throw std::invalid_argument("empty spectrum");
  if (num_sources < 1) throw std::invalid_argument("number of sources must be positive");

  std::vector<std::size_t> peaks;
  for (std::size_t i = 1; i + 1 < v.size(); ++i)
    if (v[i] > v[i - 1] && v[i] >= v[i + 1]) peaks.push_back(i);
  std::stable_sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });

  DoaEstimate est;
  const auto m = static_cast<std::size_t>(num_sources);
  for (std::size_t i = 0; i < std::min(m, peaks.size()); ++i) est.angles_deg.push_back(sp.theta_deg[peaks[i]]);
  if (est.angles_deg.size() < m) {
    const auto top = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    est.angles_deg.resize(m, sp.theta_deg[top]);
    est.padded = true;
  }
  std::sort(est.angles_deg.begin(), est.angles_deg.end());
  return est;
}

/// Root mean square error over all trials and sources; estimates and truths
/// are paired by sort order.
inline double rmse(const std::vector<DoaEstimate>& estimates, const std::vector<std::vector<double>>& truths) {
  if (estimates.size() != truths.size()) throw std::invalid_argument("estimate/truth count mismatch");
  if (estimates.empty()) throw std::invalid_argument("no trials to aggregate");
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t t = 0; t < estimates.size(); ++t) {
    auto est = estimates[t].angles_deg;
    auto truth = truths[t];
    if (est.size() != truth.size()) throw std::invalid_argument("trial " + std::to_string(t) + ": source count mismatch");
    std::sort(est.begin(), est.end());
    std::sort(truth.begin(), truth.end());
    for (std::size_t m = 0; m < est.size(); ++m) {
      const double d = est[m] - truth[m];
      sum += d * d;
      ++count;
    }
  }
  return std::sqrt(sum / static_cast<double>(count));
}

/// Smooth, scan and pick.
inline DoaEstimate estimate_doas(const VirtualSignal& vs, const MusicEstimator& music) {
  const auto cov = spatial_smooth(vs, music.config().subarray_len);
  return pick_peaks(music.spectrum(cov), music.config().num_sources);
}

}  // namespace sdca
