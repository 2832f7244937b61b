#pragma once

// Second-order statistics of the array output and their rearrangement into
// a virtual signal on the contiguous part of the sum-difference co-array.

#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "sdca/coarray.hpp"
#include "sdca/linalg.hpp"
#include "sdca/signal_model.hpp"

namespace sdca {

/// Covariance E{y y^H} and pseudo-covariance E{y y^T}.
struct SecondOrderStats {
  Eigen::MatrixXcd r_y;      // Hermitian
  Eigen::MatrixXcd gamma_y;  // complex symmetric
  long k_used = 0;           // 0 for population statistics
};

inline SecondOrderStats sample_stats(const SnapshotBlock& snap) {
  const Eigen::Index k = snap.snapshots();
  if (k < 1) throw std::invalid_argument("need at least one snapshot");
  const auto& y = snap.data;
  SecondOrderStats st;
  st.r_y = hermitian_part(y * y.adjoint() / static_cast<double>(k));
  st.gamma_y = symmetric_part(y * y.transpose() / static_cast<double>(k));
  st.k_used = static_cast<long>(k);
  return st;
}

/// Exact expectations for real sources of power sigma_s^2, so that
/// g_m = sigma_s^2 and the pseudo-power carries e^{j 2 phi_m} under the
/// practical model.
inline SecondOrderStats population_stats(const Scenario& sc) {
  sc.validate();
  const Eigen::MatrixXcd a = effective_steering(sc);
  const auto n = a.rows();
  SecondOrderStats st;
  st.r_y = sc.source_power * a * a.adjoint() + sc.noise_variance() * Eigen::MatrixXcd::Identity(n, n);
  st.gamma_y = sc.source_power * a * a.transpose();
  st.r_y = hermitian_part(st.r_y);
  st.gamma_y = symmetric_part(st.gamma_y);
  return st;
}

/// Source block of an entry of the stacked vector r.
enum class StatBlock { covariance, covariance_conj, pseudo, pseudo_conj };

/// r = [vec R; vec R*; vec G; vec G*] (column-major vec), each entry tagged
/// with its virtual lag:
///   block 1 (p,q) -> x_p - x_q     block 2 (p,q) -> x_q - x_p
///   block 3 (p,q) -> x_p + x_q     block 4 (p,q) -> -(x_p + x_q)
struct StackedVector {
  Eigen::VectorXcd values;
  std::vector<int> lags;
  std::vector<StatBlock> blocks;
  std::size_t sensors = 0;

  std::size_t size() const noexcept { return lags.size(); }
};

inline StackedVector vectorize_stacked(const SecondOrderStats& st, const SensorArray& arr) {
  const auto n = static_cast<Eigen::Index>(arr.size());
  if (st.r_y.rows() != n || st.r_y.cols() != n || st.gamma_y.rows() != n || st.gamma_y.cols() != n)
    throw std::invalid_argument("statistics do not match the array size");

  const Eigen::Index nn = n * n;
  StackedVector r;
  r.sensors = arr.size();
  r.values.resize(4 * nn);
  r.lags.resize(static_cast<std::size_t>(4 * nn));
  r.blocks.resize(static_cast<std::size_t>(4 * nn));

  for (Eigen::Index q = 0; q < n; ++q) {
    for (Eigen::Index p = 0; p < n; ++p) {
      const Eigen::Index i = p + q * n;
      const int xp = arr[static_cast<std::size_t>(p)];
      const int xq = arr[static_cast<std::size_t>(q)];
      const std::array<cdouble, 4> v{st.r_y(p, q), std::conj(st.r_y(p, q)), st.gamma_y(p, q),
                                     std::conj(st.gamma_y(p, q))};
      const std::array<int, 4> lag{xp - xq, xq - xp, xp + xq, -(xp + xq)};
      for (int b = 0; b < 4; ++b) {
        const auto idx = static_cast<std::size_t>(b * nn + i);
        r.values(static_cast<Eigen::Index>(idx)) = v[static_cast<std::size_t>(b)];
        r.lags[idx] = lag[static_cast<std::size_t>(b)];
        r.blocks[idx] = static_cast<StatBlock>(b);
      }
    }
  }
  return r;
}

struct KnownNoise {
  double variance = 0.0;
};

/// Noise power taken as the mean of the N - M smallest eigenvalues of R_y.
struct EstimatedNoise {
  int num_sources = 1;
};

using NoiseMode = std::variant<KnownNoise, EstimatedNoise>;

/// Co-array signal on the symmetric contiguous lag range [-L, L].
struct VirtualSignal {
  int max_lag = 0;
  Eigen::VectorXcd values;  // values(i) belongs to lag i - max_lag
  double sigma_estimate = 0.0;

  std::vector<int> lags() const {
    std::vector<int> out;
    for (int l = -max_lag; l <= max_lag; ++l) out.push_back(l);
    return out;
  }
  Eigen::Index size() const noexcept { return values.size(); }
  cdouble at(int lag) const {
    if (lag < -max_lag || lag > max_lag) throw std::out_of_range("lag outside virtual aperture");
    return values(lag + max_lag);
  }
};

inline bool block_feeds(StatBlock b, Coarray owner) {
  switch (owner) {
    case Coarray::difference: return b == StatBlock::covariance || b == StatBlock::covariance_conj;
    case Coarray::positive_sum: return b == StatBlock::pseudo;
    case Coarray::negative_sum: return b == StatBlock::pseudo_conj;
  }
  return false;
}

namespace detail {

inline double estimate_noise(const StackedVector& r, int num_sources) {
  const auto n = static_cast<Eigen::Index>(r.sensors);
  if (num_sources < 0 || num_sources >= n)
    throw std::invalid_argument("noise estimation needs fewer sources than sensors");
  Eigen::MatrixXcd r_y(n, n);
  for (Eigen::Index q = 0; q < n; ++q)
    for (Eigen::Index p = 0; p < n; ++p) r_y(p, q) = r.values(p + q * n);
  const auto eig = hermitian_eigen(hermitian_part(r_y));
  return eig.values.head(n - num_sources).mean();
}

}  // namespace detail

/// Averages every entry of `r` whose lag lies in the contiguous SDCA segment
/// and whose block is the one the partition assigns to that lag, then removes
/// the noise power from lag 0.
inline VirtualSignal assemble_virtual_signal(const StackedVector& r, const SdcaPartition& part,
                                             const NoiseMode& noise = KnownNoise{}) {
  std::map<int, int> all;
  for (auto c : {Coarray::difference, Coarray::positive_sum, Coarray::negative_sum})
    for (const auto& e : part.part(c).entries()) all[e.lag] += e.weight;
  const auto seg = contiguous_segment(LagSet::from_counts(all));
  const int max_lag = std::min(-seg.lo, seg.hi);

  VirtualSignal vs;
  vs.max_lag = max_lag;
  vs.values = Eigen::VectorXcd::Zero(2 * max_lag + 1);
  std::vector<int> hits(static_cast<std::size_t>(2 * max_lag + 1), 0);

  for (std::size_t i = 0; i < r.size(); ++i) {
    const int lag = r.lags[i];
    if (lag < -max_lag || lag > max_lag) continue;
    Coarray owner{};
    if (!part.owner(lag, &owner) || !block_feeds(r.blocks[i], owner)) continue;
    vs.values(lag + max_lag) += r.values(static_cast<Eigen::Index>(i));
    ++hits[static_cast<std::size_t>(lag + max_lag)];
  }
  for (int l = -max_lag; l <= max_lag; ++l) {
    const int h = hits[static_cast<std::size_t>(l + max_lag)];
    if (h == 0) throw std::runtime_error("no statistic contributes to lag " + std::to_string(l));
    vs.values(l + max_lag) /= static_cast<double>(h);
  }

  vs.sigma_estimate = std::visit(
      [&](const auto& mode) -> double {
        using T = std::decay_t<decltype(mode)>;
        if constexpr (std::is_same_v<T, KnownNoise>) return mode.variance;
        else return detail::estimate_noise(r, mode.num_sources);
      },
      noise);
  vs.values(max_lag) -= vs.sigma_estimate;
  return vs;
}

}  // namespace sdca
