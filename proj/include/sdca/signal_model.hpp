#pragma once

// Narrow-band far-field snapshot generation for real-valued Gaussian sources
// in circular complex Gaussian noise, with or without per-source carrier
// phases at the reference sensor.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sdca/coarray.hpp"
#include "sdca/random.hpp"

namespace sdca {

using cdouble = std::complex<double>;

inline constexpr double deg2rad(double deg) noexcept { return deg * std::numbers::pi / 180.0; }

enum class SignalModel {
  simplified,  // y = A s + v
  practical,   // y = A diag(e^{j phi}) s + v
};

inline std::string_view to_string(SignalModel m) {
  return m == SignalModel::simplified ? "simplified" : "practical";
}

inline SignalModel parse_signal_model(std::string_view s) {
  if (s == "simplified") return SignalModel::simplified;
  if (s == "practical") return SignalModel::practical;
  throw std::invalid_argument("unknown signal model '" + std::string(s) + "'");
}

struct Scenario {
  SensorArray array{0};
  std::vector<double> doas_deg;
  double source_power = 1.0;
  std::vector<double> phases_rad;
  /// 10 log10(source_power / noise variance). +inf means noiseless.
  double snr_db = 0.0;
  int snapshots = 200;
  std::uint64_t seed = 0;
  SignalModel model = SignalModel::simplified;

  std::size_t num_sources() const noexcept { return doas_deg.size(); }

  double noise_variance() const { return source_power * std::pow(10.0, -snr_db / 10.0); }

  void validate() const {
    if (doas_deg.empty()) throw std::invalid_argument("scenario needs at least one source");
    for (std::size_t m = 0; m < doas_deg.size(); ++m) {
      if (!(std::abs(doas_deg[m]) < 90.0))
        throw std::invalid_argument("DOA must lie in (-90, 90) degrees");
      if (m > 0 && !(doas_deg[m] > doas_deg[m - 1]))
        throw std::invalid_argument("DOAs must be strictly increasing");
    }
    if (phases_rad.size() != doas_deg.size())
      throw std::invalid_argument("need one initial phase per source");
    for (double phi : phases_rad)
      if (!std::isfinite(phi)) throw std::invalid_argument("initial phases must be finite");
    if (!(source_power > 0.0) || !std::isfinite(source_power))
      throw std::invalid_argument("source power must be positive");
    if (std::isnan(snr_db) || snr_db == -INFINITY) throw std::invalid_argument("invalid SNR");
    if (snapshots < 1) throw std::invalid_argument("snapshot count must be at least 1");
  }
};

/// N x K array outputs, one column per snapshot.
struct SnapshotBlock {
  Eigen::MatrixXcd data;

  Eigen::Index sensors() const noexcept { return data.rows(); }
  Eigen::Index snapshots() const noexcept { return data.cols(); }
};

/// Entry n is exp(-j pi p_n sin(theta)) for integer position p_n.
inline Eigen::VectorXcd steering_vector(const SensorArray& arr, double theta_deg) {
  if (!(std::abs(theta_deg) < 90.0)) throw std::domain_error("steering angle must lie in (-90, 90) degrees");
  const double s = std::sin(deg2rad(theta_deg));
  Eigen::VectorXcd a(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t n = 0; n < arr.size(); ++n)
    a(static_cast<Eigen::Index>(n)) = std::polar(1.0, -std::numbers::pi * arr[n] * s);
  return a;
}

inline Eigen::MatrixXcd steering_matrix(const SensorArray& arr, const std::vector<double>& doas_deg) {
  Eigen::MatrixXcd a(static_cast<Eigen::Index>(arr.size()), static_cast<Eigen::Index>(doas_deg.size()));
  for (std::size_t m = 0; m < doas_deg.size(); ++m)
    a.col(static_cast<Eigen::Index>(m)) = steering_vector(arr, doas_deg[m]);
  return a;
}

/// Steering matrix with the initial phases folded in (identity phases for the
/// simplified model).
inline Eigen::MatrixXcd effective_steering(const Scenario& sc) {
  Eigen::MatrixXcd a = steering_matrix(sc.array, sc.doas_deg);
  if (sc.model == SignalModel::practical)
    for (Eigen::Index m = 0; m < a.cols(); ++m) a.col(m) *= std::polar(1.0, sc.phases_rad[static_cast<std::size_t>(m)]);
  return a;
}

/// Uniform phases on [0, 2 pi) drawn from the phase stream of `seed`.
inline std::vector<double> draw_phases(std::uint64_t seed, std::size_t count) {
  auto eng = make_engine(seed, Stream::phases);
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  std::vector<double> out(count);
  for (auto& phi : out) phi = u(eng);
  return out;
}

/// M x K real source samples, zero-mean Gaussian with variance source_power.
inline Eigen::MatrixXd draw_sources(const Scenario& sc) {
  const auto m = static_cast<Eigen::Index>(sc.num_sources());
  Eigen::MatrixXd s(m, sc.snapshots);
  auto eng = make_engine(sc.seed, Stream::sources);
  std::normal_distribution<double> gauss(0.0, std::sqrt(sc.source_power));
  for (Eigen::Index c = 0; c < s.cols(); ++c)
    for (Eigen::Index r = 0; r < m; ++r) s(r, c) = gauss(eng);
  return s;
}

/// Deterministic in `sc`. Sources and noise come from independent streams
/// so the source realisation does not depend on the SNR.
inline SnapshotBlock generate_snapshots(const Scenario& sc) {
  sc.validate();
  const auto n = static_cast<Eigen::Index>(sc.array.size());
  const Eigen::Index k = sc.snapshots;

  SnapshotBlock out;
  out.data = effective_steering(sc) * draw_sources(sc).cast<cdouble>();

  const double noise_var = sc.noise_variance();
  if (noise_var > 0.0) {
    auto eng = make_engine(sc.seed, Stream::noise);
    std::normal_distribution<double> gauss(0.0, std::sqrt(noise_var / 2.0));
    for (Eigen::Index c = 0; c < k; ++c)
      for (Eigen::Index r = 0; r < n; ++r) {
        const double re = gauss(eng);
        const double im = gauss(eng);
        out.data(r, c) += cdouble(re, im);
      }
  }
  return out;
}

}  // namespace sdca
