#pragma once

// Brute-force reference constructions used only by the tests. None of these
// share code paths with the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// Every ordered pair (p, q) listed explicitly, then counted.
template <typename Op>
std::map<int, int> pair_counts(const std::vector<int>& pos, Op op) {
  std::vector<int> values;
  for (std::size_t i = 0; i < pos.size(); ++i)
    for (std::size_t j = 0; j < pos.size(); ++j) values.push_back(op(pos[i], pos[j]));
  std::map<int, int> out;
  for (int v : std::set<int>(values.begin(), values.end()))
    out[v] = static_cast<int>(std::count(values.begin(), values.end(), v));
  return out;
}

inline std::map<int, int> difference(const std::vector<int>& pos) {
  return pair_counts(pos, [](int a, int b) { return a - b; });
}
inline std::map<int, int> positive_sum(const std::vector<int>& pos) {
  return pair_counts(pos, [](int a, int b) { return a + b; });
}
inline std::map<int, int> negative_sum(const std::vector<int>& pos) {
  return pair_counts(pos, [](int a, int b) { return -(a + b); });
}

/// Column-wise Kronecker product: column m is kron(a.col(m), b.col(m)).
inline Eigen::MatrixXcd khatri_rao(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols());
  for (Eigen::Index m = 0; m < a.cols(); ++m)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < b.rows(); ++j) out(i * b.rows() + j, m) = a(i, m) * b(j, m);
  return out;
}

/// Steering matrix written out from the plane-wave phase with positions in
/// metres, lambda = 1 and spacing lambda / 2.
inline Eigen::MatrixXcd plane_wave(const std::vector<int>& pos, const std::vector<double>& doas_deg) {
  Eigen::MatrixXcd a(static_cast<Eigen::Index>(pos.size()), static_cast<Eigen::Index>(doas_deg.size()));
  const double lambda = 1.0;
  for (std::size_t n = 0; n < pos.size(); ++n)
    for (std::size_t m = 0; m < doas_deg.size(); ++m) {
      const double x = pos[n] * lambda / 2.0;
      const double arg = -2.0 * std::numbers::pi * x * std::sin(doas_deg[m] * std::numbers::pi / 180.0) / lambda;
      a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) = std::exp(std::complex<double>(0.0, arg));
    }
  return a;
}

/// Reads the virtual lag off the phase of a unit-modulus single-source
/// manifold entry exp(-j pi lag sin(theta)); requires no phase wrapping.
inline int lag_from_phase(std::complex<double> entry, double theta_deg) {
  const double s = std::sin(theta_deg * std::numbers::pi / 180.0);
  return static_cast<int>(std::lround(-std::arg(entry) / (std::numbers::pi * s)));
}

/// Distinct non-negative positions including 0, at most `max_n` sensors.
inline std::vector<int> random_geometry(std::mt19937_64& rng, int max_n, int max_pos, int min_n = 1) {
  std::uniform_int_distribution<int> count(min_n, max_n);
  std::uniform_int_distribution<int> where(1, max_pos);
  const int n = count(rng);
  std::set<int> s{0};
  while (static_cast<int>(s.size()) < n) s.insert(where(rng));
  return {s.begin(), s.end()};
}

/// Strictly increasing DOAs in (-80, 80), at least `gap` degrees apart.
inline std::vector<double> random_doas(std::mt19937_64& rng, int m, double gap = 2.0) {
  std::uniform_real_distribution<double> u(-80.0, 80.0);
  for (;;) {
    std::vector<double> d(static_cast<std::size_t>(m));
    for (auto& x : d) x = u(rng);
    std::sort(d.begin(), d.end());
    bool ok = true;
    for (std::size_t i = 1; i < d.size(); ++i) ok = ok && d[i] - d[i - 1] > gap;
    if (ok) return d;
  }
}

}  // namespace oracle
