#pragma once

// CSV writers for the inspection dumps.

#include <iomanip>
#include <ostream>
#include <vector>

#include "sdca/coarray.hpp"
#include "sdca/covariance.hpp"
#include "sdca/signal_model.hpp"
#include "sdca/span_test.hpp"
#include "sdca/ss_music.hpp"

namespace sdca::io {

namespace detail {
struct PrecisionGuard {
  explicit PrecisionGuard(std::ostream& os, int digits) : os_(os), old_(os.precision(digits)) {}
  ~PrecisionGuard() { os_.precision(old_); }
  std::ostream& os_;
  std::streamsize old_;
};
}  // namespace detail

/// `lag,weight`, one lag per line, ascending.
inline void write_lagset_csv(std::ostream& os, const LagSet& lags) {
  os << "lag,weight\n";
  for (const auto& e : lags.entries()) os << e.lag << ',' << e.weight << '\n';
}

/// Rows are sensors, columns snapshots; entries written as `re+imj`.
inline void write_snapshots_csv(std::ostream& os, const SnapshotBlock& block) {
  detail::PrecisionGuard guard(os, 17);
  for (Eigen::Index r = 0; r < block.data.rows(); ++r) {
    for (Eigen::Index c = 0; c < block.data.cols(); ++c) {
      const auto z = block.data(r, c);
      if (c) os << ',';
      os << z.real() << (std::signbit(z.imag()) ? "" : "+") << z.imag() << 'j';
    }
    os << '\n';
  }
}

inline void write_virtual_signal_csv(std::ostream& os, const VirtualSignal& vs) {
  detail::PrecisionGuard guard(os, 17);
  os << "lag,re,im\n";
  for (int l = -vs.max_lag; l <= vs.max_lag; ++l) {
    const auto z = vs.at(l);
    os << l << ',' << z.real() << ',' << z.imag() << '\n';
  }
}

inline void write_spectrum_csv(std::ostream& os, const Spectrum& sp) {
  detail::PrecisionGuard guard(os, 12);
  os << "theta_deg,pseudospectrum\n";
  for (std::size_t i = 0; i < sp.values.size(); ++i) os << sp.theta_deg[i] << ',' << sp.values[i] << '\n';
}

inline void write_lemma_csv(std::ostream& os, const std::vector<LemmaPoint>& points) {
  detail::PrecisionGuard guard(os, 17);
  os << "phi_rad,residual,holds\n";
  for (const auto& p : points) os << p.phi_rad << ',' << p.residual << ',' << (p.holds ? "true" : "false") << '\n';
}

}  // namespace sdca::io
