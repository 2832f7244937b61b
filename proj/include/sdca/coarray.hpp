#pragma once

// Integer set algebra over sensor positions: difference and signed-sum
// co-arrays, their union (the sum-difference co-array), a disjoint
// partition of that union, and contiguous virtual-ULA extraction.
//
// All positions and lags are integers in units of half a wavelength.

#include <algorithm>
#include <array>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sdca {

/// Physical sensor positions, sorted and shifted so the first sensor sits at 0.
class SensorArray {
 public:
  SensorArray(std::initializer_list<int> positions)
      : SensorArray(std::vector<int>(positions)) {}

  explicit SensorArray(std::vector<int> positions) : positions_(std::move(positions)) {
    if (positions_.empty()) throw std::invalid_argument("sensor array must not be empty");
    std::sort(positions_.begin(), positions_.end());
    if (std::adjacent_find(positions_.begin(), positions_.end()) != positions_.end())
      throw std::invalid_argument("sensor positions must be distinct");
    const int origin = positions_.front();
    for (auto& p : positions_) p -= origin;
  }

  const std::vector<int>& positions() const noexcept { return positions_; }
  std::size_t size() const noexcept { return positions_.size(); }
  int operator[](std::size_t i) const { return positions_[i]; }
  int aperture() const noexcept { return positions_.back(); }

  friend bool operator==(const SensorArray&, const SensorArray&) = default;

 private:
  std::vector<int> positions_;
};

/// Sorted set of virtual lags with the number of ordered sensor pairs
/// generating each one.
class LagSet {
 public:
  struct Entry {
    int lag;
    int weight;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  LagSet() = default;

  static LagSet from_counts(const std::map<int, int>& counts) {
    LagSet out;
    out.entries_.reserve(counts.size());
    for (const auto& [lag, weight] : counts) {
      if (weight < 1) throw std::invalid_argument("lag weight must be positive");
      out.entries_.push_back({lag, weight});
    }
    return out;
  }

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  std::vector<int> lags() const {
    std::vector<int> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.lag);
    return out;
  }

  bool contains(int lag) const { return find(lag) != entries_.end(); }

  /// Zero when the lag is absent.
  int weight(int lag) const {
    auto it = find(lag);
    return it == entries_.end() ? 0 : it->weight;
  }

  long total_weight() const noexcept {
    long total = 0;
    for (const auto& e : entries_) total += e.weight;
    return total;
  }

  LagSet negated() const {
    LagSet out;
    out.entries_.reserve(entries_.size());
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
      out.entries_.push_back({-it->lag, it->weight});
    return out;
  }

  friend bool operator==(const LagSet&, const LagSet&) = default;

 private:
  std::vector<Entry>::const_iterator find(int lag) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), lag,
                               [](const Entry& e, int l) { return e.lag < l; });
    return (it != entries_.end() && it->lag == lag) ? it : entries_.end();
  }

  std::vector<Entry> entries_;
};

/// The three generating co-arrays of the SDCA.
enum class Coarray { difference, positive_sum, negative_sum };

inline const char* to_string(Coarray c) {
  switch (c) {
    case Coarray::difference: return "difference";
    case Coarray::positive_sum: return "positive_sum";
    case Coarray::negative_sum: return "negative_sum";
  }
  return "?";
}

/// { x_p - x_q } over all ordered pairs.
inline LagSet difference_coarray(const SensorArray& arr) {
  std::map<int, int> counts;
  for (int p : arr.positions())
    for (int q : arr.positions()) ++counts[p - q];
  return LagSet::from_counts(counts);
}

/// { sign * (x_p + x_q) } over all ordered pairs; sign must be +1 or -1.
inline LagSet sum_coarray(const SensorArray& arr, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("sum co-array sign must be +1 or -1");
  std::map<int, int> counts;
  for (int p : arr.positions())
    for (int q : arr.positions()) ++counts[sign * (p + q)];
  return LagSet::from_counts(counts);
}

inline LagSet coarray(const SensorArray& arr, Coarray which) {
  switch (which) {
    case Coarray::difference: return difference_coarray(arr);
    case Coarray::positive_sum: return sum_coarray(arr, +1);
    case Coarray::negative_sum: return sum_coarray(arr, -1);
  }
  throw std::invalid_argument("unknown co-array");
}

/// Union of the difference and both sum co-arrays; weights add across the three.
inline LagSet sum_difference_coarray(const SensorArray& arr) {
  std::map<int, int> counts;
  for (auto which : {Coarray::difference, Coarray::positive_sum, Coarray::negative_sum}) {
    const LagSet set = coarray(arr, which);
    for (const auto& e : set.entries()) counts[e.lag] += e.weight;
  }
  return LagSet::from_counts(counts);
}

/// Order in which the generating co-arrays claim a shared lag.
using PartitionPrecedence = std::array<Coarray, 3>;

inline constexpr PartitionPrecedence kDifferenceFirst{Coarray::difference, Coarray::positive_sum,
                                                      Coarray::negative_sum};
inline constexpr PartitionPrecedence kPositiveSumFirst{Coarray::positive_sum, Coarray::difference,
                                                       Coarray::negative_sum};

/// Disjoint truncations of the three co-arrays whose union is the SDCA.
/// Each part keeps the weights of the co-array it was taken from.
struct SdcaPartition {
  LagSet d1bar;  // from the difference co-array
  LagSet d2bar;  // from the positive-sum co-array
  LagSet d3bar;  // from the negative-sum co-array

  const LagSet& part(Coarray c) const {
    switch (c) {
      case Coarray::difference: return d1bar;
      case Coarray::positive_sum: return d2bar;
      case Coarray::negative_sum: return d3bar;
    }
    throw std::invalid_argument("unknown co-array");
  }

  /// Which part owns `lag`, if any.
  const LagSet* owner(int lag, Coarray* which = nullptr) const {
    for (auto c : {Coarray::difference, Coarray::positive_sum, Coarray::negative_sum}) {
      if (part(c).contains(lag)) {
        if (which) *which = c;
        return &part(c);
      }
    }
    return nullptr;
  }
};

inline SdcaPartition partition_sdca(const SensorArray& arr,
                                    const PartitionPrecedence& precedence = kDifferenceFirst) {
  std::map<Coarray, std::map<int, int>> kept;
  std::map<int, bool> claimed;
  for (auto which : precedence) {
    auto& bucket = kept[which];
    const LagSet set = coarray(arr, which);
    for (const auto& e : set.entries()) {
      if (claimed[e.lag]) continue;
      claimed[e.lag] = true;
      bucket[e.lag] = e.weight;
    }
  }
  return {LagSet::from_counts(kept[Coarray::difference]),
          LagSet::from_counts(kept[Coarray::positive_sum]),
          LagSet::from_counts(kept[Coarray::negative_sum])};
}

/// Closed integer interval of lags.
struct LagInterval {
  int lo;
  int hi;
  int length() const noexcept { return hi - lo + 1; }
  friend bool operator==(const LagInterval&, const LagInterval&) = default;
};

/// Maximal run of consecutive lags containing 0.
inline LagInterval contiguous_segment(const LagSet& lags) {
  if (!lags.contains(0)) throw std::invalid_argument("lag set does not contain lag 0");
  LagInterval seg{0, 0};
  while (lags.contains(seg.hi + 1)) ++seg.hi;
  while (lags.contains(seg.lo - 1)) --seg.lo;
  return seg;
}

}  // namespace sdca
