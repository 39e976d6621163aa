#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace ppgw {

/// Observed class frequencies f_0..f_M of a sample of size n >= 1.
/// Trailing zero classes are trimmed, so max_class() is the largest observed value.
class FrequencyTable {
 public:
  explicit FrequencyTable(std::vector<std::uint64_t> freqs);

  static FrequencyTable from_observations(std::span<const std::uint32_t> xs);

  std::span<const std::uint64_t> freqs() const { return freqs_; }
  std::uint64_t n() const { return n_; }
  std::uint64_t count(std::size_t m) const { return m < freqs_.size() ? freqs_[m] : 0; }
  std::size_t max_class() const { return freqs_.size() - 1; }

  /// x-bar = sum_j j f_j / n.
  double sample_mean() const;
  /// Z-bar = f_0 / n, the mean of the zero-class indicator.
  double zero_fraction() const;

  friend bool operator==(const FrequencyTable&, const FrequencyTable&) = default;

 private:
  std::vector<std::uint64_t> freqs_;
  std::uint64_t n_;
};

/// One nonnegative integer per line; blank lines and surrounding whitespace ignored.
FrequencyTable read_observations(std::istream& in);

/// CSV with a `class,count` header row, one class per row. Classes may be
/// listed in any order but not twice.
FrequencyTable read_frequency_csv(std::istream& in);

void write_observations(std::ostream& out, std::span<const std::uint32_t> xs);
void write_frequency_csv(std::ostream& out, const FrequencyTable& table);

}  // namespace ppgw
