#include "ppgw/frequency.hpp"

#include <charconv>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "ppgw/error.hpp"

namespace ppgw {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename Int>
Int parse_int(std::string_view field, std::size_t line_no, const char* what) {
  field = trim(field);
  Int value{};
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw ParseError("line " + std::to_string(line_no) + ": invalid " + what + " '" +
                     std::string(field) + "'");
  }
  return value;
}

}  // namespace

FrequencyTable::FrequencyTable(std::vector<std::uint64_t> freqs) : freqs_(std::move(freqs)) {
  while (!freqs_.empty() && freqs_.back() == 0) freqs_.pop_back();
  n_ = std::accumulate(freqs_.begin(), freqs_.end(), std::uint64_t{0});
  if (n_ == 0) throw DomainError("frequency table: total count must be at least 1");
}

FrequencyTable FrequencyTable::from_observations(std::span<const std::uint32_t> xs) {
  std::vector<std::uint64_t> freqs;
  for (auto x : xs) {
    if (x >= freqs.size()) freqs.resize(std::size_t{x} + 1, 0);
    ++freqs[x];
  }
  return FrequencyTable(std::move(freqs));
}

double FrequencyTable::sample_mean() const {
  long double total = 0;
  for (std::size_t j = 1; j < freqs_.size(); ++j) total += static_cast<long double>(j) * freqs_[j];
  return static_cast<double>(total / n_);
}

double FrequencyTable::zero_fraction() const {
  return static_cast<double>(count(0)) / static_cast<double>(n_);
}

FrequencyTable read_observations(std::istream& in) {
  std::vector<std::uint32_t> xs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto field = trim(line);
    if (field.empty()) continue;
    xs.push_back(parse_int<std::uint32_t>(field, line_no, "observation"));
  }
  if (xs.empty()) throw ParseError("observation file contains no values");
  return FrequencyTable::from_observations(xs);
}

FrequencyTable read_frequency_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  const auto header = trim(line);
  const auto comma = header.find(',');
  if (comma == std::string_view::npos || trim(header.substr(0, comma)) != "class" ||
      trim(header.substr(comma + 1)) != "count") {
    throw ParseError("frequency CSV: expected header 'class,count'");
  }

  std::vector<std::uint64_t> freqs;
  std::vector<bool> seen;
  while (std::getline(in, line)) {
    ++line_no;
    const auto row = trim(line);
    if (row.empty()) continue;
    const auto sep = row.find(',');
    if (sep == std::string_view::npos || row.find(',', sep + 1) != std::string_view::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected two columns");
    }
    const auto cls = parse_int<std::uint32_t>(row.substr(0, sep), line_no, "class");
    const auto cnt = parse_int<std::uint64_t>(row.substr(sep + 1), line_no, "count");
    if (cls >= freqs.size()) {
      freqs.resize(std::size_t{cls} + 1, 0);
      seen.resize(std::size_t{cls} + 1, false);
    }
    if (seen[cls]) throw ParseError("line " + std::to_string(line_no) + ": duplicate class " + std::to_string(cls));
    seen[cls] = true;
    freqs[cls] = cnt;
  }
  if (freqs.empty()) throw ParseError("frequency CSV contains no rows");
  return FrequencyTable(std::move(freqs));
}

void write_observations(std::ostream& out, std::span<const std::uint32_t> xs) {
  for (auto x : xs) out << x << '\n';
}

void write_frequency_csv(std::ostream& out, const FrequencyTable& table) {
  out << "class,count\n";
  for (std::size_t m = 0; m <= table.max_class(); ++m) out << m << ',' << table.count(m) << '\n';
}

}  // namespace ppgw
