#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <ostream>
#include <string>
#include <string_view>

namespace entsim {

/// Locale-independent number rendering for tabular output: 9 significant
/// digits, general format with trailing zeros trimmed, '.' as the decimal
/// separator.  Identical inputs always yield identical bytes.
inline std::string format_table_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::general, 9);
  return std::string(buf.data(), res.ptr);
}

/// Minimal separated-values writer.  Cells are appended with add, rows
/// closed with end_row.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, char separator = ',')
      : out_(out), separator_(separator) {}

  CsvWriter& add(std::string_view text) {
    if (!first_) out_ << separator_;
    first_ = false;
    out_ << text;
    return *this;
  }

  CsvWriter& add(double value) { return add(format_table_number(value)); }

  void end_row() {
    out_ << '\n';
    first_ = true;
  }

 private:
  std::ostream& out_;
  char separator_;
  bool first_ = true;
};

}  // namespace entsim
