#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace cascade::cli {

/// 17 significant digits; infinities as "inf"/"-inf", NaN as "nan".
[[nodiscard]] std::string format_number(double x);

/// CSV emitter that opens with a "# schema=<name>/v1" line.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::string_view schema,
            std::initializer_list<std::string_view> header);

  CsvWriter& field(std::string_view text);
  CsvWriter& field(double x);
  CsvWriter& field(long long x);
  CsvWriter& field(int x) { return field(static_cast<long long>(x)); }
  CsvWriter& empty() { return field(std::string_view{}); }
  void end_row();

  /// Writes "# <text>".
  void comment(std::string_view text);

 private:
  std::ostream& out_;
  bool row_open_ = false;
};

}  // namespace cascade::cli
