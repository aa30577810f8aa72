#include "cascade/cli/csv.hpp"

#include <cmath>
#include <cstdio>

namespace cascade::cli {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, std::string_view schema,
                     std::initializer_list<std::string_view> header)
    : out_(out) {
  out_ << "# schema=" << schema << "/v1\n";
  for (auto name : header) field(name);
  end_row();
}

CsvWriter& CsvWriter::field(std::string_view text) {
  if (row_open_) out_ << ',';
  out_ << text;
  row_open_ = true;
  return *this;
}

CsvWriter& CsvWriter::field(double x) { return field(format_number(x)); }

CsvWriter& CsvWriter::field(long long x) { return field(std::to_string(x)); }

void CsvWriter::end_row() {
  out_ << '\n';
  row_open_ = false;
}

void CsvWriter::comment(std::string_view text) {
  if (row_open_) end_row();
  out_ << "# " << text << '\n';
}

}  // namespace cascade::cli
