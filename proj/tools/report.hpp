#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace effsel::cli {

enum class Format { csv, md };

// A table with a one-line provenance header. Cells are preformatted strings.
struct Report {
  std::string provenance;  // without the leading "# "
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  // Index of a column by name; throws DomainError when absent.
  std::size_t column(std::string_view name) const;
  const std::string& cell(std::size_t row, std::string_view column) const;

  bool operator==(const Report&) const = default;
};

// Fixed four-decimal rendering; "NA" for an empty value or a NaN.
std::string fmt(double v);
std::string fmt(const std::optional<double>& v);

void write_csv(const Report& r, std::ostream& out);
void write_md(const Report& r, std::ostream& out);
void write(const Report& r, Format f, std::ostream& out);

// Inverse of write_csv. Throws ParseError on a malformed report.
Report parse_csv_report(std::istream& in);

}  // namespace effsel::cli
