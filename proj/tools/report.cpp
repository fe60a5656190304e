#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

#include "effsel/data.hpp"
#include "effsel/error.hpp"

namespace effsel::cli {

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void csv_line(const std::vector<std::string>& cells, std::ostream& out) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << csv_escape(cells[i]);
  }
  out << '\n';
}

std::string md_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

void Report::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) {
    throw DomainError("report row has " + std::to_string(row.size()) + " cells, expected " +
                      std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

std::size_t Report::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw DomainError("report has no column '" + std::string(name) + "'");
}

const std::string& Report::cell(std::size_t row, std::string_view name) const {
  if (row >= rows.size()) throw DomainError("report row out of range");
  return rows[row][column(name)];
}

std::string fmt(double v) {
  if (std::isnan(v)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string s = buf;
  if (s == "-0.0000") s = "0.0000";
  return s;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : "NA"; }

void write_csv(const Report& r, std::ostream& out) {
  out << "# " << r.provenance << '\n';
  csv_line(r.columns, out);
  for (const auto& row : r.rows) csv_line(row, out);
}

void write_md(const Report& r, std::ostream& out) {
  out << "<!-- " << r.provenance << " -->\n\n|";
  for (const auto& c : r.columns) out << ' ' << md_escape(c) << " |";
  out << "\n|";
  for (std::size_t i = 0; i < r.columns.size(); ++i) out << " --- |";
  out << '\n';
  for (const auto& row : r.rows) {
    out << '|';
    for (const auto& c : row) out << ' ' << md_escape(c) << " |";
    out << '\n';
  }
}

void write(const Report& r, Format f, std::ostream& out) {
  if (f == Format::csv)
    write_csv(r, out);
  else
    write_md(r, out);
}

Report parse_csv_report(std::istream& in) {
  Report r;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw ParseError("report: missing provenance line");
  r.provenance = line.substr(2);
  if (!std::getline(in, line)) throw ParseError("report: missing header row");
  r.columns = split_csv_record(line);
  while (std::getline(in, line)) {
    // A quoted cell may span lines.
    while (std::count(line.begin(), line.end(), '"') % 2 != 0) {
      std::string more;
      if (!std::getline(in, more)) throw ParseError("report: unterminated quoted cell");
      line += '\n' + more;
    }
    auto cells = split_csv_record(line);
    if (cells.size() != r.columns.size()) throw ParseError("report: ragged row");
    r.rows.push_back(std::move(cells));
  }
  return r;
}

}  // namespace effsel::cli
