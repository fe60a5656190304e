#include "effsel/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "effsel/error.hpp"

namespace effsel {

namespace {

std::string trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  return in;
}

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

}  // namespace

Dataset::Dataset(std::vector<std::string> names, std::vector<double> values,
                 std::vector<Label> labels)
    : names_(std::move(names)), values_(std::move(values)), labels_(std::move(labels)) {
  const std::size_t f = names_.size();
  const std::size_t n = labels_.size();
  if (f < 1) throw DomainError("dataset needs at least one feature");
  if (n < 4) throw DomainError("dataset needs at least four samples, got " + std::to_string(n));
  if (values_.size() != f * n) throw DomainError("value matrix does not match F x N");
  if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); })) {
    throw DomainError("dataset contains non-finite values");
  }
  std::unordered_set<std::string> seen;
  for (const auto& name : names_) {
    if (!seen.insert(name).second) throw DomainError("duplicate feature name '" + name + "'");
  }
  num_positive_ = static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), Label::positive));
  if (num_positive_ < 2 || n - num_positive_ < 2) {
    throw DomainError("each class needs at least two samples (positive=" + std::to_string(num_positive_) +
                      ", negative=" + std::to_string(n - num_positive_) + ")");
  }
}

std::span<const double> Dataset::values(std::size_t feature) const {
  if (feature >= num_features()) {
    throw DomainError("feature index " + std::to_string(feature) + " out of range");
  }
  return std::span<const double>(values_).subspan(feature * num_samples(), num_samples());
}

std::size_t Dataset::index_of(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw DomainError("unknown feature '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

const std::vector<std::string>& wdbc_feature_names() {
  static const std::vector<std::string> names = [] {
    const char* base[] = {"radius",    "texture",   "perimeter",      "area",     "smoothness",
                          "compactness", "concavity", "concave points", "symmetry", "fractal dimension"};
    std::vector<std::string> out;
    for (const char* suffix : {"mean", "se", "worst"}) {
      for (const char* b : base) out.push_back(std::string(b) + " " + suffix);
    }
    return out;
  }();
  return names;
}

std::vector<std::string> split_csv_record(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw ParseError("unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

double parse_real(std::string_view field, std::string_view what) {
  const std::string s = trim(field);
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (s.empty() || ec != std::errc{} || ptr != last || !std::isfinite(v)) {
    throw ParseError(std::string(what) + ": not a finite real: '" + s + "'");
  }
  return v;
}

Dataset parse_wdbc(std::istream& in, const WarningSink& warn) {
  const auto& names = wdbc_feature_names();
  const std::size_t f = names.size();
  std::vector<std::vector<double>> rows;
  std::vector<Label> labels;
  std::unordered_map<std::string, std::size_t> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto fields = split_csv_record(line);
    if (fields.size() != f + 2) {
      throw ParseError(at_line(lineno) + "expected " + std::to_string(f + 2) + " fields, got " +
                       std::to_string(fields.size()));
    }
    const std::string id = trim(fields[0]);
    if (id.empty() || !std::all_of(id.begin(), id.end(), [](unsigned char c) { return std::isdigit(c); })) {
      throw ParseError(at_line(lineno) + "sample id must be an integer: '" + id + "'");
    }
    if (auto [it, fresh] = ids.emplace(id, lineno); !fresh && warn) {
      warn(at_line(lineno) + "duplicate sample id " + id + " (first seen on line " +
           std::to_string(it->second) + ")");
    }
    const std::string diagnosis = trim(fields[1]);
    if (diagnosis == "M") {
      labels.push_back(Label::positive);
    } else if (diagnosis == "B") {
      labels.push_back(Label::negative);
    } else {
      throw ParseError(at_line(lineno) + "unknown diagnosis code '" + diagnosis + "'");
    }
    std::vector<double> row(f);
    for (std::size_t j = 0; j < f; ++j) row[j] = parse_real(fields[j + 2], at_line(lineno) + names[j]);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("no data rows");

  const std::size_t n = rows.size();
  std::vector<double> values(f * n);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t j = 0; j < f; ++j) values[j * n + s] = rows[s][j];
  }
  try {
    return Dataset(names, std::move(values), std::move(labels));
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

Dataset load_wdbc(const std::filesystem::path& path, const WarningSink& warn) {
  auto in = open_or_throw(path);
  return parse_wdbc(in, warn);
}

Dataset parse_generic(std::istream& in, std::string_view label_column, std::string_view positive_label) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    if (!trim(line).empty()) {
      header = split_csv_record(line);
      break;
    }
  }
  if (header.empty()) throw ParseError("empty file: no header row");
  for (auto& h : header) h = trim(h);

  auto label_it = std::find(header.begin(), header.end(), label_column);
  if (label_it == header.end()) {
    throw ParseError("missing label column '" + std::string(label_column) + "'");
  }
  const auto label_idx = static_cast<std::size_t>(label_it - header.begin());
  std::vector<std::string> names;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j != label_idx) names.push_back(header[j]);
  }
  if (names.empty()) throw ParseError("no feature columns");

  std::vector<std::vector<double>> rows;
  std::vector<Label> labels;
  std::set<std::string> distinct;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto fields = split_csv_record(line);
    if (fields.size() != header.size()) {
      throw ParseError(at_line(lineno) + "expected " + std::to_string(header.size()) + " fields, got " +
                       std::to_string(fields.size()));
    }
    const std::string label = trim(fields[label_idx]);
    distinct.insert(label);
    if (distinct.size() > 2) {
      throw ParseError(at_line(lineno) + "label column has more than two distinct values");
    }
    labels.push_back(label == positive_label ? Label::positive : Label::negative);
    std::vector<double> row;
    row.reserve(names.size());
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (j != label_idx) row.push_back(parse_real(fields[j], at_line(lineno) + header[j]));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("no data rows");
  if (distinct.size() != 2) throw ParseError("label column must have exactly two distinct values");
  if (!distinct.contains(std::string(positive_label))) {
    throw ParseError("positive label '" + std::string(positive_label) + "' does not occur");
  }

  const std::size_t f = names.size();
  const std::size_t n = rows.size();
  std::vector<double> values(f * n);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t j = 0; j < f; ++j) values[j * n + s] = rows[s][j];
  }
  try {
    return Dataset(std::move(names), std::move(values), std::move(labels));
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

Dataset load_generic(const std::filesystem::path& path, std::string_view label_column,
                     std::string_view positive_label) {
  auto in = open_or_throw(path);
  return parse_generic(in, label_column, positive_label);
}

namespace {

std::string csv_escape(std::string_view s) {
  if (s.find_first_of(",\"") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

void save_generic(const Dataset& ds, std::ostream& out, std::string_view label_column,
                  std::string_view positive_label, std::string_view negative_label) {
  for (const auto& name : ds.names()) out << csv_escape(name) << ',';
  out << csv_escape(label_column) << '\n';
  char buf[64];
  for (std::size_t s = 0; s < ds.num_samples(); ++s) {
    for (std::size_t j = 0; j < ds.num_features(); ++j) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, ds.value(j, s));
      out.write(buf, ptr - buf);
      out << ',';
    }
    out << (ds.labels()[s] == Label::positive ? positive_label : negative_label) << '\n';
  }
}

GroupedFeature group(const Dataset& ds, std::size_t feature) {
  auto row = ds.values(feature);
  GroupedFeature g;
  g.index = feature;
  g.name = ds.names()[feature];
  g.m.reserve(ds.num_positive());
  g.b.reserve(ds.num_negative());
  const auto labels = ds.labels();
  for (std::size_t s = 0; s < row.size(); ++s) {
    (labels[s] == Label::positive ? g.m : g.b).push_back(row[s]);
  }
  return g;
}

}  // namespace effsel
