#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace effsel {

enum class Label : std::uint8_t { negative = 0, positive = 1 };

// Two-class tabular data stored feature-major: values(i) is the row of
// feature i across all N samples.
//
// Invariants (checked on construction, Dataset is immutable afterwards):
//   F >= 1, N >= 4, every value finite, names unique,
//   each class has at least two samples.
class Dataset {
 public:
  // `values` is F*N, feature-major. Throws DomainError on any violated invariant.
  Dataset(std::vector<std::string> names, std::vector<double> values, std::vector<Label> labels);

  std::size_t num_features() const noexcept { return names_.size(); }
  std::size_t num_samples() const noexcept { return labels_.size(); }
  std::size_t num_positive() const noexcept { return num_positive_; }
  std::size_t num_negative() const noexcept { return num_samples() - num_positive_; }

  const std::vector<std::string>& names() const noexcept { return names_; }
  std::span<const Label> labels() const noexcept { return labels_; }
  std::span<const double> values(std::size_t feature) const;
  double value(std::size_t feature, std::size_t sample) const {
    return values_[feature * num_samples() + sample];
  }

  // Index of the feature with the given name; throws DomainError if absent.
  std::size_t index_of(std::string_view name) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<double> values_;
  std::vector<Label> labels_;
  std::size_t num_positive_ = 0;
};

// One feature split by class, in order of appearance.
struct GroupedFeature {
  std::vector<double> m;  // positive (malignant) samples
  std::vector<double> b;  // negative (benign) samples
  std::size_t index = 0;
  std::string name;
};

using WarningSink = std::function<void(std::string_view)>;

// Feature names of the UCI Wisconsin diagnostic file, in file order.
const std::vector<std::string>& wdbc_feature_names();

// UCI `wdbc.data`: no header, `id,diagnosis,f1..f30`, diagnosis in {M, B}.
// Duplicate IDs are reported through `warn` but do not fail the load.
Dataset load_wdbc(const std::filesystem::path& path, const WarningSink& warn = {});
Dataset parse_wdbc(std::istream& in, const WarningSink& warn = {});

// Header CSV with a two-valued label column; every other column must be numeric
// and becomes a feature in file order.
Dataset load_generic(const std::filesystem::path& path, std::string_view label_column,
                     std::string_view positive_label);
Dataset parse_generic(std::istream& in, std::string_view label_column,
                      std::string_view positive_label);

// Writes a header CSV readable by load_generic. Values use the shortest
// round-trip representation, so save then load reproduces the dataset exactly.
void save_generic(const Dataset& ds, std::ostream& out, std::string_view label_column = "class",
                  std::string_view positive_label = "M", std::string_view negative_label = "B");

GroupedFeature group(const Dataset& ds, std::size_t feature);

// Splits one CSV record (RFC-4180 quoting, no embedded newlines).
std::vector<std::string> split_csv_record(std::string_view line);

// Strict full-precision real parse: period decimal only, whole field consumed,
// finite result. Throws ParseError naming `what` otherwise.
double parse_real(std::string_view field, std::string_view what);

}  // namespace effsel
