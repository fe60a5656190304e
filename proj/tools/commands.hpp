#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "effsel/data.hpp"
#include "effsel/error.hpp"
#include "effsel/select.hpp"
#include "report.hpp"

namespace effsel::cli {

// Bad flags or flag combinations. Maps to exit code 2 like I/O failures.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::string command;
  std::string input;
  std::vector<Measure> measures;  // empty means all
  double alpha = 0.05;
  std::size_t b1 = 2000;
  std::size_t b2 = 200;
  std::size_t folds = 10;
  std::size_t repeats = 20;
  double c = 1.0;
  std::uint64_t seed = 42;
  unsigned threads = 0;
  Format format = Format::csv;
  std::string out;  // empty means stdout
  std::string label_column = "class";
  std::string positive_label = "M";

  // Throws UsageError unless 0 < alpha < 1, folds >= 2, repeats >= 1.
  void validate() const;
  bool wants(Measure m) const;
};

// UCI wdbc layout when the first field of the first line is an integer id,
// otherwise a header CSV with `label_column`.
Dataset load_input(const RunConfig& cfg);

// One row per feature: point estimates and intervals for the requested measures.
Report cmd_analyze(const RunConfig& cfg, const Dataset& ds);
// One row per measure: rule, cut, mean, observed range and selected features.
Report cmd_select(const RunConfig& cfg, const Dataset& ds);
// One row per selector: cross-validated linear SVM metrics on its features.
Report cmd_evaluate(const RunConfig& cfg, const Dataset& ds);
// Wall time of effect-size scoring and Relief on synthetic data at N = 500,
// 1000, 2000 with 30 features, with doubling ratios and scaling verdicts.
Report cmd_bench(const RunConfig& cfg);

// Parses `args` (without the program name), runs the command and writes the
// report. Returns 0 on success, 1 on a computation error, 2 on a usage or I/O error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace effsel::cli
