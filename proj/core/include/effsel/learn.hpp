#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "effsel/data.hpp"

namespace effsel {

// Dense row-major matrix of samples x features.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Per-column z-scoring fitted on training rows. Columns with zero spread keep sd = 1.
struct Scaler {
  std::vector<double> mean;
  std::vector<double> sd;

  static Scaler fit(const Matrix& x);
  void apply(std::span<const double> in, std::span<double> out) const;
};

struct SvmModel {
  std::vector<double> w;
  double b = 0.0;
  Scaler scaler;
  std::size_t iterations = 0;

  // w . standardize(x) + b
  double decision(std::span<const double> x) const;
  // +1 when the decision score is >= 0, else -1.
  int predict(std::span<const double> x) const { return decision(x) >= 0.0 ? 1 : -1; }
};

struct SvmOptions {
  double c = 1.0;
  double tol = 1e-4;
  std::size_t max_iter = 100'000;
  std::uint64_t seed = 0;  // coordinate visiting order
};

// Soft-margin linear SVM, (1/2)|w|^2 + c * sum hinge(y_i s(x_i)), solved by dual
// coordinate descent with shrinking on standardized features. The bias is
// learned as the weight of a constant unit feature. Labels must be +1 / -1
// with both present; throws ConvergenceError when max_iter passes elapse
// before the projected-gradient gap falls below tol.
SvmModel train_svm(const Matrix& x, std::span<const int> y, const SvmOptions& opt = {});

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
};

// Metrics for one test fold. An empty optional marks a rate whose denominator
// is zero (for instance TPR on a fold with no positives).
struct FoldMetrics {
  std::optional<double> tpr;
  std::optional<double> fpr;
  std::optional<double> tnr;
  double acc = 0.0;
  std::optional<double> auc;
};

// Area under the ROC curve by the trapezoidal rule; tied scores count half
// (midranks). Empty when either class is absent. labels: +1 / -1.
std::optional<double> roc_auc(std::span<const double> scores, std::span<const int> labels);

FoldMetrics metrics_from_counts(const ConfusionCounts& c, std::span<const double> scores,
                                std::span<const int> labels);

struct EvalMetrics {
  std::optional<double> tpr;
  std::optional<double> fpr;
  std::optional<double> tnr;
  double acc = 0.0;
  std::optional<double> auc;
  std::size_t folds = 0;
  std::size_t repeats = 0;
  std::size_t num_features = 0;
};

struct CvOptions {
  std::size_t folds = 10;
  std::size_t repeats = 20;
  double c = 1.0;
  std::uint64_t seed = 42;
};

// Assignment of each sample to a fold for one repeat, stratified by class.
std::vector<std::size_t> stratified_folds(std::span<const Label> labels, std::size_t folds, std::uint64_t seed,
                                          std::size_t repeat);

// Repeated stratified k-fold evaluation of a linear SVM on the named features.
// Scaling is fitted on each training split only. Each metric is averaged over
// the folds where it is defined.
EvalMetrics cross_validate(const Dataset& ds, std::span<const std::string> selected, const CvOptions& opt);

}  // namespace effsel
