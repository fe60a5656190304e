#include "effsel/learn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "effsel/error.hpp"
#include "effsel/random.hpp"

namespace effsel {

Scaler Scaler::fit(const Matrix& x) {
  Scaler s;
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  s.mean.assign(p, 0.0);
  s.sd.assign(p, 1.0);
  if (n == 0) return s;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) s.mean[j] += x(i, j);
  }
  for (auto& m : s.mean) m /= static_cast<double>(n);
  if (n < 2) return s;
  std::vector<double> ss(p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      const double d = x(i, j) - s.mean[j];
      ss[j] += d * d;
    }
  }
  for (std::size_t j = 0; j < p; ++j) {
    const double sd = std::sqrt(ss[j] / static_cast<double>(n - 1));
    s.sd[j] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

void Scaler::apply(std::span<const double> in, std::span<double> out) const {
  for (std::size_t j = 0; j < in.size(); ++j) out[j] = (in[j] - mean[j]) / sd[j];
}

double SvmModel::decision(std::span<const double> x) const {
  double s = b;
  for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * (x[j] - scaler.mean[j]) / scaler.sd[j];
  return s;
}

SvmModel train_svm(const Matrix& x, std::span<const int> y, const SvmOptions& opt) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  if (y.size() != n) throw DomainError("train_svm: label count does not match rows");
  if (!(opt.c > 0.0)) throw DomainError("train_svm: c must be positive");
  std::size_t npos = 0;
  for (int v : y) {
    if (v != 1 && v != -1) throw DomainError("train_svm: labels must be +1 or -1");
    npos += v == 1;
  }
  if (npos == 0 || npos == n) throw DomainError("train_svm: both classes are required");

  SvmModel model;
  model.scaler = Scaler::fit(x);

  // Standardized design with a trailing unit column for the bias.
  const std::size_t q = p + 1;
  std::vector<double> z(n * q);
  for (std::size_t i = 0; i < n; ++i) {
    model.scaler.apply(x.row(i), std::span<double>(z.data() + i * q, p));
    z[i * q + p] = 1.0;
  }

  std::vector<double> w(q, 0.0);
  std::vector<double> alpha(n, 0.0);
  std::vector<double> qd(n);
  std::vector<std::size_t> index(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < q; ++j) s += z[i * q + j] * z[i * q + j];
    qd[i] = s;
    index[i] = i;
  }

  const double upper = opt.c;
  constexpr double inf = std::numeric_limits<double>::infinity();
  double pg_max_old = inf;
  double pg_min_old = -inf;
  std::size_t active = n;
  std::mt19937_64 rng(derive_seed(opt.seed, "svm"));
  std::size_t iter = 0;
  bool converged = false;

  while (iter < opt.max_iter) {
    double pg_max_new = -inf;
    double pg_min_new = inf;
    for (std::size_t i = 0; i < active; ++i) {
      std::swap(index[i], index[i + bounded(rng, active - i)]);
    }
    for (std::size_t s = 0; s < active; ++s) {
      const std::size_t i = index[s];
      const double yi = y[i];
      const double* zi = &z[i * q];
      double g = 0.0;
      for (std::size_t j = 0; j < q; ++j) g += w[j] * zi[j];
      g = yi * g - 1.0;

      double pg = 0.0;
      if (alpha[i] == 0.0) {
        if (g > pg_max_old) {
          --active;
          std::swap(index[s], index[active]);
          --s;
          continue;
        }
        if (g < 0.0) pg = g;
      } else if (alpha[i] == upper) {
        if (g < pg_min_old) {
          --active;
          std::swap(index[s], index[active]);
          --s;
          continue;
        }
        if (g > 0.0) pg = g;
      } else {
        pg = g;
      }
      pg_max_new = std::max(pg_max_new, pg);
      pg_min_new = std::min(pg_min_new, pg);

      if (std::fabs(pg) > 1e-12) {
        const double old = alpha[i];
        alpha[i] = std::min(std::max(old - g / qd[i], 0.0), upper);
        const double delta = (alpha[i] - old) * yi;
        for (std::size_t j = 0; j < q; ++j) w[j] += delta * zi[j];
      }
    }
    ++iter;

    if (pg_max_new - pg_min_new <= opt.tol) {
      if (active == n) {
        converged = true;
        break;
      }
      // Shrinking may have hidden violators; recheck every coordinate.
      active = n;
      pg_max_old = inf;
      pg_min_old = -inf;
      continue;
    }
    pg_max_old = pg_max_new > 0.0 ? pg_max_new : inf;
    pg_min_old = pg_min_new < 0.0 ? pg_min_new : -inf;
  }
  if (!converged) {
    throw ConvergenceError("train_svm: no convergence after " + std::to_string(opt.max_iter) + " passes");
  }

  model.w.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(p));
  model.b = w[p];
  model.iterations = iter;
  return model;
}

std::optional<double> roc_auc(std::span<const double> scores, std::span<const int> labels) {
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double rank_sum = 0.0;
  std::size_t npos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) {
      if (labels[order[k]] == 1) {
        rank_sum += midrank;
        ++npos;
      }
    }
    i = j + 1;
  }
  const std::size_t nneg = n - npos;
  if (npos == 0 || nneg == 0) return std::nullopt;
  const double p = static_cast<double>(npos);
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * static_cast<double>(nneg));
}

FoldMetrics metrics_from_counts(const ConfusionCounts& c, std::span<const double> scores,
                                std::span<const int> labels) {
  if (c.total() == 0) throw DomainError("metrics_from_counts: no predictions");
  auto ratio = [](std::size_t num, std::size_t den) -> std::optional<double> {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
  };
  FoldMetrics m;
  m.tpr = ratio(c.tp, c.tp + c.fn);
  m.fpr = ratio(c.fp, c.fp + c.tn);
  m.tnr = ratio(c.tn, c.fp + c.tn);
  m.acc = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  m.auc = roc_auc(scores, labels);
  return m;
}

std::vector<std::size_t> stratified_folds(std::span<const Label> labels, std::size_t folds, std::uint64_t seed,
                                          std::size_t repeat) {
  if (folds < 2) throw DomainError("need at least two folds");
  std::mt19937_64 rng(derive_seed(derive_seed(seed, "cv"), repeat));
  std::vector<std::size_t> out(labels.size());
  for (Label cls : {Label::positive, Label::negative}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) idx.push_back(i);
    }
    // Fisher-Yates with the library's bounded draw, identical on every platform.
    for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[bounded(rng, i)]);
    for (std::size_t k = 0; k < idx.size(); ++k) out[idx[k]] = k % folds;
  }
  return out;
}

namespace {

struct Accumulator {
  double sum = 0.0;
  std::size_t count = 0;

  void add(const std::optional<double>& v) {
    if (v) {
      sum += *v;
      ++count;
    }
  }
  std::optional<double> mean() const {
    if (count == 0) return std::nullopt;
    return sum / static_cast<double>(count);
  }
};

}  // namespace

EvalMetrics cross_validate(const Dataset& ds, std::span<const std::string> selected, const CvOptions& opt) {
  if (selected.empty()) throw DomainError("cross_validate: empty feature set");
  if (opt.folds < 2) throw DomainError("cross_validate: need at least two folds");
  if (opt.repeats < 1) throw DomainError("cross_validate: need at least one repeat");
  std::vector<std::size_t> cols;
  for (const auto& name : selected) cols.push_back(ds.index_of(name));

  const std::size_t n = ds.num_samples();
  const std::size_t p = cols.size();
  const auto labels = ds.labels();

  Accumulator tpr, fpr, tnr, acc, auc;
  for (std::size_t r = 0; r < opt.repeats; ++r) {
    const auto fold_of = stratified_folds(labels, opt.folds, opt.seed, r);
    for (std::size_t k = 0; k < opt.folds; ++k) {
      std::vector<std::size_t> train, test;
      for (std::size_t i = 0; i < n; ++i) (fold_of[i] == k ? test : train).push_back(i);
      if (test.empty()) throw DomainError("cross_validate: empty test fold; too many folds for the data");

      Matrix xtr(train.size(), p);
      std::vector<int> ytr(train.size());
      bool has_pos = false, has_neg = false;
      for (std::size_t a = 0; a < train.size(); ++a) {
        for (std::size_t j = 0; j < p; ++j) xtr(a, j) = ds.value(cols[j], train[a]);
        ytr[a] = labels[train[a]] == Label::positive ? 1 : -1;
        (ytr[a] == 1 ? has_pos : has_neg) = true;
      }
      if (!has_pos || !has_neg) {
        throw DomainError("cross_validate: training split of fold " + std::to_string(k) + " lacks a class");
      }
      SvmOptions so;
      so.c = opt.c;
      so.seed = derive_seed(opt.seed, r, k);
      const auto model = train_svm(xtr, ytr, so);

      ConfusionCounts cc;
      std::vector<double> scores(test.size());
      std::vector<int> yte(test.size());
      std::vector<double> row(p);
      for (std::size_t a = 0; a < test.size(); ++a) {
        for (std::size_t j = 0; j < p; ++j) row[j] = ds.value(cols[j], test[a]);
        scores[a] = model.decision(row);
        yte[a] = labels[test[a]] == Label::positive ? 1 : -1;
        const bool pred_pos = scores[a] >= 0.0;
        if (yte[a] == 1) {
          (pred_pos ? cc.tp : cc.fn)++;
        } else {
          (pred_pos ? cc.fp : cc.tn)++;
        }
      }
      const auto fm = metrics_from_counts(cc, scores, yte);
      tpr.add(fm.tpr);
      fpr.add(fm.fpr);
      tnr.add(fm.tnr);
      acc.add(fm.acc);
      auc.add(fm.auc);
    }
  }

  EvalMetrics out;
  out.tpr = tpr.mean();
  out.fpr = fpr.mean();
  out.tnr = tnr.mean();
  out.acc = acc.mean().value_or(0.0);
  out.auc = auc.mean();
  out.folds = opt.folds;
  out.repeats = opt.repeats;
  out.num_features = p;
  return out;
}

}  // namespace effsel
