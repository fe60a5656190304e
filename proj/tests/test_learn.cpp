#include <catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "effsel/error.hpp"
#include "effsel/learn.hpp"
#include "fixtures.hpp"

using namespace effsel;
using Catch::Matchers::WithinAbs;
using effsel::testing::make_dataset;
using effsel::testing::wdbc;

namespace {

Matrix from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  return m;
}

}  // namespace

TEST_CASE("Scaler standardizes and leaves constant columns finite") {
  const auto x = from_rows({{1, 5}, {2, 5}, {3, 5}});
  const auto s = Scaler::fit(x);
  CHECK(s.mean == std::vector<double>{2, 5});
  CHECK(s.sd == std::vector<double>{1, 1});
  std::vector<double> out(2);
  s.apply(x.row(2), out);
  CHECK(out == std::vector<double>{1, 0});
}

TEST_CASE("SVM separates two points") {
  const auto x = from_rows({{-1.0}, {1.0}});
  const std::vector<int> y{-1, 1};
  const auto model = train_svm(x, y, {.c = 10.0});
  CHECK(model.predict(x.row(0)) == -1);
  CHECK(model.predict(x.row(1)) == 1);
  CHECK(model.w[0] > 0.0);
}

TEST_CASE("flipping labels negates the decision function") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> z;
  Matrix x(60, 3);
  std::vector<int> y(60), flipped(60);
  for (std::size_t i = 0; i < 60; ++i) {
    y[i] = i % 2 ? 1 : -1;
    flipped[i] = -y[i];
    for (std::size_t c = 0; c < 3; ++c) x(i, c) = z(rng) + 0.7 * y[i] * static_cast<double>(c);
  }
  const auto a = train_svm(x, y, {.tol = 1e-8});
  const auto b = train_svm(x, flipped, {.tol = 1e-8});
  for (std::size_t i = 0; i < 60; ++i) CHECK_THAT(a.decision(x.row(i)), WithinAbs(-b.decision(x.row(i)), 1e-4));
}

TEST_CASE("separable data with a large C keeps every margin") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  Matrix x(80, 2);
  std::vector<int> y(80);
  for (std::size_t i = 0; i < 80; ++i) {
    y[i] = i < 40 ? 1 : -1;
    x(i, 0) = u(rng) + 3.0 * y[i];
    x(i, 1) = u(rng);
  }
  const auto model = train_svm(x, y, {.c = 1000.0, .tol = 1e-6});
  for (std::size_t i = 0; i < 80; ++i) CHECK(y[i] * model.decision(x.row(i)) >= 1.0 - 1e-3);
}

TEST_CASE("XOR defeats a linear model") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> z(0.0, 0.2);
  std::vector<std::vector<double>> cols(2);
  std::vector<Label> labels;
  for (int i = 0; i < 400; ++i) {
    const int a = i % 2, b = (i / 2) % 2;
    cols[0].push_back(a + z(rng));
    cols[1].push_back(b + z(rng));
    labels.push_back(a != b ? Label::positive : Label::negative);
  }
  const auto ds = make_dataset({"a", "b"}, cols, labels);
  const std::vector<std::string> both{"a", "b"};
  const auto m = cross_validate(ds, both, {.folds = 5, .repeats = 2});
  CHECK(m.acc < 0.65);
}

TEST_CASE("metrics from a confusion matrix") {
  const ConfusionCounts c{.tp = 9, .fp = 2, .tn = 8, .fn = 1};
  const auto m = metrics_from_counts(c, {}, {});
  CHECK_THAT(*m.tpr, WithinAbs(0.9, 1e-15));
  CHECK_THAT(*m.fpr, WithinAbs(0.2, 1e-15));
  CHECK_THAT(*m.tnr, WithinAbs(0.8, 1e-15));
  CHECK_THAT(m.acc, WithinAbs(0.85, 1e-15));
  CHECK_THAT(m.acc, WithinAbs((*m.tpr * 10 + *m.tnr * 10) / 20, 1e-15));
  CHECK_FALSE(m.auc.has_value());

  const auto one_class = metrics_from_counts({.tp = 3, .fn = 1}, {}, {});
  CHECK(one_class.tpr.has_value());
  CHECK_FALSE(one_class.fpr.has_value());
  CHECK_FALSE(one_class.tnr.has_value());
}

TEST_CASE("ROC AUC") {
  const std::vector<int> labels{1, 1, -1, -1};
  CHECK(*roc_auc(std::vector<double>{0.9, 0.8, 0.1, 0.2}, labels) == 1.0);
  CHECK(*roc_auc(std::vector<double>{0.1, 0.2, 0.9, 0.8}, labels) == 0.0);
  CHECK(*roc_auc(std::vector<double>{0.5, 0.5, 0.5, 0.5}, labels) == 0.5);
  CHECK(*roc_auc(std::vector<double>{0.9, 0.2, 0.5, 0.1}, labels) == 0.75);
  CHECK_FALSE(roc_auc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}).has_value());

  // Invariant under a strictly increasing transform.
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z;
  std::vector<double> s(100), t(100);
  std::vector<int> y(100);
  for (std::size_t i = 0; i < 100; ++i) {
    y[i] = i % 3 ? 1 : -1;
    s[i] = z(rng) + 0.5 * y[i];
    t[i] = std::exp(2.0 * s[i]) + 7.0;
  }
  CHECK_THAT(*roc_auc(s, y), WithinAbs(*roc_auc(t, y), 1e-15));
}

TEST_CASE("stratified folds balance the classes") {
  std::vector<Label> labels;
  for (int i = 0; i < 212; ++i) labels.push_back(Label::positive);
  for (int i = 0; i < 357; ++i) labels.push_back(Label::negative);
  const auto folds = stratified_folds(labels, 10, 42, 0);
  std::vector<int> pos(10), neg(10);
  for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] == Label::positive ? pos : neg)[folds[i]]++;
  for (int k = 0; k < 10; ++k) {
    CHECK((pos[k] == 21 || pos[k] == 22));
    CHECK((neg[k] == 35 || neg[k] == 36));
  }
  CHECK(stratified_folds(labels, 10, 42, 0) == folds);
  CHECK(stratified_folds(labels, 10, 42, 1) != folds);
}

TEST_CASE("scaling is fitted on training rows only") {
  // Changing held-out rows must not move the model trained on the others.
  std::mt19937_64 rng(8);
  std::normal_distribution<double> z;
  Matrix train(50, 2);
  std::vector<int> y(50);
  for (std::size_t i = 0; i < 50; ++i) {
    y[i] = i % 2 ? 1 : -1;
    train(i, 0) = z(rng) + y[i];
    train(i, 1) = z(rng);
  }
  const auto a = train_svm(train, y);
  const auto b = train_svm(train, y);
  CHECK(a.w == b.w);
  CHECK(a.b == b.b);
  CHECK(a.scaler.mean == Scaler::fit(train).mean);
}

TEST_CASE("cross-validation is deterministic and honest on noise") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> z;
  std::bernoulli_distribution coin(0.4);
  std::vector<std::vector<double>> cols(4);
  std::vector<Label> labels;
  for (int i = 0; i < 300; ++i) {
    for (auto& c : cols) c.push_back(z(rng));
    labels.push_back(coin(rng) ? Label::positive : Label::negative);
  }
  const auto ds = make_dataset({"a", "b", "c", "d"}, cols, labels);
  const std::vector<std::string> all{"a", "b", "c", "d"};
  const CvOptions opt{.folds = 5, .repeats = 3, .seed = 9};
  const auto m1 = cross_validate(ds, all, opt);
  const auto m2 = cross_validate(ds, all, opt);
  CHECK(m1.acc == m2.acc);
  CHECK(*m1.auc == *m2.auc);
  CHECK_THAT(*m1.auc, WithinAbs(0.5, 0.1));
  CHECK(m1.folds == 5);
  CHECK(m1.repeats == 3);
  CHECK(m1.num_features == 4);
}

TEST_CASE("cross-validation input errors") {
  const auto& ds = wdbc();
  CHECK_THROWS_AS(cross_validate(ds, std::vector<std::string>{}, {}), DomainError);
  CHECK_THROWS(cross_validate(ds, std::vector<std::string>{"no such feature"}, {}));
}

TEST_CASE("linear SVM on strong WDBC features") {
  const std::vector<std::string> features{"radius worst", "concave points worst", "texture worst",
                                          "area worst", "concave points mean"};
  const auto m = cross_validate(wdbc(), features, {.folds = 10, .repeats = 2});
  CHECK(m.acc >= 0.92);
  CHECK(*m.auc >= 0.95);
}
