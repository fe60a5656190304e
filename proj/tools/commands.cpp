#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "effsel/ci.hpp"
#include "effsel/effect.hpp"
#include "effsel/learn.hpp"
#include "effsel/random.hpp"

namespace effsel::cli {

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string provenance(const RunConfig& cfg) {
  std::ostringstream s;
  s << "effsel " << kVersion << " command=" << cfg.command;
  if (!cfg.input.empty()) s << " input=" << std::filesystem::path(cfg.input).filename().string();
  s << " seed=" << cfg.seed << " alpha=" << cfg.alpha << " b1=" << cfg.b1 << " b2=" << cfg.b2
    << " folds=" << cfg.folds << " repeats=" << cfg.repeats << " c=" << cfg.c;
  return s.str();
}

std::string join(const std::vector<std::string>& v, const char* sep = ";") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

bool looks_like_wdbc(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::string line;
  while (std::getline(in, line) && line.find_first_not_of(" \t\r") == std::string::npos) {
  }
  const auto first = line.substr(0, line.find(','));
  return !first.empty() && std::all_of(first.begin(), first.end(), [](unsigned char c) { return std::isdigit(c); });
}

// The five effect-size selections plus their intersection and Relief.
struct Selections {
  std::vector<SelectionResult> effect;  // d, D, u1, u2, u3
  SelectionResult common;
  SelectionResult relief;

  const SelectionResult& get(Measure m) const {
    switch (m) {
      case Measure::common: return common;
      case Measure::relief: return relief;
      default: return effect[static_cast<std::size_t>(m)];
    }
  }
};

Selections select_all(const Dataset& ds) {
  Selections s;
  const auto effects = all_effect_sizes(ds);
  for (auto m : kEffectMeasures) s.effect.push_back(select_measure(effects, m));
  s.common = common_features(s.effect);
  s.relief = select_relief(ds);
  return s;
}

constexpr Measure kAll[] = {Measure::d,  Measure::dd,     Measure::u1,    Measure::u2,
                            Measure::u3, Measure::common, Measure::relief};

Dataset synthetic(std::size_t n, std::size_t f, std::uint64_t seed) {
  std::mt19937_64 rng(derive_seed(derive_seed(seed, "bench"), n));
  std::normal_distribution<double> z;
  std::vector<Label> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = i % 3 == 0 ? Label::positive : Label::negative;
  std::vector<std::string> names;
  std::vector<double> values(n * f);
  for (std::size_t j = 0; j < f; ++j) {
    names.push_back("x" + std::to_string(j));
    const double shift = 0.1 * static_cast<double>(j % 10);
    for (std::size_t i = 0; i < n; ++i) values[j * n + i] = z(rng) + (labels[i] == Label::positive ? shift : 0.0);
  }
  return Dataset(std::move(names), std::move(values), std::move(labels));
}

// Mean time per call over a batch lasting at least `min_batch` seconds.
template <class F>
double batch_time(F&& fn, double min_batch) {
  using clock = std::chrono::steady_clock;
  std::size_t calls = 0;
  const auto start = clock::now();
  double elapsed = 0.0;
  do {
    fn();
    ++calls;
    elapsed = std::chrono::duration<double>(clock::now() - start).count();
  } while (elapsed < min_batch);
  return elapsed / static_cast<double>(calls);
}

}  // namespace

void RunConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("--alpha must lie in (0, 1)");
  if (folds < 2) throw UsageError("--folds must be at least 2");
  if (repeats < 1) throw UsageError("--repeats must be at least 1");
  if (b1 < 100 || b2 < 25) throw UsageError("--b1 must be >= 100 and --b2 >= 25");
  if (!(c > 0.0)) throw UsageError("--c must be positive");
}

bool RunConfig::wants(Measure m) const {
  return measures.empty() || std::find(measures.begin(), measures.end(), m) != measures.end();
}

Dataset load_input(const RunConfig& cfg) {
  if (cfg.input.empty()) throw UsageError("--input is required");
  if (looks_like_wdbc(cfg.input)) {
    return load_wdbc(cfg.input, [](std::string_view w) { std::cerr << "warning: " << w << '\n'; });
  }
  return load_generic(cfg.input, cfg.label_column, cfg.positive_label);
}

Report cmd_analyze(const RunConfig& cfg, const Dataset& ds) {
  Report r;
  r.provenance = provenance(cfg);
  r.columns = {"feature", "direction"};
  for (auto m : kEffectMeasures) {
    if (!cfg.wants(m)) continue;
    const std::string n(to_string(m));
    r.columns.insert(r.columns.end(), {n, n + "_lo", n + "_hi"});
  }
  const bool any_u = cfg.wants(Measure::u1) || cfg.wants(Measure::u2) || cfg.wants(Measure::u3);
  if (any_u) r.columns.push_back("redraws");

  const double level = 1.0 - cfg.alpha;
  const BootstrapConfig boot{cfg.b1, cfg.b2, cfg.seed, cfg.threads};
  for (std::size_t i = 0; i < ds.num_features(); ++i) {
    const auto g = group(ds, i);
    const auto e = effect_sizes(g);
    std::vector<std::string> row{e.feature, std::to_string(e.direction)};
    auto put = [&](double v, const Interval& ci) {
      row.insert(row.end(), {fmt(v), fmt(ci.lo), fmt(ci.hi)});
    };
    const auto og = oriented(g);
    if (cfg.wants(Measure::d)) put(e.d, ci_cohens_d(og, level));
    if (cfg.wants(Measure::dd)) put(e.dd, ci_cohens_dd(og, level));
    if (any_u) {
      const auto u = bootstrap_ci_u_all(g, boot, level);
      if (cfg.wants(Measure::u1)) put(e.u1, u.u1);
      if (cfg.wants(Measure::u2)) put(e.u2, u.u2);
      if (cfg.wants(Measure::u3)) put(e.u3, u.u3);
      row.push_back(std::to_string(u.redraws));
    }
    r.add_row(std::move(row));
  }
  return r;
}

Report cmd_select(const RunConfig& cfg, const Dataset& ds) {
  Report r;
  r.provenance = provenance(cfg);
  r.columns = {"measure", "rule", "rule_value", "cut", "mean", "min", "max", "count", "selected", "note"};
  const auto sel = select_all(ds);
  for (auto m : kAll) {
    if (!cfg.wants(m)) continue;
    const auto& s = sel.get(m);
    std::string rule, rule_value = "NA";
    double mean = kNaN, lo = kNaN, hi = kNaN;
    if (!s.scores.empty()) {
      mean = mean_score(s.scores);
      const auto [mn, mx] = std::minmax_element(s.scores.begin(), s.scores.end(),
                                                [](const auto& a, const auto& b) { return a.score < b.score; });
      lo = mn->score;
      hi = mx->score;
    }
    switch (m) {
      case Measure::d:
      case Measure::dd:
        rule = "> 0.8";
        rule_value = fmt(kLargeEffect);
        break;
      case Measure::u1:
      case Measure::u2:
      case Measure::u3:
        rule = ">= mean";
        rule_value = fmt(u_threshold(s.scores));
        break;
      case Measure::common: rule = "selected by d, D, u1, u2 and u3"; break;
      case Measure::relief: rule = "> mean"; break;
    }
    r.add_row({std::string(to_string(m)), rule, rule_value, fmt(s.threshold), fmt(mean), fmt(lo), fmt(hi),
               std::to_string(s.selected.size()), join(s.selected), s.note});
  }
  return r;
}

Report cmd_evaluate(const RunConfig& cfg, const Dataset& ds) {
  Report r;
  r.provenance = provenance(cfg);
  r.columns = {"selector", "features", "tpr", "fpr", "tnr", "acc", "auc"};
  const auto sel = select_all(ds);
  const CvOptions opt{cfg.folds, cfg.repeats, cfg.c, cfg.seed};
  for (auto m : kAll) {
    if (!cfg.wants(m)) continue;
    const auto& features = sel.get(m).selected;
    const std::string name(to_string(m));
    if (features.empty()) {
      r.add_row({name, "0", "NA", "NA", "NA", "NA", "NA"});
      continue;
    }
    const auto e = cross_validate(ds, features, opt);
    r.add_row({name, std::to_string(features.size()), fmt(e.tpr), fmt(e.fpr), fmt(e.tnr), fmt(e.acc), fmt(e.auc)});
  }
  return r;
}

Report cmd_bench(const RunConfig& cfg) {
  Report r;
  r.provenance = provenance(cfg);
  r.columns = {"method", "n", "features", "time_us", "ratio", "bound", "verdict"};
  constexpr std::size_t kFeatures = 30;
  const std::size_t sizes[] = {500, 1000, 2000};
  std::vector<Dataset> data;
  for (auto n : sizes) data.push_back(synthetic(n, kFeatures, cfg.seed));

  struct Method {
    const char* name;
    double bound;
    bool at_least;
  };
  const Method methods[] = {{"effect_sizes", 2.5, false}, {"relief", 3.0, true}};
  constexpr int kRounds = 7;
  volatile double sink = 0.0;
  for (const auto& method : methods) {
    const bool relief = std::string_view(method.name) == "relief";
    // Sizes are interleaved within each round so that a slow stretch of the
    // machine affects all of them; the minimum per size is kept.
    std::vector<double> best(data.size(), std::numeric_limits<double>::infinity());
    for (int round = 0; round < kRounds; ++round) {
      for (std::size_t k = 0; k < data.size(); ++k) {
        const auto& ds = data[k];
        const double t = relief ? batch_time([&] { sink = sink + relief_weights(ds)[0].score; }, 0.05)
                                : batch_time([&] { sink = sink + all_effect_sizes(ds)[0].d; }, 0.02);
        best[k] = std::min(best[k], t);
      }
    }
    for (std::size_t k = 0; k < data.size(); ++k) {
      const double ratio = k ? best[k] / best[k - 1] : kNaN;
      std::string bound = "NA", verdict = "NA";
      if (k + 1 == data.size()) {
        bound = std::string(method.at_least ? ">= " : "<= ") + fmt(method.bound);
        verdict = (method.at_least ? ratio >= method.bound : ratio <= method.bound) ? "pass" : "fail";
      }
      r.add_row({method.name, std::to_string(data[k].num_samples()), std::to_string(kFeatures),
                 fmt(best[k] * 1e6), fmt(ratio), bound, verdict});
    }
  }
  return r;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string format = "csv", measure_list;

  CLI::App app{"Effect-size feature selection for two-class tabular data", "effsel"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "md"}));
    sub->add_option("--out", cfg.out, "Write the report here instead of stdout");
    sub->add_option("--seed", cfg.seed, "Seed for every random stream");
  };
  auto add_input = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input, "Data file: UCI wdbc.data or header CSV")->required();
    sub->add_option("--label-column", cfg.label_column, "Label column of a header CSV");
    sub->add_option("--positive", cfg.positive_label, "Positive label of a header CSV");
    sub->add_option("--measure", measure_list, "Comma-separated measures: d,D,u1,u2,u3,common,relief");
  };
  auto* analyze = app.add_subcommand("analyze", "Effect sizes with confidence intervals per feature");
  auto* select = app.add_subcommand("select", "Thresholds and selected features per measure");
  auto* evaluate = app.add_subcommand("evaluate", "Cross-validated linear SVM per selector");
  auto* bench = app.add_subcommand("bench", "Scaling of effect sizes against Relief");
  for (auto* sub : {analyze, select, evaluate, bench}) add_common(sub);
  for (auto* sub : {analyze, select, evaluate}) add_input(sub);
  analyze->add_option("--alpha", cfg.alpha, "Interval miss rate (level = 1 - alpha)");
  analyze->add_option("--b1", cfg.b1, "Outer bootstrap resamples");
  analyze->add_option("--b2", cfg.b2, "Nested bootstrap resamples");
  analyze->add_option("--threads", cfg.threads, "Bootstrap worker threads (0: all cores)");
  evaluate->add_option("--folds", cfg.folds, "Cross-validation folds");
  evaluate->add_option("--repeats", cfg.repeats, "Cross-validation repeats");
  evaluate->add_option("--c", cfg.c, "SVM regularization");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, x;
    const int code = app.exit(e, o, x);
    out << o.str();
    err << x.str();
    return code == 0 ? 0 : 2;
  }

  try {
    for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
    cfg.format = format == "md" ? Format::md : Format::csv;
    std::stringstream list(measure_list);
    for (std::string item; std::getline(list, item, ',');) {
      if (item.empty()) continue;
      const auto m = parse_measure(item);
      if (!m) throw UsageError("unknown measure '" + item + "'");
      cfg.measures.push_back(*m);
    }
    cfg.validate();

    Report report;
    if (cfg.command == "bench") {
      report = cmd_bench(cfg);
    } else {
      const auto ds = load_input(cfg);
      if (cfg.command == "analyze")
        report = cmd_analyze(cfg, ds);
      else if (cfg.command == "select")
        report = cmd_select(cfg, ds);
      else
        report = cmd_evaluate(cfg, ds);
    }

    if (cfg.out.empty()) {
      write(report, cfg.format, out);
    } else {
      std::ofstream file(cfg.out, std::ios::binary);
      if (!file) throw ParseError("cannot write '" + cfg.out + "'");
      write(report, cfg.format, file);
      if (!file) throw ParseError("error writing '" + cfg.out + "'");
    }
    return 0;
  } catch (const ParseError& e) {
    err << "effsel: " << e.what() << '\n';
    return 2;
  } catch (const UsageError& e) {
    err << "effsel: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "effsel: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace effsel::cli
