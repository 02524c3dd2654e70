#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "support.hpp"
#include "vdo/eval/cross_validation.hpp"
#include "vdo/eval/folds.hpp"
#include "vdo/eval/metrics.hpp"
#include "vdo/eval/report.hpp"
#include "vdo/eval/score_matrix.hpp"
#include "vdo/parallel.hpp"
#include "vdo/synthetic.hpp"

using namespace vdo;
using namespace vdo::eval;

namespace {

std::vector<Label> labels_with_counts(const std::vector<std::pair<Label, std::size_t>>& counts) {
  std::vector<Label> y;
  for (const auto& [l, n] : counts) y.insert(y.end(), n, l);
  return y;
}

std::map<std::pair<std::size_t, Label>, std::size_t> per_fold_class_counts(const FoldAssignment& f,
                                                                            std::span<const Label> y) {
  std::map<std::pair<std::size_t, Label>, std::size_t> m;
  for (std::size_t i = 0; i < y.size(); ++i) ++m[{f.fold_of[i], y[i]}];
  return m;
}

ConfusionMatrix two_by_two() {
  // [[2,1],[0,3]]; taxonomy order puts write first.
  ConfusionMatrix m(std::vector<Label>{Label::Write, Label::Read});
  m.add(Label::Write, Label::Write, 2);
  m.add(Label::Write, Label::Read, 1);
  m.add(Label::Read, Label::Read, 3);
  return m;
}

Corpus tiny_corpus() {
  return Corpus({{"CVE-2020-0001", "heap overflow", Label::Memory},
                 {"CVE-2020-0002", "heap corruption", Label::Memory},
                 {"CVE-2020-0003", "read secrets", Label::Read},
                 {"CVE-2020-0004", "read files", Label::Read},
                 {"CVE-2020-0005", "crash loop", Label::ServiceInterrupt},
                 {"CVE-2020-0006", "crash hang", Label::ServiceInterrupt}});
}

}  // namespace

// Folds -------------------------------------------------------------------------

TEST_CASE("stratified folds: 2 classes x 10, k = 10") {
  const auto y = labels_with_counts({{Label::Read, 10}, {Label::Write, 10}});
  const auto f = stratified_folds(y, 10, 123);
  const auto counts = per_fold_class_counts(f, y);
  for (std::size_t fold = 0; fold < 10; ++fold) {
    CHECK(counts.at({fold, Label::Read}) == 1);
    CHECK(counts.at({fold, Label::Write}) == 1);
  }
}

TEST_CASE("stratified folds: class of 12 with k = 10") {
  const auto y = labels_with_counts({{Label::Memory, 12}});
  const auto f = stratified_folds(y, 10, 5);
  std::vector<std::size_t> sizes(10, 0);
  for (auto fold : f.fold_of) ++sizes[fold];
  CHECK(std::count(sizes.begin(), sizes.end(), 1) == 8);
  CHECK(std::count(sizes.begin(), sizes.end(), 2) == 2);
}

TEST_CASE("stratified folds are deterministic and validated") {
  const auto y = labels_with_counts({{Label::Read, 7}, {Label::Write, 5}, {Label::Aslr, 3}});
  CHECK(stratified_folds(y, 4, 9).fold_of == stratified_folds(y, 4, 9).fold_of);
  CHECK(stratified_folds(y, 4, 9).fold_of != stratified_folds(y, 4, 10).fold_of);
  CHECK_THROWS_AS(stratified_folds(y, 1, 9), InvalidArgument);
  CHECK_THROWS_AS(stratified_folds(y, 16, 9), InvalidArgument);
  CHECK_THROWS_AS(stratified_folds(std::vector<Label>{}, 2, 9), InvalidArgument);
  const auto f = stratified_folds(y, 4, 9);
  std::set<std::size_t> all;
  for (std::size_t fold = 0; fold < 4; ++fold) {
    const auto test = f.test_rows(fold);
    const auto train = f.train_rows(fold);
    CHECK(test.size() + train.size() == y.size());
    all.insert(test.begin(), test.end());
  }
  CHECK(all.size() == y.size());
}

TEST_CASE("stratification spread property on random label vectors") {
  std::mt19937_64 gen(1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + gen() % 300;
    const std::size_t classes = 1 + gen() % 19;
    std::vector<Label> y;
    for (std::size_t i = 0; i < n; ++i) y.push_back(*label_from_index(gen() % classes));
    const std::size_t k = 2 + gen() % std::min<std::size_t>(n - 1, 15);
    const auto f = stratified_folds(y, k, gen());
    const auto counts = per_fold_class_counts(f, y);
    std::vector<std::size_t> sizes(k, 0);
    for (auto fold : f.fold_of) ++sizes[fold];
    CHECK(*std::max_element(sizes.begin(), sizes.end()) - *std::min_element(sizes.begin(), sizes.end()) <= 1);
    for (std::size_t c = 0; c < classes; ++c) {
      std::size_t lo = SIZE_MAX, hi = 0;
      for (std::size_t fold = 0; fold < k; ++fold) {
        const auto it = counts.find({fold, *label_from_index(c)});
        const std::size_t v = it == counts.end() ? 0 : it->second;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      CHECK(hi - lo <= 1);
    }
  }
}

// Metrics -----------------------------------------------------------------------

TEST_CASE("class counts and metrics on [[2,1],[0,3]]") {
  const auto m = two_by_two();
  const auto c = class_counts(m, 0);
  CHECK(c.tp == 2);
  CHECK(c.fp == 0);
  CHECK(c.fn == 1);
  CHECK(c.tn == 3);
  const auto mm = metrics_from_counts(c);
  CHECK(mm.precision == 1.0);
  CHECK(mm.recall == doctest::Approx(2.0 / 3.0));
  CHECK(mm.f1 == doctest::Approx(0.8));
  CHECK_FALSE(mm.degenerate);
  CHECK(accuracy(m) == doctest::Approx(5.0 / 6.0));
}

TEST_CASE("perfect diagonal and degenerate classes") {
  ConfusionMatrix m(std::vector<Label>{Label::Aslr, Label::Write, Label::Read, Label::Memory});
  m.add(Label::Aslr, Label::Aslr, 3);
  m.add(Label::Read, Label::Read, 2);
  m.add(Label::Memory, Label::Memory, 4);
  const auto pc = per_class_metrics(m);
  CHECK(pc[0].f1 == 1.0);
  CHECK(pc[2].precision == 1.0);
  CHECK(pc[3].recall == 1.0);
  CHECK(pc[1].precision == 0.0);
  CHECK(pc[1].recall == 0.0);
  CHECK(pc[1].f1 == 0.0);
  CHECK(pc[1].degenerate);
  CHECK(accuracy(m) == 1.0);
  CHECK(kappa(m) == 1.0);
}

TEST_CASE("kappa reference cases") {
  ConfusionMatrix diag(ml::distinct_classes(std::vector<Label>{
      Label::Aslr, Label::MultiFactorAuthentication, Label::Sandboxed, Label::Hpkp, Label::Hsts,
      Label::PhysicalSecurity, Label::ContextEscape, Label::TrustFailure, Label::ManInTheMiddle, Label::Write}));
  for (Label l : diag.classes()) diag.add(l, l);
  CHECK(diag.total() == 10);
  CHECK(accuracy(diag) == 1.0);
  CHECK(kappa(diag) == 1.0);

  ConfusionMatrix chance(std::vector<Label>{Label::Write, Label::Read});
  chance.add(Label::Write, Label::Write, 5);
  chance.add(Label::Read, Label::Write, 5);
  CHECK(accuracy(chance) == 0.5);
  CHECK(kappa(chance) == 0.0);

  ConfusionMatrix single(std::vector<Label>{Label::Write, Label::Read});
  single.add(Label::Write, Label::Write, 4);
  CHECK(kappa(single) == 0.0);

  CHECK_THROWS_AS(accuracy(ConfusionMatrix(std::vector<Label>{Label::Read})), InvalidArgument);
  CHECK_THROWS_AS(kappa(ConfusionMatrix(std::vector<Label>{Label::Read})), InvalidArgument);
}

TEST_CASE("metrics agree with brute force on random pairs") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 1 + gen() % 10;
    const std::size_t n = 1 + gen() % 1000;
    std::vector<Label> truth, pred;
    for (std::size_t i = 0; i < n; ++i) {
      truth.push_back(*label_from_index(gen() % k));
      pred.push_back(gen() % 3 == 0 ? truth.back() : *label_from_index(gen() % k));
    }
    const auto m = ConfusionMatrix::from_pairs(truth, pred);
    const auto pc = per_class_metrics(m);
    double agree = 0, chance = 0;
    for (std::size_t c = 0; c < m.num_classes(); ++c) {
      const Label l = m.classes()[c];
      double tp = 0, fp = 0, fn = 0, t_count = 0, p_count = 0;
      for (std::size_t i = 0; i < n; ++i) {
        tp += truth[i] == l && pred[i] == l;
        fp += truth[i] != l && pred[i] == l;
        fn += truth[i] == l && pred[i] != l;
        t_count += truth[i] == l;
        p_count += pred[i] == l;
      }
      const double p = tp + fp > 0 ? tp / (tp + fp) : 0.0;
      const double r = tp + fn > 0 ? tp / (tp + fn) : 0.0;
      const double f = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
      CHECK(std::abs(pc[c].precision - p) <= 1e-12);
      CHECK(std::abs(pc[c].recall - r) <= 1e-12);
      CHECK(std::abs(pc[c].f1 - f) <= 1e-12);
      chance += t_count * p_count;
    }
    for (std::size_t i = 0; i < n; ++i) agree += truth[i] == pred[i];
    const double po = agree / n;
    const double pe = chance / (double(n) * n);
    CHECK(std::abs(accuracy(m) - po) <= 1e-12);
    CHECK(std::abs(kappa(m) - (pe >= 1.0 ? 0.0 : (po - pe) / (1 - pe))) <= 1e-12);
    CHECK(kappa(m) >= -1.0);
    CHECK(kappa(m) <= 1.0);
  }
}

TEST_CASE("confusion matrix bookkeeping") {
  auto m = two_by_two();
  CHECK(m.total() == 6);
  CHECK(m.trace() == 5);
  CHECK(m.row_sum(0) == 3);
  CHECK(m.col_sum(1) == 4);
  m += two_by_two();
  CHECK(m.total() == 12);
  CHECK_THROWS_AS(m += ConfusionMatrix(std::vector<Label>{Label::Read}), InvalidArgument);
  CHECK_THROWS_AS(m.add(Label::Aslr, Label::Read), InvalidArgument);
  CHECK_THROWS_AS(ConfusionMatrix(std::vector<Label>{Label::Read, Label::Write}), InvalidArgument);
}

// Score matrix / RBP ---------------------------------------------------------------

TEST_CASE("rbp examples") {
  const auto fixture = load_score_csv(testing::data_file("paper_f1_table.csv"));
  CHECK(fixture.num_classes() == 19);
  CHECK(fixture.num_classifiers() == 6);
  const auto r = rbp(fixture);
  CHECK(r.wins == std::vector<std::size_t>{3, 4, 7, 3, 7, 8});

  ScoreMatrix one{{"only"}, {"a", "b"}, {{0.2}, {0.9}}};
  CHECK(rbp(one).ratio == std::vector<double>{1.0});
  ScoreMatrix same{{"x", "y", "z"}, {"a", "b"}, {{0.5, 0.5, 0.5}, {0.1, 0.1, 0.1}}};
  CHECK(rbp(same).ratio == std::vector<double>{1.0, 1.0, 1.0});
}

TEST_CASE("score csv round trip and errors") {
  const auto fixture = load_score_csv(testing::data_file("paper_f1_table.csv"));
  std::ostringstream out;
  write_score_csv(out, fixture);
  std::istringstream in(out.str());
  const auto back = parse_score_csv(in);
  CHECK(back.values == fixture.values);
  CHECK(back.class_names == fixture.class_names);
  CHECK(back.classifier_names == fixture.classifier_names);
  std::ostringstream again;
  write_score_csv(again, back);
  CHECK(again.str() == out.str());

  std::istringstream ragged("class,a,b\nx,0.1\n");
  CHECK_THROWS_AS(parse_score_csv(ragged), ParseError);
  std::istringstream range("class,a\nx,1.5\n");
  CHECK_THROWS_AS(parse_score_csv(range), ParseError);
  std::istringstream text("class,a\nx,abc\n");
  CHECK_THROWS_AS(parse_score_csv(text), ParseError);
  std::istringstream empty("");
  CHECK_THROWS_AS(parse_score_csv(empty), ParseError);
}

// Cross-validation ------------------------------------------------------------------

TEST_CASE("constant predictor gives the majority fraction and zero kappa") {
  std::vector<LabeledExample> ex;
  for (int i = 0; i < 30; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "CVE-2021-%04d", i + 1);
    ex.push_back({id, "text " + std::to_string(i), i < 20 ? Label::Read : Label::Write});
  }
  const Corpus corpus(ex);
  const auto cv = cross_validate_with(
      [](const FoldFeatures& f) { return std::vector<Label>(f.test_rows.size(), Label::Read); }, corpus, 10, 123);
  CHECK(accuracy(cv.pooled) == doctest::Approx(20.0 / 30.0));
  CHECK(std::abs(kappa(cv.pooled)) <= 1e-12);
  CHECK(cv.pooled.total() == 30);
}

TEST_CASE("leave-one-out pools n single predictions") {
  const auto corpus = tiny_corpus();
  const auto cv = cross_validate(ml::AlgorithmSpec::defaults(ml::AlgorithmKind::NaiveBayes), corpus, corpus.size(), 1);
  CHECK(cv.per_fold.size() == corpus.size());
  for (const auto& f : cv.per_fold) CHECK(f.test_rows.size() == 1);
  CHECK(cv.pooled.total() == corpus.size());
  CHECK(cv.predictions.size() == corpus.size());
}

TEST_CASE("fold hygiene: vocabulary comes from the training folds only") {
  const auto corpus = synthetic_corpus(21, 10);
  std::vector<TokenList> docs;
  for (const auto& d : corpus.descriptions()) docs.push_back(preprocess(d));
  const auto y = corpus.labels();
  const auto folds = stratified_folds(y, 10, 123);
  for (std::size_t fold = 0; fold < 10; ++fold) {
    const auto f = fold_features(docs, y, folds, fold);
    std::vector<TokenList> train_docs;
    for (auto r : folds.train_rows(fold)) train_docs.push_back(docs[r]);
    CHECK(f.vocabulary == build_vocabulary(train_docs));
    std::set<std::string> train_tokens;
    for (const auto& d : train_docs) train_tokens.insert(d.begin(), d.end());
    for (const auto& term : f.vocabulary.terms()) CHECK(train_tokens.contains(term));
    CHECK(f.vocabulary.num_documents() == train_docs.size());
  }
}

TEST_CASE("pooled accuracy equals the size-weighted mean of fold accuracies") {
  const auto corpus = synthetic_corpus(4, 12);
  const auto cv = cross_validate(ml::AlgorithmSpec::defaults(ml::AlgorithmKind::NaiveBayes), corpus, 5, 3);
  double weighted = 0.0;
  for (const auto& f : cv.per_fold) weighted += accuracy(f.confusion) * f.confusion.total();
  CHECK(accuracy(cv.pooled) == doctest::Approx(weighted / corpus.size()).epsilon(1e-12));
}

TEST_CASE("cross_validate results do not depend on the worker count") {
  const auto corpus = synthetic_corpus(6, 10);
  auto spec = ml::AlgorithmSpec::defaults(ml::AlgorithmKind::RandomForest);
  spec.forest.num_trees = 30;
  set_worker_threads(1);
  const auto a = cross_validate(spec, corpus, 5, 8);
  set_worker_threads(4);
  const auto b = cross_validate(spec, corpus, 5, 8);
  set_worker_threads(1);
  CHECK(a.predictions == b.predictions);
  CHECK(a.pooled == b.pooled);
}

TEST_CASE("cross_validate preconditions and fold error annotation") {
  const auto spec = ml::AlgorithmSpec::defaults(ml::AlgorithmKind::NaiveBayes);
  CHECK_THROWS_AS(cross_validate(spec, Corpus(), 2, 1), InvalidArgument);
  auto ex = tiny_corpus().examples();
  ex.push_back(ex.front());
  CHECK_THROWS_AS(cross_validate(spec, Corpus(ex), 2, 1), InvalidArgument);
  auto small = tiny_corpus().examples();
  small.push_back({"CVE-2020-0099", "lonely", Label::Hsts});
  CHECK_THROWS_AS(cross_validate(spec, Corpus(small), 2, 1), InvalidArgument);

  try {
    cross_validate_with(
        [](const FoldFeatures& f) -> std::vector<Label> {
          if (f.fold == 1) throw std::runtime_error("boom");
          return std::vector<Label>(f.test_rows.size(), Label::Read);
        },
        tiny_corpus(), 3, 1);
    FAIL("expected FoldError");
  } catch (const FoldError& e) {
    CHECK(e.fold() == 1);
    CHECK(std::string(e.what()) == "fold 1: boom");
  }
}

TEST_CASE("report rendering") {
  const auto corpus = synthetic_corpus(2, 6);
  const auto cv = cross_validate(ml::AlgorithmSpec::defaults(ml::AlgorithmKind::NaiveBayes), corpus, 3, 1);
  const auto r = make_report(ml::AlgorithmKind::NaiveBayes, cv);
  CHECK(r.classes.size() == 5);
  CHECK(r.fold_sizes.size() == 3);
  const auto j = report_to_json(r);
  CHECK(j["algorithm"] == "naive_bayes");
  CHECK(j["classes"].size() == 5);
  CHECK(j["confusion"]["counts"].size() == 5);
  const auto md = report_markdown(r);
  CHECK(md.find("| Characterization | Support | Precision | Recall | F-Measure |") != std::string::npos);
  CHECK(md.find("Man-in-the-Middle") != std::string::npos);

  const std::vector<EvalReport> reports{r, r};
  const auto m = f1_score_matrix(reports);
  CHECK(m.num_classifiers() == 2);
  CHECK(m.num_classes() == 5);
  CHECK(score_markdown(m, rbp(m)).find("| RBP | 1.00 | 1.00 |") != std::string::npos);
}
