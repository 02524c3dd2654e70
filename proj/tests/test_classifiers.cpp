#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "vdo/ml/model.hpp"
#include "vdo/ml/model_io.hpp"
#include "vdo/ml/smo.hpp"
#include "vdo/parallel.hpp"
#include "vdo/pipeline.hpp"
#include "vdo/synthetic.hpp"

using namespace vdo;
using namespace vdo::ml;
using testing::matrix;
using testing::sparse;

namespace {

struct Toy {
  FeatureSet x;
  std::vector<Label> y;
};

// Three well separated classes, four rows each, on three columns.
Toy separable_toy() {
  Toy t;
  t.x = FeatureSet::single(matrix({{3, 0, 0},
                                   {2, 0, 1},
                                   {4, 1, 0},
                                   {3, 0, 0.5},
                                   {0, 3, 0},
                                   {1, 2, 0},
                                   {0, 4, 1},
                                   {0.5, 3, 0},
                                   {0, 0, 3},
                                   {1, 0, 2},
                                   {0, 1, 4},
                                   {0, 0.5, 3}}));
  for (Label l : {Label::Read, Label::Write, Label::Memory}) {
    for (int i = 0; i < 4; ++i) t.y.push_back(l);
  }
  return t;
}

AlgorithmSpec small_spec(AlgorithmKind kind) {
  auto s = AlgorithmSpec::defaults(kind);
  s.forest.num_trees = 25;
  s.boost.iterations = 10;
  return s;
}

FeatureSet text_features(const Corpus& c, Vocabulary& vocab) {
  std::vector<TokenList> docs;
  for (const auto& d : c.descriptions()) docs.push_back(preprocess(d));
  vocab = build_vocabulary(docs);
  return {tfidf_transform(docs, vocab), count_transform(docs, vocab)};
}

}  // namespace

TEST_CASE("algorithm ids round-trip") {
  for (auto k : kAllAlgorithms) CHECK(parse_algorithm(algorithm_id(k)) == k);
  CHECK(algorithm_id(AlgorithmKind::AdaBoostSvm) == "adaboost_svm");
  CHECK_FALSE(parse_algorithm("knn"));
}

TEST_CASE("spec defaults follow the published configuration") {
  const AlgorithmSpec s;
  CHECK(s.seed == 123);
  CHECK(s.tree.confidence == 0.4);
  CHECK(s.tree.min_leaf == 0);
  CHECK(s.svm.c == 0.5);
  CHECK(s.svm.tolerance == 0.001);
  CHECK(s.svm.epsilon == 1e-12);
  CHECK(s.svm.exponent == 1.0);
  CHECK(s.forest.num_trees == 320);
  CHECK(s.forest.features_per_split == 1);
  CHECK(s.forest.min_leaf == 1);
  CHECK(s.forest.bag_fraction == 1.0);
  CHECK(s.boost.iterations == 100);
  CHECK(s.boost.resample_fraction == 1.0);
}

TEST_CASE("validate_spec rejects bad parameters") {
  auto s = AlgorithmSpec::defaults(AlgorithmKind::Svm);
  CHECK_NOTHROW(validate_spec(s));
  s.svm.c = 0.0;
  CHECK_THROWS_AS(validate_spec(s), InvalidArgument);
  s = AlgorithmSpec::defaults(AlgorithmKind::RandomForest);
  s.forest.num_trees = 0;
  CHECK_THROWS_AS(validate_spec(s), InvalidArgument);
  s = AlgorithmSpec::defaults(AlgorithmKind::DecisionTree);
  s.tree.confidence = 0.0;
  CHECK_THROWS_AS(validate_spec(s), InvalidArgument);
  s = AlgorithmSpec::defaults(AlgorithmKind::AdaBoostSvm);
  s.boost.iterations = 0;
  CHECK_THROWS_AS(validate_spec(s), InvalidArgument);
  s = AlgorithmSpec::defaults(AlgorithmKind::Svm);
  s.svm.exponent = 2.0;
  CHECK_THROWS_AS(validate_spec(s), InvalidArgument);
}

// Naive Bayes -------------------------------------------------------------------

TEST_CASE("naive bayes hand-computed posterior") {
  // Vocabulary [read, data, write]; d1 "read data" -> Read, d2 "write data" -> Write.
  const auto counts = matrix({{1, 1, 0}, {0, 1, 1}});
  const auto model = train_naive_bayes(counts, std::vector<Label>{Label::Read, Label::Write});
  // Taxonomy order puts write before read.
  REQUIRE(model.classes == std::vector<Label>{Label::Write, Label::Read});
  const auto scores = nb_posterior(model, sparse({1, 0, 0}));
  CHECK(scores[1] == doctest::Approx(std::log(0.5 * 0.4)).epsilon(1e-12));
  CHECK(scores[0] == doctest::Approx(std::log(0.5 * 0.2)).epsilon(1e-12));
  CHECK(predict(model, sparse({1, 0, 0})) == Label::Read);
}

TEST_CASE("naive bayes ties and empty input") {
  const auto m = matrix({{1, 0}, {1, 0}});
  const auto model = train_naive_bayes(m, std::vector<Label>{Label::Memory, Label::Hsts});
  const auto s = nb_posterior(model, sparse({1, 0}));
  CHECK(s[0] == s[1]);
  CHECK(predict(model, sparse({1, 0})) == Label::Hsts);

  const auto skewed = train_naive_bayes(matrix({{1, 0}, {1, 0}, {0, 1}}),
                                        std::vector<Label>{Label::Read, Label::Read, Label::Aslr});
  CHECK(predict(skewed, {}) == Label::Read);
}

// Decision tree -------------------------------------------------------------------

TEST_CASE("entropy and gain ratio") {
  CHECK(entropy_bits(std::vector<double>{1, 1}) == doctest::Approx(1.0));
  CHECK(entropy_bits(std::vector<double>{4, 0}) == 0.0);
  CHECK(entropy_bits(std::vector<double>{1, 1, 1, 1}) == doctest::Approx(2.0));

  const std::vector<double> v{0, 1, 2, 3};
  const std::vector<Label> y{Label::Read, Label::Read, Label::Write, Label::Write};
  CHECK(gain_ratio(v, 1.5, y) == doctest::Approx(1.0));
  // Split {0} | {1,2,3}: gain = 1 - 3/4 H(1/3,2/3), split info = H(1/4,3/4).
  const double h13 = -(1.0 / 3) * std::log2(1.0 / 3) - (2.0 / 3) * std::log2(2.0 / 3);
  const double h14 = -(0.25) * std::log2(0.25) - 0.75 * std::log2(0.75);
  CHECK(gain_ratio(v, 0.5, y) == doctest::Approx((1.0 - 0.75 * h13) / h14).epsilon(1e-12));
  CHECK_THROWS_AS(gain_ratio(v, 10.0, y), InvalidArgument);
  CHECK_THROWS_AS(gain_ratio(v, -1.0, y), InvalidArgument);
}

TEST_CASE("best_threshold uses midpoints and maximises gain") {
  const std::vector<double> v{0, 1, 2, 3};
  const std::vector<Label> y{Label::Read, Label::Read, Label::Write, Label::Write};
  const auto c = best_threshold(v, y);
  REQUIRE(c);
  CHECK(c->threshold == 1.5);
  CHECK(c->gain == doctest::Approx(1.0));
  CHECK(c->ratio == doctest::Approx(1.0));
  CHECK_FALSE(best_threshold(std::vector<double>{2, 2, 2, 2}, y));
  CHECK_FALSE(best_threshold(v, y, 3));
}

TEST_CASE("choose_split applies the average-gain rule") {
  const std::vector<SplitCandidate> c{{0, 0.5, 0.5, 0.2}, {1, 0.5, 0.1, 0.9}, {2, 0.5, 0.4, 0.3}};
  const auto s = choose_split(c);
  REQUIRE(s);
  CHECK(s->feature == 2);
  const std::vector<SplitCandidate> zero{{3, 0.5, 0.0, 0.0}, {4, 0.5, 0.0, 0.0}};
  REQUIRE(choose_split(zero));
  CHECK(choose_split(zero)->feature == 3);
  CHECK_FALSE(choose_split(std::vector<SplitCandidate>{}));
}

TEST_CASE("pessimistic error estimate matches the C4.5 bound") {
  CHECK(pessimistic_extra_errors(6, 0, 0.25) == doctest::Approx(1.2377968440954012).epsilon(1e-12));
  CHECK(pessimistic_extra_errors(10, 3, 0.25) == doctest::Approx(1.5623690876171556).epsilon(1e-9));
  CHECK(pessimistic_extra_errors(10, 3, 0.4) == doctest::Approx(0.8905920074965819).epsilon(1e-9));
  CHECK(pessimistic_extra_errors(20, 0.5, 0.4) == doctest::Approx(0.860996386200255).epsilon(1e-9));
  CHECK(pessimistic_extra_errors(4, 4, 0.4) == 0.0);
}

TEST_CASE("decision tree fits separable data and has finite thresholds") {
  const auto t = separable_toy();
  TreeParams p;
  p.prune = false;
  const auto tree = train_decision_tree(t.x.weights, t.y, p);
  for (std::size_t i = 0; i < t.y.size(); ++i) CHECK(predict(tree, t.x.weights.rows[i]) == t.y[i]);
  for (const auto& n : tree.nodes) CHECK(std::isfinite(n.threshold));
  CHECK(tree.num_leaves() >= 3);

  const auto pruned = train_decision_tree(t.x.weights, t.y, TreeParams{});
  CHECK(pruned.num_leaves() <= tree.num_leaves());
  const auto leaf = find_leaf(pruned, {});
  CHECK(predict(pruned, {}) == pruned.classes[pruned.nodes[leaf].leaf_class]);
}

// SMO / SVM ---------------------------------------------------------------------

TEST_CASE("smo analytic two-point case") {
  const std::vector<SparseVector> x{{}, {{0, 2.0}}};
  const std::vector<int> y{-1, 1};
  SmoParams p;
  p.c = 0.5;
  const auto r = smo_solve(x, y, p);
  CHECK(std::abs(r.alphas[0] - 0.5) <= 1e-3);
  CHECK(std::abs(r.alphas[1] - 0.5) <= 1e-3);
  CHECK(std::abs(r.bias + 1.0) <= 1e-3);
  const auto w = primal_weights(x, y, r.alphas);
  CHECK(std::abs(-r.bias / value_at(w, 0) - 1.0) <= 1e-3);
  CHECK(max_kkt_violation(x, y, r.alphas, r.bias, p.c) <= p.tolerance);
}

TEST_CASE("smo reaches the optimum: duality gap and KKT on random problems") {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 6 + trial % 10;
    const std::size_t d = 2 + trial % 4;
    std::vector<SparseVector> x;
    std::vector<int> y;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> row(d);
      for (auto& v : row) v = u(gen) < 0.3 ? 0.0 : u(gen);
      x.push_back(sparse(row));
      y.push_back(i % 2 ? 1 : -1);
    }
    SmoParams p;
    p.c = trial % 3 == 0 ? 10.0 : 0.5;
    p.seed = static_cast<std::uint64_t>(trial);
    const auto r = smo_solve(x, y, p);
    CAPTURE(trial);
    double eq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(r.alphas[i] >= 0.0);
      CHECK(r.alphas[i] <= p.c);
      eq += r.alphas[i] * y[i];
    }
    CHECK(std::abs(eq) <= 1e-9);
    CHECK(max_kkt_violation(x, y, r.alphas, r.bias, p.c) <= p.tolerance + 1e-9);

    // Weak duality: the primal objective at (w, b) bounds the dual from above;
    // a small gap certifies near-optimality.
    const auto w = primal_weights(x, y, r.alphas);
    double primal = 0.5 * dot(w, w);
    for (std::size_t i = 0; i < n; ++i) primal += p.c * std::max(0.0, 1.0 - y[i] * (dot(w, x[i]) + r.bias));
    const double dual = dual_objective(x, y, r.alphas);
    CHECK(dual <= primal + 1e-9);
    CHECK(primal - dual <= 1e-2 * std::max(1.0, primal));
  }
}

TEST_CASE("smo update cap raises SmoNonConvergence") {
  const std::vector<SparseVector> x{{{0, 1.0}}, {{0, 2.0}}, {{0, 1.5}}, {{0, 1.2}}};
  const std::vector<int> y{-1, 1, -1, 1};
  SmoParams p;
  p.max_updates = 1;
  p.c = 100.0;
  CHECK_THROWS_AS(smo_solve(x, y, p), SmoNonConvergence);
}

TEST_CASE("pairwise svm") {
  const auto t = separable_toy();
  const auto m = train_svm(t.x.weights, t.y, SvmParams{}, 123);
  CHECK(m.machines.size() == 3);
  CHECK(m.machines[0].positive == Label::Write);
  CHECK(m.machines[0].negative == Label::Read);
  for (std::size_t i = 0; i < t.y.size(); ++i) CHECK(predict(m, t.x.weights.rows[i]) == t.y[i]);

  const auto z = m.normalize(sparse({100, -5, 0}));
  for (const auto& e : z) {
    CHECK(e.value >= 0.0);
    CHECK(e.value <= 1.0);
  }

  // With no machines voting, the lowest label index wins.
  std::vector<BinaryMachine> none;
  const std::vector<Label> classes{Label::Read};
  CHECK(pairwise_predict(none, classes, {}) == Label::Read);
}

TEST_CASE("single-class svm always predicts that class") {
  const auto m = train_svm(matrix({{1, 0}, {0, 1}}), std::vector<Label>{Label::Hsts, Label::Hsts}, SvmParams{}, 1);
  CHECK(m.machines.empty());
  CHECK(predict(m, sparse({5, 5})) == Label::Hsts);
}

// Ensembles ---------------------------------------------------------------------

TEST_CASE("random forest votes and is independent of thread count") {
  const auto t = separable_toy();
  ForestParams p;
  p.num_trees = 40;
  set_worker_threads(1);
  const auto a = forest_train(t.x.weights, t.y, p, 9);
  set_worker_threads(4);
  const auto b = forest_train(t.x.weights, t.y, p, 9);
  set_worker_threads(1);
  REQUIRE(a.trees.size() == 40);
  CHECK(model_to_json({AlgorithmKind::RandomForest, a.classes, a.num_columns, a}) ==
        model_to_json({AlgorithmKind::RandomForest, b.classes, b.num_columns, b}));
  for (std::size_t i = 0; i < t.y.size(); ++i) {
    const auto votes = forest_votes(a, t.x.weights.rows[i]);
    double total = 0;
    for (double v : votes) total += v;
    CHECK(total == 40);
    CHECK(forest_predict(a, t.x.weights.rows[i]) == forest_predict(a, t.x.weights.rows[i]));
  }
}

TEST_CASE("adaboost stops on a perfect member and lets it decide") {
  const auto t = separable_toy();
  BoostParams p;
  p.iterations = 10;
  const auto m = train_adaboost(t.x.weights, t.y, p, 123);
  REQUIRE_FALSE(m.members.empty());
  CHECK(m.members.back().perfect);
  CHECK(m.members.size() <= 10);
  for (std::size_t i = 0; i < t.y.size(); ++i) CHECK(predict(m, t.x.weights.rows[i]) == t.y[i]);
}

TEST_CASE("boost_round reweights misclassified rows upward") {
  // Rows 0-3 cannot be separated perfectly: duplicate points with different labels.
  const auto x = matrix({{1, 0}, {1, 0}, {0, 1}, {0, 1}, {1, 1}, {0.5, 0.5}});
  const std::vector<Label> y{Label::Read, Label::Write, Label::Write, Label::Write, Label::Read, Label::Read};
  const std::vector<double> w(6, 1.0 / 6);
  RngStream rng(1, "test");
  BoostParams p;
  const auto r = boost_round(w, x, y, p, 5, rng);
  if (r.keep && !r.stop) {
    double sum = 0.0;
    for (double v : r.next_weights) sum += v;
    CHECK(sum == doctest::Approx(1.0));
    CHECK(r.member.beta == doctest::Approx(std::log((1 - r.member.error) / r.member.error)));
  }
  CHECK(r.member.error >= 0.0);
}

TEST_CASE("majority_combine") {
  CHECK(majority_combine(std::vector<Label>{Label::Read, Label::Write, Label::Write}) == Label::Write);
  CHECK(majority_combine(std::vector<Label>{Label::Write, Label::Read}) == Label::Write);
  CHECK(majority_combine(std::vector<Label>{Label::Memory, Label::Read, Label::Aslr, Label::Memory, Label::Read}) ==
        Label::Read);
}

// Uniform contract ---------------------------------------------------------------

TEST_CASE("every kind: toy separation, determinism, errors") {
  const auto t = separable_toy();
  const auto two = FeatureSet::single(matrix({{1, 0}, {0, 1}}));
  const std::vector<Label> two_y{Label::Read, Label::Write};
  for (auto kind : kAllAlgorithms) {
    CAPTURE(algorithm_id(kind));
    const auto spec = small_spec(kind);

    // A weighted resample of two rows may hold one class only, so boosting can
    // legitimately stop with a constant first member here.
    const auto tiny = train(spec, two, two_y);
    if (kind != AlgorithmKind::AdaBoostSvm) {
      CHECK(predict(tiny, row(two, 0)) == Label::Read);
      CHECK(predict(tiny, row(two, 1)) == Label::Write);
    }

    const auto a = train(spec, t.x, t.y);
    const auto b = train(spec, t.x, t.y);
    CHECK(model_to_json(a) == model_to_json(b));
    CHECK(a.classes == std::vector<Label>{Label::Write, Label::Read, Label::Memory});
    for (std::size_t i = 0; i < t.y.size(); ++i) {
      const auto p = predict(a, row(t.x, i));
      CHECK(p == t.y[i]);
      CHECK(class_scores(a, row(t.x, i)).size() == a.classes.size());
    }

    const std::vector<Label> one_class(t.y.size(), Label::Read);
    CHECK_THROWS_AS(train(spec, t.x, one_class), InvalidArgument);
    CHECK_THROWS_AS(train(spec, t.x, std::vector<Label>{Label::Read}), InvalidArgument);

    const SparseVector out_of_range{{7, 1.0}};
    CHECK_THROWS_AS(predict(a, RowView::single(out_of_range)), InvalidArgument);
  }
}

TEST_CASE("models round-trip through JSON and predict identically") {
  const auto corpus = synthetic_corpus(3, 8);
  Vocabulary vocab;
  const auto x = text_features(corpus, vocab);
  const auto y = corpus.labels();
  for (auto kind : kAllAlgorithms) {
    CAPTURE(algorithm_id(kind));
    const auto model = train(small_spec(kind), x, y);
    const auto j = model_to_json(model);
    const auto back = model_from_json(nlohmann::json::parse(j.dump()));
    CHECK(model_to_json(back) == j);
    for (std::size_t i = 0; i < x.num_rows(); ++i) {
      CHECK(predict(back, row(x, i)) == predict(model, row(x, i)));
      CHECK(class_scores(back, row(x, i)) == class_scores(model, row(x, i)));
    }
  }
}

TEST_CASE("model documents are validated") {
  const auto t = separable_toy();
  auto j = model_to_json(train(small_spec(AlgorithmKind::Svm), t.x, t.y));
  auto bad = j;
  bad["version"] = 99;
  CHECK_THROWS_AS(model_from_json(bad), ParseError);
  bad = j;
  bad["kind"] = "knn";
  CHECK_THROWS_AS(model_from_json(bad), ParseError);
  bad = j;
  bad["state"]["machines"].erase(0);
  CHECK_THROWS_AS(model_from_json(bad), ParseError);
  CHECK_THROWS_AS(model_from_json(nlohmann::json::array()), ParseError);

  auto tree = model_to_json(train(small_spec(AlgorithmKind::DecisionTree), t.x, t.y));
  tree["state"]["nodes"][0]["left"] = 0;
  tree["state"]["nodes"][0]["right"] = 0;
  CHECK_THROWS_AS(model_from_json(tree), ParseError);
}

TEST_CASE("spec JSON round trip") {
  auto s = AlgorithmSpec::defaults(AlgorithmKind::MajorityVote);
  s.seed = 77;
  s.forest.num_trees = 12;
  s.naive_bayes.input = NbInput::Weights;
  const auto back = spec_from_json(spec_to_json(s));
  CHECK(spec_to_json(back) == spec_to_json(s));
  CHECK(back.seed == 77);
  CHECK(back.forest.num_trees == 12);
  CHECK(back.naive_bayes.input == NbInput::Weights);
}

TEST_CASE("text model predicts keywords and survives serialization") {
  const auto corpus = synthetic_corpus();
  for (auto kind : {AlgorithmKind::NaiveBayes, AlgorithmKind::Svm, AlgorithmKind::DecisionTree}) {
    const auto m = TextModel::fit(small_spec(kind), corpus);
    const auto p = m.predict_text("heap buffer overflow in the parser");
    CHECK(p.label == Label::Memory);
    CHECK(p.tokens == TokenList{"heap", "buffer", "overflow", "parser"});
    const auto back = TextModel::from_json(nlohmann::json::parse(m.to_json().dump()));
    CHECK(back.to_json() == m.to_json());
    CHECK(back.predict_text("intercept the certificate").label == Label::ManInTheMiddle);
  }
  auto j = TextModel::fit(small_spec(AlgorithmKind::NaiveBayes), corpus).to_json();
  j["vocabulary"]["terms"].erase(0);
  j["vocabulary"]["doc_frequencies"].erase(0);
  CHECK_THROWS_AS(TextModel::from_json(j), ParseError);
}
