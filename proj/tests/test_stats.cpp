#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "vdo/eval/score_matrix.hpp"
#include "vdo/stats/distributions.hpp"
#include "vdo/stats/friedman.hpp"
#include "vdo/stats/report.hpp"

using namespace vdo;
using namespace vdo::stats;
using vdo::eval::ScoreMatrix;

namespace {

ScoreMatrix grid(const std::vector<std::vector<double>>& rows) {
  ScoreMatrix m;
  for (std::size_t j = 0; j < rows.front().size(); ++j) m.classifier_names.push_back("c" + std::to_string(j));
  for (std::size_t i = 0; i < rows.size(); ++i) m.class_names.push_back("b" + std::to_string(i));
  m.values = rows;
  return m;
}

// Average rank by counting: 1 + #lower + (#equal - 1) / 2.
std::vector<std::vector<double>> brute_ranks(const ScoreMatrix& m) {
  std::vector<std::vector<double>> out;
  for (const auto& row : m.values) {
    std::vector<double> r;
    for (double v : row) {
      double lower = 0, equal = 0;
      for (double w : row) {
        lower += w < v;
        equal += w == v;
      }
      r.push_back(1.0 + lower + (equal - 1.0) / 2.0);
    }
    out.push_back(r);
  }
  return out;
}

// General tie-aware form: (k-1)(sum R^2 - n C) / (A - C), C = n k (k+1)^2 / 4, A = sum r^2.
double brute_friedman(const ScoreMatrix& m) {
  const auto r = brute_ranks(m);
  const double n = static_cast<double>(m.num_classes());
  const double k = static_cast<double>(m.num_classifiers());
  double a = 0;
  std::vector<double> sums(m.num_classifiers(), 0.0);
  for (const auto& row : r) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      a += row[j] * row[j];
      sums[j] += row[j];
    }
  }
  const double c = n * k * (k + 1) * (k + 1) / 4.0;
  double s = 0;
  for (double v : sums) s += v * v;
  if (a - c <= 0) return 0.0;
  return (k - 1) * (s - n * c) / (a - c);
}

ScoreMatrix random_grid(std::mt19937_64& gen, std::size_t n, std::size_t k) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(k));
  for (auto& row : rows) {
    for (auto& v : row) v = static_cast<double>(gen() % 6) / 5.0;
  }
  return grid(rows);
}

}  // namespace

TEST_CASE("distribution tails against reference values") {
  CHECK(chi_squared_upper_tail(6.0, 2.0) == doctest::Approx(0.04978706836786395).epsilon(1e-12));
  CHECK(chi_squared_upper_tail(0.0, 3.0) == 1.0);
  CHECK(student_t_two_sided(2.0, 10.0) == doctest::Approx(0.07338803477074039).epsilon(1e-12));
  CHECK(student_t_two_sided(-2.0, 10.0) == doctest::Approx(0.07338803477074039).epsilon(1e-12));
  CHECK(student_t_two_sided(0.0, 4.0) == 1.0);
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
}

TEST_CASE("friedman on a 3x3 grid with identical orderings") {
  const auto m = grid({{0.1, 0.2, 0.3}, {0.4, 0.5, 0.6}, {0.0, 0.5, 0.9}});
  const auto f = friedman(m);
  CHECK(f.df == 2);
  CHECK(f.rank_sums == std::vector<double>{3, 6, 9});
  CHECK(f.chi_squared == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(f.p_value == doctest::Approx(std::exp(-3.0)).epsilon(1e-12));
  CHECK(f.tie_correction == 1.0);
}

TEST_CASE("friedman with every row fully tied") {
  const auto m = grid({{0.5, 0.5, 0.5}, {0.2, 0.2, 0.2}});
  const auto f = friedman(m);
  CHECK(f.chi_squared == 0.0);
  CHECK(f.p_value == 1.0);
  const auto c = conover(m);
  for (const auto& row : c.p) {
    for (double p : row) CHECK(p == 1.0);
  }
}

TEST_CASE("within-block ranks average ties") {
  const auto r = within_block_ranks(grid({{0.3, 0.1, 0.3, 0.2}}));
  CHECK(r.front() == std::vector<double>{3.5, 1.0, 3.5, 2.0});
}

TEST_CASE("friedman agrees with a brute-force rank oracle") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + gen() % 5;
    const std::size_t k = 2 + gen() % 3;
    const auto m = random_grid(gen, n, k);
    CHECK(within_block_ranks(m) == brute_ranks(m));
    const auto f = friedman(m);
    CHECK(f.chi_squared == doctest::Approx(brute_friedman(m)).epsilon(1e-9));
    CHECK(f.df == static_cast<int>(k) - 1);
    CHECK(f.p_value >= 0.0);
    CHECK(f.p_value <= 1.0);
  }
}

TEST_CASE("friedman is invariant to row order and monotone transforms") {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto m = random_grid(gen, 8, 5);
    const auto base = friedman(m);
    std::shuffle(m.values.begin(), m.values.end(), gen);
    CHECK(friedman(m).chi_squared == doctest::Approx(base.chi_squared).epsilon(1e-12));
    for (auto& row : m.values) {
      for (auto& v : row) v = std::sqrt(v) * 0.5;
    }
    CHECK(friedman(m).chi_squared == doctest::Approx(base.chi_squared).epsilon(1e-12));
  }
}

TEST_CASE("conover structural properties") {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = random_grid(gen, 10, 4);
    const auto raw = conover(m);
    const auto adj = conover(m, PAdjust::Holm);
    CHECK(raw.method == "conover");
    CHECK(adj.method == "conover-holm");
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(raw.p[i][i] == 1.0);
      for (std::size_t j = 0; j < 4; ++j) {
        CHECK(raw.p[i][j] == raw.p[j][i]);
        CHECK(raw.p[i][j] >= 0.0);
        CHECK(raw.p[i][j] <= 1.0);
        CHECK(adj.p[i][j] >= raw.p[i][j]);
        CHECK(adj.p[i][j] <= 1.0);
      }
    }
  }
  auto m = grid({{0.1, 0.1, 0.9}, {0.2, 0.2, 0.1}, {0.4, 0.4, 0.5}});
  CHECK(conover(m).p[0][1] == 1.0);
}

TEST_CASE("published F1 table: friedman and conover frozen values") {
  const auto m = eval::load_score_csv(testing::data_file("paper_f1_table.csv"));
  const auto f = friedman(m);
  CHECK(f.df == 5);
  CHECK(f.chi_squared == doctest::Approx(20.0).epsilon(1e-9));
  CHECK(f.p_value == doctest::Approx(0.00124973).epsilon(1e-5));
  const auto c = conover(m);
  // Independent reference: scikit-posthocs posthoc_conover_friedman.
  const double expected[6][6] = {
      {1, 0.960233, 0.008283, 0.150535, 0.008283, 0.000371},
      {0.960233, 1, 0.007203, 0.137114, 0.007203, 0.000312},
      {0.008283, 0.007203, 1, 0.214540, 1.0, 0.319992},
      {0.150535, 0.137114, 0.214540, 1, 0.214540, 0.026887},
      {0.008283, 0.007203, 1.0, 0.214540, 1, 0.319992},
      {0.000371, 0.000312, 0.319992, 0.026887, 0.319992, 1},
  };
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) CHECK(std::abs(c.p[i][j] - expected[i][j]) <= 1e-6);
  }
}

TEST_CASE("stats report rendering") {
  const auto m = eval::load_score_csv(testing::data_file("paper_f1_table.csv"));
  const auto f = friedman(m);
  const auto c = conover(m);
  const auto j = stats_to_json(f, c);
  CHECK(j["df"] == 5);
  CHECK(j["classifiers"].size() == 6);
  CHECK(j["pairwise_p"].size() == 6);
  CHECK(j["pairwise_method"] == "conover");
  const auto md = stats_markdown(f, c);
  CHECK(md.find("Naive Bayes") != std::string::npos);
  CHECK(md.find(" - |") != std::string::npos);
}
