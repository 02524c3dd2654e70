#include "vdo/eval/report.hpp"

#include <cstdio>
#include <sstream>

namespace vdo::eval {
namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

EvalReport make_report(ml::AlgorithmKind algorithm, const CvResult& cv) {
  EvalReport r;
  r.algorithm = algorithm;
  r.k = cv.folds.k;
  r.seed = cv.folds.seed;
  r.pooled = cv.pooled;
  const auto metrics = per_class_metrics(cv.pooled);
  for (std::size_t c = 0; c < cv.pooled.num_classes(); ++c) {
    r.classes.push_back({cv.pooled.classes()[c], cv.pooled.row_sum(c), class_counts(cv.pooled, c), metrics[c]});
  }
  r.accuracy = accuracy(cv.pooled);
  r.kappa = kappa(cv.pooled);
  for (const auto& f : cv.per_fold) {
    r.fold_sizes.push_back(f.confusion.total());
    r.fold_accuracy.push_back(f.confusion.total() == 0 ? 0.0 : accuracy(f.confusion));
  }
  return r;
}

nlohmann::json report_to_json(const EvalReport& r) {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& c : r.classes) {
    classes.push_back({{"label", std::string(label_id(c.label))},
                       {"support", c.support},
                       {"tp", c.counts.tp},
                       {"fp", c.counts.fp},
                       {"fn", c.counts.fn},
                       {"tn", c.counts.tn},
                       {"precision", c.metrics.precision},
                       {"recall", c.metrics.recall},
                       {"f1", c.metrics.f1},
                       {"degenerate", c.metrics.degenerate}});
  }
  nlohmann::json labels = nlohmann::json::array();
  for (Label l : r.pooled.classes()) labels.push_back(std::string(label_id(l)));
  nlohmann::json grid = nlohmann::json::array();
  for (std::size_t i = 0; i < r.pooled.num_classes(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < r.pooled.num_classes(); ++j) row.push_back(r.pooled.at(i, j));
    grid.push_back(std::move(row));
  }
  return {{"algorithm", std::string(ml::algorithm_id(r.algorithm))},
          {"k", r.k},
          {"seed", r.seed},
          {"accuracy", r.accuracy},
          {"kappa", r.kappa},
          {"classes", std::move(classes)},
          {"confusion", {{"labels", std::move(labels)}, {"counts", std::move(grid)}}},
          {"folds", {{"sizes", r.fold_sizes}, {"accuracy", r.fold_accuracy}}}};
}

std::string report_markdown(const EvalReport& r) {
  std::ostringstream out;
  out << "## " << ml::algorithm_display(r.algorithm) << " (stratified " << r.k << "-fold, seed " << r.seed << ")\n\n";
  out << "| Accuracy | Kappa |\n|---|---|\n";
  out << "| " << fixed(r.accuracy, 4) << " | " << fixed(r.kappa, 4) << " |\n\n";
  out << "| Characterization | Support | Precision | Recall | F-Measure |\n|---|---|---|---|---|\n";
  for (const auto& c : r.classes) {
    out << "| " << display_name(c.label) << " | " << c.support << " | " << fixed(c.metrics.precision, 2) << " | "
        << fixed(c.metrics.recall, 2) << " | " << fixed(c.metrics.f1, 2) << (c.metrics.degenerate ? " *" : "")
        << " |\n";
  }
  bool any_degenerate = false;
  for (const auto& c : r.classes) any_degenerate = any_degenerate || c.metrics.degenerate;
  if (any_degenerate) out << "\n\\* a precision or recall denominator was zero; the value is reported as 0.\n";
  return out.str();
}

ScoreMatrix f1_score_matrix(std::span<const EvalReport> reports) {
  if (reports.empty()) throw InvalidArgument("no reports to tabulate");
  ScoreMatrix m;
  for (const auto& r : reports) {
    if (r.pooled.classes() != reports.front().pooled.classes()) {
      throw InvalidArgument("reports cover different class lists");
    }
    m.classifier_names.emplace_back(ml::algorithm_display(r.algorithm));
  }
  for (std::size_t c = 0; c < reports.front().classes.size(); ++c) {
    m.class_names.emplace_back(label_id(reports.front().classes[c].label));
    std::vector<double> row;
    for (const auto& r : reports) row.push_back(r.classes[c].metrics.f1);
    m.values.push_back(std::move(row));
  }
  return m;
}

std::string score_markdown(const ScoreMatrix& m, const RbpResult& r) {
  std::ostringstream out;
  out << "| Characterization |";
  for (const auto& n : m.classifier_names) out << ' ' << n << " |";
  out << "\n|---|";
  for (std::size_t j = 0; j < m.num_classifiers(); ++j) out << "---|";
  out << '\n';
  for (std::size_t i = 0; i < m.num_classes(); ++i) {
    const auto label = parse_label(m.class_names[i]);
    out << "| " << (label ? std::string(display_name(*label)) : m.class_names[i]) << " |";
    for (double v : m.values[i]) out << ' ' << fixed(v, 2) << " |";
    out << '\n';
  }
  out << "| RBP |";
  for (double v : r.ratio) out << ' ' << fixed(v, 2) << " |";
  out << '\n';
  return out.str();
}

}  // namespace vdo::eval
