#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace vdo::eval {

/// F1 grid: one row per class (block), one column per classifier.
struct ScoreMatrix {
  std::vector<std::string> classifier_names;
  std::vector<std::string> class_names;
  std::vector<std::vector<double>> values;  // [class][classifier]

  std::size_t num_classes() const noexcept { return class_names.size(); }
  std::size_t num_classifiers() const noexcept { return classifier_names.size(); }
};

/// Throws InvalidArgument on ragged dimensions or values outside [0, 1].
void check_scores(const ScoreMatrix& m);

/// CSV: header "class,<classifier>...", then "<class>,<f1>..." rows.
ScoreMatrix parse_score_csv(std::istream& in);
ScoreMatrix load_score_csv(const std::filesystem::path& path);
void write_score_csv(std::ostream& out, const ScoreMatrix& m);

struct RbpResult {
  std::vector<std::size_t> wins;  // per classifier
  std::vector<double> ratio;      // wins / num_classes
};

/// Ratio of best performance: every classifier equal to the row maximum
/// (exact comparison) wins that row.
RbpResult rbp(const ScoreMatrix& m);

}  // namespace vdo::eval
