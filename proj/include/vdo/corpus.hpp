#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vdo/labels.hpp"

namespace vdo {

/// True for ids of the form CVE-YYYY-NNNN with at least four sequence digits.
bool is_valid_cve_id(std::string_view id) noexcept;

struct CveRecord {
  std::string cve_id;
  std::string description;
  std::optional<std::string> source;
};

struct LabeledExample {
  std::string cve_id;
  std::string description;
  Label label;

  friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

/// Ordered labeled examples. Immutable once constructed.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<LabeledExample> examples);

  const std::vector<LabeledExample>& examples() const noexcept { return examples_; }
  std::size_t size() const noexcept { return examples_.size(); }
  bool empty() const noexcept { return examples_.empty(); }
  const LabeledExample& operator[](std::size_t i) const { return examples_[i]; }

  /// Only labels that occur; keyed in taxonomy order.
  const std::map<Label, std::size_t>& class_counts() const noexcept { return class_counts_; }

  std::vector<Label> labels() const;
  std::vector<std::string> descriptions() const;

  friend bool operator==(const Corpus& a, const Corpus& b) { return a.examples_ == b.examples_; }

 private:
  std::vector<LabeledExample> examples_;
  std::map<Label, std::size_t> class_counts_;
};

struct LineError {
  std::size_t line;
  std::string message;
};

/// Result of a lenient parse: every valid line is kept, every bad line reported.
struct LoadResult {
  Corpus corpus;
  std::vector<LineError> errors;
};

LoadResult parse_labeled_lenient(std::istream& in);
LoadResult load_labeled_lenient(const std::filesystem::path& path);

/// Strict JSON Lines loader. Throws ParseError on the first bad line and
/// vdo::Error when the file cannot be opened.
Corpus parse_labeled(std::istream& in);
Corpus load_labeled(const std::filesystem::path& path);

void write_labeled(std::ostream& out, const Corpus& corpus);
void save_labeled(const std::filesystem::path& path, const Corpus& corpus);

struct DuplicateFinding {
  std::string cve_id;
  Label label;
  std::vector<std::size_t> rows;  // 0-based positions in the corpus
};

struct ValidationReport {
  std::size_t min_class_count = 2;
  std::map<Label, std::size_t> class_counts;
  std::vector<DuplicateFinding> duplicates;
  std::vector<Label> below_minimum;
  std::vector<std::string> warnings;
  std::vector<std::string> errors;

  bool ok() const noexcept { return errors.empty(); }
};

/// Duplicate (cve_id, label) pairs are errors; small classes and an empty
/// corpus are warnings.
ValidationReport validate(const Corpus& corpus, std::size_t min_class_count = 2);

struct DistributionSummary {
  std::size_t min = 0;
  std::size_t max = 0;
  double median = 0.0;
  std::size_t total = 0;
  std::size_t num_classes = 0;
};

/// Statistics over the counts of classes that occur. Throws on an empty corpus.
DistributionSummary summarize(const Corpus& corpus);

}  // namespace vdo
