#include "vdo/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <json.hpp>

#include "vdo/error.hpp"

namespace vdo {
namespace {

using nlohmann::json;

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

LabeledExample parse_line(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw Error(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error("record is not a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (key != "cve_id" && key != "description" && key != "label") throw Error("unexpected key \"" + key + "\"");
  }
  for (const char* key : {"cve_id", "description", "label"}) {
    if (!j.contains(key)) throw Error(std::string("missing key \"") + key + "\"");
    if (!j[key].is_string()) throw Error(std::string("key \"") + key + "\" is not a string");
  }
  LabeledExample ex{j["cve_id"].get<std::string>(), j["description"].get<std::string>(), Label::Aslr};
  if (!is_valid_cve_id(ex.cve_id)) throw Error("malformed cve_id \"" + ex.cve_id + "\"");
  if (is_blank(ex.description)) throw Error("empty description for " + ex.cve_id);
  const auto label_text = j["label"].get<std::string>();
  const auto label = parse_label(label_text);
  if (!label) throw Error("unknown label \"" + label_text + "\"");
  ex.label = *label;
  return ex;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

}  // namespace

bool is_valid_cve_id(std::string_view id) noexcept {
  if (id.size() < 13 || id.substr(0, 4) != "CVE-" || id[8] != '-') return false;
  auto digits = [](std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
  };
  return digits(id.substr(4, 4)) && digits(id.substr(9));
}

Corpus::Corpus(std::vector<LabeledExample> examples) : examples_(std::move(examples)) {
  for (const auto& ex : examples_) ++class_counts_[ex.label];
}

std::vector<Label> Corpus::labels() const {
  std::vector<Label> out;
  out.reserve(examples_.size());
  for (const auto& ex : examples_) out.push_back(ex.label);
  return out;
}

std::vector<std::string> Corpus::descriptions() const {
  std::vector<std::string> out;
  out.reserve(examples_.size());
  for (const auto& ex : examples_) out.push_back(ex.description);
  return out;
}

LoadResult parse_labeled_lenient(std::istream& in) {
  std::vector<LabeledExample> examples;
  std::vector<LineError> errors;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) continue;
    try {
      examples.push_back(parse_line(line));
    } catch (const Error& e) {
      errors.push_back({line_no, e.what()});
    }
  }
  return {Corpus(std::move(examples)), std::move(errors)};
}

LoadResult load_labeled_lenient(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_labeled_lenient(in);
}

Corpus parse_labeled(std::istream& in) {
  auto result = parse_labeled_lenient(in);
  if (!result.errors.empty()) throw ParseError(result.errors.front().line, result.errors.front().message);
  return std::move(result.corpus);
}

Corpus load_labeled(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_labeled(in);
}

void write_labeled(std::ostream& out, const Corpus& corpus) {
  for (const auto& ex : corpus.examples()) {
    json j;
    j["cve_id"] = ex.cve_id;
    j["description"] = ex.description;
    j["label"] = std::string(label_id(ex.label));
    out << j.dump() << '\n';
  }
}

void save_labeled(const std::filesystem::path& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_labeled(out, corpus);
}

ValidationReport validate(const Corpus& corpus, std::size_t min_class_count) {
  ValidationReport report;
  report.min_class_count = min_class_count;
  report.class_counts = corpus.class_counts();

  std::map<std::pair<std::string, Label>, std::vector<std::size_t>> seen;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    seen[{corpus[i].cve_id, corpus[i].label}].push_back(i);
  }
  for (auto& [key, rows] : seen) {
    if (rows.size() > 1) {
      report.duplicates.push_back({key.first, key.second, rows});
      report.errors.push_back("duplicate (cve_id, label) pair " + key.first + " / " +
                              std::string(label_id(key.second)));
    }
  }
  std::sort(report.duplicates.begin(), report.duplicates.end(),
            [](const auto& a, const auto& b) { return a.rows.front() < b.rows.front(); });

  if (corpus.empty()) report.warnings.push_back("corpus is empty");
  for (const auto& [label, count] : report.class_counts) {
    if (count < min_class_count) {
      report.below_minimum.push_back(label);
      report.warnings.push_back("class below minimum: " + std::string(label_id(label)) + " has " +
                                std::to_string(count) + " < " + std::to_string(min_class_count));
    }
  }
  return report;
}

DistributionSummary summarize(const Corpus& corpus) {
  if (corpus.empty()) throw InvalidArgument("cannot summarize an empty corpus");
  std::vector<std::size_t> counts;
  for (const auto& [_, c] : corpus.class_counts()) counts.push_back(c);
  std::sort(counts.begin(), counts.end());
  DistributionSummary s;
  s.num_classes = counts.size();
  s.min = counts.front();
  s.max = counts.back();
  const auto mid = counts.size() / 2;
  s.median = counts.size() % 2 ? static_cast<double>(counts[mid])
                                : (static_cast<double>(counts[mid - 1]) + static_cast<double>(counts[mid])) / 2.0;
  for (auto c : counts) s.total += c;
  return s;
}

}  // namespace vdo
