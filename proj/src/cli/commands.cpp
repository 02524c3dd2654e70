#include "vdo/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include "vdo/corpus.hpp"
#include "vdo/error.hpp"
#include "vdo/eval/cross_validation.hpp"
#include "vdo/eval/report.hpp"
#include "vdo/hash.hpp"
#include "vdo/ml/model.hpp"
#include "vdo/ml/model_io.hpp"
#include "vdo/nvd_client.hpp"
#include "vdo/parallel.hpp"
#include "vdo/pipeline.hpp"
#include "vdo/stats/friedman.hpp"
#include "vdo/stats/report.hpp"
#include "vdo/synthetic.hpp"
#include "vdo/textprep.hpp"
#include "vdo/tfidf.hpp"

namespace vdo::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class UsageError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class Findings : public Error {
 public:
  using Error::Error;
};

constexpr const char* kToolName = "vdo-characterize";

bool wants_json(const RunConfig& c) { return c.format == "json" || c.format == "both"; }
bool wants_markdown(const RunConfig& c) { return c.format == "markdown" || c.format == "both"; }

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path.string());
  f << content;
  if (!f.flush()) throw IoError("error writing " + path.string());
}

std::string render(const json& j) { return j.dump(2) + "\n"; }

/// Writes <out>/<stem>.json and/or .md, or prints them when no --out is given.
void emit(const RunConfig& c, const std::string& stem, const json& doc, const std::string& markdown,
          std::ostream& out) {
  if (c.out.empty()) {
    if (wants_json(c)) out << render(doc);
    if (wants_markdown(c)) out << markdown;
    return;
  }
  if (wants_json(c)) write_file(fs::path(c.out) / (stem + ".json"), render(doc));
  if (wants_markdown(c)) write_file(fs::path(c.out) / (stem + ".md"), markdown);
}

json envelope(const RunConfig& c, const std::string& dataset_hash) {
  json j = {{"tool", kToolName}, {"config", config_to_json(c)}};
  if (!dataset_hash.empty()) j["dataset_sha256"] = dataset_hash;
  return j;
}

std::string markdown_header(const std::string& title, const RunConfig& c, const std::string& dataset_hash) {
  std::ostringstream s;
  s << "# " << title << "\n\n";
  s << "Command: `" << c.command << "`";
  if (!c.dataset.empty()) s << ", dataset: `" << c.dataset << "`";
  s << ", seed: " << c.seed << "\n";
  if (!dataset_hash.empty()) s << "Dataset SHA-256: `" << dataset_hash << "`\n";
  s << '\n';
  return s.str();
}

std::string require_file(const std::string& path, const char* flag) {
  if (path.empty()) throw UsageError(std::string(flag) + " is required");
  if (!fs::is_regular_file(path)) throw IoError("no such file: " + path);
  return sha256_file(path);
}

Corpus load_dataset(const RunConfig& c, std::string& hash) {
  hash = require_file(c.dataset, "--dataset");
  return load_labeled(c.dataset);
}

std::vector<ml::AlgorithmKind> selected_algorithms(const RunConfig& c, bool allow_all) {
  if (c.algo == "all") {
    if (!allow_all) throw UsageError("--algo all is not allowed here; name one algorithm");
    return {ml::kAllAlgorithms.begin(), ml::kAllAlgorithms.end()};
  }
  const auto kind = ml::parse_algorithm(c.algo);
  if (!kind) throw UsageError("unknown algorithm \"" + c.algo + "\"");
  return {*kind};
}

ml::AlgorithmSpec spec_for(ml::AlgorithmKind kind, const RunConfig& c) {
  auto spec = ml::AlgorithmSpec::defaults(kind);
  spec.seed = c.seed;
  return spec;
}

// validate --------------------------------------------------------------------

int cmd_validate(const RunConfig& c, std::ostream& out) {
  const auto hash = require_file(c.dataset, "--dataset");
  const auto loaded = load_labeled_lenient(c.dataset);
  const auto report = validate(loaded.corpus, c.min_count);

  json line_errors = json::array();
  for (const auto& e : loaded.errors) line_errors.push_back({{"line", e.line}, {"message", e.message}});
  json counts = json::object();
  for (const auto& [label, n] : report.class_counts) counts[std::string(label_id(label))] = n;
  json dups = json::array();
  for (const auto& d : report.duplicates) {
    dups.push_back({{"cve_id", d.cve_id}, {"label", std::string(label_id(d.label))}, {"rows", d.rows}});
  }
  json below = json::array();
  for (Label l : report.below_minimum) below.push_back(std::string(label_id(l)));

  const bool clean = loaded.errors.empty() && report.ok();
  auto doc = envelope(c, hash);
  doc["validation"] = {{"ok", clean},
                       {"examples", loaded.corpus.size()},
                       {"min_class_count", report.min_class_count},
                       {"class_counts", counts},
                       {"line_errors", line_errors},
                       {"duplicates", dups},
                       {"below_minimum", below},
                       {"warnings", report.warnings},
                       {"errors", report.errors}};

  std::ostringstream md;
  md << markdown_header("Dataset validation", c, hash);
  md << "Examples: " << loaded.corpus.size() << ", status: " << (clean ? "ok" : "findings") << "\n\n";
  md << "| Characterization | Count |\n|---|---|\n";
  for (const auto& [label, n] : report.class_counts) md << "| " << display_name(label) << " | " << n << " |\n";
  if (!loaded.errors.empty()) {
    md << "\n## Line errors\n\n";
    for (const auto& e : loaded.errors) md << "- line " << e.line << ": " << e.message << '\n';
  }
  if (!report.errors.empty()) {
    md << "\n## Errors\n\n";
    for (const auto& e : report.errors) md << "- " << e << '\n';
  }
  if (!report.warnings.empty()) {
    md << "\n## Warnings\n\n";
    for (const auto& w : report.warnings) md << "- " << w << '\n';
  }
  emit(c, "validation", doc, md.str(), out);
  return clean ? kExitOk : kExitFindings;
}

// cv --------------------------------------------------------------------------

int cmd_cv(const RunConfig& c, std::ostream& out) {
  if (c.k < 2) throw UsageError("--k must be at least 2");
  const auto kinds = selected_algorithms(c, true);
  std::string hash;
  const auto corpus = load_dataset(c, hash);
  const auto check = validate(corpus, 2);
  if (!check.ok()) throw Findings("dataset failed validation: " + check.errors.front());
  if (!check.below_minimum.empty()) {
    throw Findings("class " + std::string(label_id(check.below_minimum.front())) + " has fewer than 2 examples");
  }
  if (c.k > corpus.size()) throw UsageError("--k exceeds the number of examples");

  std::vector<eval::EvalReport> reports;
  for (auto kind : kinds) {
    const auto cv = eval::cross_validate(spec_for(kind, c), corpus, c.k, c.seed);
    reports.push_back(eval::make_report(kind, cv));
    const auto& r = reports.back();
    auto doc = envelope(c, hash);
    doc["algorithm_spec"] = ml::spec_to_json(spec_for(kind, c));
    doc["evaluation"] = eval::report_to_json(r);
    const auto md = markdown_header("Cross-validation: " + std::string(ml::algorithm_display(kind)), c, hash) +
                    eval::report_markdown(r);
    emit(c, "cv_" + std::string(ml::algorithm_id(kind)), doc, md, out);
  }

  if (kinds.size() > 1) {
    const auto scores = eval::f1_score_matrix(reports);
    const auto best = eval::rbp(scores);
    std::ostringstream csv;
    eval::write_score_csv(csv, scores);
    if (c.out.empty()) {
      out << csv.str();
    } else {
      write_file(fs::path(c.out) / "f1_scores.csv", csv.str());
    }
    auto doc = envelope(c, hash);
    json rows = json::array();
    for (std::size_t j = 0; j < scores.num_classifiers(); ++j) {
      rows.push_back({{"classifier", scores.classifier_names[j]}, {"wins", best.wins[j]}, {"ratio", best.ratio[j]}});
    }
    doc["rbp"] = rows;
    emit(c, "rbp", doc, markdown_header("Per-characteristic F-measure", c, hash) + eval::score_markdown(scores, best),
         out);
  }
  return kExitOk;
}

// train / predict ---------------------------------------------------------------

int cmd_train(const RunConfig& c, std::ostream& out) {
  if (c.model.empty()) throw UsageError("--model is required");
  const auto kind = selected_algorithms(c, false).front();
  std::string hash;
  const auto corpus = load_dataset(c, hash);
  const auto check = validate(corpus, 1);
  if (!check.ok()) throw Findings("dataset failed validation: " + check.errors.front());

  const auto model = TextModel::fit(spec_for(kind, c), corpus);
  auto doc = model.to_json();
  doc["provenance"] = envelope(c, hash);
  write_file(c.model, doc.dump() + "\n");
  out << "trained " << ml::algorithm_id(kind) << " on " << corpus.size() << " examples, "
      << model.model().classes.size() << " classes, " << model.vocabulary().size() << " terms -> " << c.model
      << '\n';
  return kExitOk;
}

TextModel load_model(const std::string& path) {
  if (path.empty()) throw UsageError("--model is required");
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("model file is not valid JSON: ") + e.what());
  }
  return TextModel::from_json(j);
}

int cmd_predict(const RunConfig& c, std::ostream& out) {
  if (c.text.empty() == c.cve.empty()) throw UsageError("give exactly one of --text or --cve");
  const auto model = load_model(c.model);
  std::string text = c.text;
  json source = {{"text", c.text}};
  if (!c.cve.empty()) {
    if (!is_valid_cve_id(c.cve)) throw UsageError("malformed CVE id \"" + c.cve + "\"");
    NvdClient client(options_from_environment());
    const auto record = client.fetch(c.cve);
    text = record.description;
    source = {{"cve_id", record.cve_id}, {"description", record.description}};
  }
  const auto p = model.predict_text(text);

  json scores = json::array();
  for (std::size_t i = 0; i < p.classes.size(); ++i) {
    scores.push_back({{"label", std::string(label_id(p.classes[i]))}, {"score", p.scores[i]}});
  }
  const json doc = {{"input", source},
                    {"algorithm", std::string(ml::algorithm_id(model.spec().kind))},
                    {"label", std::string(label_id(p.label))},
                    {"display", std::string(display_name(p.label))},
                    {"tokens", p.tokens},
                    {"scores", scores}};

  std::ostringstream md;
  md << "Prediction: **" << display_name(p.label) << "** (`" << label_id(p.label) << "`)\n\n";
  md << "Tokens:";
  for (const auto& t : p.tokens) md << ' ' << t;
  md << "\n\n| Characterization | Score |\n|---|---|\n";
  for (std::size_t i = 0; i < p.classes.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", p.scores[i]);
    md << "| " << display_name(p.classes[i]) << " | " << buf << " |\n";
  }
  if (wants_json(c)) out << render(doc);
  if (wants_markdown(c)) out << md.str();
  return kExitOk;
}

// stats -------------------------------------------------------------------------

int cmd_stats(const RunConfig& c, std::ostream& out) {
  const auto hash = require_file(c.scores, "--scores");
  const auto m = eval::load_score_csv(c.scores);
  if (m.num_classifiers() < 2) throw UsageError("the score matrix needs at least 2 classifier columns");
  if (m.num_classes() < 2) throw UsageError("the score matrix needs at least 2 class rows");
  const auto f = stats::friedman(m);
  const auto p = stats::conover(m, c.adjust == "holm" ? stats::PAdjust::Holm : stats::PAdjust::None);
  const auto best = eval::rbp(m);

  json doc = {{"tool", kToolName}, {"config", config_to_json(c)}, {"scores_sha256", hash}};
  doc["statistics"] = stats::stats_to_json(f, p);
  doc["rbp"] = {{"wins", best.wins}, {"ratio", best.ratio}};
  std::ostringstream md;
  md << "# Classifier comparison\n\nScores SHA-256: `" << hash << "`\n\n";
  md << stats::stats_markdown(f, p) << '\n' << eval::score_markdown(m, best);
  emit(c, "stats", doc, md.str(), out);
  return kExitOk;
}

// fetch / synth / tfidf -----------------------------------------------------------

int cmd_fetch(const RunConfig& c, std::ostream& out) {
  if (c.cve.empty()) throw UsageError("--cve is required");
  if (!is_valid_cve_id(c.cve)) throw UsageError("malformed CVE id \"" + c.cve + "\"");
  NvdClient client(options_from_environment());
  const auto r = client.fetch(c.cve);
  json doc = {{"cve_id", r.cve_id}, {"description", r.description}};
  if (r.source) doc["source"] = *r.source;
  out << render(doc);
  return kExitOk;
}

int cmd_synth(const RunConfig& c, std::ostream& out) {
  if (c.per_class < 2) throw UsageError("--per-class must be at least 2");
  const auto corpus = synthetic_corpus(c.seed, c.per_class);
  if (c.out.empty()) {
    write_labeled(out, corpus);
  } else {
    std::ostringstream s;
    write_labeled(s, corpus);
    write_file(c.out, s.str());
  }
  return kExitOk;
}

int cmd_tfidf(const RunConfig& c, std::ostream& out) {
  std::string hash;
  const auto corpus = load_dataset(c, hash);
  std::vector<TokenList> docs;
  for (const auto& e : corpus.examples()) docs.push_back(preprocess(e.description));
  const auto vocab = build_vocabulary(docs);
  auto m = tfidf_transform(docs, vocab);
  std::ostringstream s;
  write_matrix(s, m);
  if (c.out.empty()) {
    out << s.str();
  } else {
    write_file(c.out, s.str());
  }
  return kExitOk;
}

}  // namespace

json config_to_json(const RunConfig& c) {
  json j = {{"command", c.command}, {"seed", c.seed}, {"format", c.format}};
  if (!c.dataset.empty()) j["dataset"] = c.dataset;
  if (c.command == "cv" || c.command == "train") j["algo"] = c.algo;
  if (c.command == "cv") j["k"] = c.k;
  if (c.command == "validate") j["min_count"] = c.min_count;
  if (c.command == "stats") {
    j["scores"] = c.scores;
    j["adjust"] = c.adjust;
  }
  if (!c.model.empty() && c.command != "train") j["model"] = c.model;
  if (!c.cve.empty()) j["cve"] = c.cve;
  if (!c.text.empty()) j["text"] = c.text;
  return j;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Assigns VDO characterizations to CVE descriptions and evaluates classifiers.", kToolName};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", c.seed, "Random seed");
    sub->add_option("--threads", c.threads, "Worker threads (0 = all cores); never changes results");
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "markdown", "both"}));
  };

  auto* validate_cmd = app.add_subcommand("validate", "Check a labeled dataset");
  validate_cmd->add_option("--dataset", c.dataset, "JSON Lines dataset")->required();
  validate_cmd->add_option("--min-count", c.min_count, "Minimum examples per class");
  validate_cmd->add_option("--out", c.out, "Output directory (default: stdout)");
  add_format(validate_cmd);
  add_common(validate_cmd);

  auto* cv_cmd = app.add_subcommand("cv", "Stratified k-fold cross-validation");
  cv_cmd->add_option("--dataset", c.dataset, "JSON Lines dataset")->required();
  cv_cmd->add_option("--algo", c.algo, "Algorithm id or \"all\"");
  cv_cmd->add_option("--k", c.k, "Number of folds");
  cv_cmd->add_option("--out", c.out, "Output directory (default: stdout)");
  add_format(cv_cmd);
  add_common(cv_cmd);

  auto* train_cmd = app.add_subcommand("train", "Fit one algorithm on a whole dataset");
  train_cmd->add_option("--dataset", c.dataset, "JSON Lines dataset")->required();
  train_cmd->add_option("--algo", c.algo, "Algorithm id")->required();
  train_cmd->add_option("--model", c.model, "Model file to write")->required();
  add_common(train_cmd);

  auto* predict_cmd = app.add_subcommand("predict", "Characterize a description or a CVE id");
  predict_cmd->add_option("--model", c.model, "Model file")->required();
  predict_cmd->add_option("--text", c.text, "Description text");
  predict_cmd->add_option("--cve", c.cve, "CVE id fetched from the NVD");
  add_format(predict_cmd);
  add_common(predict_cmd);

  auto* stats_cmd = app.add_subcommand("stats", "Friedman and Conover tests on an F1 score matrix");
  stats_cmd->add_option("--scores", c.scores, "Score matrix CSV")->required();
  stats_cmd->add_option("--adjust", c.adjust, "Pairwise p-value adjustment")->check(CLI::IsMember({"none", "holm"}));
  stats_cmd->add_option("--out", c.out, "Output directory (default: stdout)");
  add_format(stats_cmd);
  add_common(stats_cmd);

  auto* fetch_cmd = app.add_subcommand("fetch", "Fetch a CVE description from the NVD (cached)");
  fetch_cmd->add_option("--cve", c.cve, "CVE id")->required();
  add_common(fetch_cmd);

  auto* synth_cmd = app.add_subcommand("synth", "Write the synthetic separable corpus");
  synth_cmd->add_option("--out", c.out, "Output file (default: stdout)");
  synth_cmd->add_option("--per-class", c.per_class, "Documents per class");
  add_common(synth_cmd);

  auto* tfidf_cmd = app.add_subcommand("tfidf", "Dump the TF-IDF matrix of a dataset");
  tfidf_cmd->add_option("--dataset", c.dataset, "JSON Lines dataset")->required();
  tfidf_cmd->add_option("--out", c.out, "Output file (default: stdout)");
  add_common(tfidf_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  c.command = app.get_subcommands().front()->get_name();
  set_worker_threads(c.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : c.threads);

  try {
    if (c.command == "validate") return cmd_validate(c, out);
    if (c.command == "cv") return cmd_cv(c, out);
    if (c.command == "train") return cmd_train(c, out);
    if (c.command == "predict") return cmd_predict(c, out);
    if (c.command == "stats") return cmd_stats(c, out);
    if (c.command == "fetch") return cmd_fetch(c, out);
    if (c.command == "synth") return cmd_synth(c, out);
    if (c.command == "tfidf") return cmd_tfidf(c, out);
    throw UsageError("unknown command " + c.command);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NvdError& e) {
    err << "error: " << e.what();
    if (e.retry_after()) err << " (retry after " << *e.retry_after() << ")";
    err << '\n';
    return e.kind() == NvdErrorKind::NotFound ? kExitFindings : kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFindings;
  }
}

}  // namespace vdo::cli
