#include "vdo/eval/score_matrix.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "vdo/error.hpp"

namespace vdo::eval {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cell);
      cell.clear();
    } else if (ch != '\r') {
      cell += ch;
    }
  }
  cells.push_back(cell);
  for (auto& c : cells) {
    const auto b = c.find_first_not_of(" \t");
    const auto e = c.find_last_not_of(" \t");
    c = b == std::string::npos ? std::string{} : c.substr(b, e - b + 1);
  }
  return cells;
}

double parse_cell(const std::string& s, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw ParseError(line, "not a number: \"" + s + "\"");
  }
  return v;
}

}  // namespace

void check_scores(const ScoreMatrix& m) {
  if (m.classifier_names.empty() || m.class_names.empty()) throw InvalidArgument("score matrix is empty");
  if (m.values.size() != m.class_names.size()) throw InvalidArgument("score matrix row count does not match classes");
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    if (m.values[i].size() != m.classifier_names.size()) {
      throw InvalidArgument("score matrix row \"" + m.class_names[i] + "\" has the wrong width");
    }
    for (double v : m.values[i]) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw InvalidArgument("score outside [0, 1] in row \"" + m.class_names[i] + "\"");
      }
    }
  }
}

ScoreMatrix parse_score_csv(std::istream& in) {
  ScoreMatrix m;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = split_csv_line(line);
    if (!header) {
      if (cells.size() < 2) throw ParseError(line_no, "header needs a class column and at least one classifier");
      m.classifier_names.assign(cells.begin() + 1, cells.end());
      header = true;
      continue;
    }
    if (cells.size() != m.classifier_names.size() + 1) {
      throw ParseError(line_no, "expected " + std::to_string(m.classifier_names.size() + 1) + " cells, got " +
                                    std::to_string(cells.size()));
    }
    std::vector<double> row;
    for (std::size_t j = 1; j < cells.size(); ++j) {
      const double v = parse_cell(cells[j], line_no);
      if (!(v >= 0.0 && v <= 1.0)) throw ParseError(line_no, "score outside [0, 1]: " + cells[j]);
      row.push_back(v);
    }
    m.class_names.push_back(cells[0]);
    m.values.push_back(std::move(row));
  }
  if (!header) throw ParseError(line_no, "missing header row");
  if (m.class_names.empty()) throw ParseError(line_no, "no score rows");
  return m;
}

ScoreMatrix load_score_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_score_csv(in);
}

void write_score_csv(std::ostream& out, const ScoreMatrix& m) {
  check_scores(m);
  out << "class";
  for (const auto& n : m.classifier_names) out << ',' << n;
  out << '\n';
  char buf[64];
  for (std::size_t i = 0; i < m.class_names.size(); ++i) {
    out << m.class_names[i];
    for (double v : m.values[i]) {
      const auto res = std::to_chars(buf, buf + sizeof buf, v);
      out << ',' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    }
    out << '\n';
  }
}

RbpResult rbp(const ScoreMatrix& m) {
  check_scores(m);
  RbpResult r;
  r.wins.assign(m.num_classifiers(), 0);
  for (const auto& row : m.values) {
    double best = row[0];
    for (double v : row) best = std::max(best, v);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j] == best) ++r.wins[j];
    }
  }
  for (auto w : r.wins) r.ratio.push_back(static_cast<double>(w) / static_cast<double>(m.num_classes()));
  return r;
}

}  // namespace vdo::eval
