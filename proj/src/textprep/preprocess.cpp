#include <cctype>

#include "vdo/textprep.hpp"

namespace vdo {
namespace {

bool is_alnum(char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); }
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_scheme_char(char c) { return is_alnum(c) || c == '+' || c == '.' || c == '-'; }

bool url_starts_at(std::string_view s, std::size_t i) {
  if (s.compare(i, 4, "www.") == 0 && (i == 0 || !is_alnum(s[i - 1]))) return true;
  if (s[i] < 'a' || s[i] > 'z' || (i > 0 && is_scheme_char(s[i - 1]))) return false;
  std::size_t j = i;
  while (j < s.size() && is_scheme_char(s[j])) ++j;
  return s.compare(j, 3, "://") == 0;
}

}  // namespace

std::string strip_urls(std::string_view lowered) {
  std::string out;
  out.reserve(lowered.size());
  std::size_t i = 0;
  while (i < lowered.size()) {
    if (url_starts_at(lowered, i)) {
      while (i < lowered.size() && !is_space(lowered[i])) ++i;
      continue;
    }
    out.push_back(lowered[i++]);
  }
  return out;
}

Preprocessor::Preprocessor() : stopwords_(default_stopwords()) {}

Preprocessor::Preprocessor(std::set<std::string, std::less<>> stopwords) : stopwords_(std::move(stopwords)) {}

TokenList Preprocessor::operator()(std::string_view text) const {
  std::string lowered(text);
  for (auto& c : lowered) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  const auto cleaned = strip_urls(lowered);

  TokenList tokens;
  std::size_t i = 0;
  while (i < cleaned.size()) {
    while (i < cleaned.size() && !is_alnum(cleaned[i])) ++i;
    const auto start = i;
    while (i < cleaned.size() && is_alnum(cleaned[i])) ++i;
    if (i == start) break;
    const std::string_view word(cleaned.data() + start, i - start);
    if (stopwords_.contains(word)) continue;
    auto stem = porter_stem(word);
    if (stopwords_.contains(stem)) continue;  // e.g. "ones" -> "one"
    tokens.push_back(std::move(stem));
  }
  return tokens;
}

TokenList preprocess(std::string_view text) {
  static const Preprocessor kDefault;
  return kDefault(text);
}

}  // namespace vdo
