#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace vdo {

using TokenList = std::vector<std::string>;

/// The bundled English stopword list (318 words).
const std::set<std::string, std::less<>>& default_stopwords();

/// One word per line; blank lines and lines starting with '#' are skipped.
std::set<std::string, std::less<>> load_stopwords(const std::string& path);

/// Classic Porter (1980) stemmer. Input must be lowercase [a-z0-9]+; tokens
/// containing digits are returned unchanged.
std::string porter_stem(std::string_view word);

/// Removes every maximal run starting at `scheme://` or `www.` up to the next
/// whitespace. Expects lowercase input.
std::string strip_urls(std::string_view lowered);

/// Lowercase, drop URLs, split on non-alphanumerics, drop stopwords, stem.
/// A stem that is itself a stopword is dropped too.
class Preprocessor {
 public:
  Preprocessor();
  explicit Preprocessor(std::set<std::string, std::less<>> stopwords);

  TokenList operator()(std::string_view text) const;

  const std::set<std::string, std::less<>>& stopwords() const noexcept { return stopwords_; }

 private:
  std::set<std::string, std::less<>> stopwords_;
};

/// preprocess() with the bundled stopword list.
TokenList preprocess(std::string_view text);

}  // namespace vdo
