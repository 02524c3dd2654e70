#include "vdo/synthetic.hpp"

#include <array>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "vdo/rng.hpp"

namespace vdo {
namespace {

struct ClassWords {
  Label label;
  std::string_view keyword;
  std::array<std::string_view, 3> secondary;
};

constexpr std::array<ClassWords, 5> kClasses{{
    {Label::Write, "tamper", {"modify", "overwrite", "inject"}},
    {Label::Read, "exfiltrate", {"confidential", "disclose", "leak"}},
    {Label::ServiceInterrupt, "crash", {"denial", "exhaust", "hang"}},
    {Label::ManInTheMiddle, "intercept", {"spoof", "certificate", "eavesdrop"}},
    {Label::Memory, "heap", {"buffer", "overflow", "pointer"}},
}};

constexpr std::array<std::string_view, 32> kNoise{
    "component", "module",   "version",  "remote",    "attacker", "crafted", "request", "parameter",
    "server",    "client",   "product",  "release",   "update",   "handler", "endpoint", "library",
    "plugin",    "session",  "user",     "admin",     "portal",   "gateway", "router",  "firmware",
    "daemon",    "driver",   "console",  "dashboard", "upload",   "script",  "query",   "token"};

}  // namespace

Corpus synthetic_corpus(std::uint64_t seed, std::size_t per_class) {
  struct Draft {
    Label label;
    std::string text;
  };
  std::vector<Draft> drafts;
  for (std::size_t c = 0; c < kClasses.size(); ++c) {
    const auto& cls = kClasses[c];
    for (std::size_t d = 0; d < per_class; ++d) {
      RngStream rng(seed, "synthetic-doc", c * 100000 + d);
      std::vector<std::string_view> words;
      const std::size_t noise = 6 + rng.below(5);
      for (std::size_t i = 0; i < noise; ++i) words.push_back(kNoise[rng.below(kNoise.size())]);
      words.push_back(cls.keyword);
      words.push_back(cls.secondary[rng.below(cls.secondary.size())]);
      rng.shuffle(words.begin(), words.end());

      std::string text = "An issue in the ";
      for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) text += ' ';
        text += words[i];
      }
      text += '.';
      drafts.push_back({cls.label, std::move(text)});
    }
  }
  RngStream(seed, "synthetic-order").shuffle(drafts.begin(), drafts.end());

  std::vector<LabeledExample> examples;
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "CVE-9000-%04zu", i + 1);
    examples.push_back({id, std::move(drafts[i].text), drafts[i].label});
  }
  return Corpus(std::move(examples));
}

}  // namespace vdo
