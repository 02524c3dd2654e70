#pragma once

#include <cstdint>

#include "vdo/corpus.hpp"

namespace vdo {

/// Separable desk-scale corpus: five classes (read, write, service_interrupt,
/// man_in_the_middle, memory), each document carrying its class keyword, one
/// class-specific secondary keyword and noise words shared by all classes.
/// Ids run CVE-9000-0001 upward; row order is a seeded shuffle.
Corpus synthetic_corpus(std::uint64_t seed = 123, std::size_t per_class = 20);

}  // namespace vdo
