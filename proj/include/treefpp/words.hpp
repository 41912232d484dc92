#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace treefpp {

// A word over group generators: +k means generator index k-1, -k its inverse.
// The empty word is the identity. Products act right-to-left: in "a b" the
// letter b is applied first, matching the composition convention.
using GenWord = std::vector<int32_t>;

GenWord reduce_word(GenWord w);
GenWord invert_word(const GenWord& w);
GenWord concat_words(const GenWord& a, const GenWord& b);
GenWord power_word(const GenWord& w, int64_t e);

// Renders as space-separated tokens, "x" or "x^-1"; empty word prints "1".
std::string format_word(const GenWord& w, const std::vector<std::string>& names);

// Parses space-separated tokens "x", "x^k", "x^-k"; "1" alone is the empty
// word. Throws std::invalid_argument on unknown names or malformed tokens.
GenWord parse_word(const std::string& text, const std::vector<std::string>& names);

// Total ordering for deterministic tie-breaking: by length, then lexicographic
// on letter codes.
bool word_less(const GenWord& a, const GenWord& b);

// Reading order for reports: by length, then letterwise with each generator
// directly before its inverse (a < a^-1 < b < b^-1).
bool word_display_less(const GenWord& a, const GenWord& b);

}  // namespace treefpp
