#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace geotravel {

/// A tweet's text reduced to classifier-ready terms.
struct TokenizedDoc {
  std::int64_t tweet_id = 0;
  std::vector<std::string> tokens;
};

/// Text cleanup applied before any featurization, in order:
///   1. lowercasing (UTF-8, simple one-to-one mapping over Latin, Latin-1,
///      Latin Extended-A, Greek and Cyrillic);
///   2. runs of the same character longer than three truncated to three;
///   3. URLs (http:// or https:// up to the next whitespace) and mentions
///      (@ followed by word characters) removed, the removal site and its
///      surrounding whitespace collapsing to a single space;
/// and the result trimmed.
std::string normalize(std::string_view text);

/// Splits normalized text on whitespace, strips leading/trailing ASCII
/// punctuation from each chunk (a leading '#' is kept so hashtags survive
/// whole), and drops chunks that become empty. Interior punctuation is kept.
std::vector<std::string> tokenize(std::string_view normalized);

/// Lowercases UTF-8 text with the same mapping normalize uses.
std::string lowercase_utf8(std::string_view text);

}  // namespace geotravel
