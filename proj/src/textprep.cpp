#include "geotravel/textprep.hpp"

#include <cstdint>

namespace geotravel {

namespace {

// Invalid bytes are carried through as pseudo-codepoints in the surrogate
// range (0xDC80 + byte), so decoding never fails and re-encoding restores
// the original bytes.
constexpr char32_t kRawByteBase = 0xDC80;

std::size_t decode_utf8(std::string_view s, std::size_t pos, char32_t& cp) {
  unsigned char b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) {
    cp = b0;
    return 1;
  }
  std::size_t len = 0;
  char32_t value = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    value = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    value = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    value = b0 & 0x07;
  } else {
    cp = kRawByteBase + b0;
    return 1;
  }
  if (pos + len > s.size()) {
    cp = kRawByteBase + b0;
    return 1;
  }
  for (std::size_t i = 1; i < len; ++i) {
    unsigned char b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) {
      cp = kRawByteBase + b0;
      return 1;
    }
    value = (value << 6) | (b & 0x3F);
  }
  // Reject overlong encodings and out-of-range values.
  if ((len == 2 && value < 0x80) || (len == 3 && value < 0x800) ||
      (len == 4 && value < 0x10000) || value > 0x10FFFF) {
    cp = kRawByteBase + b0;
    return 1;
  }
  cp = value;
  return len;
}

void encode_utf8(char32_t cp, std::string& out) {
  if (cp >= kRawByteBase && cp <= kRawByteBase + 0xFF) {
    out.push_back(static_cast<char>(cp - kRawByteBase));
  } else if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::vector<char32_t> decode_all(std::string_view s) {
  std::vector<char32_t> cps;
  cps.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) {
    char32_t cp;
    pos += decode_utf8(s, pos, cp);
    cps.push_back(cp);
  }
  return cps;
}

std::string encode_all(const std::vector<char32_t>& cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) encode_utf8(cp, out);
  return out;
}

char32_t lower_codepoint(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
  // Latin-1 supplement: À..Þ except the multiplication sign.
  if ((cp >= 0x00C0 && cp <= 0x00D6) || (cp >= 0x00D8 && cp <= 0x00DE)) return cp + 0x20;
  // Latin Extended-A: upper/lower pairs.
  if (cp >= 0x0100 && cp <= 0x0137) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp >= 0x0139 && cp <= 0x0148) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp >= 0x014A && cp <= 0x0177) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp == 0x0178) return 0x00FF;  // Ÿ → ÿ
  if (cp >= 0x0179 && cp <= 0x017E) return (cp % 2 == 1) ? cp + 1 : cp;
  // Greek.
  if (cp >= 0x0391 && cp <= 0x03A1) return cp + 0x20;
  if (cp >= 0x03A3 && cp <= 0x03AB) return cp + 0x20;
  // Cyrillic.
  if (cp >= 0x0410 && cp <= 0x042F) return cp + 0x20;
  if (cp >= 0x0400 && cp <= 0x040F) return cp + 0x50;
  return cp;
}

bool is_space_cp(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == U'\v' ||
         cp == U'\f';
}

bool is_word_cp(char32_t cp) {
  return (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z') ||
         (cp >= U'0' && cp <= U'9') || cp == U'_';
}

bool starts_with(const std::vector<char32_t>& cps, std::size_t pos, std::string_view lit) {
  if (pos + lit.size() > cps.size()) return false;
  for (std::size_t i = 0; i < lit.size(); ++i)
    if (cps[pos + i] != static_cast<char32_t>(static_cast<unsigned char>(lit[i])))
      return false;
  return true;
}

/// Length of the URL or mention starting at pos, or 0 when none starts there.
std::size_t match_removal(const std::vector<char32_t>& cps, std::size_t pos) {
  if (starts_with(cps, pos, "http://") || starts_with(cps, pos, "https://")) {
    std::size_t end = pos;
    while (end < cps.size() && !is_space_cp(cps[end])) ++end;
    return end - pos;
  }
  if (cps[pos] == U'@' && pos + 1 < cps.size() && is_word_cp(cps[pos + 1])) {
    std::size_t end = pos + 1;
    while (end < cps.size() && is_word_cp(cps[end])) ++end;
    return end - pos;
  }
  return 0;
}

std::vector<char32_t> compress_runs(const std::vector<char32_t>& cps) {
  std::vector<char32_t> out;
  out.reserve(cps.size());
  std::size_t i = 0;
  while (i < cps.size()) {
    std::size_t j = i;
    while (j < cps.size() && cps[j] == cps[i]) ++j;
    std::size_t run = j - i;
    if (run > 3) run = 3;
    out.insert(out.end(), run, cps[i]);
    i = j;
  }
  return out;
}

std::vector<char32_t> strip_urls_and_mentions(const std::vector<char32_t>& cps) {
  std::vector<char32_t> out;
  out.reserve(cps.size());
  std::size_t i = 0;
  while (i < cps.size()) {
    std::size_t len = match_removal(cps, i);
    if (len == 0) {
      out.push_back(cps[i]);
      ++i;
      continue;
    }
    // Drop the match together with whitespace already emitted before it,
    // skip whitespace after it, and leave a single space at the seam.
    while (!out.empty() && is_space_cp(out.back())) out.pop_back();
    i += len;
    while (i < cps.size() && is_space_cp(cps[i])) ++i;
    out.push_back(U' ');
  }
  return out;
}

std::vector<char32_t> trim(const std::vector<char32_t>& cps) {
  std::size_t begin = 0, end = cps.size();
  while (begin < end && is_space_cp(cps[begin])) ++begin;
  while (end > begin && is_space_cp(cps[end - 1])) --end;
  return std::vector<char32_t>(cps.begin() + static_cast<std::ptrdiff_t>(begin),
                               cps.begin() + static_cast<std::ptrdiff_t>(end));
}

bool is_ascii_punct(char32_t cp) {
  return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
         (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
}

}  // namespace

std::string lowercase_utf8(std::string_view text) {
  std::vector<char32_t> cps = decode_all(text);
  for (char32_t& cp : cps) cp = lower_codepoint(cp);
  return encode_all(cps);
}

std::string normalize(std::string_view text) {
  std::vector<char32_t> cps = decode_all(text);
  for (char32_t& cp : cps) cp = lower_codepoint(cp);
  cps = compress_runs(cps);
  cps = strip_urls_and_mentions(cps);
  cps = trim(cps);
  return encode_all(cps);
}

std::vector<std::string> tokenize(std::string_view normalized) {
  std::vector<char32_t> cps = decode_all(normalized);
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && is_space_cp(cps[i])) ++i;
    std::size_t j = i;
    while (j < cps.size() && !is_space_cp(cps[j])) ++j;
    if (j > i) {
      std::size_t begin = i, end = j;
      while (end > begin && is_ascii_punct(cps[end - 1]) &&
             !(end - 1 == begin && cps[begin] == U'#'))
        --end;
      while (begin < end && is_ascii_punct(cps[begin]) && cps[begin] != U'#') ++begin;
      // A bare "#" carries nothing.
      if (end > begin && !(end - begin == 1 && cps[begin] == U'#')) {
        std::string token;
        for (std::size_t k = begin; k < end; ++k) encode_utf8(cps[k], token);
        tokens.push_back(std::move(token));
      }
    }
    i = j;
  }
  return tokens;
}

}  // namespace geotravel
