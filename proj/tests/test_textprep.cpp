#include <doctest.h>

#include "geotravel/rng.hpp"
#include "geotravel/textprep.hpp"
#include "support/synthetic.hpp"

using namespace geotravel;

TEST_SUITE_BEGIN("textprep");

TEST_CASE("repeated characters truncate to three") {
  CHECK(normalize("loooool") == "loool");
  CHECK(normalize("looool") == "loool");
  CHECK(normalize("loool") == "loool");
  CHECK(normalize("lool") == "lool");
  CHECK(normalize("kkkkkkkkkk") == "kkk");
  CHECK(normalize("!!!!!!") == "!!!");
  // Runs are counted per codepoint, accents included.
  CHECK(normalize("nãããão") == "nããão");
}

TEST_CASE("lowercasing handles accented capitals") {
  CHECK(normalize("Ônibus LOTADO") == "ônibus lotado");
  CHECK(normalize("SÃO PAULO É Grande") == "são paulo é grande");
  CHECK(lowercase_utf8("ÀÉÎÕÜÇ") == "àéîõüç");
}

TEST_CASE("urls and mentions are removed") {
  CHECK(normalize("vejam https://t.co/x9 @joao agora") == "vejam agora");
  CHECK(normalize("http://inicio.com oi") == "oi");
  CHECK(normalize("oi http://fim.com") == "oi");
  CHECK(normalize("@solto") == "");
  CHECK(normalize("HTTP://MAIUSCULO.COM oi") == "oi");
  CHECK(normalize("a @x @y b") == "a b");
  // Mentions are removed entirely, not replaced.
  CHECK(normalize("antes @fulano_123 depois") == "antes depois");
}

TEST_CASE("tokenize splits and trims punctuation") {
  CHECK(tokenize("peguei o ônibus, agora!") ==
        std::vector<std::string>{"peguei", "o", "ônibus", "agora"});
  CHECK(tokenize("#riodejaneiro é lindo") ==
        std::vector<std::string>{"#riodejaneiro", "é", "lindo"});
  CHECK(tokenize("") == std::vector<std::string>{});
  CHECK(tokenize("(#rio)!") == std::vector<std::string>{"#rio"});
  CHECK(tokenize("guarda-chuva d'água") ==
        std::vector<std::string>{"guarda-chuva", "d'água"});
  CHECK(tokenize("... !!! ???") == std::vector<std::string>{});
  CHECK(tokenize("#") == std::vector<std::string>{});
}

TEST_CASE("normalize is idempotent on random inputs") {
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    std::string text = testsupport::random_text(rng);
    std::string once = normalize(text);
    CHECK(normalize(once) == once);
  }
}

namespace {

// Longest run of identical codepoints, scanning UTF-8 byte-wise is enough
// here because equal codepoints have equal encodings.
std::size_t longest_ascii_run(const std::string& s) {
  std::size_t best = 0, run = 0;
  char prev = '\0';
  for (char c : s) {
    run = (c == prev) ? run + 1 : 1;
    prev = c;
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80)  // count codepoint starts
      best = std::max(best, run);
  }
  return best;
}

}  // namespace

TEST_CASE("no identical-character run exceeds three after normalize") {
  Rng rng(12);
  for (int i = 0; i < 2000; ++i) {
    std::string once = normalize(testsupport::random_text(rng));
    // ASCII runs only; multi-byte runs are covered by the fixed cases above.
    CHECK(longest_ascii_run(once) <= 3);
  }
}

TEST_CASE("tokens satisfy the document invariants for arbitrary input") {
  Rng rng(13);
  for (int i = 0; i < 2000; ++i) {
    std::string text = testsupport::random_text(rng);
    for (const std::string& token : tokenize(normalize(text))) {
      CHECK_FALSE(token.empty());
      CHECK(token.find(' ') == std::string::npos);
      CHECK(token.find('\t') == std::string::npos);
      CHECK(token.find('\n') == std::string::npos);
      CHECK(token.rfind("http://", 0) != 0);
      CHECK(token.rfind("https://", 0) != 0);
      CHECK(token[0] != '@');
      // Lowercasing an output token is the identity.
      CHECK(lowercase_utf8(token) == token);
    }
  }
}

TEST_SUITE_END();
