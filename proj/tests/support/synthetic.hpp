#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "geotravel/corpus.hpp"
#include "geotravel/rng.hpp"

namespace geotravel::testsupport {

/// Two-class synthetic tweet corpus: travel chatter built around transport
/// nouns (each with a formal form matching the keyword query and a slang
/// form that does not), versus background small talk. Travel docs embed the
/// noun between travel-context verbs so the formal and slang forms share
/// contexts.
struct SyntheticOptions {
  std::size_t n_travel_formal = 3000;
  std::size_t n_travel_slang = 800;
  std::size_t n_background = 4200;
  std::uint64_t seed = 1;
  bool with_geo = false;  // attach coordinates inside the toy city box
};

struct SyntheticCorpus {
  std::vector<Tweet> tweets;  // shuffled, ids unique
  std::unordered_map<std::int64_t, bool> labels;
  std::vector<std::pair<std::string, std::string>> synonym_pairs;  // formal, slang
  std::vector<std::string> travel_contexts;
  std::vector<std::string> background_words;
  GeoBox city;  // toy city box used when with_geo is set
};

SyntheticCorpus make_synthetic_corpus(const SyntheticOptions& opt);

/// Travel tweets written only with slang nouns and background words, so the
/// bag-of-words block of a model trained on formal-noun tweets carries no
/// transport signal for them.
std::vector<Tweet> make_shifted_travel_tweets(const SyntheticCorpus& corpus,
                                              std::size_t count,
                                              std::int64_t first_id,
                                              std::uint64_t seed);

/// Background (non-travel) tweets with fresh ids.
std::vector<Tweet> make_background_tweets(const SyntheticCorpus& corpus,
                                          std::size_t count, std::int64_t first_id,
                                          std::uint64_t seed);

/// Random unicode-ish text: letters (including accented), digits, spaces,
/// punctuation, hashtags, mentions, URLs and long character runs.
std::string random_text(Rng& rng);

/// Random tweets with lattice-aligned geo fields (multiples of 0.25 inside
/// [-3, 3]), random language from {pt, en, es}, and random users/timestamps.
std::vector<Tweet> random_tweets(Rng& rng, std::size_t count);

/// Lattice-aligned random box with corners that are multiples of 0.25.
GeoBox random_lattice_box(Rng& rng);

/// One ingestion-format JSON line for a tweet.
std::string tweet_to_json_line(const Tweet& t);

}  // namespace geotravel::testsupport
