#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "geotravel/classify.hpp"
#include "geotravel/config.hpp"
#include "geotravel/textprep.hpp"

namespace geotravel {

// Tokenized-document JSON-lines ({"id":n,"tokens":[...]}).
void write_tokenized_docs(std::ostream& os, std::span<const TokenizedDoc> docs);
std::vector<TokenizedDoc> read_tokenized_docs(std::istream& is);

/// Deterministic train/test split of an annotated pool: seeded shuffle,
/// test_fraction held out, and (optionally) the training side balanced by
/// downsampling the majority class.
struct SplitIds {
  std::vector<std::int64_t> train;
  std::vector<std::int64_t> test;
};

SplitIds split_annotations(std::span<const std::pair<std::int64_t, bool>> annotations,
                           double test_fraction, bool balance_train,
                           std::uint64_t seed);

/// Runs filter, preprocess, vocab, embed, train, eval and analyze in order,
/// writing every stage artifact plus a per-stage manifest under
/// cfg.output_dir. Returns the process exit status: 0 on success, 2 when a
/// referenced input file is missing, 1 on a stage failure (partial artifacts
/// and the failing manifest are retained).
int run_pipeline(const RunConfig& cfg, std::ostream& log);

}  // namespace geotravel
