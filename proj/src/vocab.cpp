#include "geotravel/vocab.hpp"

#include <algorithm>
#include <json.hpp>

#include "geotravel/errors.hpp"

namespace geotravel {

using nlohmann::json;

Vocabulary Vocabulary::build(std::span<const TokenizedDoc> docs,
                             std::size_t max_terms, double max_df_ratio) {
  if (docs.empty()) throw EmptyCorpus("cannot build a vocabulary from zero documents");
  if (max_terms < 1) throw std::invalid_argument("max_terms must be at least 1");
  if (!(max_df_ratio > 0.0 && max_df_ratio <= 1.0))
    throw std::invalid_argument("max_df_ratio must be in (0, 1]");

  struct Counts {
    std::uint64_t tf = 0;
    std::uint64_t df = 0;
    std::uint64_t last_doc = 0;  // 1-based id of the last doc counted for df
  };
  std::unordered_map<std::string, Counts> counts;
  std::uint64_t doc_no = 0;
  for (const TokenizedDoc& doc : docs) {
    ++doc_no;
    for (const std::string& token : doc.tokens) {
      Counts& c = counts[token];
      c.tf += 1;
      if (c.last_doc != doc_no) {
        c.df += 1;
        c.last_doc = doc_no;
      }
    }
  }

  Vocabulary v;
  v.n_docs_ = doc_no;
  v.max_terms_ = max_terms;
  v.max_df_ratio_ = max_df_ratio;

  std::vector<VocabEntry> candidates;
  candidates.reserve(counts.size());
  double df_cap = max_df_ratio * static_cast<double>(doc_no);
  for (auto& [term, c] : counts) {
    // Strict inequality: terms at exactly the cap are retained.
    if (static_cast<double>(c.df) > df_cap) continue;
    candidates.push_back({term, c.tf, c.df});
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const VocabEntry& a, const VocabEntry& b) {
              if (a.tf != b.tf) return a.tf > b.tf;
              return a.term < b.term;
            });
  if (candidates.size() > max_terms) candidates.resize(max_terms);

  v.entries_ = std::move(candidates);
  v.rebuild_index();
  return v;
}

void Vocabulary::rebuild_index() {
  index_.clear();
  index_.reserve(entries_.size());
  for (std::uint32_t i = 0; i < entries_.size(); ++i) index_[entries_[i].term] = i;
}

std::optional<std::uint32_t> Vocabulary::index_of(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void Vocabulary::save(std::ostream& os) const {
  json j;
  j["n_docs"] = n_docs_;
  j["max_terms"] = max_terms_;
  j["max_df_ratio"] = max_df_ratio_;
  json terms = json::array();
  for (const VocabEntry& e : entries_)
    terms.push_back({{"term", e.term}, {"tf", e.tf}, {"df", e.df}});
  j["terms"] = std::move(terms);
  os << j.dump(2) << '\n';
}

Vocabulary Vocabulary::load(std::istream& is) {
  json j = json::parse(is, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("terms"))
    throw IoError("invalid vocabulary file");
  Vocabulary v;
  v.n_docs_ = j.at("n_docs").get<std::uint64_t>();
  v.max_terms_ = j.at("max_terms").get<std::size_t>();
  v.max_df_ratio_ = j.at("max_df_ratio").get<double>();
  for (const json& t : j.at("terms"))
    v.entries_.push_back({t.at("term").get<std::string>(),
                          t.at("tf").get<std::uint64_t>(),
                          t.at("df").get<std::uint64_t>()});
  v.rebuild_index();
  return v;
}

SparseCounts bow_vector(const TokenizedDoc& doc, const Vocabulary& v) {
  SparseCounts sc;
  sc.dimension = static_cast<std::uint32_t>(v.size());
  std::unordered_map<std::uint32_t, std::uint32_t> counts;
  for (const std::string& token : doc.tokens)
    if (auto idx = v.index_of(token)) counts[*idx] += 1;
  sc.entries.assign(counts.begin(), counts.end());
  std::sort(sc.entries.begin(), sc.entries.end());
  return sc;
}

}  // namespace geotravel
