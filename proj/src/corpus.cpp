#include "geotravel/corpus.hpp"

#include <json.hpp>

#include "geotravel/errors.hpp"
#include "geotravel/time_util.hpp"

namespace geotravel {

using nlohmann::json;

namespace {

GeoPoint parse_point(const json& j, const char* what) {
  if (!j.is_object() || !j.contains("lat") || !j.contains("lon") ||
      !j["lat"].is_number() || !j["lon"].is_number())
    throw RecordMalformed(std::string("bad ") + what + " object");
  try {
    return GeoPoint(j["lat"].get<double>(), j["lon"].get<double>());
  } catch (const std::invalid_argument& e) {
    throw RecordMalformed(std::string(what) + ": " + e.what());
  }
}

}  // namespace

void CorpusStats::merge(const CorpusStats& other) {
  total += other.total;
  lang_match += other.lang_match;
  lang_other += other.lang_other;
  inside_box += other.inside_box;
  outside_box += other.outside_box;
  lang_and_inside += other.lang_and_inside;
  unresolvable += other.unresolvable;
  skipped_malformed += other.skipped_malformed;
}

Tweet parse_tweet_record(std::string_view line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw RecordMalformed("invalid JSON record");

  for (const char* field : {"id", "text", "lang", "created_at"})
    if (!j.contains(field))
      throw RecordIncomplete(std::string("missing required field: ") + field);

  Tweet t;
  if (!j["id"].is_number_integer()) throw RecordMalformed("id must be an integer");
  t.id = j["id"].get<std::int64_t>();
  if (!j["text"].is_string()) throw RecordMalformed("text must be a string");
  t.text = j["text"].get<std::string>();
  if (t.text.empty()) throw RecordIncomplete("empty text");
  if (!j["lang"].is_string()) throw RecordMalformed("lang must be a string");
  t.lang = j["lang"].get<std::string>();
  if (!j["created_at"].is_string()) throw RecordMalformed("created_at must be a string");
  try {
    t.created_at = parse_rfc3339(j["created_at"].get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw RecordMalformed(std::string("created_at: ") + e.what());
  }

  if (j.contains("coordinates") && !j["coordinates"].is_null())
    t.coordinates = parse_point(j["coordinates"], "coordinates");

  if (j.contains("place") && !j["place"].is_null()) {
    const json& place = j["place"];
    if (!place.is_object()) throw RecordMalformed("place must be an object");
    if (place.contains("name") && place["name"].is_string())
      t.place_name = place["name"].get<std::string>();
    if (place.contains("bounding_box") && !place["bounding_box"].is_null()) {
      const json& bb = place["bounding_box"];
      if (!bb.is_object() || !bb.contains("sw") || !bb.contains("ne"))
        throw RecordMalformed("bad place.bounding_box object");
      GeoPoint sw = parse_point(bb["sw"], "place.bounding_box.sw");
      GeoPoint ne = parse_point(bb["ne"], "place.bounding_box.ne");
      try {
        t.place_box = GeoBox(sw, ne);
      } catch (const std::invalid_argument& e) {
        throw RecordMalformed(std::string("place.bounding_box: ") + e.what());
      }
    }
  }

  if (j.contains("user_id")) {
    if (!j["user_id"].is_number_integer())
      throw RecordMalformed("user_id must be an integer");
    t.user_id = j["user_id"].get<std::int64_t>();
  }

  return t;
}

GeoResolution resolve_location(const Tweet& t, const GeoBox& city) {
  if (t.coordinates) {
    if (point_in_box(*t.coordinates, city))
      return {GeoResolutionKind::InsideByCoordinates, t.coordinates};
    return {GeoResolutionKind::Outside, std::nullopt};
  }
  if (t.place_box) {
    if (boxes_overlap(*t.place_box, city))
      return {GeoResolutionKind::InsideByPlaceOverlap, box_centroid(*t.place_box)};
    return {GeoResolutionKind::Outside, std::nullopt};
  }
  return {GeoResolutionKind::Unresolvable, std::nullopt};
}

std::optional<GeoPoint> effective_point(const Tweet& t) {
  if (t.coordinates) return t.coordinates;
  if (t.place_box) return box_centroid(*t.place_box);
  return std::nullopt;
}

namespace {

/// Tallies one parsed record; returns true when it passes both filters.
bool tally(CorpusStats& stats, const Tweet& t, const GeoBox& city,
           const std::string& language) {
  stats.total += 1;
  bool lang_ok = t.lang == language;
  if (lang_ok)
    stats.lang_match += 1;
  else
    stats.lang_other += 1;

  GeoResolution res = resolve_location(t, city);
  bool inside = res.kind == GeoResolutionKind::InsideByCoordinates ||
                res.kind == GeoResolutionKind::InsideByPlaceOverlap;
  if (inside)
    stats.inside_box += 1;
  else
    stats.outside_box += 1;
  if (res.kind == GeoResolutionKind::Unresolvable) stats.unresolvable += 1;

  if (lang_ok && inside) {
    stats.lang_and_inside += 1;
    return true;
  }
  return false;
}

}  // namespace

FilterResult filter_corpus(std::span<const Tweet> records, const GeoBox& city,
                           const std::string& language) {
  FilterResult result;
  for (const Tweet& t : records)
    if (tally(result.stats, t, city, language)) result.retained.push_back(t);
  return result;
}

CorpusStats filter_stream(std::istream& in, std::ostream& out, const GeoBox& city,
                          const std::string& language, std::ostream* errlog) {
  CorpusStats stats;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      Tweet t = parse_tweet_record(line);
      if (tally(stats, t, city, language)) out << line << '\n';
    } catch (const Error& e) {
      stats.skipped_malformed += 1;
      if (errlog) *errlog << "line " << line_no << ": skipped (" << e.what() << ")\n";
    }
  }
  return stats;
}

CorpusStats stats_stream(std::istream& in, const GeoBox& city,
                         const std::string& language, std::ostream* errlog) {
  CorpusStats stats;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      Tweet t = parse_tweet_record(line);
      tally(stats, t, city, language);
    } catch (const Error& e) {
      stats.skipped_malformed += 1;
      if (errlog) *errlog << "line " << line_no << ": skipped (" << e.what() << ")\n";
    }
  }
  return stats;
}

std::vector<Tweet> read_tweets(std::istream& in, std::uint64_t* skipped,
                               std::ostream* errlog) {
  std::vector<Tweet> tweets;
  std::string line;
  std::uint64_t line_no = 0, bad = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      tweets.push_back(parse_tweet_record(line));
    } catch (const Error& e) {
      ++bad;
      if (errlog) *errlog << "line " << line_no << ": skipped (" << e.what() << ")\n";
    }
  }
  if (skipped) *skipped = bad;
  return tweets;
}

std::string stats_to_json(const CorpusStats& s) {
  json j;
  j["total"] = s.total;
  j["lang_match"] = s.lang_match;
  j["lang_other"] = s.lang_other;
  j["inside_box"] = s.inside_box;
  j["outside_box"] = s.outside_box;
  j["lang_and_inside"] = s.lang_and_inside;
  j["unresolvable"] = s.unresolvable;
  j["skipped_malformed"] = s.skipped_malformed;
  return j.dump();
}

}  // namespace geotravel
