#pragma once

/// \file ingest.hpp
/// Readers for the external inputs: concept lexicon tables, TRECVID-style
/// ranked shot lists, keyframe manifests and raw detection score files, plus
/// the assembly of those into a canonical Corpus.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "vidgraph/corpus.hpp"
#include "vidgraph/detail/text.hpp"
#include "vidgraph/error.hpp"
#include "vidgraph/semantics.hpp"

namespace vidgraph {

/// Parses a two-column (id, name) table. Columns may be separated by tabs,
/// commas, semicolons or blanks. A leading header row (e.g.
/// "TV10_ID LSCOM_Name") and '#' comments are skipped. Ids may carry leading
/// zeros.
inline ConceptLexicon parse_lexicon(std::string_view text) {
  ConceptLexicon lex;
  bool seen_data = false;
  const auto rows = detail::lines(text);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t line_no = i + 1;
    auto row = detail::trim(rows[i]);
    if (row.empty() || row.front() == '#') continue;
    auto fields = detail::split_fields(row);
    if (fields.size() < 2) throw ParseError("expected an id column and a name column", line_no);
    auto id = detail::parse_int<std::uint64_t>(fields[0]);
    if (!id) {
      if (!seen_data) {
        seen_data = true;  // header row
        continue;
      }
      throw ParseError("non-integer concept id '" + std::string(fields[0]) + "'", line_no);
    }
    seen_data = true;
    if (*id == 0 || *id > UINT32_MAX) throw ParseError("concept id out of range", line_no);
    // In blank-separated tables the name is the remainder of the row.
    std::string name;
    if (row.find_first_of("\t,;") == std::string_view::npos) {
      name = std::string(detail::trim(row.substr(row.find_first_of(" ", 0))));
    } else {
      if (fields.size() > 2) throw ParseError("too many columns", line_no);
      name = std::string(fields[1]);
    }
    try {
      lex.add(static_cast<ConceptId>(*id), std::move(name));
    } catch (const DomainError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return lex;
}

struct RankedItem {
  std::uint32_t seq_num{};
  ShotId shot_id;

  friend bool operator==(const RankedItem&, const RankedItem&) = default;
};

/// The ranked shot list for one concept.
struct RankingDocument {
  ConceptId feature_number{};
  std::vector<RankedItem> items;

  friend bool operator==(const RankingDocument&, const RankingDocument&) = default;
};

namespace detail {

namespace pt = boost::property_tree;

inline pt::ptree read_xml_tree(std::string_view text) {
  std::istringstream in{std::string(text)};
  pt::ptree tree;
  try {
    pt::read_xml(in, tree, pt::xml_parser::no_comments);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError("malformed XML: " + e.message(), e.line());
  }
  return tree;
}

inline std::optional<std::string> attr(const pt::ptree& node, const std::string& name) {
  auto attrs = node.get_child_optional("<xmlattr>");
  if (!attrs) return std::nullopt;
  auto v = attrs->get_optional<std::string>(name);
  return v ? std::optional<std::string>(*v) : std::nullopt;
}

inline void collect(const pt::ptree& node, const std::string& name, std::vector<const pt::ptree*>& out) {
  for (const auto& [key, child] : node) {
    if (key == name) out.push_back(&child);
    else if (key != "<xmlattr>") collect(child, name, out);
  }
}

}  // namespace detail

/// Parses one `videoFeatureExtractionFeatureResult` element (as root or nested
/// under a wrapper). seqNum values must run 1, 2, 3, ... in document order.
inline RankingDocument parse_ranking_xml(std::string_view text, const ConceptLexicon& lexicon) {
  auto tree = detail::read_xml_tree(text);
  std::vector<const detail::pt::ptree*> results;
  detail::collect(tree, "videoFeatureExtractionFeatureResult", results);
  if (results.empty()) throw ParseError("no videoFeatureExtractionFeatureResult element");
  if (results.size() > 1) throw ParseError("more than one videoFeatureExtractionFeatureResult element");
  const auto& node = *results.front();

  auto fnum_text = detail::attr(node, "fNum");
  if (!fnum_text) throw ParseError("missing fNum attribute");
  auto fnum = detail::parse_int<ConceptId>(*fnum_text);
  if (!fnum) throw ParseError("non-integer fNum '" + *fnum_text + "'");
  if (!lexicon.contains(*fnum)) throw ParseError("fNum " + std::to_string(*fnum) + " not in lexicon");

  RankingDocument doc{*fnum, {}};
  for (const auto& [key, child] : node) {
    if (key != "item") continue;
    auto seq_text = detail::attr(child, "seqNum");
    auto shot = detail::attr(child, "shotId");
    if (!seq_text || !shot || shot->empty()) throw ParseError("item requires seqNum and shotId");
    auto seq = detail::parse_int<std::uint32_t>(*seq_text);
    if (!seq) throw ParseError("non-integer seqNum '" + *seq_text + "'");
    if (*seq != doc.items.size() + 1)
      throw ParseError("non-monotone rank: seqNum " + *seq_text + " after " + std::to_string(doc.items.size()));
    doc.items.push_back({*seq, *shot});
  }
  return doc;
}

struct ManifestEntry {
  std::string video_id;
  std::string keyframe_path;
};

using Manifest = std::map<ShotId, ManifestEntry>;

/// Keyframe manifest rows: `shot_id video_id keyframe_path` or
/// `shot_id keyframe_path`. Blank lines and '#' comments are ignored.
inline Manifest parse_manifest(std::string_view text) {
  Manifest out;
  const auto rows = detail::lines(text);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto row = detail::trim(rows[i]);
    if (row.empty() || row.front() == '#') continue;
    auto f = detail::split_fields(row);
    ManifestEntry e;
    if (f.size() == 2) {
      e.keyframe_path = std::string(f[1]);
    } else if (f.size() == 3) {
      e.video_id = std::string(f[1]);
      e.keyframe_path = std::string(f[2]);
    } else {
      throw ParseError("expected 2 or 3 columns", i + 1);
    }
    if (f[0].empty() || e.keyframe_path.empty()) throw ParseError("empty shot id or keyframe path", i + 1);
    if (!out.emplace(std::string(f[0]), std::move(e)).second)
      throw ParseError("duplicate shot id '" + std::string(f[0]) + "'", i + 1);
  }
  return out;
}

/// Score file rows: `shot_id concept score`, where concept is a lexicon id or
/// an exact (case-sensitive) lexicon name. Columns are tab, semicolon or blank
/// separated; scores may use a decimal comma.
inline std::vector<DetectionRecord> parse_detections(std::string_view text, const ConceptLexicon& lexicon) {
  std::vector<DetectionRecord> out;
  std::set<std::pair<std::string, ConceptId>> seen;
  const auto rows = detail::lines(text);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto row = detail::trim(rows[i]);
    if (row.empty() || row.front() == '#') continue;
    auto f = detail::split_fields(row, true);
    if (f.size() != 3) throw ParseError("expected shot_id, concept, score", i + 1);
    std::optional<ConceptId> cid = detail::parse_int<ConceptId>(f[1]);
    if (!cid) cid = lexicon.id_of(f[1]);
    if (!cid || !lexicon.contains(*cid)) throw ParseError("unknown concept '" + std::string(f[1]) + "'", i + 1);
    auto score = detail::parse_decimal(f[2]);
    if (!score || *score < 0.0 || *score > 1.0) throw ParseError("score must be a probability in [0,1]", i + 1);
    if (!seen.emplace(std::string(f[0]), *cid).second)
      throw ParseError("duplicate (shot, concept) pair", i + 1);
    out.push_back({std::string(f[0]), *cid, *score, std::nullopt});
  }
  return out;
}

/// Binary labelling from ranked lists: shot s carries concept c iff s is among
/// the first `top_k` items of c's ranking. Every manifest shot becomes a corpus
/// shot; the result does not depend on the order of `rankings`.
inline Corpus assemble_corpus(const std::vector<RankingDocument>& rankings, const Manifest& manifest,
                              const ConceptLexicon& lexicon, std::size_t top_k) {
  std::set<ShotId> missing;
  std::set<ConceptId> features;
  std::map<ShotId, std::vector<ConceptId>> labels;
  for (const auto& doc : rankings) {
    if (!lexicon.contains(doc.feature_number))
      throw DomainError("ranking for concept " + std::to_string(doc.feature_number) + " not in lexicon");
    if (!features.insert(doc.feature_number).second)
      throw DomainError("duplicate ranking for concept " + std::to_string(doc.feature_number));
    for (const auto& item : doc.items) {
      if (!manifest.count(item.shot_id)) missing.insert(item.shot_id);
      else if (item.seq_num <= top_k) labels[item.shot_id].push_back(doc.feature_number);
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& s : missing) list += (list.empty() ? "" : ", ") + s;
    throw NotFoundError("shots missing from manifest: " + list);
  }
  std::vector<ShotRecord> shots;
  shots.reserve(manifest.size());
  for (const auto& [shot, entry] : manifest) {
    auto it = labels.find(shot);
    shots.push_back({shot, entry.video_id, entry.keyframe_path,
                     ConceptVector(shot, it == labels.end() ? std::vector<ConceptId>{} : it->second)});
  }
  return make_corpus(lexicon, std::move(shots));
}

/// Alternative ingest from raw detector scores thresholded at `tau`. Scores
/// are retained on the concept vectors.
inline Corpus assemble_corpus_from_detections(const std::vector<DetectionRecord>& records, const Manifest& manifest,
                                              const ConceptLexicon& lexicon, double tau) {
  std::set<ShotId> missing;
  for (const auto& r : records) {
    if (!manifest.count(r.shot_id)) missing.insert(r.shot_id);
    if (!lexicon.contains(r.concept_id))
      throw DomainError("detection references unknown concept " + std::to_string(r.concept_id));
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& s : missing) list += (list.empty() ? "" : ", ") + s;
    throw NotFoundError("shots missing from manifest: " + list);
  }
  auto labels = binarize_detections(records, tau);
  std::vector<ShotRecord> shots;
  for (const auto& [shot, entry] : manifest) {
    auto it = labels.find(shot);
    ShotRecord rec{shot, entry.video_id, entry.keyframe_path,
                   ConceptVector(shot, it == labels.end() ? std::vector<ConceptId>{}
                                                          : std::vector<ConceptId>(it->second.begin(), it->second.end()))};
    shots.push_back(std::move(rec));
  }
  for (const auto& r : records) {
    auto it = std::lower_bound(shots.begin(), shots.end(), r.shot_id,
                               [](const ShotRecord& s, const ShotId& v) { return s.shot_id < v; });
    it->vector.scores[r.concept_id] = r.score;
  }
  return make_corpus(lexicon, std::move(shots));
}

}  // namespace vidgraph
