#pragma once

/// \file store.hpp
/// Canonical JSON documents for every pipeline artifact.
///
/// Each document carries `"format_version": "1"` and a `kind`. Derived
/// documents record the SHA-256 of the documents they were computed from, so
/// a matrix built from another corpus is detected as stale instead of being
/// silently mixed in. Serialization is byte-deterministic: object keys are
/// sorted and doubles are written in shortest round-trip form.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <openssl/evp.h>

#include <json.hpp>

#include "vidgraph/classification.hpp"
#include "vidgraph/corpus.hpp"
#include "vidgraph/error.hpp"
#include "vidgraph/explore.hpp"
#include "vidgraph/graph.hpp"
#include "vidgraph/profile.hpp"
#include "vidgraph/semantics.hpp"

namespace vidgraph {

using Json = nlohmann::json;

inline constexpr std::string_view kFormatVersion = "1";

inline std::string content_hash(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

namespace detail {

// Schema-checked accessors; errors name the JSON pointer of the offending value.
class Field {
 public:
  Field(const Json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const Json& json() const { return j_; }

  Field operator[](std::string_view key) const {
    if (!j_.is_object()) fail("expected an object");
    auto it = j_.find(std::string(key));
    if (it == j_.end()) throw SchemaError(path_ + "/" + std::string(key), "missing");
    return Field(*it, path_ + "/" + std::string(key));
  }

  bool has(std::string_view key) const { return j_.is_object() && j_.contains(std::string(key)); }

  Field at(std::size_t i) const { return Field(j_.at(i), path_ + "/" + std::to_string(i)); }

  std::size_t size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }

  std::string str() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }

  double num() const {
    if (!j_.is_number()) fail("expected a number");
    return j_.get<double>();
  }

  double unit() const {
    const double v = num();
    if (!(v >= 0.0 && v <= 1.0)) fail("expected a value in [0,1]");
    return v;
  }

  std::uint64_t uint() const {
    if (!j_.is_number_unsigned()) fail("expected a non-negative integer");
    return j_.get<std::uint64_t>();
  }

  std::int64_t int64() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<std::int64_t>();
  }

  bool boolean() const {
    if (!j_.is_boolean()) fail("expected a boolean");
    return j_.get<bool>();
  }

  std::vector<std::string> strings() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i).str());
    return out;
  }

  [[noreturn]] void fail(const std::string& what) const { throw SchemaError(path_.empty() ? "/" : path_, what); }

 private:
  const Json& j_;
  std::string path_;
};

inline Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("invalid JSON at byte ") + std::to_string(e.byte) + ": " + e.what());
  }
}

inline Field open_document(const Json& doc, std::string_view kind) {
  Field root(doc, "");
  if (!doc.is_object()) root.fail("expected an object");
  if (root["format_version"].str() != kFormatVersion)
    root["format_version"].fail("unsupported format version");
  if (root["kind"].str() != kind) root["kind"].fail("expected kind '" + std::string(kind) + "'");
  return root;
}

inline Json header(std::string_view kind) {
  return Json{{"format_version", std::string(kFormatVersion)}, {"kind", std::string(kind)}};
}

}  // namespace detail

// ---------------------------------------------------------------- corpus

inline std::string save_corpus(const Corpus& corpus) {
  Json doc = detail::header("corpus");
  Json lex = Json::array();
  for (const auto& c : corpus.lexicon) lex.push_back({{"id", c.id}, {"name", c.name}});
  doc["lexicon"] = std::move(lex);

  std::vector<const ShotRecord*> order;
  for (const auto& s : corpus.shots) order.push_back(&s);
  std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->shot_id < b->shot_id; });
  Json shots = Json::array();
  for (const auto* s : order) {
    Json shot{{"shot_id", s->shot_id},
              {"video_id", s->video_id},
              {"keyframe_path", s->keyframe_path},
              {"concepts", s->vector.concepts}};
    if (!s->vector.scores.empty()) {
      Json scores = Json::object();
      for (const auto& [c, score] : s->vector.scores) scores[std::to_string(c)] = score;
      shot["scores"] = std::move(scores);
    }
    shots.push_back(std::move(shot));
  }
  doc["shots"] = std::move(shots);
  return dump(doc);
}

inline Corpus load_corpus(std::string_view text) {
  const Json doc = detail::parse_json(text);
  auto root = detail::open_document(doc, "corpus");
  ConceptLexicon lexicon;
  auto lex = root["lexicon"];
  for (std::size_t i = 0; i < lex.size(); ++i) {
    auto e = lex.at(i);
    const auto id = e["id"].uint();
    if (id == 0 || id > UINT32_MAX) e["id"].fail("concept id out of range");
    try {
      lexicon.add(static_cast<ConceptId>(id), e["name"].str());
    } catch (const DomainError& err) {
      e.fail(err.what());
    }
  }
  std::vector<ShotRecord> shots;
  auto list = root["shots"];
  for (std::size_t i = 0; i < list.size(); ++i) {
    auto s = list.at(i);
    ShotRecord rec;
    rec.shot_id = s["shot_id"].str();
    rec.video_id = s["video_id"].str();
    rec.keyframe_path = s["keyframe_path"].str();
    rec.vector.shot_id = rec.shot_id;
    auto concepts = s["concepts"];
    for (std::size_t k = 0; k < concepts.size(); ++k) {
      const auto c = concepts.at(k).uint();
      if (!lexicon.contains(static_cast<ConceptId>(c)) || c > UINT32_MAX)
        concepts.at(k).fail("concept not in lexicon");
      rec.vector.concepts.push_back(static_cast<ConceptId>(c));
    }
    if (s.has("scores")) {
      auto scores = s["scores"];
      if (!scores.json().is_object()) scores.fail("expected an object");
      for (const auto& [key, value] : scores.json().items()) {
        auto c = detail::parse_int<ConceptId>(key);
        detail::Field v(value, scores.path() + "/" + key);
        if (!c || !lexicon.contains(*c)) v.fail("concept not in lexicon");
        rec.vector.scores[*c] = v.unit();
      }
    }
    shots.push_back(std::move(rec));
  }
  auto corpus = make_corpus(std::move(lexicon), std::move(shots));
  if (auto diags = validate_corpus(corpus); !diags.empty())
    throw SchemaError("/shots", diags.front().subject + ": " + diags.front().rule);
  return corpus;
}

// ---------------------------------------------------------------- correlation

struct CorrelationArtifact {
  CorrelationMatrix matrix;
  std::string corpus_hash;
};

/// Dense rows, one per lexicon concept in ascending id order.
inline std::string save_correlation(const CorrelationMatrix& m, std::string_view corpus_hash) {
  Json doc = detail::header("correlation");
  doc["corpus_hash"] = std::string(corpus_hash);
  Json concepts = Json::array();
  for (const auto& c : m.lexicon()) concepts.push_back({{"id", c.id}, {"name", c.name}});
  doc["concepts"] = std::move(concepts);
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m.at(i, j));
    rows.push_back(std::move(row));
  }
  doc["weights"] = std::move(rows);
  return dump(doc);
}

inline CorrelationArtifact load_correlation(std::string_view text) {
  const Json doc = detail::parse_json(text);
  auto root = detail::open_document(doc, "correlation");
  ConceptLexicon lexicon;
  auto concepts = root["concepts"];
  for (std::size_t i = 0; i < concepts.size(); ++i) {
    auto e = concepts.at(i);
    try {
      lexicon.add(static_cast<ConceptId>(e["id"].uint()), e["name"].str());
    } catch (const DomainError& err) {
      e.fail(err.what());
    }
  }
  CorrelationArtifact out{CorrelationMatrix(lexicon), root["corpus_hash"].str()};
  auto rows = root["weights"];
  if (rows.size() != lexicon.size()) rows.fail("expected one row per concept");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto row = rows.at(i);
    if (row.size() != lexicon.size()) row.fail("expected one weight per concept");
    for (std::size_t j = 0; j < row.size(); ++j) out.matrix.set(i, j, row.at(j).unit());
  }
  return out;
}

// ---------------------------------------------------------------- similarity

struct SimilarityArtifact {
  SimilarityMatrix matrix;
  std::string corpus_hash;
  std::string correlation_hash;
};

/// Sparse directed entries [row, col, value]; zeros are omitted.
inline std::string save_similarity(const SimilarityMatrix& sim, std::string_view corpus_hash,
                                   std::string_view correlation_hash) {
  Json doc = detail::header("similarity");
  doc["corpus_hash"] = std::string(corpus_hash);
  doc["correlation_hash"] = std::string(correlation_hash);
  doc["shots"] = sim.shots();
  doc["unindexed"] = sim.unindexed();
  Json entries = Json::array();
  for (std::size_t i = 0; i < sim.size(); ++i)
    for (std::size_t j = 0; j < sim.size(); ++j)
      if (const double v = sim.directed_at(i, j); v != 0.0) entries.push_back(Json::array({i, j, v}));
  doc["directed"] = std::move(entries);
  return dump(doc);
}

inline SimilarityArtifact load_similarity(std::string_view text) {
  const Json doc = detail::parse_json(text);
  auto root = detail::open_document(doc, "similarity");
  SimilarityArtifact out;
  out.corpus_hash = root["corpus_hash"].str();
  out.correlation_hash = root["correlation_hash"].str();
  try {
    out.matrix = SimilarityMatrix(root["shots"].strings(), root["unindexed"].strings());
  } catch (const DomainError& e) {
    root["shots"].fail(e.what());
  }
  auto entries = root["directed"];
  for (std::size_t k = 0; k < entries.size(); ++k) {
    auto e = entries.at(k);
    if (e.size() != 3) e.fail("expected [row, col, value]");
    const auto i = e.at(0).uint(), j = e.at(1).uint();
    if (i >= out.matrix.size() || j >= out.matrix.size()) e.fail("index out of range");
    out.matrix.set_directed(i, j, e.at(2).unit());
  }
  return out;
}

// ---------------------------------------------------------------- partition

struct PartitionArtifact {
  ClassPartition partition;
  std::string similarity_hash;
};

namespace detail {

inline Json classes_to_json(const ClassPartition& p) {
  Json classes = Json::array();
  for (const auto& c : p.classes) classes.push_back({{"id", c.id}, {"members", c.members}, {"medoid", c.medoid}});
  return classes;
}

inline ClassPartition classes_from_json(Field classes, Field unindexed, double theta) {
  ClassPartition p;
  p.theta = theta;
  p.unindexed = unindexed.strings();
  for (std::size_t i = 0; i < classes.size(); ++i) {
    auto c = classes.at(i);
    SemanticClass cls{c["id"].uint(), c["members"].strings(), c["medoid"].str()};
    if (cls.id != i) c["id"].fail("class ids must be dense from 0");
    if (cls.members.empty()) c["members"].fail("class without members");
    if (!std::binary_search(cls.members.begin(), cls.members.end(), cls.medoid))
      c["medoid"].fail("medoid is not a member");
    p.classes.push_back(std::move(cls));
  }
  return p;
}

}  // namespace detail

inline std::string save_partition(const ClassPartition& p, std::string_view similarity_hash) {
  Json doc = detail::header("partition");
  doc["similarity_hash"] = std::string(similarity_hash);
  doc["theta"] = p.theta;
  doc["classes"] = detail::classes_to_json(p);
  doc["unindexed"] = p.unindexed;
  return dump(doc);
}

inline PartitionArtifact load_partition(std::string_view text) {
  const Json doc = detail::parse_json(text);
  auto root = detail::open_document(doc, "partition");
  return {detail::classes_from_json(root["classes"], root["unindexed"], root["theta"].unit()),
          root["similarity_hash"].str()};
}

// ---------------------------------------------------------------- graph

struct GraphParams {
  double theta = 0.6;
  double theta_edge = 0.6;
  double theta_axon = 0.3;
  ExploreParams explore;
};

struct GraphArtifact {
  ExplorationGraph graph;
  ClassPartition partition;
  GraphParams params;
  std::string corpus_hash;
  std::string similarity_hash;
  std::string partition_hash;
};

inline Json params_to_json(const GraphParams& p) {
  return Json{{"theta", p.theta},
              {"theta_edge", p.theta_edge},
              {"theta_axon", p.theta_axon},
              {"theta_act", p.explore.theta_act},
              {"decay", p.explore.decay},
              {"lambda", p.explore.lambda},
              {"budget", p.explore.budget}};
}

inline std::string save_graph(const GraphArtifact& a) {
  Json doc = detail::header("graph");
  doc["corpus_hash"] = a.corpus_hash;
  doc["similarity_hash"] = a.similarity_hash;
  doc["partition_hash"] = a.partition_hash;
  doc["params"] = params_to_json(a.params);
  doc["classes"] = detail::classes_to_json(a.partition);
  doc["unindexed"] = a.partition.unindexed;
  Json nodes = Json::array();
  for (const auto& n : a.graph.nodes())
    nodes.push_back({{"shot_id", n.shot_id},
                     {"keyframe_path", n.keyframe_path},
                     {"class_id", n.class_id},
                     {"is_medoid", n.is_medoid},
                     {"medoid_similarity", n.medoid_similarity}});
  doc["nodes"] = std::move(nodes);
  Json edges = Json::array();
  for (const auto& e : a.graph.edges())
    edges.push_back({{"src", e.src}, {"dst", e.dst}, {"base_weight", e.base_weight}, {"kind", to_string(e.kind)}});
  doc["edges"] = std::move(edges);
  return dump(doc);
}

inline GraphArtifact load_graph(std::string_view text) {
  const Json doc = detail::parse_json(text);
  auto root = detail::open_document(doc, "graph");
  GraphArtifact a;
  a.corpus_hash = root["corpus_hash"].str();
  a.similarity_hash = root["similarity_hash"].str();
  a.partition_hash = root["partition_hash"].str();
  auto p = root["params"];
  a.params.theta = p["theta"].unit();
  a.params.theta_edge = p["theta_edge"].unit();
  a.params.theta_axon = p["theta_axon"].unit();
  a.params.explore.theta_act = p["theta_act"].unit();
  a.params.explore.decay = p["decay"].unit();
  a.params.explore.lambda = p["lambda"].unit();
  a.params.explore.budget = p["budget"].uint();
  try {
    a.params.explore.validate();
  } catch (const DomainError& e) {
    p.fail(e.what());
  }
  a.partition = detail::classes_from_json(root["classes"], root["unindexed"], a.params.theta);

  std::vector<GraphNode> nodes;
  auto nl = root["nodes"];
  for (std::size_t i = 0; i < nl.size(); ++i) {
    auto n = nl.at(i);
    nodes.push_back({n["shot_id"].str(), n["keyframe_path"].str(), n["class_id"].uint(), n["is_medoid"].boolean(),
                     n["medoid_similarity"].unit()});
  }
  std::vector<GraphEdge> edges;
  auto el = root["edges"];
  for (std::size_t i = 0; i < el.size(); ++i) {
    auto e = el.at(i);
    try {
      edges.push_back({e["src"].str(), e["dst"].str(), e["base_weight"].unit(), edge_kind_from_string(e["kind"].str())});
    } catch (const DomainError& err) {
      e["kind"].fail(err.what());
    }
  }
  try {
    a.graph = ExplorationGraph(std::move(nodes), std::move(edges));
  } catch (const Error& err) {
    root["edges"].fail(err.what());
  }
  return a;
}

// ---------------------------------------------------------------- profiles, events, views

inline Json profile_to_json(const UserProfile& p) {
  Json doc = detail::header("profile");
  doc["user_id"] = p.user_id;
  Json stats = Json::object();
  for (const auto& [shot, s] : p.stats)
    stats[shot] = {{"clicks", s.clicks}, {"dwell_seconds", s.dwell_seconds}, {"last_seen", s.last_seen}};
  doc["stats"] = std::move(stats);
  doc["static_info"] = p.static_info;
  return doc;
}

inline UserProfile profile_from_json(const Json& doc) {
  auto root = detail::open_document(doc, "profile");
  UserProfile p;
  p.user_id = root["user_id"].str();
  auto stats = root["stats"];
  if (!stats.json().is_object()) stats.fail("expected an object");
  for (const auto& [shot, value] : stats.json().items()) {
    detail::Field s(value, stats.path() + "/" + shot);
    const double dwell = s["dwell_seconds"].num();
    if (dwell < 0.0) s["dwell_seconds"].fail("negative dwell");
    p.stats[shot] = {s["clicks"].uint(), dwell, s["last_seen"].int64()};
  }
  auto info = root["static_info"];
  if (!info.json().is_object()) info.fail("expected an object");
  for (const auto& [key, value] : info.json().items())
    p.static_info[key] = detail::Field(value, info.path() + "/" + key).str();
  return p;
}

inline Json event_to_json(const InteractionEvent& e) {
  Json j{{"user", e.user_id},
         {"shot_id", e.shot_id},
         {"kind", e.kind == EventKind::click ? "click" : "dwell"},
         {"timestamp", e.timestamp}};
  if (e.dwell_seconds) j["dwell_seconds"] = *e.dwell_seconds;
  return j;
}

/// `timestamp` is optional; `fallback_time` is used when it is absent.
inline InteractionEvent event_from_json(const Json& j, Timestamp fallback_time) {
  detail::Field root(j, "");
  if (!j.is_object()) root.fail("expected an object");
  InteractionEvent e;
  e.user_id = root["user"].str();
  e.shot_id = root["shot_id"].str();
  const auto kind = root["kind"].str();
  if (kind == "click") e.kind = EventKind::click;
  else if (kind == "dwell") e.kind = EventKind::dwell;
  else root["kind"].fail("expected 'click' or 'dwell'");
  if (root.has("dwell_seconds")) e.dwell_seconds = root["dwell_seconds"].num();
  e.timestamp = root.has("timestamp") ? root["timestamp"].int64() : fallback_time;
  try {
    validate_event(e);
  } catch (const DomainError& err) {
    root.fail(err.what());
  }
  return e;
}

inline Json view_to_json(const ViewState& v) {
  Json doc = detail::header("view");
  doc["user_id"] = v.user_id;
  doc["focus"] = v.focus ? Json(*v.focus) : Json(nullptr);
  doc["budget"] = v.budget;
  doc["medoids"] = v.medoids;
  Json nodes = Json::array();
  for (const auto& n : v.nodes) {
    Json node{{"shot_id", n.shot_id},
              {"keyframe_path", n.keyframe_path},
              {"keyframe_url", "/api/keyframes/" + n.shot_id},
              {"class_id", n.class_id},
              {"is_medoid", n.is_medoid},
              {"user_weight", n.user_weight}};
    if (n.level) node["level"] = *n.level;
    nodes.push_back(std::move(node));
  }
  doc["nodes"] = std::move(nodes);
  Json edges = Json::array();
  for (const auto& e : v.edges)
    edges.push_back({{"src", e.src},
                     {"dst", e.dst},
                     {"kind", to_string(e.kind)},
                     {"base_weight", e.base_weight},
                     {"weight", e.weight}});
  doc["edges"] = std::move(edges);
  return doc;
}

}  // namespace vidgraph
