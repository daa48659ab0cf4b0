#pragma once

/// \file corpus.hpp
/// Corpus data model: the concept lexicon, per-shot concept vectors and the
/// shot records that pair a keyframe with its vector.
///
/// Every downstream structure indexes into these types, so ordering here is
/// canonical: lexicon entries ascend by concept id and corpus shots ascend by
/// shot id.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vidgraph/error.hpp"

namespace vidgraph {

using ConceptId = std::uint32_t;
using ShotId = std::string;

struct Concept {
  ConceptId id{};
  std::string name;

  friend bool operator==(const Concept&, const Concept&) = default;
};

/// The fixed catalogue of detectable concepts. Ids and names are unique and
/// iteration is by ascending id.
class ConceptLexicon {
 public:
  ConceptLexicon() = default;

  explicit ConceptLexicon(std::vector<Concept> entries) {
    for (auto& c : entries) add(c.id, std::move(c.name));
  }

  /// Throws DomainError on id 0, empty name, or a duplicate id/name.
  void add(ConceptId id, std::string name) {
    if (id == 0) throw DomainError("concept id must be positive");
    if (name.empty()) throw DomainError("concept " + std::to_string(id) + " has an empty name");
    if (by_name_.count(name)) throw DomainError("duplicate concept name '" + name + "'");
    auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                               [](const Concept& c, ConceptId v) { return c.id < v; });
    if (it != entries_.end() && it->id == id)
      throw DomainError("duplicate concept id " + std::to_string(id));
    by_name_.emplace(name, id);
    entries_.insert(it, Concept{id, std::move(name)});
  }

  const std::vector<Concept>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  /// Dense position of `id` in iteration order.
  std::optional<std::size_t> index_of(ConceptId id) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                               [](const Concept& c, ConceptId v) { return c.id < v; });
    if (it == entries_.end() || it->id != id) return std::nullopt;
    return static_cast<std::size_t>(it - entries_.begin());
  }

  bool contains(ConceptId id) const { return index_of(id).has_value(); }

  const Concept* find(ConceptId id) const {
    auto idx = index_of(id);
    return idx ? &entries_[*idx] : nullptr;
  }

  /// Case-sensitive name lookup.
  std::optional<ConceptId> id_of(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
  }

  friend bool operator==(const ConceptLexicon& a, const ConceptLexicon& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::vector<Concept> entries_;
  std::unordered_map<std::string, ConceptId> by_name_;
};

/// One detector output p(concept | shot), optionally with its position in a
/// ranked result list.
struct DetectionRecord {
  ShotId shot_id;
  ConceptId concept_id{};
  double score{};
  std::optional<std::uint32_t> rank;
};

/// The set of concepts detected in a shot. `concepts` is kept sorted and
/// duplicate-free; `scores` optionally retains the raw detector outputs.
struct ConceptVector {
  ShotId shot_id;
  std::vector<ConceptId> concepts;
  std::map<ConceptId, double> scores;

  ConceptVector() = default;
  ConceptVector(ShotId shot, std::vector<ConceptId> ids) : shot_id(std::move(shot)), concepts(std::move(ids)) {
    normalize();
  }

  void normalize() {
    std::sort(concepts.begin(), concepts.end());
    concepts.erase(std::unique(concepts.begin(), concepts.end()), concepts.end());
  }

  std::size_t n() const noexcept { return concepts.size(); }
  bool empty() const noexcept { return concepts.empty(); }
  bool contains(ConceptId c) const { return std::binary_search(concepts.begin(), concepts.end(), c); }

  friend bool operator==(const ConceptVector&, const ConceptVector&) = default;
};

struct ShotRecord {
  ShotId shot_id;
  std::string video_id;
  std::string keyframe_path;
  ConceptVector vector;

  friend bool operator==(const ShotRecord&, const ShotRecord&) = default;
};

struct Corpus {
  ConceptLexicon lexicon;
  std::vector<ShotRecord> shots;

  const ShotRecord* find(std::string_view shot_id) const {
    auto it = std::lower_bound(shots.begin(), shots.end(), shot_id,
                               [](const ShotRecord& s, std::string_view v) { return s.shot_id < v; });
    if (it == shots.end() || it->shot_id != shot_id) return nullptr;
    return &*it;
  }

  /// Shots with at least one concept, in canonical order.
  std::vector<const ShotRecord*> indexed() const {
    std::vector<const ShotRecord*> out;
    for (const auto& s : shots)
      if (!s.vector.empty()) out.push_back(&s);
    return out;
  }

  /// Shots with an empty concept vector. These are kept in the corpus but
  /// take no part in similarity or classification.
  std::vector<ShotId> unindexed() const {
    std::vector<ShotId> out;
    for (const auto& s : shots)
      if (s.vector.empty()) out.push_back(s.shot_id);
    return out;
  }

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

/// Builds a corpus in canonical shot order.
inline Corpus make_corpus(ConceptLexicon lexicon, std::vector<ShotRecord> shots) {
  for (auto& s : shots) {
    s.vector.shot_id = s.shot_id;
    s.vector.normalize();
  }
  std::sort(shots.begin(), shots.end(),
            [](const ShotRecord& a, const ShotRecord& b) { return a.shot_id < b.shot_id; });
  return Corpus{std::move(lexicon), std::move(shots)};
}

struct Diagnostic {
  std::string subject;  // offending shot id, or "shot/concept"
  std::string rule;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// Checks every corpus invariant. An empty result means the corpus is safe to
/// feed into every downstream operation.
inline std::vector<Diagnostic> validate_corpus(const Corpus& corpus) {
  std::vector<Diagnostic> out;
  std::set<std::string_view> seen;
  const ShotRecord* prev = nullptr;
  for (const auto& shot : corpus.shots) {
    if (shot.shot_id.empty()) out.push_back({"<empty>", "shot_id must be non-empty"});
    if (!seen.insert(shot.shot_id).second) {
      out.push_back({shot.shot_id, "duplicate shot_id"});
    } else if (prev && shot.shot_id < prev->shot_id) {
      out.push_back({shot.shot_id, "shots not in ascending shot_id order"});
    }
    prev = &shot;
    if (shot.keyframe_path.empty()) out.push_back({shot.shot_id, "keyframe_path must be non-empty"});
    if (shot.vector.shot_id != shot.shot_id)
      out.push_back({shot.shot_id, "concept vector belongs to shot '" + shot.vector.shot_id + "'"});
    const auto& cs = shot.vector.concepts;
    if (!std::is_sorted(cs.begin(), cs.end()) || std::adjacent_find(cs.begin(), cs.end()) != cs.end())
      out.push_back({shot.shot_id, "concept set must be sorted and duplicate-free"});
    for (auto c : cs) {
      if (!corpus.lexicon.contains(c))
        out.push_back({shot.shot_id + "/" + std::to_string(c), "concept not in lexicon"});
    }
    for (const auto& [c, score] : shot.vector.scores) {
      if (!(score >= 0.0 && score <= 1.0))
        out.push_back({shot.shot_id + "/" + std::to_string(c), "detection score outside [0,1]"});
    }
  }
  return out;
}

}  // namespace vidgraph
