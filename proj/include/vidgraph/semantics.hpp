#pragma once

/// \file semantics.hpp
/// Concept occurrence statistics, the directed concept correlation Cd and the
/// shot-to-shot semantic similarity Sd built on top of it.
///
///   Cd(a -> b) = N(a and b) / N(a)            (0 when N(a) = 0)
///   Sd(A -> B) = 1/|A| * sum_{a in A} max_{b in B} Cd(a -> b)
///
/// N counts shots. Cd is 1 whenever b subsumes a in the corpus, and Sd is 1
/// for identical concept vectors.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "vidgraph/corpus.hpp"
#include "vidgraph/error.hpp"

namespace vidgraph {

/// Keeps (shot, concept) iff score >= tau.
inline std::map<ShotId, std::set<ConceptId>> binarize_detections(const std::vector<DetectionRecord>& records,
                                                                 double tau) {
  std::map<ShotId, std::set<ConceptId>> out;
  for (const auto& r : records)
    if (r.score >= tau) out[r.shot_id].insert(r.concept_id);
  return out;
}

/// Occurrence and co-occurrence shot counts over a lexicon.
class ConceptCounts {
 public:
  ConceptCounts() = default;

  explicit ConceptCounts(const ConceptLexicon& lexicon)
      : lexicon_(lexicon), cooccur_(lexicon.size() * lexicon.size(), 0) {}

  std::size_t total_shots() const noexcept { return total_; }
  const ConceptLexicon& lexicon() const noexcept { return lexicon_; }

  std::size_t occur(ConceptId c) const { return cooccur(c, c); }

  std::size_t cooccur(ConceptId a, ConceptId b) const {
    auto i = lexicon_.index_of(a), j = lexicon_.index_of(b);
    if (!i || !j) return 0;
    return cooccur_[*i * lexicon_.size() + *j];
  }

  std::size_t cooccur_at(std::size_t i, std::size_t j) const { return cooccur_[i * lexicon_.size() + j]; }

  /// Adds one shot's concept set (dense lexicon indices, sorted, unique).
  void add_shot(const std::vector<std::size_t>& indices) {
    ++total_;
    const auto k = lexicon_.size();
    for (auto i : indices)
      for (auto j : indices) ++cooccur_[i * k + j];
  }

 private:
  ConceptLexicon lexicon_;
  std::vector<std::size_t> cooccur_;
  std::size_t total_ = 0;
};

namespace detail {

inline std::vector<std::size_t> lexicon_indices(const ConceptVector& v, const ConceptLexicon& lexicon) {
  std::vector<std::size_t> out;
  out.reserve(v.n());
  for (auto c : v.concepts) {
    auto idx = lexicon.index_of(c);
    if (!idx) throw DomainError("shot " + v.shot_id + " references unknown concept " + std::to_string(c));
    out.push_back(*idx);
  }
  return out;
}

}  // namespace detail

inline ConceptCounts concept_counts(const Corpus& corpus) {
  ConceptCounts counts(corpus.lexicon);
  for (const auto& shot : corpus.shots) counts.add_shot(detail::lexicon_indices(shot.vector, corpus.lexicon));
  return counts;
}

inline double concept_correlation(const ConceptCounts& counts, ConceptId src, ConceptId dst) {
  const auto n_src = counts.occur(src);
  if (n_src == 0) return 0.0;
  return static_cast<double>(counts.cooccur(src, dst)) / static_cast<double>(n_src);
}

/// Dense lexicon-by-lexicon matrix of Cd weights. Rows are sources.
class CorrelationMatrix {
 public:
  CorrelationMatrix() = default;

  explicit CorrelationMatrix(ConceptLexicon lexicon)
      : lexicon_(std::move(lexicon)), weights_(lexicon_.size() * lexicon_.size(), 0.0) {}

  const ConceptLexicon& lexicon() const noexcept { return lexicon_; }
  std::size_t size() const noexcept { return lexicon_.size(); }

  /// Cd(src -> dst); 0 for concepts outside the lexicon.
  double operator()(ConceptId src, ConceptId dst) const {
    auto i = lexicon_.index_of(src), j = lexicon_.index_of(dst);
    if (!i || !j) return 0.0;
    return at(*i, *j);
  }

  double at(std::size_t i, std::size_t j) const { return weights_[i * size() + j]; }

  void set(std::size_t i, std::size_t j, double w) {
    if (!(w >= 0.0 && w <= 1.0)) throw DomainError("correlation weight outside [0,1]");
    weights_[i * size() + j] = w;
  }

  void set(ConceptId src, ConceptId dst, double w) {
    auto i = lexicon_.index_of(src), j = lexicon_.index_of(dst);
    if (!i || !j) throw NotFoundError("correlation entry for unknown concept");
    set(*i, *j, w);
  }

  friend bool operator==(const CorrelationMatrix&, const CorrelationMatrix&) = default;

 private:
  ConceptLexicon lexicon_;
  std::vector<double> weights_;
};

inline CorrelationMatrix correlation_matrix(const ConceptCounts& counts) {
  CorrelationMatrix m(counts.lexicon());
  const auto k = m.size();
  for (std::size_t i = 0; i < k; ++i) {
    const auto n_src = counts.cooccur_at(i, i);
    if (n_src == 0) continue;
    for (std::size_t j = 0; j < k; ++j)
      m.set(i, j, static_cast<double>(counts.cooccur_at(i, j)) / static_cast<double>(n_src));
  }
  return m;
}

inline CorrelationMatrix correlation_matrix(const Corpus& corpus) { return correlation_matrix(concept_counts(corpus)); }

namespace detail {

// Sd over precomputed lexicon indices; both sides non-empty.
inline double similarity_indices(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b,
                                 const CorrelationMatrix& corr) {
  double sum = 0.0;
  for (auto i : a) {
    double best = 0.0;
    for (auto j : b) best = std::max(best, corr.at(i, j));
    sum += best;
  }
  return sum / static_cast<double>(a.size());
}

}  // namespace detail

/// Directed similarity Sd(a -> b). Both vectors must be non-empty.
inline double shot_similarity(const ConceptVector& a, const ConceptVector& b, const CorrelationMatrix& corr) {
  if (a.empty() || b.empty())
    throw DomainError("unindexed shot: " + (a.empty() ? a.shot_id : b.shot_id));
  return detail::similarity_indices(detail::lexicon_indices(a, corr.lexicon()),
                                    detail::lexicon_indices(b, corr.lexicon()), corr);
}

/// Directed Sd over the indexed shots of a corpus, with the symmetric view
/// S(A,B) = (Sd(A->B) + Sd(B->A)) / 2. Shots are held in ascending id order.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;

  SimilarityMatrix(std::vector<ShotId> shots, std::vector<ShotId> unindexed)
      : shots_(std::move(shots)), unindexed_(std::move(unindexed)), directed_(shots_.size() * shots_.size(), 0.0) {
    if (!std::is_sorted(shots_.begin(), shots_.end()) ||
        std::adjacent_find(shots_.begin(), shots_.end()) != shots_.end())
      throw DomainError("similarity shots must be sorted and unique");
  }

  const std::vector<ShotId>& shots() const noexcept { return shots_; }
  const std::vector<ShotId>& unindexed() const noexcept { return unindexed_; }
  std::size_t size() const noexcept { return shots_.size(); }

  std::optional<std::size_t> index_of(std::string_view shot) const {
    auto it = std::lower_bound(shots_.begin(), shots_.end(), shot);
    if (it == shots_.end() || *it != shot) return std::nullopt;
    return static_cast<std::size_t>(it - shots_.begin());
  }

  double directed_at(std::size_t i, std::size_t j) const { return directed_[i * size() + j]; }
  double symmetric_at(std::size_t i, std::size_t j) const { return (directed_at(i, j) + directed_at(j, i)) / 2.0; }

  void set_directed(std::size_t i, std::size_t j, double v) {
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("similarity outside [0,1]");
    directed_[i * size() + j] = v;
  }

  double directed(std::string_view a, std::string_view b) const { return directed_at(require(a), require(b)); }
  double symmetric(std::string_view a, std::string_view b) const { return symmetric_at(require(a), require(b)); }

  friend bool operator==(const SimilarityMatrix&, const SimilarityMatrix&) = default;

 private:
  std::size_t require(std::string_view shot) const {
    auto idx = index_of(shot);
    if (!idx) throw NotFoundError("shot '" + std::string(shot) + "' not in similarity matrix");
    return *idx;
  }

  std::vector<ShotId> shots_;
  std::vector<ShotId> unindexed_;
  std::vector<double> directed_;
};

/// Fills Sd for every ordered pair of indexed shots.
inline SimilarityMatrix similarity_matrix(const Corpus& corpus, const CorrelationMatrix& corr) {
  std::vector<ShotId> ids;
  std::vector<ShotId> unindexed;
  std::vector<std::pair<ShotId, std::vector<std::size_t>>> vecs;
  for (const auto& shot : corpus.shots) {
    if (shot.vector.empty()) {
      unindexed.push_back(shot.shot_id);
      continue;
    }
    vecs.emplace_back(shot.shot_id, detail::lexicon_indices(shot.vector, corr.lexicon()));
  }
  std::sort(vecs.begin(), vecs.end());
  std::sort(unindexed.begin(), unindexed.end());
  for (const auto& v : vecs) ids.push_back(v.first);
  SimilarityMatrix sim(std::move(ids), std::move(unindexed));
  for (std::size_t i = 0; i < vecs.size(); ++i)
    for (std::size_t j = 0; j < vecs.size(); ++j)
      sim.set_directed(i, j, detail::similarity_indices(vecs[i].second, vecs[j].second, corr));
  return sim;
}

}  // namespace vidgraph
