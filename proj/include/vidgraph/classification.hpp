#pragma once

/// \file classification.hpp
/// Semantic classes as connected components of the threshold graph
/// {(A,B) : S(A,B) >= theta} over the symmetric similarity, with a medoid
/// representative per class.

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "vidgraph/error.hpp"
#include "vidgraph/semantics.hpp"

namespace vidgraph {

struct SemanticClass {
  std::size_t id{};
  std::vector<ShotId> members;  // ascending
  ShotId medoid;

  friend bool operator==(const SemanticClass&, const SemanticClass&) = default;
};

struct ClassPartition {
  std::vector<SemanticClass> classes;  // ordered by smallest member, ids dense from 0
  std::vector<ShotId> unindexed;
  double theta{};

  /// Class id of an indexed shot.
  std::optional<std::size_t> class_of(std::string_view shot) const {
    for (const auto& c : classes)
      if (std::binary_search(c.members.begin(), c.members.end(), shot)) return c.id;
    return std::nullopt;
  }

  friend bool operator==(const ClassPartition&, const ClassPartition&) = default;
};

namespace detail {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }

  // The smaller root wins so that roots are deterministic.
  void unite(std::size_t a, std::size_t b) {
    a = find(a), b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace detail

/// Member maximizing the summed symmetric similarity to the other members;
/// ties go to the smaller shot id.
inline ShotId medoid(const std::vector<ShotId>& members, const SimilarityMatrix& sim) {
  if (members.empty()) throw DomainError("medoid of an empty class");
  std::vector<ShotId> sorted = members;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> idx;
  idx.reserve(sorted.size());
  for (const auto& m : sorted) {
    auto i = sim.index_of(m);
    if (!i) throw NotFoundError("shot '" + m + "' not in similarity matrix");
    idx.push_back(*i);
  }
  std::size_t best = 0;
  double best_sum = -1.0;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    double sum = 0.0;
    for (std::size_t b = 0; b < idx.size(); ++b)
      if (a != b) sum += sim.symmetric_at(idx[a], idx[b]);
    if (sum > best_sum) {
      best_sum = sum;
      best = a;
    }
  }
  return sorted[best];
}

inline ClassPartition classify(const SimilarityMatrix& sim, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw DomainError("theta must lie in [0,1]");
  const auto n = sim.size();
  detail::DisjointSets sets(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (sim.symmetric_at(i, j) >= theta) sets.unite(i, j);

  // Roots are the smallest index of their component, and shots are sorted, so
  // visiting roots in index order orders classes by smallest member.
  std::vector<std::size_t> class_of_root(n, SIZE_MAX);
  ClassPartition out;
  out.theta = theta;
  out.unindexed = sim.unindexed();
  for (std::size_t i = 0; i < n; ++i) {
    auto root = sets.find(i);
    if (class_of_root[root] == SIZE_MAX) {
      class_of_root[root] = out.classes.size();
      out.classes.push_back({out.classes.size(), {}, {}});
    }
    out.classes[class_of_root[root]].members.push_back(sim.shots()[i]);
  }
  for (auto& c : out.classes) c.medoid = medoid(c.members, sim);
  return out;
}

/// Symmetric similarity between the two class medoids.
inline double class_similarity(const SemanticClass& a, const SemanticClass& b, const SimilarityMatrix& sim) {
  if (a.members.empty() || b.members.empty()) throw DomainError("class_similarity of an empty class");
  return sim.symmetric(a.medoid, b.medoid);
}

}  // namespace vidgraph
