#pragma once

/// \file graph.hpp
/// The keyframe exploration graph. Nodes are indexed shots; dendrite edges
/// join similar shots inside a class, axon edges join medoids of different
/// classes.

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "vidgraph/classification.hpp"
#include "vidgraph/corpus.hpp"
#include "vidgraph/error.hpp"
#include "vidgraph/semantics.hpp"

namespace vidgraph {

enum class EdgeKind { dendrite, axon };

inline std::string_view to_string(EdgeKind k) { return k == EdgeKind::dendrite ? "dendrite" : "axon"; }

inline EdgeKind edge_kind_from_string(std::string_view s) {
  if (s == "dendrite") return EdgeKind::dendrite;
  if (s == "axon") return EdgeKind::axon;
  throw DomainError("unknown edge kind '" + std::string(s) + "'");
}

struct GraphNode {
  ShotId shot_id;
  std::string keyframe_path;
  std::size_t class_id{};
  bool is_medoid{};
  double medoid_similarity{};  // symmetric similarity to the class medoid

  friend bool operator==(const GraphNode&, const GraphNode&) = default;
};

/// Undirected; stored once with src < dst.
struct GraphEdge {
  ShotId src;
  ShotId dst;
  double base_weight{};
  EdgeKind kind{EdgeKind::dendrite};

  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

struct Neighbor {
  std::size_t node;
  std::size_t edge;
};

/// Immutable after construction. Nodes are kept in ascending shot id order and
/// edges in ascending (src, dst) order.
class ExplorationGraph {
 public:
  ExplorationGraph() = default;

  ExplorationGraph(std::vector<GraphNode> nodes, std::vector<GraphEdge> edges)
      : nodes_(std::move(nodes)), edges_(std::move(edges)) {
    std::sort(nodes_.begin(), nodes_.end(), [](const auto& a, const auto& b) { return a.shot_id < b.shot_id; });
    for (std::size_t i = 1; i < nodes_.size(); ++i)
      if (nodes_[i].shot_id == nodes_[i - 1].shot_id) throw DomainError("duplicate node " + nodes_[i].shot_id);
    std::sort(edges_.begin(), edges_.end(),
              [](const auto& a, const auto& b) { return std::tie(a.src, a.dst) < std::tie(b.src, b.dst); });
    adjacency_.resize(nodes_.size());
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const auto& edge = edges_[e];
      if (!(edge.src < edge.dst)) throw DomainError("edge " + edge.src + "-" + edge.dst + " must have src < dst");
      if (e > 0 && edges_[e - 1].src == edge.src && edges_[e - 1].dst == edge.dst)
        throw DomainError("duplicate edge " + edge.src + "-" + edge.dst);
      if (!(edge.base_weight >= 0.0 && edge.base_weight <= 1.0))
        throw DomainError("edge weight outside [0,1]");
      auto a = index_of(edge.src), b = index_of(edge.dst);
      if (!a || !b) throw NotFoundError("edge " + edge.src + "-" + edge.dst + " references an unknown node");
      adjacency_[*a].push_back({*b, e});
      adjacency_[*b].push_back({*a, e});
    }
  }

  const std::vector<GraphNode>& nodes() const noexcept { return nodes_; }
  const std::vector<GraphEdge>& edges() const noexcept { return edges_; }
  const std::vector<Neighbor>& neighbors(std::size_t node) const { return adjacency_[node]; }
  std::size_t size() const noexcept { return nodes_.size(); }

  std::optional<std::size_t> index_of(std::string_view shot) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), shot,
                               [](const GraphNode& n, std::string_view v) { return n.shot_id < v; });
    if (it == nodes_.end() || it->shot_id != shot) return std::nullopt;
    return static_cast<std::size_t>(it - nodes_.begin());
  }

  bool contains(std::string_view shot) const { return index_of(shot).has_value(); }

  /// Node indices of class medoids, ascending.
  std::vector<std::size_t> medoids() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (nodes_[i].is_medoid) out.push_back(i);
    return out;
  }

  std::size_t class_count() const { return medoids().size(); }

  friend bool operator==(const ExplorationGraph& a, const ExplorationGraph& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<GraphNode> nodes_;
  std::vector<GraphEdge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
};

inline ExplorationGraph build_graph(const Corpus& corpus, const ClassPartition& partition,
                                    const SimilarityMatrix& sim, double theta_edge, double theta_axon) {
  if (!(theta_edge >= 0.0 && theta_edge <= 1.0)) throw DomainError("theta_edge must lie in [0,1]");
  if (!(theta_axon >= 0.0 && theta_axon <= 1.0)) throw DomainError("theta_axon must lie in [0,1]");

  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;
  for (const auto& cls : partition.classes) {
    for (const auto& m : cls.members) {
      const auto* shot = corpus.find(m);
      if (!shot) throw NotFoundError("class member '" + m + "' not in corpus");
      nodes.push_back({m, shot->keyframe_path, cls.id, m == cls.medoid, sim.symmetric(m, cls.medoid)});
    }
    for (std::size_t a = 0; a < cls.members.size(); ++a) {
      const auto ia = *sim.index_of(cls.members[a]);
      for (std::size_t b = a + 1; b < cls.members.size(); ++b) {
        const auto ib = *sim.index_of(cls.members[b]);
        const double w = sim.symmetric_at(ia, ib);
        if (w >= theta_edge) edges.push_back({cls.members[a], cls.members[b], w, EdgeKind::dendrite});
      }
    }
  }
  for (std::size_t a = 0; a < partition.classes.size(); ++a) {
    for (std::size_t b = a + 1; b < partition.classes.size(); ++b) {
      const auto& ca = partition.classes[a];
      const auto& cb = partition.classes[b];
      const double w = class_similarity(ca, cb, sim);
      if (w < theta_axon) continue;
      auto [lo, hi] = std::minmax(ca.medoid, cb.medoid);
      edges.push_back({lo, hi, w, EdgeKind::axon});
    }
  }
  return ExplorationGraph(std::move(nodes), std::move(edges));
}

}  // namespace vidgraph
