#pragma once

#include <random>
#include <string>
#include <vector>

#include "vidgraph/vidgraph.hpp"

namespace fixtures {

inline constexpr vidgraph::ConceptId A = 1, B = 2, C = 3;

inline vidgraph::ConceptLexicon abc_lexicon() { return vidgraph::ConceptLexicon({{A, "A"}, {B, "B"}, {C, "C"}}); }

inline vidgraph::ShotRecord shot(const std::string& id, std::vector<vidgraph::ConceptId> concepts) {
  return {id, "v" + id, "kf/" + id + ".jpg", vidgraph::ConceptVector(id, std::move(concepts))};
}

/// Desk corpus D1 = s1:{A,B}, s2:{A,C}, s3:{B}.
inline vidgraph::Corpus d1() {
  return vidgraph::make_corpus(abc_lexicon(), {shot("s1", {A, B}), shot("s2", {A, C}), shot("s3", {B})});
}

/// Random corpus with up to `max_shots` shots over up to `max_concepts`
/// concepts. Some shots may come out empty.
inline vidgraph::Corpus random_corpus(std::mt19937_64& rng, int max_shots = 8, int max_concepts = 6) {
  std::uniform_int_distribution<int> n_shots(1, max_shots), n_concepts(1, max_concepts);
  const int k = n_concepts(rng);
  vidgraph::ConceptLexicon lex;
  for (int c = 1; c <= k; ++c) lex.add(static_cast<vidgraph::ConceptId>(c), "c" + std::to_string(c));
  std::bernoulli_distribution pick(0.4);
  std::vector<vidgraph::ShotRecord> shots;
  const int n = n_shots(rng);
  for (int s = 0; s < n; ++s) {
    std::vector<vidgraph::ConceptId> cs;
    for (int c = 1; c <= k; ++c)
      if (pick(rng)) cs.push_back(static_cast<vidgraph::ConceptId>(c));
    shots.push_back(shot("s" + std::to_string(s), cs));
  }
  return vidgraph::make_corpus(std::move(lex), std::move(shots));
}

inline vidgraph::GraphNode node(const std::string& id, std::size_t cls = 0, bool medoid = false, double sim = 0.0) {
  return {id, "kf/" + id + ".jpg", cls, medoid, sim};
}

/// Chain fixture: n1-n2 (0.8), n2-n4 (0.9), n1-n3 (0.4); n1 is the only medoid.
inline vidgraph::ExplorationGraph chain_graph() {
  using vidgraph::EdgeKind;
  return vidgraph::ExplorationGraph(
      {node("n1", 0, true, 1.0), node("n2", 0, false, 0.8), node("n3", 0, false, 0.4), node("n4", 0, false, 0.5)},
      {{"n1", "n2", 0.8, EdgeKind::dendrite},
       {"n2", "n4", 0.9, EdgeKind::dendrite},
       {"n1", "n3", 0.4, EdgeKind::dendrite}});
}

/// Random connected graph on `n` nodes: a random spanning tree plus extra edges.
inline vidgraph::ExplorationGraph random_connected_graph(std::mt19937_64& rng, std::size_t n, double extra_p) {
  std::vector<vidgraph::GraphNode> nodes;
  for (std::size_t i = 0; i < n; ++i) nodes.push_back(node("g" + std::to_string(i), 0, i == 0, 0.0));
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  std::bernoulli_distribution extra(extra_p);
  std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
  std::vector<vidgraph::GraphEdge> edges;
  auto add = [&](std::size_t a, std::size_t b) {
    if (a == b || used[a][b]) return;
    used[a][b] = used[b][a] = true;
    auto sa = nodes[a].shot_id, sb = nodes[b].shot_id;
    if (sb < sa) std::swap(sa, sb);
    edges.push_back({sa, sb, weight(rng), vidgraph::EdgeKind::dendrite});
  };
  for (std::size_t i = 1; i < n; ++i) add(i, std::uniform_int_distribution<std::size_t>(0, i - 1)(rng));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (extra(rng)) add(i, j);
  return vidgraph::ExplorationGraph(std::move(nodes), std::move(edges));
}

}  // namespace fixtures
