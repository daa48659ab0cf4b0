#pragma once

/// \file explore.hpp
/// Stimulus-driven exploration over the keyframe graph.
///
/// A click on a node is a stimulus. Activation spreads along edges as a
/// max-product: the level of v is the best product of (effective weight *
/// decay) over the simple paths from the stimulus. Since every factor is at
/// most 1, a best-first sweep that settles each node once yields exactly that
/// maximum. Nodes at or above theta_act are active and become visible next to
/// the always-visible class medoids.

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "vidgraph/error.hpp"
#include "vidgraph/graph.hpp"
#include "vidgraph/profile.hpp"

namespace vidgraph {

struct ExploreParams {
  double theta_act = 0.5;
  double decay = 0.85;
  double lambda = 0.3;
  std::size_t budget = 50;

  void validate() const {
    if (!(theta_act >= 0.0 && theta_act <= 1.0)) throw DomainError("theta_act must lie in [0,1]");
    if (!(decay > 0.0 && decay <= 1.0)) throw DomainError("decay must lie in (0,1]");
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("lambda must lie in [0,1]");
    if (budget < 1) throw DomainError("budget must be at least 1");
  }
};

struct ActivationMap {
  ShotId stimulus;
  std::map<ShotId, double> level;  // reached nodes only; absent means 0
  std::set<ShotId> active;         // level >= theta_act

  double level_of(const ShotId& shot) const {
    auto it = level.find(shot);
    return it == level.end() ? 0.0 : it->second;
  }
};

/// Effective weight of every graph edge under `profile`, by edge index.
inline std::vector<double> effective_weights(const ExplorationGraph& graph, const UserProfile& profile,
                                             double lambda) {
  std::vector<double> out;
  out.reserve(graph.edges().size());
  for (const auto& e : graph.edges()) out.push_back(effective_weight(e, profile, lambda));
  return out;
}

inline ActivationMap activate(const ExplorationGraph& graph, const ShotId& stimulus, const UserProfile& profile,
                              const ExploreParams& params) {
  params.validate();
  auto start = graph.index_of(stimulus);
  if (!start) throw NotFoundError("stimulus '" + stimulus + "' is not a graph node");
  const auto weights = effective_weights(graph, profile, params.lambda);

  std::vector<double> level(graph.size(), 0.0);
  std::vector<bool> reached(graph.size(), false), settled(graph.size(), false);
  // Highest level first; equal levels pop in ascending node order.
  using Item = std::pair<double, std::size_t>;
  auto cmp = [](const Item& a, const Item& b) { return a.first < b.first || (a.first == b.first && a.second > b.second); };
  std::priority_queue<Item, std::vector<Item>, decltype(cmp)> frontier(cmp);

  level[*start] = 1.0;
  reached[*start] = true;
  frontier.emplace(1.0, *start);
  while (!frontier.empty()) {
    auto [lvl, u] = frontier.top();
    frontier.pop();
    if (settled[u]) continue;
    settled[u] = true;
    for (const auto& nb : graph.neighbors(u)) {
      if (settled[nb.node]) continue;
      const double candidate = lvl * (weights[nb.edge] * params.decay);
      if (!reached[nb.node] || candidate > level[nb.node]) {
        level[nb.node] = candidate;
        reached[nb.node] = true;
        frontier.emplace(candidate, nb.node);
      }
    }
  }

  ActivationMap out;
  out.stimulus = stimulus;
  for (std::size_t i = 0; i < graph.size(); ++i) {
    if (!reached[i]) continue;
    const auto& id = graph.nodes()[i].shot_id;
    out.level.emplace(id, level[i]);
    if (i == *start || (level[i] > 0.0 && level[i] >= params.theta_act)) out.active.insert(id);
  }
  return out;
}

struct ViewNode {
  ShotId shot_id;
  std::string keyframe_path;
  std::size_t class_id{};
  bool is_medoid{};
  double user_weight{};
  std::optional<double> level;  // focus views only

  friend bool operator==(const ViewNode&, const ViewNode&) = default;
};

struct ViewEdge {
  ShotId src;
  ShotId dst;
  EdgeKind kind{};
  double base_weight{};
  double weight{};  // effective, personalized

  friend bool operator==(const ViewEdge&, const ViewEdge&) = default;
};

/// What the client should display. Nodes ascend by shot id; edges by (src, dst).
struct ViewState {
  std::string user_id;
  std::optional<ShotId> focus;
  std::vector<ViewNode> nodes;
  std::vector<ViewEdge> edges;
  std::vector<ShotId> medoids;
  std::size_t budget{};

  bool visible(std::string_view shot) const {
    return std::any_of(nodes.begin(), nodes.end(), [&](const ViewNode& n) { return n.shot_id == shot; });
  }

  friend bool operator==(const ViewState&, const ViewState&) = default;
};

namespace detail {

inline ViewState make_view(const ExplorationGraph& graph, const UserProfile& profile, const ExploreParams& params,
                           const std::vector<bool>& selected, const ActivationMap* activation) {
  ViewState view;
  view.user_id = profile.user_id;
  view.budget = params.budget;
  for (std::size_t i = 0; i < graph.size(); ++i) {
    const auto& n = graph.nodes()[i];
    if (n.is_medoid) view.medoids.push_back(n.shot_id);
    if (!selected[i]) continue;
    ViewNode vn{n.shot_id, n.keyframe_path, n.class_id, n.is_medoid, user_weight(profile, n.shot_id), std::nullopt};
    if (activation) vn.level = activation->level_of(n.shot_id);
    view.nodes.push_back(std::move(vn));
  }
  for (const auto& e : graph.edges()) {
    if (!selected[*graph.index_of(e.src)] || !selected[*graph.index_of(e.dst)]) continue;
    view.edges.push_back({e.src, e.dst, e.kind, e.base_weight, effective_weight(e, profile, params.lambda)});
  }
  return view;
}

}  // namespace detail

/// Global overview: every medoid, then the remaining budget filled by
/// descending Wu, then descending similarity to the own medoid, then
/// ascending shot id.
inline ViewState overview(const ExplorationGraph& graph, const UserProfile& profile, const ExploreParams& params) {
  params.validate();
  const auto medoids = graph.medoids();
  if (params.budget < medoids.size()) throw DomainError("budget below class count");

  std::vector<bool> selected(graph.size(), false);
  for (auto m : medoids) selected[m] = true;

  struct Candidate {
    double wu;
    double sim;
    std::size_t node;
  };
  std::vector<Candidate> rest;
  for (std::size_t i = 0; i < graph.size(); ++i) {
    if (selected[i]) continue;
    const auto& n = graph.nodes()[i];
    rest.push_back({user_weight(profile, n.shot_id), n.medoid_similarity, i});
  }
  // Node indices follow shot id order, so the index breaks ties by shot id.
  std::sort(rest.begin(), rest.end(), [](const Candidate& a, const Candidate& b) {
    if (a.wu != b.wu) return a.wu > b.wu;
    if (a.sim != b.sim) return a.sim > b.sim;
    return a.node < b.node;
  });
  const std::size_t room = params.budget - medoids.size();
  for (std::size_t k = 0; k < rest.size() && k < room; ++k) selected[rest[k].node] = true;
  return detail::make_view(graph, profile, params, selected, nullptr);
}

/// Stimulus-centred view: the medoids, the stimulus, and active nodes by
/// descending level (then shot id) while the budget allows.
inline ViewState focus_view(const ExplorationGraph& graph, const ShotId& stimulus, const UserProfile& profile,
                            const ExploreParams& params) {
  const auto activation = activate(graph, stimulus, profile, params);
  std::vector<bool> selected(graph.size(), false);
  std::size_t count = 0;
  for (auto m : graph.medoids()) {
    selected[m] = true;
    ++count;
  }
  const auto s = *graph.index_of(stimulus);
  if (!selected[s]) {
    selected[s] = true;
    ++count;
  }
  std::vector<std::pair<double, std::size_t>> active;
  for (const auto& id : activation.active) {
    auto idx = *graph.index_of(id);
    if (!selected[idx]) active.emplace_back(activation.level_of(id), idx);
  }
  std::sort(active.begin(), active.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  for (const auto& [lvl, idx] : active) {
    if (count >= params.budget) break;
    selected[idx] = true;
    ++count;
  }
  auto view = detail::make_view(graph, profile, params, selected, &activation);
  view.focus = stimulus;
  return view;
}

}  // namespace vidgraph
