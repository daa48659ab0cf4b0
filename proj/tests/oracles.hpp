#pragma once

// Brute-force reference implementations used only by tests. They work from
// the definitions directly and share no code path with the library
// algorithms they check.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "vidgraph/corpus.hpp"

namespace oracle {

using ConceptSet = std::vector<vidgraph::ConceptId>;

inline bool has(const ConceptSet& s, vidgraph::ConceptId c) { return std::find(s.begin(), s.end(), c) != s.end(); }

/// N(a and b) / N(a) by scanning every shot.
inline double cd(const std::vector<ConceptSet>& shots, vidgraph::ConceptId a, vidgraph::ConceptId b) {
  int n_a = 0, n_ab = 0;
  for (const auto& s : shots) {
    if (has(s, a)) {
      ++n_a;
      if (has(s, b)) ++n_ab;
    }
  }
  return n_a == 0 ? 0.0 : static_cast<double>(n_ab) / static_cast<double>(n_a);
}

/// (1/|A|) sum_{a in A} max_{b in B} Cd(a, b), evaluated from raw shot sets.
inline double sd(const std::vector<ConceptSet>& shots, const ConceptSet& a, const ConceptSet& b) {
  double total = 0.0;
  for (auto ca : a) {
    double best = 0.0;
    for (auto cb : b) {
      const double w = cd(shots, ca, cb);
      if (w > best) best = w;
    }
    total += best;
  }
  return total / static_cast<double>(a.size());
}

/// Components of {(i,j) : weight(i,j) >= theta} by repeated label merging.
inline std::vector<std::size_t> components(std::size_t n, const std::function<double(std::size_t, std::size_t)>& weight,
                                           double theta) {
  std::vector<std::size_t> label(n);
  for (std::size_t i = 0; i < n; ++i) label[i] = i;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && weight(i, j) >= theta && label[i] != label[j]) {
          const auto lo = std::min(label[i], label[j]);
          const auto hi = std::max(label[i], label[j]);
          for (auto& l : label)
            if (l == hi) l = lo;
          changed = true;
        }
  }
  return label;
}

struct WeightedEdge {
  std::size_t a;
  std::size_t b;
  double w;
};

/// Max over all simple paths from `start` of prod(w * decay), by DFS.
inline std::vector<double> best_paths(std::size_t n, const std::vector<WeightedEdge>& edges, std::size_t start,
                                      double decay) {
  std::vector<double> best(n, 0.0);
  std::vector<bool> on_path(n, false);
  std::function<void(std::size_t, double)> walk = [&](std::size_t u, double value) {
    best[u] = std::max(best[u], value);
    on_path[u] = true;
    for (const auto& e : edges) {
      std::size_t v;
      if (e.a == u) v = e.b;
      else if (e.b == u) v = e.a;
      else continue;
      if (!on_path[v]) walk(v, value * (e.w * decay));
    }
    on_path[u] = false;
  };
  walk(start, 1.0);
  return best;
}

}  // namespace oracle
