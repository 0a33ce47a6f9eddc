#pragma once

#include <string>
#include <vector>

namespace hk {

/// Directed graph with string-labeled nodes and edges, the common shape of
/// modules and runs for isomorphism testing.
struct LabeledGraph {
  struct Edge {
    std::size_t from;
    std::size_t to;
    std::string label;
  };
  std::vector<std::string> nodes;
  std::vector<Edge> edges;
};

/// Canonical labeling by colour refinement and individualization with
/// automorphism backjumping. Two graphs get the same form iff they are
/// isomorphic (respecting node and edge labels).
std::string canonical_form(const LabeledGraph& g);

/// Node order of the canonical labeling: result[i] is the node placed at position i.
std::vector<std::size_t> canonical_order(const LabeledGraph& g);

}  // namespace hk
