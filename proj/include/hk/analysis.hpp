#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hk/instantiation.hpp"

namespace hk {

/// Elementary place/transition net obtained by expanding a system over its
/// carriers. Matrices are indexed [grounded place][grounded transition].
struct GroundedNet {
  struct GroundPlace {
    std::size_t place;
    Value value;
  };
  struct GroundTransition {
    std::size_t transition;
    Binding binding;
  };

  std::vector<GroundPlace> places;
  std::vector<GroundTransition> transitions;
  std::vector<std::vector<std::int64_t>> pre;
  std::vector<std::vector<std::int64_t>> post;
  std::vector<std::vector<std::int64_t>> incidence;
  std::vector<std::int64_t> initial;

  std::optional<std::size_t> place_index(std::size_t place, const Value& v) const;
  std::string place_label(const SchematicNet& net, std::size_t gp) const;
  std::string transition_label(const SchematicNet& net, std::size_t gt) const;

  /// Token counts of `m` per grounded place. Throws DomainError for tokens
  /// outside the grounded domain.
  std::vector<std::int64_t> to_vector(const Marking& m) const;
};

/// One grounded place per (place, carrier value of its sort), extended by any
/// value an inscription can produce; one grounded transition per binding over
/// the carriers whose guard holds and whose inscriptions evaluate.
GroundedNet ground(const System& sys);

using IntVector = std::vector<std::int64_t>;

/// Integer basis of { i | iᵀC = 0 }, each vector primitive with a positive
/// leading entry.
std::vector<IntVector> place_invariants(const GroundedNet& g);
/// Integer basis of { j | Cj = 0 }.
std::vector<IntVector> transition_invariants(const GroundedNet& g);

/// Integer basis of the right null-space of an arbitrary matrix with `cols` columns.
std::vector<IntVector> integer_null_space(const std::vector<IntVector>& matrix, std::size_t cols);

/// True iff v is a rational linear combination of the basis vectors.
bool in_span(const std::vector<IntVector>& basis, const IntVector& v);

std::int64_t dot(const IntVector& a, const IntVector& b);

/// Boolean marking predicate: `place contains value`, `count(place) op n`,
/// combined with and, or, not.
class Predicate {
 public:
  enum class Kind { contains, count, conj, disj, neg };
  enum class Cmp { eq, ne, lt, le, gt, ge };

  static Predicate contains(std::string place, Value value);
  static Predicate count(std::string place, Cmp cmp, std::size_t n);
  static Predicate conj(Predicate a, Predicate b);
  static Predicate disj(Predicate a, Predicate b);
  static Predicate neg(Predicate a);

  Kind kind() const { return kind_; }
  /// Throws Error for unknown places.
  bool holds(const SchematicNet& net, const Marking& m) const;
  std::string str() const;

 private:
  Kind kind_ = Kind::contains;
  std::string place_;
  Value value_;
  Cmp cmp_ = Cmp::eq;
  std::size_t n_ = 0;
  std::vector<std::shared_ptr<const Predicate>> args_;
};

struct ExploreLimits {
  std::size_t max_nodes = 100000;
  std::size_t max_edges = 1000000;
};

struct ReachabilityGraph {
  struct Edge {
    std::size_t from;
    std::size_t to;
    std::size_t transition;
    Binding binding;
  };
  std::vector<Marking> nodes;  ///< nodes[0] is the initial marking
  std::vector<Edge> edges;
  bool truncated = false;
  std::vector<std::size_t> deadlocks;  ///< fully expanded nodes without successors
  std::vector<std::size_t> hits;       ///< nodes satisfying the predicate
};

/// Breadth-first exploration in successor order; deterministic.
ReachabilityGraph explore(const System& sys, const ExploreLimits& limits = {},
                          const Predicate* predicate = nullptr);

struct GroundedGraph {
  struct Edge {
    std::size_t from;
    std::size_t to;
    std::size_t transition;  ///< grounded transition index
  };
  std::vector<IntVector> nodes;
  std::vector<Edge> edges;
  bool truncated = false;
};

/// Token game of the elementary net.
GroundedGraph explore_grounded(const GroundedNet& g, const ExploreLimits& limits = {});

/// Empty iff the translation of high-level markings is a bijection onto the
/// grounded nodes that maps edges onto edges with the same (transition, binding).
std::vector<std::string> compare_graphs(const ReachabilityGraph& high, const GroundedGraph& low, const GroundedNet& g);

}  // namespace hk
