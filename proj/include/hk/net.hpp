#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hk/signature.hpp"
#include "hk/structure.hpp"
#include "hk/term.hpp"
#include "hk/value.hpp"

namespace hk {

enum class ArcDirection { input, output };

struct Place {
  std::string name;
  std::optional<Sort> sort;
  /// Initial inscription; a multiset of closed terms, each possibly elm-wrapped.
  std::vector<Term> init;
  friend bool operator==(const Place&, const Place&) = default;
};

struct Transition {
  std::string name;
  Guard guard;
  /// Variables whose value the environment chooses (sorted, unique).
  std::vector<std::string> free_vars;
  friend bool operator==(const Transition&, const Transition&) = default;
};

/// Input arcs run place -> transition, output arcs transition -> place.
struct Arc {
  std::size_t place = 0;
  std::size_t transition = 0;
  ArcDirection direction = ArcDirection::input;
  std::vector<Term> inscription;
  friend bool operator==(const Arc&, const Arc&) = default;
};

/// Old-to-new index maps produced by SchematicNet::normalize.
struct Renumbering {
  std::vector<std::size_t> places;
  std::vector<std::size_t> transitions;
};

/// High-level net whose places are predicates and whose arcs carry term
/// multisets over a signature.
struct SchematicNet {
  std::vector<Place> places;
  std::vector<Transition> transitions;
  std::vector<Arc> arcs;
  VariableSorts variables;

  std::optional<std::size_t> find_place(const std::string& name) const;
  std::optional<std::size_t> find_transition(const std::string& name) const;

  /// Variables occurring around a transition (arcs, guard, free list) with their sorts.
  std::vector<std::pair<std::string, Sort>> variables_of(std::size_t transition) const;
  std::vector<const Arc*> arcs_of(std::size_t transition, ArcDirection dir) const;

  /// Sorts places and transitions by name, merges parallel arcs and sorts
  /// inscriptions and arcs.
  Renumbering normalize();

  friend bool operator==(const SchematicNet&, const SchematicNet&) = default;
};

/// Structural problems: dangling arcs, undeclared variables, sort errors,
/// nested elm, and output/guard variables not bound by inputs or `free`.
std::vector<std::string> net_problems(const SchematicNet& net, const Signature& sig);

/// Per-place token multisets, indexed like SchematicNet::places.
using Marking = std::vector<Multiset>;

std::string marking_str(const SchematicNet& net, const Marking& m);

struct FiringOptions {
  std::size_t powerset_cap = default_powerset_cap;
};

/// Guard holds, every input inscription is contained in `m`, and the binding
/// is total and sort-respecting for the transition's variables.
bool is_enabled(const SchematicNet& net, const Marking& m, std::size_t transition, const Binding& b,
                const Structure& s);

/// All enabled bindings of a transition in canonical order.
std::vector<Binding> enabled_bindings(const SchematicNet& net, const Marking& m, std::size_t transition,
                                      const Structure& s, const FiringOptions& opt = {});

/// Evaluated input (or output) inscriptions per place, elm expanded.
std::vector<std::pair<std::size_t, Multiset>> arc_tokens(const SchematicNet& net, std::size_t transition,
                                                         ArcDirection dir, const Binding& b, const Structure& s);

/// m - inputs + outputs. Throws FiringError when (transition, b) is not enabled.
Marking fire(const SchematicNet& net, const Marking& m, std::size_t transition, const Binding& b,
             const Structure& s);

struct Successor {
  std::size_t transition;
  Binding binding;
  Marking marking;
};

/// Every enabled (transition, binding) pair with its successor marking,
/// ordered by transition index and then binding.
std::vector<Successor> successors(const SchematicNet& net, const Marking& m, const Structure& s,
                                  const FiringOptions& opt = {});

}  // namespace hk
