#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hk/canonical.hpp"
#include "hk/net.hpp"
#include "hk/signature.hpp"

namespace hk {

enum class ElementKind { place, transition };
enum class Side { left, right };

std::string to_string(ElementKind k);

/// A labeled interface entry exposing an inner element.
struct InterfaceElement {
  ElementKind kind = ElementKind::place;
  std::string label;
  std::size_t element = 0;  ///< index into places or transitions
  friend bool operator==(const InterfaceElement&, const InterfaceElement&) = default;
};

/// A net fragment with a left and a right labeled interface; the unit of
/// composition.
struct Module {
  std::string name;
  std::shared_ptr<const Signature> signature;
  SchematicNet net;
  std::vector<InterfaceElement> left;
  std::vector<InterfaceElement> right;

  const std::vector<InterfaceElement>& interface(Side s) const { return s == Side::left ? left : right; }
  std::size_t element_count() const { return net.places.size() + net.transitions.size(); }
  /// Name-sorted inner net with interface references remapped.
  void normalize();

  friend bool operator==(const Module& a, const Module& b);
};

/// The module without elements and with empty interfaces.
Module empty_module(std::shared_ptr<const Signature> signature = nullptr);

/// Dangling or mismatched interface references, duplicate labels per side,
/// and the inner net's problems.
std::vector<std::string> module_problems(const Module& m);

/// (kind, label) pairs in declaration order.
std::vector<std::pair<ElementKind, std::string>> interface_of(const Module& m, Side side);

/// How the elements of a right operand land in a composition result.
struct FusionPlan {
  /// Right-operand index -> result index, per kind.
  std::vector<std::size_t> place_map;
  std::vector<std::size_t> transition_map;
  /// (left-operand index, right-operand index) of fused elements.
  std::vector<std::pair<std::size_t, std::size_t>> fused_places;
  std::vector<std::pair<std::size_t, std::size_t>> fused_transitions;
  std::vector<InterfaceElement> left;
  std::vector<InterfaceElement> right;
};

/// Matches a.right against b.left by (kind, label). Unmatched elements of `b`
/// are appended after the `a_places` / `a_transitions` elements of `a`.
/// Throws CompositionError on label collisions in a result interface.
FusionPlan plan_fusion(const std::vector<InterfaceElement>& a_left, const std::vector<InterfaceElement>& a_right,
                       std::size_t a_places, std::size_t a_transitions, const std::vector<InterfaceElement>& b_left,
                       const std::vector<InterfaceElement>& b_right, std::size_t b_places,
                       std::size_t b_transitions);

/// A • B. Fused places unite arcs and initial inscriptions, fused transitions
/// conjoin guards and unite free variables.
Module compose(const Module& a, const Module& b);

/// Graph view used for canonical comparison; inner names are not part of it.
LabeledGraph module_graph(const Module& m);

/// Isomorphism-invariant form respecting kinds, labels, arcs and inscriptions.
std::string canonicalize(const Module& m);

/// Deterministic renaming of inner elements (p1.., t1..) following the
/// canonical labeling; canonicalize(canonical_copy(m)) == canonicalize(m).
Module canonical_copy(const Module& m);

/// Underscores in file labels are shown as spaces.
std::string display_label(const std::string& label);

}  // namespace hk
