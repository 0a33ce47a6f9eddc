#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hk/canonical.hpp"
#include "hk/composition.hpp"
#include "hk/instantiation.hpp"

namespace hk {

/// Occurrence of a token: a (place, value) pair.
struct Condition {
  std::string id;
  std::string place;
  Value value;
  friend bool operator==(const Condition&, const Condition&) = default;
};

/// Occurrence of a transition under a binding.
struct Event {
  std::string id;
  std::string transition;
  Binding binding;
  friend bool operator==(const Event&, const Event&) = default;
};

/// A distributed run: an occurrence net that is also a module. Interface
/// entries of kind `place` expose conditions, of kind `transition` events.
struct Run {
  std::string name;
  std::vector<Condition> conditions;
  std::vector<Event> events;
  std::vector<std::pair<std::size_t, std::size_t>> consumes;  ///< (condition, event)
  std::vector<std::pair<std::size_t, std::size_t>> produces;  ///< (event, condition)
  std::vector<InterfaceElement> left;
  std::vector<InterfaceElement> right;

  std::vector<std::size_t> preset(std::size_t event) const;
  std::vector<std::size_t> postset(std::size_t event) const;
  /// Conditions without a producing event, in index order.
  std::vector<std::size_t> initial_conditions() const;
  /// Conditions without a consuming event, in index order.
  std::vector<std::size_t> final_conditions() const;
  std::size_t event_index(const std::string& id) const;

  friend bool operator==(const Run&, const Run&) = default;
};

/// Display label of a condition, `place=value`.
std::string condition_label(const std::string& place, const Value& value);

/// Exposes the initial conditions on the left and the final ones on the
/// right, labeled `place=value` with `#k` suffixes for repeated labels.
void expose_cuts(Run& r);

/// Cycles, branched conditions, dangling references and duplicate interface labels.
std::vector<std::string> run_structure_problems(const Run& r);

struct Step {
  std::string transition;
  Binding binding;
  friend bool operator==(const Step&, const Step&) = default;
};

std::string step_str(const Step& s);

struct SchedulingPolicy {
  enum class Mode { random, script };
  Mode mode = Mode::random;
  std::uint64_t seed = 0;
  std::vector<Step> script;
  std::size_t step_limit = 100;
};

/// Executes up to `step_limit` firings and records them as a run. Initial
/// tokens become conditions only when consumed; untouched ones stay implicit
/// (see final_marking). Among equal tokens, initial ones go first, then the
/// condition with the lowest index. Throws RunError when a scripted step is
/// not enabled.
Run simulate(const System& sys, const SchedulingPolicy& policy);

/// Empty iff `r` is a run of `sys`.
std::vector<std::string> validate_run(const Run& r, const System& sys);

/// Module composition of two runs; fused conditions must carry equal
/// (place, value) labels and the result must again be an occurrence net.
Run compose_runs(const Run& a, const Run& b);

/// Seeded random topological order of the events. Throws RunError on cycles.
std::vector<Step> linearize(const Run& r, std::uint64_t seed);

enum class Order { before, after, independent };
std::string to_string(Order o);

/// Causal relation of two events; an event is `before` itself.
Order ordered(const Run& r, std::size_t e1, std::size_t e2);

/// Fires the steps from the initial marking; FiringError on the first disabled step.
Marking replay(const System& sys, const std::vector<Step>& steps);

/// m0 minus the run's initial cut plus its final cut.
Marking final_marking(const Run& r, const System& sys);

LabeledGraph run_graph(const Run& r);
std::string canonicalize(const Run& r);

}  // namespace hk
