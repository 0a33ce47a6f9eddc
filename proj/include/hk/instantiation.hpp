#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hk/composition.hpp"
#include "hk/net.hpp"
#include "hk/structure.hpp"

namespace hk {

/// A schematic module together with a validating structure and the initial
/// marking obtained by evaluating the place init inscriptions.
struct System {
  std::string name;
  std::shared_ptr<const Module> module;
  std::shared_ptr<const Structure> structure;
  Marking initial;
  FiringOptions options;

  const SchematicNet& net() const { return module->net; }

  std::vector<Binding> enabled_bindings(const Marking& m, std::size_t transition) const;
  Marking fire(const Marking& m, std::size_t transition, const Binding& b) const;
  std::vector<Successor> successors(const Marking& m) const;
  std::size_t transition_index(const std::string& name) const;
  std::size_t place_index(const std::string& name) const;

  friend bool operator==(const System& a, const System& b);
};

/// Evaluates every init inscription (elm-wrapped ones are expanded). Throws
/// Error when the structure does not validate, the module is ill-formed or an
/// init term is open.
System instantiate(std::shared_ptr<const Module> module, std::shared_ptr<const Structure> structure,
                   std::string name = {});

/// Two systems that share the very same schematic module object.
std::pair<System, System> reinstantiate(std::shared_ptr<const Module> module, std::shared_ptr<const Structure> first,
                                        std::shared_ptr<const Structure> second);

}  // namespace hk
