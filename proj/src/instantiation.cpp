#include "hk/instantiation.hpp"

#include <set>

#include "hk/error.hpp"

namespace hk {

std::vector<Binding> System::enabled_bindings(const Marking& m, std::size_t transition) const {
  return hk::enabled_bindings(net(), m, transition, *structure, options);
}

Marking System::fire(const Marking& m, std::size_t transition, const Binding& b) const {
  return hk::fire(net(), m, transition, b, *structure);
}

std::vector<Successor> System::successors(const Marking& m) const {
  return hk::successors(net(), m, *structure, options);
}

std::size_t System::transition_index(const std::string& name) const {
  auto idx = net().find_transition(name);
  if (!idx) throw Error("system '" + this->name + "' has no transition '" + name + "'");
  return *idx;
}

std::size_t System::place_index(const std::string& name) const {
  auto idx = net().find_place(name);
  if (!idx) throw Error("system '" + this->name + "' has no place '" + name + "'");
  return *idx;
}

bool operator==(const System& a, const System& b) {
  auto same = [](const auto& x, const auto& y) { return x == y || (x && y && *x == *y); };
  return a.name == b.name && same(a.module, b.module) && same(a.structure, b.structure) && a.initial == b.initial;
}

System instantiate(std::shared_ptr<const Module> module, std::shared_ptr<const Structure> structure,
                   std::string name) {
  if (!module || !structure) throw Error("instantiate needs a module and a structure");
  const Signature* sig = module->signature ? module->signature.get() : structure->signature().get();
  if (!sig) throw Error("module '" + module->name + "' has no signature");
  if (module->signature && structure->signature() && !(*module->signature == *structure->signature()))
    throw Error("structure '" + structure->name() + "' interprets signature '" + structure->signature()->name() +
                "', module '" + module->name + "' uses '" + module->signature->name() + "'");

  auto violations = validate_structure(*sig, *structure);
  if (!violations.empty()) {
    std::string msg = "structure '" + structure->name() + "' is not a model of '" + sig->name() + "':";
    for (const auto& v : violations) msg += "\n  " + v.message;
    throw Error(msg);
  }
  auto problems = module_problems(*module);
  if (!problems.empty()) {
    std::string msg = "module '" + module->name + "' is ill-formed:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw Error(msg);
  }

  System sys;
  sys.name = name.empty() ? module->name : std::move(name);
  sys.module = module;
  sys.structure = structure;
  sys.initial.resize(module->net.places.size());
  for (std::size_t i = 0; i < module->net.places.size(); ++i) {
    const auto& place = module->net.places[i];
    for (const auto& t : place.init) {
      std::set<std::string> vars;
      t.collect_variables(vars);
      if (!vars.empty())
        throw Error("initial inscription " + t.str() + " of place '" + place.name + "' is not closed");
      multiset_add(sys.initial[i], evaluate_inscription({t}, *structure, {}));
    }
    if (place.sort)
      for (const auto& [v, n] : sys.initial[i])
        if (!in_sort(v, *place.sort, *structure))
          throw Error("initial token " + v.str() + " of place '" + place.name + "' is not in " + place.sort->str());
  }
  return sys;
}

std::pair<System, System> reinstantiate(std::shared_ptr<const Module> module, std::shared_ptr<const Structure> first,
                                        std::shared_ptr<const Structure> second) {
  return {instantiate(module, std::move(first)), instantiate(module, std::move(second))};
}

}  // namespace hk
