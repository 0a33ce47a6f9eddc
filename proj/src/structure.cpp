#include "hk/structure.hpp"

#include <algorithm>

#include "hk/error.hpp"

namespace hk {

namespace {

constexpr std::size_t max_product_size = std::size_t{1} << 20;

}  // namespace

void Structure::set_carrier(const std::string& symbol, Value elements) {
  if (!elements.is_set()) throw Error("carrier of '" + symbol + "' must be a set, got " + elements.str());
  carriers_[symbol] = std::move(elements);
}

void Structure::set_function(const std::string& symbol, FunctionTable table) {
  functions_[symbol] = std::move(table);
}

void Structure::set_constant(const std::string& symbol, Value value) { constants_[symbol] = std::move(value); }

const Value* Structure::carrier(const std::string& symbol) const {
  auto it = carriers_.find(symbol);
  return it == carriers_.end() ? nullptr : &it->second;
}

const Structure::FunctionTable* Structure::function(const std::string& symbol) const {
  auto it = functions_.find(symbol);
  return it == functions_.end() ? nullptr : &it->second;
}

const Value* Structure::constant(const std::string& symbol) const {
  auto it = constants_.find(symbol);
  return it == constants_.end() ? nullptr : &it->second;
}

Value Structure::apply(const std::string& symbol, const std::vector<Value>& args) const {
  const auto* table = function(symbol);
  if (!table) throw EvalError("function '" + symbol + "' is not interpreted");
  Value key = args.size() == 1 ? args.front() : Value::tuple(args);
  auto it = table->find(key);
  if (it == table->end()) throw EvalError("function '" + symbol + "' is undefined on " + key.str());
  return it->second;
}

bool operator==(const Structure& a, const Structure& b) {
  bool same_sig = a.signature_ == b.signature_ ||
                  (a.signature_ && b.signature_ && *a.signature_ == *b.signature_);
  return same_sig && a.name_ == b.name_ && a.carriers_ == b.carriers_ && a.functions_ == b.functions_ &&
         a.constants_ == b.constants_;
}

std::string to_string(Violation::Kind k) {
  switch (k) {
    case Violation::Kind::missing_carrier: return "missing carrier";
    case Violation::Kind::not_a_set: return "not a set";
    case Violation::Kind::subset_outside_base: return "subset outside base";
    case Violation::Kind::missing_function: return "missing function";
    case Violation::Kind::non_total_function: return "non-total function";
    case Violation::Kind::codomain: return "codomain violation";
    case Violation::Kind::missing_constant: return "missing constant";
    case Violation::Kind::constant_sort: return "constant sort violation";
    case Violation::Kind::unknown_symbol: return "unknown symbol";
    case Violation::Kind::bad_signature: return "bad signature";
  }
  return "?";
}

Value sort_carrier(const Sort& sort, const Structure& s, std::size_t powerset_cap) {
  switch (sort.kind()) {
    case Sort::Kind::named: {
      const auto* c = s.carrier(sort.symbol());
      if (!c) throw DomainError("no carrier for sort '" + sort.symbol() + "'");
      return *c;
    }
    case Sort::Kind::power: {
      const auto* c = s.carrier(sort.symbol());
      if (!c) throw DomainError("no carrier for sort '" + sort.symbol() + "'");
      if (c->size() > powerset_cap)
        throw DomainError("powerset of '" + sort.symbol() + "' exceeds the cap (" + std::to_string(c->size()) +
                          " > " + std::to_string(powerset_cap) + " elements)");
      return Value::set(powerset(*c));
    }
    case Sort::Kind::tuple: {
      std::vector<std::vector<Value>> rows{{}};
      for (const auto& part : sort.parts()) {
        Value pc = sort_carrier(part, s, powerset_cap);
        if (rows.size() * std::max<std::size_t>(pc.size(), 1) > max_product_size)
          throw DomainError("carrier of " + sort.str() + " is too large to enumerate");
        std::vector<std::vector<Value>> next;
        for (const auto& r : rows)
          for (const auto& e : pc.elements()) {
            auto extended = r;
            extended.push_back(e);
            next.push_back(std::move(extended));
          }
        rows = std::move(next);
      }
      std::vector<Value> out;
      out.reserve(rows.size());
      for (auto& r : rows) out.push_back(Value::tuple(std::move(r)));
      return Value::set(std::move(out));
    }
  }
  return Value::set({});
}

bool in_sort(const Value& v, const Sort& sort, const Structure& s) {
  switch (sort.kind()) {
    case Sort::Kind::named: {
      const auto* c = s.carrier(sort.symbol());
      return c && c->contains(v);
    }
    case Sort::Kind::power: {
      const auto* c = s.carrier(sort.symbol());
      return c && v.is_subset_of(*c);
    }
    case Sort::Kind::tuple: {
      if (!v.is_tuple() || v.size() != sort.parts().size()) return false;
      for (std::size_t i = 0; i < v.size(); ++i)
        if (!in_sort(v.elements()[i], sort.parts()[i], s)) return false;
      return true;
    }
  }
  return false;
}

std::vector<Violation> validate_structure(const Signature& sig, const Structure& s) {
  using K = Violation::Kind;
  std::vector<Violation> out;
  for (const auto& p : sig.problems()) out.push_back({K::bad_signature, sig.name(), p});

  for (const auto& name : sig.sets())
    if (!s.carrier(name)) out.push_back({K::missing_carrier, name, "set symbol '" + name + "' has no carrier"});

  for (const auto& sub : sig.subsets()) {
    const auto* c = s.carrier(sub.name);
    if (!c) {
      out.push_back({K::missing_carrier, sub.name, "subset symbol '" + sub.name + "' has no carrier"});
      continue;
    }
    const auto* base = s.carrier(sub.base);
    for (const auto& member : c->elements())
      if (!base || !member.is_subset_of(*base))
        out.push_back({K::subset_outside_base, sub.name,
                       "member " + member.str() + " of '" + sub.name + "' is not a subset of '" + sub.base + "'"});
  }

  for (const auto& [name, value] : s.carriers())
    if (!sig.is_set(name) && !sig.find_subset(name))
      out.push_back({K::unknown_symbol, name, "carrier for undeclared symbol '" + name + "'"});
  for (const auto& [name, table] : s.functions())
    if (!sig.find_function(name))
      out.push_back({K::unknown_symbol, name, "table for undeclared function '" + name + "'"});
  for (const auto& [name, value] : s.constants())
    if (!sig.find_constant(name))
      out.push_back({K::unknown_symbol, name, "value for undeclared constant '" + name + "'"});

  for (const auto& c : sig.constants()) {
    const auto* v = s.constant(c.name);
    if (!v)
      out.push_back({K::missing_constant, c.name, "constant '" + c.name + "' has no value"});
    else if (!in_sort(*v, c.sort, s))
      out.push_back({K::constant_sort, c.name, "constant '" + c.name + "' = " + v->str() + " is not in " + c.sort.str()});
  }

  for (const auto& f : sig.functions()) {
    const auto* table = s.function(f.name);
    if (!table) {
      out.push_back({K::missing_function, f.name, "function '" + f.name + "' has no table"});
      continue;
    }
    Value domain;
    try {
      domain = sort_carrier(f.arguments.size() == 1 ? f.arguments.front() : Sort::tuple(f.arguments), s);
    } catch (const DomainError& e) {
      out.push_back({K::missing_carrier, f.name, e.what()});
      continue;
    }
    for (const auto& arg : domain.elements())
      if (!table->count(arg))
        out.push_back({K::non_total_function, f.name, "function '" + f.name + "' is undefined on " + arg.str()});
    for (const auto& [arg, result] : *table) {
      if (!domain.contains(arg))
        out.push_back({K::non_total_function, f.name,
                       "function '" + f.name + "' has an entry outside its domain: " + arg.str()});
      if (!in_sort(result, f.result, s))
        out.push_back({K::codomain, f.name,
                       "function '" + f.name + "' maps " + arg.str() + " to " + result.str() + " outside " +
                           f.result.str()});
    }
  }
  return out;
}

Structure restrict_structure(const Structure& s, const std::map<std::string, std::vector<Value>>& keep,
                             std::string name) {
  Structure out(name.empty() ? s.name() : std::move(name), s.signature());
  const auto& sig = *s.signature();
  for (const auto& [symbol, carrier] : s.carriers()) {
    auto it = keep.find(symbol);
    if (it == keep.end() || !sig.is_set(symbol)) {
      out.set_carrier(symbol, carrier);
      continue;
    }
    std::vector<Value> kept;
    for (const auto& v : it->second)
      if (carrier.contains(v)) kept.push_back(v);
    out.set_carrier(symbol, Value::set(std::move(kept)));
  }
  for (const auto& sub : sig.subsets()) {
    const auto* c = s.carrier(sub.name);
    const auto* base = out.carrier(sub.base);
    if (!c || !base) continue;
    std::vector<Value> kept;
    for (const auto& member : c->elements())
      if (member.is_subset_of(*base)) kept.push_back(member);
    out.set_carrier(sub.name, Value::set(std::move(kept)));
  }
  for (const auto& [fname, table] : s.functions()) {
    const auto* f = sig.find_function(fname);
    Structure::FunctionTable kept;
    for (const auto& [arg, result] : table) {
      bool inside = true;
      if (f) {
        if (f->arguments.size() == 1)
          inside = in_sort(arg, f->arguments.front(), out);
        else
          inside = in_sort(arg, Sort::tuple(f->arguments), out);
      }
      if (inside) kept.emplace(arg, result);
    }
    out.set_function(fname, std::move(kept));
  }
  for (const auto& [cname, value] : s.constants()) out.set_constant(cname, value);
  return out;
}

}  // namespace hk
