#include "hk/signature.hpp"

#include <algorithm>
#include <map>

namespace hk {

Sort Sort::named(std::string symbol) {
  Sort s;
  s.kind_ = Kind::named;
  s.symbol_ = std::move(symbol);
  return s;
}

Sort Sort::power(std::string base_symbol) {
  Sort s;
  s.kind_ = Kind::power;
  s.symbol_ = std::move(base_symbol);
  return s;
}

Sort Sort::tuple(std::vector<Sort> parts) {
  Sort s;
  s.kind_ = Kind::tuple;
  s.parts_ = std::move(parts);
  return s;
}

std::string Sort::str() const {
  switch (kind_) {
    case Kind::named:
      return symbol_;
    case Kind::power:
      return "pow(" + symbol_ + ")";
    case Kind::tuple: {
      std::string out = "(";
      for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) out += ", ";
        out += parts_[i].str();
      }
      return out + ")";
    }
  }
  return {};
}

namespace {

template <class T, class Key>
void insert_sorted(std::vector<T>& v, T item, Key key) {
  auto pos = std::upper_bound(v.begin(), v.end(), item,
                              [&](const T& a, const T& b) { return key(a) < key(b); });
  v.insert(pos, std::move(item));
}

template <class T>
const T* find_by_name(const std::vector<T>& v, const std::string& name) {
  auto it = std::lower_bound(v.begin(), v.end(), name,
                             [](const T& a, const std::string& n) { return a.name < n; });
  return it != v.end() && it->name == name ? &*it : nullptr;
}

}  // namespace

void Signature::add_set(std::string name) {
  insert_sorted(sets_, std::move(name), [](const std::string& s) -> const std::string& { return s; });
}

void Signature::add_subset(SubsetSymbol s) {
  insert_sorted(subsets_, std::move(s), [](const SubsetSymbol& x) -> const std::string& { return x.name; });
}

void Signature::add_constant(ConstantSymbol c) {
  insert_sorted(constants_, std::move(c), [](const ConstantSymbol& x) -> const std::string& { return x.name; });
}

void Signature::add_function(FunctionSymbol f) {
  insert_sorted(functions_, std::move(f), [](const FunctionSymbol& x) -> const std::string& { return x.name; });
}

bool Signature::is_set(const std::string& s) const {
  return std::binary_search(sets_.begin(), sets_.end(), s);
}

const SubsetSymbol* Signature::find_subset(const std::string& s) const { return find_by_name(subsets_, s); }
const ConstantSymbol* Signature::find_constant(const std::string& s) const { return find_by_name(constants_, s); }
const FunctionSymbol* Signature::find_function(const std::string& s) const { return find_by_name(functions_, s); }

std::optional<SymbolKind> Signature::kind_of(const std::string& symbol) const {
  if (is_set(symbol)) return SymbolKind::set;
  if (find_subset(symbol)) return SymbolKind::subset;
  if (find_constant(symbol)) return SymbolKind::constant;
  if (find_function(symbol)) return SymbolKind::function;
  return std::nullopt;
}

bool Signature::well_formed(const Sort& s) const {
  switch (s.kind()) {
    case Sort::Kind::named:
      return is_set(s.symbol()) || find_subset(s.symbol()) != nullptr;
    case Sort::Kind::power:
      return is_set(s.symbol());
    case Sort::Kind::tuple:
      return s.parts().size() >= 2 &&
             std::all_of(s.parts().begin(), s.parts().end(), [&](const Sort& p) { return well_formed(p); });
  }
  return false;
}

Sort Signature::normalize(const Sort& s) const {
  switch (s.kind()) {
    case Sort::Kind::named:
      if (const auto* sub = find_subset(s.symbol())) return Sort::power(sub->base);
      return s;
    case Sort::Kind::power:
      return s;
    case Sort::Kind::tuple: {
      std::vector<Sort> parts;
      for (const auto& p : s.parts()) parts.push_back(normalize(p));
      return Sort::tuple(std::move(parts));
    }
  }
  return s;
}

std::optional<Sort> Signature::element_sort(const Sort& s) const {
  Sort n = normalize(s);
  if (n.kind() == Sort::Kind::power) return Sort::named(n.symbol());
  return std::nullopt;
}

std::vector<std::string> Signature::problems() const {
  std::vector<std::string> out;
  std::map<std::string, int> seen;
  for (const auto& s : sets_) ++seen[s];
  for (const auto& s : subsets_) ++seen[s.name];
  for (const auto& c : constants_) ++seen[c.name];
  for (const auto& f : functions_) ++seen[f.name];
  for (const auto& [name, n] : seen)
    if (n > 1) out.push_back("duplicate symbol '" + name + "'");
  for (const auto& s : subsets_)
    if (!is_set(s.base)) out.push_back("subset symbol '" + s.name + "' refers to undeclared set '" + s.base + "'");
  for (const auto& c : constants_)
    if (!well_formed(c.sort)) out.push_back("constant '" + c.name + "' has undeclared sort " + c.sort.str());
  for (const auto& f : functions_) {
    if (f.arguments.empty()) out.push_back("function '" + f.name + "' has no arguments");
    for (const auto& a : f.arguments)
      if (!well_formed(a)) out.push_back("function '" + f.name + "' has undeclared argument sort " + a.str());
    if (!well_formed(f.result))
      out.push_back("function '" + f.name + "' has undeclared result sort " + f.result.str());
  }
  return out;
}

}  // namespace hk
