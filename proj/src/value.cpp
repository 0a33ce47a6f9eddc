#include "hk/value.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

namespace hk {

namespace {

const std::vector<Value>& empty_elements() {
  static const std::vector<Value> empty;
  return empty;
}

}  // namespace

Value Value::atom(std::string name) { return Value(Kind::atom, std::move(name), nullptr); }

Value Value::set(std::vector<Value> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  return Value(Kind::set, {}, std::make_shared<const std::vector<Value>>(std::move(elements)));
}

Value Value::tuple(std::vector<Value> elements) {
  return Value(Kind::tuple, {}, std::make_shared<const std::vector<Value>>(std::move(elements)));
}

const std::vector<Value>& Value::elements() const {
  return elems_ ? *elems_ : empty_elements();
}

bool Value::contains(const Value& v) const {
  if (!is_set()) return false;
  const auto& e = elements();
  return std::binary_search(e.begin(), e.end(), v);
}

bool Value::is_subset_of(const Value& other) const {
  if (!is_set() || !other.is_set()) return false;
  const auto& a = elements();
  const auto& b = other.elements();
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::string Value::str() const {
  switch (kind_) {
    case Kind::atom:
      return name_;
    case Kind::set:
    case Kind::tuple: {
      std::string out = is_set() ? "{" : "(";
      bool first = true;
      for (const auto& e : elements()) {
        if (!first) out += ", ";
        first = false;
        out += e.str();
      }
      out += is_set() ? "}" : ")";
      return out;
    }
  }
  return {};
}

std::strong_ordering operator<=>(const Value& a, const Value& b) {
  if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
  if (a.is_atom()) return a.name_.compare(b.name_) <=> 0;
  if (a.elems_ == b.elems_) return std::strong_ordering::equal;
  const auto& x = a.elements();
  const auto& y = b.elements();
  return std::lexicographical_compare_three_way(x.begin(), x.end(), y.begin(), y.end());
}

std::vector<Value> powerset(const Value& set) {
  if (!set.is_set()) throw std::invalid_argument("powerset of a non-set value " + set.str());
  const auto& base = set.elements();
  if (base.size() >= 63) throw std::length_error("powerset too large");
  std::vector<Value> out;
  const std::uint64_t count = std::uint64_t{1} << base.size();
  out.reserve(count);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    std::vector<Value> subset;
    for (std::size_t i = 0; i < base.size(); ++i)
      if (mask & (std::uint64_t{1} << i)) subset.push_back(base[i]);
    out.push_back(Value::set(std::move(subset)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

void multiset_add(Multiset& m, const Value& v, std::size_t count) {
  if (count) m[v] += count;
}

void multiset_add(Multiset& m, const Multiset& other) {
  for (const auto& [v, n] : other) m[v] += n;
}

bool multiset_includes(const Multiset& whole, const Multiset& part) {
  for (const auto& [v, n] : part) {
    auto it = whole.find(v);
    if (it == whole.end() || it->second < n) return false;
  }
  return true;
}

void multiset_subtract(Multiset& m, const Multiset& part) {
  for (const auto& [v, n] : part) {
    auto it = m.find(v);
    if (it == m.end() || it->second < n) throw std::logic_error("multiset underflow at " + v.str());
    it->second -= n;
    if (it->second == 0) m.erase(it);
  }
}

std::size_t multiset_size(const Multiset& m) {
  std::size_t n = 0;
  for (const auto& [v, k] : m) n += k;
  return n;
}

std::string multiset_str(const Multiset& m) {
  std::string out = "<";
  bool first = true;
  for (const auto& [v, n] : m)
    for (std::size_t i = 0; i < n; ++i) {
      if (!first) out += ", ";
      first = false;
      out += v.str();
    }
  return out + ">";
}

}  // namespace hk
