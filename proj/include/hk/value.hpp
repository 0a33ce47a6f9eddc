#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace hk {

/// A ground value: an opaque atom, a finite set of values or a tuple.
///
/// Values are immutable; copies share their element storage. The total order
/// is canonical: atoms (by name) < sets (by sorted element sequence) <
/// tuples (lexicographic).
class Value {
 public:
  enum class Kind { atom, set, tuple };

  Value() : Value(atom("")) {}

  static Value atom(std::string name);
  /// Sorts and removes duplicates.
  static Value set(std::vector<Value> elements);
  static Value tuple(std::vector<Value> elements);

  Kind kind() const { return kind_; }
  bool is_atom() const { return kind_ == Kind::atom; }
  bool is_set() const { return kind_ == Kind::set; }
  bool is_tuple() const { return kind_ == Kind::tuple; }

  const std::string& name() const { return name_; }
  const std::vector<Value>& elements() const;
  std::size_t size() const { return elements().size(); }

  /// Membership test for set values; false for atoms and tuples.
  bool contains(const Value& v) const;
  bool is_subset_of(const Value& other) const;

  std::string str() const;

  friend std::strong_ordering operator<=>(const Value& a, const Value& b);
  friend bool operator==(const Value& a, const Value& b) { return (a <=> b) == 0; }

 private:
  Value(Kind k, std::string name, std::shared_ptr<const std::vector<Value>> elems)
      : kind_(k), name_(std::move(name)), elems_(std::move(elems)) {}

  Kind kind_;
  std::string name_;
  std::shared_ptr<const std::vector<Value>> elems_;
};

/// All subsets of a set value, in canonical order.
std::vector<Value> powerset(const Value& set);

/// Finite multiset of values with positive multiplicities.
using Multiset = std::map<Value, std::size_t>;

void multiset_add(Multiset& m, const Value& v, std::size_t count = 1);
void multiset_add(Multiset& m, const Multiset& other);
/// Every element of `part` occurs in `whole` with at least its multiplicity.
bool multiset_includes(const Multiset& whole, const Multiset& part);
/// Requires multiset_includes(m, part).
void multiset_subtract(Multiset& m, const Multiset& part);
std::size_t multiset_size(const Multiset& m);
std::string multiset_str(const Multiset& m);

}  // namespace hk
