#pragma once

#include <algorithm>
#include <compare>
#include <optional>
#include <string>
#include <vector>

namespace hk {

/// Sort expression: a declared symbol, a powerset of a declared set symbol,
/// or a tuple of sorts.
class Sort {
 public:
  enum class Kind { named, power, tuple };

  static Sort named(std::string symbol);
  static Sort power(std::string base_symbol);
  static Sort tuple(std::vector<Sort> parts);

  Kind kind() const { return kind_; }
  /// Symbol name for `named`, base symbol for `power`.
  const std::string& symbol() const { return symbol_; }
  const std::vector<Sort>& parts() const { return parts_; }

  std::string str() const;

  friend std::strong_ordering operator<=>(const Sort& a, const Sort& b) {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    if (auto c = a.symbol_ <=> b.symbol_; c != 0) return c;
    return std::lexicographical_compare_three_way(a.parts_.begin(), a.parts_.end(), b.parts_.begin(), b.parts_.end());
  }
  friend bool operator==(const Sort& a, const Sort& b) {
    return a.kind_ == b.kind_ && a.symbol_ == b.symbol_ && a.parts_ == b.parts_;
  }

 private:
  Kind kind_ = Kind::named;
  std::string symbol_;
  std::vector<Sort> parts_;
};

struct SubsetSymbol {
  std::string name;
  std::string base;  ///< declared as a subset of pow(base)
  friend bool operator==(const SubsetSymbol&, const SubsetSymbol&) = default;
};

struct ConstantSymbol {
  std::string name;
  Sort sort;
  friend bool operator==(const ConstantSymbol&, const ConstantSymbol&) = default;
};

struct FunctionSymbol {
  std::string name;
  std::vector<Sort> arguments;
  Sort result;
  friend bool operator==(const FunctionSymbol&, const FunctionSymbol&) = default;
};

enum class SymbolKind { set, subset, constant, function };

/// Alphabet of typed symbols. Entries are kept sorted by name.
class Signature {
 public:
  Signature() = default;
  explicit Signature(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }

  void add_set(std::string name);
  void add_subset(SubsetSymbol s);
  void add_constant(ConstantSymbol c);
  void add_function(FunctionSymbol f);

  const std::vector<std::string>& sets() const { return sets_; }
  const std::vector<SubsetSymbol>& subsets() const { return subsets_; }
  const std::vector<ConstantSymbol>& constants() const { return constants_; }
  const std::vector<FunctionSymbol>& functions() const { return functions_; }

  std::optional<SymbolKind> kind_of(const std::string& symbol) const;
  bool is_set(const std::string& s) const;
  const SubsetSymbol* find_subset(const std::string& s) const;
  const ConstantSymbol* find_constant(const std::string& s) const;
  const FunctionSymbol* find_function(const std::string& s) const;

  /// Duplicate names and sorts that reference undeclared symbols.
  std::vector<std::string> problems() const;
  /// Sort references only declared symbols (sets or subsets; pow over sets).
  bool well_formed(const Sort& s) const;

  /// Structural form used for compatibility: a subset symbol becomes pow(base).
  Sort normalize(const Sort& s) const;
  /// Element sort of a set-valued sort, if it is one.
  std::optional<Sort> element_sort(const Sort& s) const;

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::string name_;
  std::vector<std::string> sets_;
  std::vector<SubsetSymbol> subsets_;
  std::vector<ConstantSymbol> constants_;
  std::vector<FunctionSymbol> functions_;
};

}  // namespace hk
