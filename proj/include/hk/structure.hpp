#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hk/signature.hpp"
#include "hk/value.hpp"

namespace hk {

/// Upper bound on the base carrier size of enumerated powersets.
inline constexpr std::size_t default_powerset_cap = 16;

/// Interpretation of a signature: finite carriers, explicit function tables
/// and constant values.
class Structure {
 public:
  using FunctionTable = std::map<Value, Value>;

  Structure() = default;
  Structure(std::string name, std::shared_ptr<const Signature> signature)
      : name_(std::move(name)), signature_(std::move(signature)) {}

  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }
  const std::shared_ptr<const Signature>& signature() const { return signature_; }

  /// `elements` must be a set value. For subset symbols it is a set of sets.
  void set_carrier(const std::string& symbol, Value elements);
  /// Keys are the argument value for unary functions, argument tuples otherwise.
  void set_function(const std::string& symbol, FunctionTable table);
  void set_constant(const std::string& symbol, Value value);

  const std::map<std::string, Value>& carriers() const { return carriers_; }
  const std::map<std::string, FunctionTable>& functions() const { return functions_; }
  const std::map<std::string, Value>& constants() const { return constants_; }

  const Value* carrier(const std::string& symbol) const;
  const FunctionTable* function(const std::string& symbol) const;
  const Value* constant(const std::string& symbol) const;

  /// Throws EvalError when the arguments lie outside the table's domain.
  Value apply(const std::string& symbol, const std::vector<Value>& args) const;

  friend bool operator==(const Structure& a, const Structure& b);

 private:
  std::string name_;
  std::shared_ptr<const Signature> signature_;
  std::map<std::string, Value> carriers_;
  std::map<std::string, FunctionTable> functions_;
  std::map<std::string, Value> constants_;
};

struct Violation {
  enum class Kind {
    missing_carrier,
    not_a_set,
    subset_outside_base,
    missing_function,
    non_total_function,
    codomain,
    missing_constant,
    constant_sort,
    unknown_symbol,
    bad_signature,
  };
  Kind kind;
  std::string symbol;
  std::string message;
};

std::string to_string(Violation::Kind k);

/// Empty iff `s` is a model of `sig`.
std::vector<Violation> validate_structure(const Signature& sig, const Structure& s);

/// Carrier of a sort as a set value. Throws DomainError for missing carriers
/// and powersets whose base exceeds `powerset_cap`.
Value sort_carrier(const Sort& sort, const Structure& s, std::size_t powerset_cap = default_powerset_cap);

/// Membership without enumerating the carrier.
bool in_sort(const Value& v, const Sort& sort, const Structure& s);

/// Keeps only the listed elements of the named set carriers. Subset carriers
/// drop members that leave their base, function tables drop entries whose
/// arguments leave the domain. The result may fail validation when a
/// function now lands outside its codomain.
Structure restrict_structure(const Structure& s, const std::map<std::string, std::vector<Value>>& keep,
                             std::string name = {});

}  // namespace hk
