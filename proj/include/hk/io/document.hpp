#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hk/analysis.hpp"
#include "hk/composition.hpp"
#include "hk/instantiation.hpp"
#include "hk/io/lexer.hpp"
#include "hk/run.hpp"
#include "hk/signature.hpp"
#include "hk/structure.hpp"

namespace hk::io {

enum class DocumentKind { signature, structure, module, system, run };

std::string to_string(DocumentKind k);

/// Self-contained system file: signature, structure, module and the initial
/// marking they produce.
struct SystemDocument {
  std::string name;
  std::shared_ptr<const Signature> signature;
  std::shared_ptr<const Structure> structure;
  std::shared_ptr<const Module> module;
  Marking marking;

  System system() const;
  friend bool operator==(const SystemDocument& a, const SystemDocument& b);
};

using DocumentBody = std::variant<Signature, Structure, Module, SystemDocument, Run>;

struct ModelDocument {
  DocumentKind kind = DocumentKind::signature;
  DocumentBody body;
  /// Paths of `include` lines, as written.
  std::vector<std::string> includes;
  /// Entity paths such as "place free_tables" or "arc 3" mapped to their spans.
  std::map<std::string, SourceSpan> spans;

  /// Equality of kind, includes and body; spans are ignored.
  friend bool operator==(const ModelDocument& a, const ModelDocument& b) {
    return a.kind == b.kind && a.includes == b.includes && a.body == b.body;
  }
};

/// Names visible to a parse: signatures (for structures and modules) and
/// structures (for systems that refer to them).
struct Scope {
  std::map<std::string, std::shared_ptr<const Signature>> signatures;
  std::map<std::string, std::shared_ptr<const Structure>> structures;
};

/// Parses one document. `include` lines are recorded but not followed; the
/// signatures they would provide must already be in `scope`.
ModelDocument parse(std::string_view text, const std::string& file = "<input>", const Scope& scope = {});

/// Reads a file and recursively loads its includes (relative to the file)
/// into the scope before parsing it.
class Loader {
 public:
  ModelDocument load(const std::filesystem::path& path);
  const Scope& scope() const { return scope_; }

 private:
  void add_to_scope(const ModelDocument& doc);
  Scope scope_;
  std::vector<std::filesystem::path> active_;
  std::map<std::filesystem::path, ModelDocument> cache_;
};

/// Canonical text; parse(print(d)) == d for every parsed document.
std::string print(const ModelDocument& doc);
std::string print_value(const Value& v);

/// Typed accessors that throw Error when the document has another kind.
const Signature& as_signature(const ModelDocument& d);
const Structure& as_structure(const ModelDocument& d);
const Module& as_module(const ModelDocument& d);
const SystemDocument& as_system(const ModelDocument& d);
const Run& as_run(const ModelDocument& d);

ModelDocument make_document(Module m, std::vector<std::string> includes = {});
ModelDocument make_document(const System& sys);
ModelDocument make_document(Run r);

Value parse_value(std::string_view text);
/// `(x = v, ...)`; an empty text is the empty binding.
Binding parse_binding(std::string_view text);
/// One `transition (x = v, ...)` per non-empty line; `#` and `//` start comments.
std::vector<Step> parse_steps(std::string_view text, const std::string& file = "<steps>");
std::string print_steps(const std::vector<Step>& steps);
/// `place contains value`, `count(place) op n`, `&&`, `||`, `!`, parentheses.
Predicate parse_predicate(std::string_view text);

}  // namespace hk::io
