#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "hk/io/document.hpp"

namespace hk::io {

std::string to_string(DocumentKind k) {
  switch (k) {
    case DocumentKind::signature: return "signature";
    case DocumentKind::structure: return "structure";
    case DocumentKind::module: return "module";
    case DocumentKind::system: return "system";
    case DocumentKind::run: return "run";
  }
  return "?";
}

System SystemDocument::system() const {
  System sys = instantiate(module, structure, name);
  return sys;
}

bool operator==(const SystemDocument& a, const SystemDocument& b) {
  auto same = [](const auto& x, const auto& y) { return x == y || (x && y && *x == *y); };
  return a.name == b.name && same(a.signature, b.signature) && same(a.structure, b.structure) &&
         same(a.module, b.module) && a.marking == b.marking;
}

namespace {

class Parser {
 public:
  Parser(std::vector<Token> tokens, const Scope& scope) : toks_(std::move(tokens)), scope_(scope) {}

  ModelDocument document() {
    ModelDocument doc;
    while (is_word("include")) {
      next();
      doc.includes.push_back(expect_kind(TokenKind::string, "an include path").text);
      expect(";");
    }
    const Token& head = peek();
    if (head.kind != TokenKind::identifier)
      fail(head, "expected document kind (signature, structure, module, system or run)");
    if (head.text == "signature") {
      doc.kind = DocumentKind::signature;
      doc.body = signature(doc);
    } else if (head.text == "structure") {
      doc.kind = DocumentKind::structure;
      doc.body = structure(doc, local_);
    } else if (head.text == "module") {
      doc.kind = DocumentKind::module;
      doc.body = module(doc, local_);
    } else if (head.text == "system") {
      doc.kind = DocumentKind::system;
      doc.body = system(doc);
    } else if (head.text == "run") {
      doc.kind = DocumentKind::run;
      doc.body = run(doc);
    } else {
      fail(head, "expected document kind (signature, structure, module, system or run), got '" + head.text + "'");
    }
    if (peek().kind != TokenKind::end) fail(peek(), "unexpected '" + peek().text + "' after the document");
    return doc;
  }

  // ---- token helpers ----

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool is_punct(std::string_view p, std::size_t k = 0) const {
    return peek(k).kind == TokenKind::punct && peek(k).text == p;
  }
  bool is_word(std::string_view w, std::size_t k = 0) const {
    return peek(k).kind == TokenKind::identifier && peek(k).text == w;
  }
  bool accept(std::string_view p) {
    if (!is_punct(p)) return false;
    next();
    return true;
  }
  bool accept_word(std::string_view w) {
    if (!is_word(w)) return false;
    next();
    return true;
  }
  [[noreturn]] static void fail(const Token& t, const std::string& msg) { throw ParseError(t.span, msg); }
  static std::string describe(const Token& t) {
    if (t.kind == TokenKind::end) return "end of input";
    return "'" + t.text + "'";
  }
  const Token& expect(std::string_view p) {
    if (!is_punct(p)) fail(peek(), "expected '" + std::string(p) + "', got " + describe(peek()));
    return next();
  }
  const Token& expect_word(std::string_view w) {
    if (!is_word(w)) fail(peek(), "expected '" + std::string(w) + "', got " + describe(peek()));
    return next();
  }
  const Token& expect_kind(TokenKind k, const std::string& what) {
    if (peek().kind != k) fail(peek(), "expected " + what + ", got " + describe(peek()));
    return next();
  }
  const Token& ident(const std::string& what) { return expect_kind(TokenKind::identifier, what); }
  SourceSpan span_from(const Token& first) const {
    const Token& last = toks_[pos_ == 0 ? 0 : pos_ - 1];
    return SourceSpan::cover(first.span, last.span);
  }

  // ---- values ----

  Value value() {
    const Token& t = peek();
    if (t.kind == TokenKind::identifier) {
      next();
      return Value::atom(t.text);
    }
    if (accept("{")) {
      std::vector<Value> elems;
      if (!accept("}")) {
        do elems.push_back(value());
        while (accept(","));
        expect("}");
      }
      return Value::set(std::move(elems));
    }
    if (accept("(")) {
      std::vector<Value> elems;
      do elems.push_back(value());
      while (accept(","));
      expect(")");
      if (elems.size() == 1) return elems.front();
      return Value::tuple(std::move(elems));
    }
    fail(t, "expected a value, got " + describe(t));
  }

  Binding binding() {
    Binding b;
    expect("(");
    if (accept(")")) return b;
    do {
      const Token& var = ident("a variable name");
      expect("=");
      if (!b.emplace(var.text, value()).second) fail(var, "variable '" + var.text + "' is bound twice");
    } while (accept(","));
    expect(")");
    return b;
  }

  // ---- sorts and terms ----

  Sort sort(const Signature& sig) {
    const Token& first = peek();
    Sort s = Sort::named("");
    if (accept("(")) {
      std::vector<Sort> parts;
      do parts.push_back(sort(sig));
      while (accept(","));
      expect(")");
      if (parts.size() < 2) fail(first, "a tuple sort needs at least two components");
      s = Sort::tuple(std::move(parts));
    } else if (is_word("pow") && is_punct("(", 1)) {
      next();
      next();
      s = Sort::power(ident("a set symbol").text);
      expect(")");
    } else {
      s = Sort::named(ident("a sort").text);
    }
    if (!sig.well_formed(s)) throw ParseError(span_from(first), "sort " + s.str() + " uses undeclared or unsuitable symbols");
    return s;
  }

  Term term(const Signature& sig, const VariableSorts& vars) {
    const Token& t = peek();
    if (t.kind == TokenKind::identifier) {
      next();
      if (accept("(")) {
        std::vector<Term> args;
        if (!is_punct(")")) {
          do args.push_back(term(sig, vars));
          while (accept(","));
        }
        expect(")");
        if (t.text == "elm") {
          if (args.size() != 1) fail(t, "elm takes exactly one argument");
          return Term::elm(std::move(args.front()));
        }
        if (!sig.find_function(t.text)) fail(t, "unknown function symbol '" + t.text + "'");
        return Term::apply(t.text, std::move(args));
      }
      if (vars.count(t.text)) return Term::variable(t.text);
      if (sig.find_constant(t.text)) return Term::constant(t.text);
      auto kind = sig.kind_of(t.text);
      if (kind == SymbolKind::set || kind == SymbolKind::subset) return Term::set_symbol(t.text);
      fail(t, "unknown identifier '" + t.text + "' (not a variable, constant or set symbol)");
    }
    if (accept("(")) {
      std::vector<Term> parts;
      do parts.push_back(term(sig, vars));
      while (accept(","));
      expect(")");
      if (parts.size() == 1) return parts.front();
      return Term::tuple(std::move(parts));
    }
    if (accept("{")) {
      std::vector<Term> elems;
      if (!is_punct("}")) {
        do elems.push_back(term(sig, vars));
        while (accept(","));
      }
      expect("}");
      return Term::set_literal(std::move(elems));
    }
    fail(t, "expected a term, got " + describe(t));
  }

  std::vector<Term> terms(const Signature& sig, const VariableSorts& vars) {
    std::vector<Term> out;
    do out.push_back(term(sig, vars));
    while (accept(","));
    return out;
  }

  Guard guard(const Signature& sig, const VariableSorts& vars) {
    Guard g;
    do {
      const Token& first = peek();
      if (accept_word("true")) continue;
      GuardAtom a;
      a.lhs = term(sig, vars);
      if (accept("="))
        a.op = GuardAtom::Op::equal;
      else if (accept_word("in"))
        a.op = GuardAtom::Op::member;
      else if (accept("<="))
        a.op = GuardAtom::Op::subset;
      else
        fail(peek(), "expected '=', 'in' or '<=' in guard, got " + describe(peek()));
      a.rhs = term(sig, vars);
      try {
        check_guard(Guard{{a}}, sig, vars);
      } catch (const SortError& e) {
        throw ParseError(span_from(first), e.what());
      }
      g.atoms.push_back(std::move(a));
    } while (accept_word("and"));
    return g;
  }

  // ---- documents ----

  std::shared_ptr<const Signature> resolve_signature(const Token& name, const Scope& scope) {
    auto it = scope.signatures.find(name.text);
    if (it != scope.signatures.end()) return it->second;
    it = scope_.signatures.find(name.text);
    if (it != scope_.signatures.end()) return it->second;
    fail(name, "unknown signature '" + name.text + "' (missing include?)");
  }

  Signature signature(ModelDocument& doc) {
    expect_word("signature");
    const Token& name = ident("a signature name");
    Signature sig(name.text);
    doc.spans["signature " + name.text] = name.span;
    expect("{");
    auto declare = [&](const Token& t) {
      if (sig.kind_of(t.text)) fail(t, "duplicate symbol '" + t.text + "'");
      if (t.text == "elm" || t.text == "pow") fail(t, "'" + t.text + "' is reserved");
      doc.spans["symbol " + t.text] = t.span;
    };
    while (!accept("}")) {
      const Token& kw = ident("'sets', 'subsets', 'consts' or 'fns'");
      if (kw.text == "sets") {
        do {
          const Token& t = ident("a set symbol");
          declare(t);
          sig.add_set(t.text);
        } while (accept(","));
      } else if (kw.text == "subsets") {
        do {
          const Token& t = ident("a subset symbol");
          declare(t);
          expect_word("of");
          expect_word("pow");
          expect("(");
          const Token& base = ident("a set symbol");
          if (!sig.is_set(base.text)) fail(base, "'" + base.text + "' is not a declared set symbol");
          expect(")");
          sig.add_subset({t.text, base.text});
        } while (accept(","));
      } else if (kw.text == "consts") {
        do {
          const Token& t = ident("a constant symbol");
          declare(t);
          expect(":");
          sig.add_constant({t.text, sort(sig)});
        } while (accept(","));
      } else if (kw.text == "fns") {
        const Token& t = ident("a function symbol");
        declare(t);
        expect(":");
        std::vector<Sort> args;
        do args.push_back(sort(sig));
        while (accept(","));
        expect("->");
        sig.add_function({t.text, std::move(args), sort(sig)});
      } else {
        fail(kw, "expected 'sets', 'subsets', 'consts' or 'fns', got '" + kw.text + "'");
      }
      expect(";");
    }
    return sig;
  }

  Structure structure(ModelDocument& doc, const Scope& scope) {
    expect_word("structure");
    const Token& name = ident("a structure name");
    expect_word("of");
    auto sig = resolve_signature(ident("a signature name"), scope);
    doc.spans["structure " + name.text] = name.span;
    Structure s(name.text, sig);
    struct PendingPow {
      Token symbol, base;
    };
    std::vector<PendingPow> pows;
    std::set<std::string> seen;
    expect("{");
    while (!accept("}")) {
      const Token& sym = ident("a symbol");
      if (!seen.insert(sym.text).second) fail(sym, "symbol '" + sym.text + "' is interpreted twice");
      doc.spans["symbol " + sym.text] = sym.span;
      auto kind = sig->kind_of(sym.text);
      if (!kind) fail(sym, "'" + sym.text + "' is not a symbol of signature '" + sig->name() + "'");
      expect("=");
      switch (*kind) {
        case SymbolKind::set:
        case SymbolKind::subset: {
          if (is_word("pow") && is_punct("(", 1)) {
            next();
            next();
            const Token& base = ident("a set symbol");
            if (!sig->is_set(base.text)) fail(base, "'" + base.text + "' is not a set symbol");
            expect(")");
            pows.push_back({sym, base});
            break;
          }
          const Token& at = peek();
          Value v = value();
          if (!v.is_set()) fail(at, "the carrier of '" + sym.text + "' must be a set");
          s.set_carrier(sym.text, std::move(v));
          break;
        }
        case SymbolKind::function: {
          Structure::FunctionTable table;
          expect("{");
          if (!accept("}")) {
            do {
              const Token& at = peek();
              Value arg = value();
              expect("->");
              if (!table.emplace(std::move(arg), value()).second) fail(at, "argument listed twice in '" + sym.text + "'");
            } while (accept(","));
            expect("}");
          }
          s.set_function(sym.text, std::move(table));
          break;
        }
        case SymbolKind::constant: s.set_constant(sym.text, value()); break;
      }
      expect(";");
    }
    for (const auto& p : pows) {
      const Value* base = s.carrier(p.base.text);
      if (!base) fail(p.base, "carrier of '" + p.base.text + "' is not given");
      s.set_carrier(p.symbol.text, Value::set(powerset(*base)));
    }
    return s;
  }

  Module module(ModelDocument& doc, const Scope& scope) {
    expect_word("module");
    const Token& name = ident("a module name");
    Module m;
    m.name = name.text;
    doc.spans["module " + name.text] = name.span;
    static const Signature no_signature;
    if (accept_word("of")) m.signature = resolve_signature(ident("a signature name"), scope);
    const Signature& sig = m.signature ? *m.signature : no_signature;

    struct IfaceEntry {
      Side side;
      ElementKind kind;
      Token label, inner;
    };
    struct ArcEntry {
      Token from, to;
      std::vector<Term> inscription;
      SourceSpan span;
    };
    std::vector<IfaceEntry> iface;
    std::vector<ArcEntry> arcs;
    auto& net = m.net;

    expect("{");
    while (!accept("}")) {
      const Token& section = ident("a module section (vars, left, right, places, trans, arcs)");
      expect("{");
      if (section.text == "vars") {
        while (!accept("}")) {
          std::vector<Token> names;
          do names.push_back(ident("a variable name"));
          while (accept(","));
          expect(":");
          Sort s = sort(sig);
          for (const auto& n : names) {
            if (sig.kind_of(n.text)) fail(n, "variable '" + n.text + "' shadows a signature symbol");
            if (!net.variables.emplace(n.text, s).second) fail(n, "variable '" + n.text + "' declared twice");
            doc.spans["var " + n.text] = n.span;
          }
          expect(";");
        }
      } else if (section.text == "left" || section.text == "right") {
        Side side = section.text == "left" ? Side::left : Side::right;
        while (!accept("}")) {
          const Token& kw = ident("'place' or 'trans'");
          ElementKind kind;
          if (kw.text == "place")
            kind = ElementKind::place;
          else if (kw.text == "trans")
            kind = ElementKind::transition;
          else
            fail(kw, "expected 'place' or 'trans', got '" + kw.text + "'");
          const Token& label = ident("an interface label");
          const Token* inner = &label;
          if (accept("=")) inner = &ident("an inner element name");
          iface.push_back({side, kind, label, *inner});
          expect(";");
        }
      } else if (section.text == "places") {
        while (!accept("}")) {
          const Token& p = ident("a place name");
          if (net.find_place(p.text)) fail(p, "duplicate place '" + p.text + "'");
          Place place{p.text, std::nullopt, {}};
          if (accept(":")) place.sort = sort(sig);
          if (accept_word("init")) {
            const Token& first = peek();
            place.init = terms(sig, {});
            for (const auto& t : place.init) check_term_sort(t, place.sort, sig, net.variables, span_from(first));
          }
          doc.spans["place " + p.text] = span_from(p);
          net.places.push_back(std::move(place));
          expect(";");
        }
      } else if (section.text == "trans") {
        while (!accept("}")) {
          const Token& t = ident("a transition name");
          if (net.find_transition(t.text)) fail(t, "duplicate transition '" + t.text + "'");
          Transition tr{t.text, {}, {}};
          while (true) {
            if (accept_word("guard")) {
              tr.guard = guard(sig, net.variables);
            } else if (accept_word("free")) {
              do {
                const Token& v = ident("a variable name");
                if (!net.variables.count(v.text)) fail(v, "undeclared variable '" + v.text + "'");
                tr.free_vars.push_back(v.text);
              } while (accept(","));
            } else {
              break;
            }
          }
          std::sort(tr.free_vars.begin(), tr.free_vars.end());
          tr.free_vars.erase(std::unique(tr.free_vars.begin(), tr.free_vars.end()), tr.free_vars.end());
          doc.spans["transition " + t.text] = span_from(t);
          net.transitions.push_back(std::move(tr));
          expect(";");
        }
      } else if (section.text == "arcs") {
        while (!accept("}")) {
          const Token& from = ident("a place or transition name");
          expect("->");
          const Token& to = ident("a place or transition name");
          expect(":");
          auto ins = terms(sig, net.variables);
          arcs.push_back({from, to, std::move(ins), span_from(from)});
          expect(";");
        }
      } else {
        fail(section, "unknown module section '" + section.text + "'");
      }
    }

    for (const auto& a : arcs) {
      auto fp = net.find_place(a.from.text), ft = net.find_transition(a.from.text);
      auto tp = net.find_place(a.to.text), tt = net.find_transition(a.to.text);
      bool input = fp && tt, output = ft && tp;
      if (input && output) throw ParseError(a.span, "ambiguous arc: both names denote a place and a transition");
      if (!input && !output) {
        if (!fp && !ft) fail(a.from, "unknown place or transition '" + a.from.text + "'");
        if (!tp && !tt) fail(a.to, "unknown place or transition '" + a.to.text + "'");
        throw ParseError(a.span, "an arc must connect a place and a transition");
      }
      Arc arc{input ? *fp : *tp, input ? *tt : *ft, input ? ArcDirection::input : ArcDirection::output, a.inscription};
      for (const auto& t : arc.inscription) check_term_sort(t, net.places[arc.place].sort, sig, net.variables, a.span);
      doc.spans["arc " + a.from.text + " -> " + a.to.text] = a.span;
      net.arcs.push_back(std::move(arc));
    }
    for (const auto& e : iface) {
      std::optional<std::size_t> idx =
          e.kind == ElementKind::place ? net.find_place(e.inner.text) : net.find_transition(e.inner.text);
      if (!idx) fail(e.inner, "interface refers to unknown " + to_string(e.kind) + " '" + e.inner.text + "'");
      auto& side = e.side == Side::left ? m.left : m.right;
      for (const auto& other : side)
        if (other.kind == e.kind && other.label == e.label.text)
          fail(e.label, "duplicate interface label '" + e.label.text + "'");
      side.push_back({e.kind, e.label.text, *idx});
      doc.spans[std::string(e.side == Side::left ? "left " : "right ") + e.label.text] = e.label.span;
    }
    m.normalize();
    auto problems = module_problems(m);
    if (!problems.empty()) fail(name, "module '" + m.name + "': " + problems.front());
    return m;
  }

  static void check_term_sort(const Term& t, const std::optional<Sort>& place_sort, const Signature& sig,
                              const VariableSorts& vars, const SourceSpan& span) {
    try {
      Sort s = sort_of(t, sig, vars);
      if (place_sort && sig.normalize(s) != sig.normalize(*place_sort))
        throw ParseError(span, "term " + t.str() + " has sort " + s.str() + ", the place holds " + place_sort->str());
    } catch (const SortError& e) {
      throw ParseError(span, e.what());
    }
  }

  SystemDocument system(ModelDocument& doc) {
    expect_word("system");
    const Token& name = ident("a system name");
    doc.spans["system " + name.text] = name.span;
    SystemDocument sd;
    sd.name = name.text;
    Scope local;
    std::optional<Marking> marking;
    std::vector<std::pair<Token, Value>> marking_entries;
    expect("{");
    while (!accept("}")) {
      if (is_word("signature")) {
        if (sd.signature) fail(peek(), "a system has exactly one signature");
        auto sig = std::make_shared<Signature>(signature(doc));
        local.signatures[sig->name()] = sig;
        sd.signature = sig;
      } else if (is_word("structure")) {
        if (sd.structure) fail(peek(), "a system has exactly one structure");
        sd.structure = std::make_shared<Structure>(structure(doc, local));
      } else if (is_word("module")) {
        if (sd.module) fail(peek(), "a system has exactly one module");
        sd.module = std::make_shared<Module>(module(doc, local));
      } else if (accept_word("marking")) {
        expect("{");
        marking.emplace();
        while (!accept("}")) {
          const Token& p = ident("a place name");
          expect(":");
          if (!is_punct(";")) {
            do marking_entries.emplace_back(p, value());
            while (accept(","));
          }
          expect(";");
        }
      } else {
        fail(peek(), "expected 'signature', 'structure', 'module' or 'marking', got " + describe(peek()));
      }
    }
    if (!sd.signature || !sd.structure || !sd.module)
      fail(name, "system '" + sd.name + "' needs a signature, a structure and a module");
    System sys;
    try {
      sys = instantiate(sd.module, sd.structure, sd.name);
    } catch (const Error& e) {
      fail(name, e.what());
    }
    sd.marking = sys.initial;
    if (marking) {
      Marking given(sys.initial.size());
      for (const auto& [p, v] : marking_entries) {
        auto idx = sd.module->net.find_place(p.text);
        if (!idx) fail(p, "unknown place '" + p.text + "'");
        multiset_add(given[*idx], v);
      }
      if (given != sys.initial)
        fail(name, "the marking block differs from the initial marking " + marking_str(sd.module->net, sys.initial));
    }
    return sd;
  }

  Run run(ModelDocument& doc) {
    expect_word("run");
    const Token& name = ident("a run name");
    doc.spans["run " + name.text] = name.span;
    Run r;
    r.name = name.text;
    std::map<std::string, std::size_t> conds, events;
    struct IfaceEntry {
      Side side;
      ElementKind kind;
      Token label, id;
    };
    std::vector<IfaceEntry> iface;
    std::vector<std::pair<Token, Token>> flow;
    auto fresh = [&](const Token& id) {
      if (conds.count(id.text) || events.count(id.text)) fail(id, "duplicate node id '" + id.text + "'");
    };
    expect("{");
    while (!accept("}")) {
      const Token& section = ident("a run section (conditions, events, flow, left, right)");
      expect("{");
      if (section.text == "conditions") {
        while (!accept("}")) {
          const Token& id = ident("a condition id");
          fresh(id);
          expect(":");
          const Token& place = ident("a place name");
          expect("=");
          Value v = value();
          conds[id.text] = r.conditions.size();
          r.conditions.push_back({id.text, place.text, std::move(v)});
          doc.spans["condition " + id.text] = span_from(id);
          expect(";");
        }
      } else if (section.text == "events") {
        while (!accept("}")) {
          const Token& id = ident("an event id");
          fresh(id);
          expect(":");
          const Token& tr = ident("a transition name");
          Binding b = is_punct("(") ? binding() : Binding{};
          events[id.text] = r.events.size();
          r.events.push_back({id.text, tr.text, std::move(b)});
          doc.spans["event " + id.text] = span_from(id);
          expect(";");
        }
      } else if (section.text == "flow") {
        while (!accept("}")) {
          const Token& from = ident("a node id");
          expect("->");
          const Token& to = ident("a node id");
          flow.emplace_back(from, to);
          expect(";");
        }
      } else if (section.text == "left" || section.text == "right") {
        Side side = section.text == "left" ? Side::left : Side::right;
        while (!accept("}")) {
          const Token& kw = ident("'cond' or 'event'");
          ElementKind kind;
          if (kw.text == "cond")
            kind = ElementKind::place;
          else if (kw.text == "event")
            kind = ElementKind::transition;
          else
            fail(kw, "expected 'cond' or 'event', got '" + kw.text + "'");
          const Token& label = peek().kind == TokenKind::string ? next() : ident("an interface label");
          expect("=");
          iface.push_back({side, kind, label, ident("a node id")});
          expect(";");
        }
      } else {
        fail(section, "unknown run section '" + section.text + "'");
      }
    }
    for (const auto& [from, to] : flow) {
      auto fc = conds.find(from.text), fe = events.find(from.text);
      auto tc = conds.find(to.text), te = events.find(to.text);
      if (fc == conds.end() && fe == events.end()) fail(from, "unknown node '" + from.text + "'");
      if (tc == conds.end() && te == events.end()) fail(to, "unknown node '" + to.text + "'");
      if (fc != conds.end() && te != events.end())
        r.consumes.emplace_back(fc->second, te->second);
      else if (fe != events.end() && tc != conds.end())
        r.produces.emplace_back(fe->second, tc->second);
      else
        fail(from, "flow arcs connect a condition and an event");
    }
    for (const auto& e : iface) {
      const auto& ids = e.kind == ElementKind::place ? conds : events;
      auto it = ids.find(e.id.text);
      if (it == ids.end())
        fail(e.id, std::string("unknown ") + (e.kind == ElementKind::place ? "condition" : "event") + " '" + e.id.text + "'");
      auto& side = e.side == Side::left ? r.left : r.right;
      for (const auto& other : side)
        if (other.kind == e.kind && other.label == e.label.text)
          fail(e.label, "duplicate interface label '" + e.label.text + "'");
      side.push_back({e.kind, e.label.text, it->second});
    }
    return r;
  }

  Predicate predicate() {
    Predicate p = conjunction();
    while (accept("||")) p = Predicate::disj(std::move(p), conjunction());
    return p;
  }

 private:
  Predicate conjunction() {
    Predicate p = unary();
    while (accept("&&")) p = Predicate::conj(std::move(p), unary());
    return p;
  }

  Predicate unary() {
    if (accept("!")) return Predicate::neg(unary());
    if (accept("(")) {
      Predicate p = predicate();
      expect(")");
      return p;
    }
    if (is_word("count") && is_punct("(", 1)) {
      next();
      next();
      std::string place = ident("a place name").text;
      expect(")");
      static const std::pair<std::string_view, Predicate::Cmp> ops[] = {
          {"==", Predicate::Cmp::eq}, {"=", Predicate::Cmp::eq}, {"!=", Predicate::Cmp::ne}, {"<", Predicate::Cmp::lt},
          {"<=", Predicate::Cmp::le}, {">", Predicate::Cmp::gt}, {">=", Predicate::Cmp::ge}};
      for (const auto& [text, cmp] : ops)
        if (accept(text)) return Predicate::count(place, cmp, std::stoull(expect_kind(TokenKind::number, "a number").text));
      fail(peek(), "expected a comparison operator, got " + describe(peek()));
    }
    std::string place = ident("a place name or 'count'").text;
    expect_word("contains");
    return Predicate::contains(place, value());
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Scope& scope_;
  Scope local_;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class T>
const T& expect_body(const ModelDocument& d, DocumentKind k) {
  if (d.kind != k) throw Error("expected a " + to_string(k) + " document, got a " + to_string(d.kind));
  return std::get<T>(d.body);
}

}  // namespace

ModelDocument parse(std::string_view text, const std::string& file, const Scope& scope) {
  Parser p(tokenize(text, file), scope);
  return p.document();
}

ModelDocument Loader::load(const std::filesystem::path& path) {
  auto key = std::filesystem::weakly_canonical(path);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  if (std::find(active_.begin(), active_.end(), key) != active_.end())
    throw Error("include cycle through '" + path.string() + "'");
  std::string text = read_file(path);
  active_.push_back(key);
  try {
    // Includes are read from the token stream before the document itself.
    auto tokens = tokenize(text, path.string());
    for (std::size_t i = 0; i + 2 < tokens.size(); i += 3) {
      if (tokens[i].kind != TokenKind::identifier || tokens[i].text != "include") break;
      if (tokens[i + 1].kind != TokenKind::string) break;
      auto included = load(path.parent_path() / tokens[i + 1].text);
      add_to_scope(included);
    }
    auto doc = parse(text, path.string(), scope_);
    active_.pop_back();
    add_to_scope(doc);
    cache_[key] = doc;
    return doc;
  } catch (...) {
    active_.pop_back();
    throw;
  }
}

void Loader::add_to_scope(const ModelDocument& doc) {
  switch (doc.kind) {
    case DocumentKind::signature: {
      auto sig = std::make_shared<const Signature>(std::get<Signature>(doc.body));
      scope_.signatures[sig->name()] = sig;
      break;
    }
    case DocumentKind::structure: {
      auto s = std::make_shared<const Structure>(std::get<Structure>(doc.body));
      scope_.structures[s->name()] = s;
      if (s->signature()) scope_.signatures.emplace(s->signature()->name(), s->signature());
      break;
    }
    case DocumentKind::system: {
      const auto& sd = std::get<SystemDocument>(doc.body);
      scope_.signatures.emplace(sd.signature->name(), sd.signature);
      scope_.structures.emplace(sd.structure->name(), sd.structure);
      break;
    }
    default: break;
  }
}

const Signature& as_signature(const ModelDocument& d) { return expect_body<Signature>(d, DocumentKind::signature); }
const Structure& as_structure(const ModelDocument& d) { return expect_body<Structure>(d, DocumentKind::structure); }
const Module& as_module(const ModelDocument& d) { return expect_body<Module>(d, DocumentKind::module); }
const SystemDocument& as_system(const ModelDocument& d) { return expect_body<SystemDocument>(d, DocumentKind::system); }
const Run& as_run(const ModelDocument& d) { return expect_body<Run>(d, DocumentKind::run); }

ModelDocument make_document(Module m, std::vector<std::string> includes) {
  ModelDocument d;
  d.kind = DocumentKind::module;
  d.includes = std::move(includes);
  d.body = std::move(m);
  return d;
}

ModelDocument make_document(const System& sys) {
  SystemDocument sd;
  sd.name = sys.name;
  sd.signature = sys.module->signature ? sys.module->signature : sys.structure->signature();
  sd.structure = sys.structure;
  sd.module = sys.module;
  sd.marking = sys.initial;
  ModelDocument d;
  d.kind = DocumentKind::system;
  d.body = std::move(sd);
  return d;
}

ModelDocument make_document(Run r) {
  ModelDocument d;
  d.kind = DocumentKind::run;
  d.body = std::move(r);
  return d;
}

Value parse_value(std::string_view text) {
  static const Scope none;
  Parser p(tokenize(text, "<value>"), none);
  Value v = p.value();
  if (p.peek().kind != TokenKind::end) throw ParseError(p.peek().span, "unexpected '" + p.peek().text + "' after value");
  return v;
}

Binding parse_binding(std::string_view text) {
  static const Scope none;
  auto tokens = tokenize(text, "<binding>");
  if (tokens.size() == 1) return {};
  Parser p(std::move(tokens), none);
  Binding b = p.binding();
  if (p.peek().kind != TokenKind::end) throw ParseError(p.peek().span, "unexpected '" + p.peek().text + "' after binding");
  return b;
}

std::vector<Step> parse_steps(std::string_view text, const std::string& file) {
  static const Scope none;
  std::vector<Step> out;
  std::size_t start = 0;
  int line_no = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    ++line_no;
    start = end + 1;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto tokens = tokenize(line, file);
    for (auto& t : tokens) t.span.line = t.span.end_line = line_no;
    if (tokens.size() == 1) continue;
    Parser p(std::move(tokens), none);
    Step s;
    s.transition = p.ident("a transition name").text;
    if (p.is_punct("(")) s.binding = p.binding();
    if (p.peek().kind != TokenKind::end) throw ParseError(p.peek().span, "unexpected '" + p.peek().text + "' in step");
    out.push_back(std::move(s));
    if (end == text.size()) break;
  }
  return out;
}

std::string print_steps(const std::vector<Step>& steps) {
  std::string out;
  for (const auto& s : steps) out += s.transition + " " + binding_str(s.binding) + "\n";
  return out;
}

Predicate parse_predicate(std::string_view text) {
  static const Scope none;
  Parser p(tokenize(text, "<predicate>"), none);
  Predicate pred = p.predicate();
  if (p.peek().kind != TokenKind::end) throw ParseError(p.peek().span, "unexpected '" + p.peek().text + "' in predicate");
  return pred;
}

}  // namespace hk::io
