#include <sstream>

#include "hk/io/document.hpp"

namespace hk::io {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string join_terms(const std::vector<Term>& ts) {
  std::string out;
  for (std::size_t i = 0; i < ts.size(); ++i) out += (i ? ", " : "") + ts[i].str();
  return out;
}

class Printer {
 public:
  explicit Printer(int indent = 0) : indent_(indent) {}

  std::string text() const { return out_.str(); }

  void line(const std::string& s) { out_ << std::string(static_cast<std::size_t>(indent_) * 2, ' ') << s << "\n"; }
  void open(const std::string& s) {
    line(s + " {");
    ++indent_;
  }
  void close() {
    --indent_;
    line("}");
  }

  void signature(const Signature& sig) {
    open("signature " + sig.name());
    if (!sig.sets().empty()) {
      std::string s;
      for (const auto& x : sig.sets()) s += (s.empty() ? "" : ", ") + x;
      line("sets " + s + ";");
    }
    for (const auto& sub : sig.subsets()) line("subsets " + sub.name + " of pow(" + sub.base + ");");
    for (const auto& c : sig.constants()) line("consts " + c.name + ": " + c.sort.str() + ";");
    for (const auto& f : sig.functions()) {
      std::string args;
      for (const auto& a : f.arguments) args += (args.empty() ? "" : ", ") + a.str();
      line("fns " + f.name + ": " + args + " -> " + f.result.str() + ";");
    }
    close();
  }

  void structure(const Structure& s) {
    const auto& sig = s.signature();
    open("structure " + s.name() + " of " + (sig ? sig->name() : std::string("?")));
    for (const auto& [sym, carrier] : s.carriers()) {
      const SubsetSymbol* sub = sig ? sig->find_subset(sym) : nullptr;
      const Value* base = sub ? s.carrier(sub->base) : nullptr;
      if (base && carrier == Value::set(powerset(*base)))
        line(sym + " = pow(" + sub->base + ");");
      else
        line(sym + " = " + carrier.str() + ";");
    }
    for (const auto& [sym, table] : s.functions()) {
      std::string entries;
      for (const auto& [arg, res] : table) entries += (entries.empty() ? "" : ", ") + arg.str() + " -> " + res.str();
      line(sym + " = {" + entries + "};");
    }
    for (const auto& [sym, v] : s.constants()) line(sym + " = " + v.str() + ";");
    close();
  }

  void module(const Module& m) {
    open("module " + m.name + (m.signature ? " of " + m.signature->name() : std::string()));
    const auto& net = m.net;
    if (!net.variables.empty()) {
      open("vars");
      for (const auto& [v, s] : net.variables) line(v + ": " + s.str() + ";");
      close();
    }
    for (Side side : {Side::left, Side::right}) {
      const auto& iface = m.interface(side);
      if (iface.empty()) continue;
      open(side == Side::left ? "left" : "right");
      for (const auto& e : iface) {
        const std::string& inner =
            e.kind == ElementKind::place ? net.places.at(e.element).name : net.transitions.at(e.element).name;
        line(std::string(e.kind == ElementKind::place ? "place " : "trans ") + e.label + " = " + inner + ";");
      }
      close();
    }
    if (!net.places.empty()) {
      open("places");
      for (const auto& p : net.places) {
        std::string s = p.name;
        if (p.sort) s += ": " + p.sort->str();
        if (!p.init.empty()) s += " init " + join_terms(p.init);
        line(s + ";");
      }
      close();
    }
    if (!net.transitions.empty()) {
      open("trans");
      for (const auto& t : net.transitions) {
        std::string s = t.name;
        if (!t.guard.trivial()) s += " guard " + t.guard.str();
        if (!t.free_vars.empty()) {
          s += " free ";
          for (std::size_t i = 0; i < t.free_vars.size(); ++i) s += (i ? ", " : "") + t.free_vars[i];
        }
        line(s + ";");
      }
      close();
    }
    if (!net.arcs.empty()) {
      open("arcs");
      for (const auto& a : net.arcs) {
        const auto& p = net.places.at(a.place).name;
        const auto& t = net.transitions.at(a.transition).name;
        line((a.direction == ArcDirection::input ? p + " -> " + t : t + " -> " + p) + " : " + join_terms(a.inscription) + ";");
      }
      close();
    }
    close();
  }

  void marking(const SchematicNet& net, const Marking& m) {
    open("marking");
    for (std::size_t p = 0; p < m.size(); ++p) {
      if (m[p].empty()) continue;
      std::string s;
      for (const auto& [v, n] : m[p])
        for (std::size_t k = 0; k < n; ++k) s += (s.empty() ? "" : ", ") + v.str();
      line(net.places.at(p).name + ": " + s + ";");
    }
    close();
  }

  void system(const SystemDocument& sd) {
    open("system " + sd.name);
    signature(*sd.signature);
    structure(*sd.structure);
    module(*sd.module);
    marking(sd.module->net, sd.marking);
    close();
  }

  void run(const Run& r) {
    open("run " + r.name);
    open("conditions");
    for (const auto& c : r.conditions) line(c.id + ": " + c.place + " = " + c.value.str() + ";");
    close();
    open("events");
    for (const auto& e : r.events) line(e.id + ": " + e.transition + " " + binding_str(e.binding) + ";");
    close();
    open("flow");
    for (const auto& [c, e] : r.consumes) line(r.conditions.at(c).id + " -> " + r.events.at(e).id + ";");
    for (const auto& [e, c] : r.produces) line(r.events.at(e).id + " -> " + r.conditions.at(c).id + ";");
    close();
    for (Side side : {Side::left, Side::right}) {
      const auto& iface = side == Side::left ? r.left : r.right;
      if (iface.empty()) continue;
      open(side == Side::left ? "left" : "right");
      for (const auto& e : iface) {
        bool cond = e.kind == ElementKind::place;
        const std::string& id = cond ? r.conditions.at(e.element).id : r.events.at(e.element).id;
        line(std::string(cond ? "cond " : "event ") + quote(e.label) + " = " + id + ";");
      }
      close();
    }
    close();
  }

 private:
  std::ostringstream out_;
  int indent_;
};

}  // namespace

std::string print_value(const Value& v) { return v.str(); }

std::string print(const ModelDocument& doc) {
  Printer p;
  for (const auto& inc : doc.includes) p.line("include " + quote(inc) + ";");
  if (!doc.includes.empty()) p.line("");
  switch (doc.kind) {
    case DocumentKind::signature: p.signature(std::get<Signature>(doc.body)); break;
    case DocumentKind::structure: p.structure(std::get<Structure>(doc.body)); break;
    case DocumentKind::module: p.module(std::get<Module>(doc.body)); break;
    case DocumentKind::system: p.system(std::get<SystemDocument>(doc.body)); break;
    case DocumentKind::run: p.run(std::get<Run>(doc.body)); break;
  }
  return p.text();
}

}  // namespace hk::io
