#include "hk/io/dot.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace hk::io {

namespace {

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string net_dot(const std::string& name, const Module& m, const Marking* marking) {
  const auto& net = m.net;
  std::ostringstream out;
  out << "digraph \"" << esc(name) << "\" {\n";
  out << "  rankdir=LR;\n";
  out << "  subgraph \"cluster_" << esc(name) << "\" {\n";
  out << "    label=\"" << esc(display_label(name)) << "\";\n";
  out << "    shape=box;\n";

  std::map<std::string, std::vector<std::string>> iface;  // node id -> interface labels
  std::vector<std::string> left, right;
  auto node_id = [](ElementKind k, std::size_t i) { return (k == ElementKind::place ? "p" : "t") + std::to_string(i); };
  std::set<std::string> on_left;
  for (const auto& e : m.left) {
    auto id = node_id(e.kind, e.element);
    iface[id].push_back(e.label);
    if (on_left.insert(id).second) left.push_back(id);
  }
  for (const auto& e : m.right) {
    auto id = node_id(e.kind, e.element);
    iface[id].push_back(e.label);
    if (!on_left.count(id)) right.push_back(id);
  }
  auto xlabel = [&](const std::string& id) {
    auto it = iface.find(id);
    if (it == iface.end()) return std::string();
    std::string s;
    for (const auto& l : it->second) s += (s.empty() ? "" : ", ") + display_label(l);
    return ", xlabel=\"" + esc(s) + "\"";
  };

  for (std::size_t p = 0; p < net.places.size(); ++p) {
    const auto& place = net.places[p];
    std::string label = display_label(place.name);
    if (place.sort) label += "\n" + place.sort->str();
    if (marking && !marking->at(p).empty()) label += "\n" + multiset_str(marking->at(p));
    else if (!marking && !place.init.empty()) {
      std::string init;
      for (const auto& t : place.init) init += (init.empty() ? "" : ", ") + t.str();
      label += "\n" + init;
    }
    auto id = node_id(ElementKind::place, p);
    out << "    " << id << " [shape=circle, label=\"" << esc(label) << "\"" << xlabel(id) << "];\n";
  }
  for (std::size_t t = 0; t < net.transitions.size(); ++t) {
    const auto& tr = net.transitions[t];
    std::string label = display_label(tr.name);
    if (!tr.guard.trivial()) label += "\n" + tr.guard.str();
    auto id = node_id(ElementKind::transition, t);
    out << "    " << id << " [shape=box, label=\"" << esc(label) << "\"" << xlabel(id) << "];\n";
  }
  auto rank = [&](const char* which, const std::vector<std::string>& ids) {
    if (ids.empty()) return;
    out << "    { rank=" << which << ";";
    for (const auto& id : ids) out << " " << id << ";";
    out << " }\n";
  };
  rank("min", left);
  rank("max", right);
  for (const auto& a : net.arcs) {
    std::string ins;
    for (const auto& t : a.inscription) ins += (ins.empty() ? "" : ", ") + t.str();
    auto p = node_id(ElementKind::place, a.place), t = node_id(ElementKind::transition, a.transition);
    if (a.direction == ArcDirection::input)
      out << "    " << p << " -> " << t;
    else
      out << "    " << t << " -> " << p;
    out << " [label=\"" << esc(ins) << "\"];\n";
  }
  out << "  }\n}\n";
  return out.str();
}

}  // namespace

std::string to_dot(const Module& m) { return net_dot(m.name, m, nullptr); }

std::string to_dot(const System& sys) { return net_dot(sys.name, *sys.module, &sys.initial); }

std::string to_dot(const Run& r) {
  std::ostringstream out;
  out << "digraph \"" << esc(r.name) << "\" {\n";
  out << "  rankdir=LR;\n";
  std::map<std::string, std::vector<std::string>> iface;
  std::vector<std::string> left, right;
  for (const auto& e : r.left) {
    auto id = (e.kind == ElementKind::place ? "c" : "e") + std::to_string(e.element);
    iface[id].push_back(e.label);
    left.push_back(id);
  }
  for (const auto& e : r.right) {
    auto id = (e.kind == ElementKind::place ? "c" : "e") + std::to_string(e.element);
    iface[id].push_back(e.label);
    if (std::find(left.begin(), left.end(), id) == left.end()) right.push_back(id);
  }
  auto xlabel = [&](const std::string& id) {
    auto it = iface.find(id);
    if (it == iface.end()) return std::string();
    std::string s;
    for (const auto& l : it->second) s += (s.empty() ? "" : ", ") + l;
    return ", xlabel=\"" + esc(s) + "\"";
  };
  for (std::size_t c = 0; c < r.conditions.size(); ++c) {
    const auto& cond = r.conditions[c];
    auto id = "c" + std::to_string(c);
    out << "  " << id << " [shape=circle, label=\"" << esc(display_label(cond.place) + "\n" + cond.value.str())
        << "\"" << xlabel(id) << "];\n";
  }
  for (std::size_t e = 0; e < r.events.size(); ++e) {
    const auto& ev = r.events[e];
    auto id = "e" + std::to_string(e);
    out << "  " << id << " [shape=box, label=\"" << esc(display_label(ev.transition) + "\n" + binding_str(ev.binding))
        << "\"" << xlabel(id) << "];\n";
  }
  auto rank = [&](const char* which, const std::vector<std::string>& ids) {
    if (ids.empty()) return;
    out << "  { rank=" << which << ";";
    for (const auto& id : ids) out << " " << id << ";";
    out << " }\n";
  };
  rank("min", left);
  rank("max", right);
  for (const auto& [c, e] : r.consumes) out << "  c" << c << " -> e" << e << ";\n";
  for (const auto& [e, c] : r.produces) out << "  e" << e << " -> c" << c << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace hk::io
