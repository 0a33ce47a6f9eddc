#include "hk/analysis.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <tuple>

#include <boost/multiprecision/cpp_int.hpp>

#include "hk/error.hpp"

namespace hk {

namespace mp = boost::multiprecision;
using Rational = mp::cpp_rational;
using RMatrix = std::vector<std::vector<Rational>>;

std::optional<std::size_t> GroundedNet::place_index(std::size_t place, const Value& v) const {
  auto it = std::lower_bound(places.begin(), places.end(), std::make_pair(place, v), [](const GroundPlace& gp, const auto& key) {
    return std::tie(gp.place, gp.value) < std::tie(key.first, key.second);
  });
  if (it == places.end() || it->place != place || it->value != v) return std::nullopt;
  return static_cast<std::size_t>(it - places.begin());
}

std::string GroundedNet::place_label(const SchematicNet& net, std::size_t gp) const {
  return net.places.at(places.at(gp).place).name + "=" + places[gp].value.str();
}

std::string GroundedNet::transition_label(const SchematicNet& net, std::size_t gt) const {
  return net.transitions.at(transitions.at(gt).transition).name + " " + binding_str(transitions[gt].binding);
}

std::vector<std::int64_t> GroundedNet::to_vector(const Marking& m) const {
  std::vector<std::int64_t> out(places.size(), 0);
  for (std::size_t p = 0; p < m.size(); ++p)
    for (const auto& [v, n] : m[p]) {
      auto gp = place_index(p, v);
      if (!gp) throw DomainError("token " + v.str() + " lies outside the grounded domain of place " + std::to_string(p));
      out[*gp] = static_cast<std::int64_t>(n);
    }
  return out;
}

GroundedNet ground(const System& sys) {
  const auto& net = sys.net();
  const auto& s = *sys.structure;
  const std::size_t cap = sys.options.powerset_cap;

  std::vector<std::set<Value>> domain(net.places.size());
  for (std::size_t p = 0; p < net.places.size(); ++p) {
    if (net.places[p].sort) {
      auto carrier = sort_carrier(*net.places[p].sort, s, cap);
      domain[p].insert(carrier.elements().begin(), carrier.elements().end());
    }
    for (const auto& [v, n] : sys.initial.at(p)) domain[p].insert(v);
  }

  struct Firing {
    std::size_t transition;
    Binding binding;
    std::vector<std::pair<std::size_t, Multiset>> in, out;
  };
  std::vector<Firing> firings;
  for (std::size_t t = 0; t < net.transitions.size(); ++t) {
    auto vars = net.variables_of(t);
    for_each_binding(
        vars, s,
        [&](const Binding& b) {
          try {
            if (!eval_guard(net.transitions[t].guard, s, b)) return true;
            Firing f{t, b, arc_tokens(net, t, ArcDirection::input, b, s), arc_tokens(net, t, ArcDirection::output, b, s)};
            for (const auto* side : {&f.in, &f.out})
              for (const auto& [p, ms] : *side)
                for (const auto& [v, n] : ms) domain[p].insert(v);
            firings.push_back(std::move(f));
          } catch (const EvalError&) {
            // partial function tables: the binding has no meaning in this structure
          }
          return true;
        },
        cap);
  }

  GroundedNet g;
  for (std::size_t p = 0; p < net.places.size(); ++p)
    for (const auto& v : domain[p]) g.places.push_back({p, v});
  const std::size_t np = g.places.size(), nt = firings.size();
  g.pre.assign(np, std::vector<std::int64_t>(nt, 0));
  g.post.assign(np, std::vector<std::int64_t>(nt, 0));
  for (std::size_t t = 0; t < nt; ++t) {
    g.transitions.push_back({firings[t].transition, firings[t].binding});
    for (const auto& [p, ms] : firings[t].in)
      for (const auto& [v, n] : ms) g.pre[*g.place_index(p, v)][t] += static_cast<std::int64_t>(n);
    for (const auto& [p, ms] : firings[t].out)
      for (const auto& [v, n] : ms) g.post[*g.place_index(p, v)][t] += static_cast<std::int64_t>(n);
  }
  g.incidence.assign(np, std::vector<std::int64_t>(nt, 0));
  for (std::size_t p = 0; p < np; ++p)
    for (std::size_t t = 0; t < nt; ++t) g.incidence[p][t] = g.post[p][t] - g.pre[p][t];
  g.initial = g.to_vector(sys.initial);
  return g;
}

namespace {

RMatrix to_rational(const std::vector<IntVector>& m, std::size_t cols) {
  RMatrix r(m.size(), std::vector<Rational>(cols));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) r[i][j] = m[i].at(j);
  return r;
}

/// Reduced row echelon form in place; returns the pivot columns.
std::vector<std::size_t> rref(RMatrix& a, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < a.size(); ++col) {
    std::size_t sel = row;
    while (sel < a.size() && a[sel][col] == 0) ++sel;
    if (sel == a.size()) continue;
    std::swap(a[sel], a[row]);
    Rational inv = 1 / a[row][col];
    for (auto& x : a[row]) x *= inv;
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == row || a[r][col] == 0) continue;
      Rational f = a[r][col];
      for (std::size_t c = col; c < cols; ++c) a[r][c] -= f * a[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

IntVector to_primitive(const std::vector<Rational>& v) {
  mp::cpp_int lcm = 1;
  for (const auto& x : v)
    if (x != 0) lcm = mp::lcm(lcm, mp::denominator(x));
  std::vector<mp::cpp_int> ints;
  mp::cpp_int g = 0;
  for (const auto& x : v) {
    mp::cpp_int n = mp::numerator(x) * (lcm / mp::denominator(x));
    ints.push_back(n);
    g = mp::gcd(g, mp::abs(n));
  }
  int sign = 1;
  for (const auto& n : ints)
    if (n != 0) {
      sign = n < 0 ? -1 : 1;
      break;
    }
  IntVector out;
  for (auto& n : ints) {
    if (g != 0) n /= g;
    n *= sign;
    if (n > std::numeric_limits<std::int64_t>::max() || n < std::numeric_limits<std::int64_t>::min())
      throw Error("invariant coefficient exceeds 64 bits");
    out.push_back(static_cast<std::int64_t>(n));
  }
  return out;
}

std::size_t rank_of(const std::vector<IntVector>& rows, std::size_t cols) {
  auto m = to_rational(rows, cols);
  return rref(m, cols).size();
}

}  // namespace

std::vector<IntVector> integer_null_space(const std::vector<IntVector>& matrix, std::size_t cols) {
  auto a = to_rational(matrix, cols);
  auto pivots = rref(a, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<IntVector> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> x(cols);
    x[f] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = -a[r][f];
    auto v = to_primitive(x);
    for (const auto& row : matrix)
      if (dot(row, v) != 0) throw Error("null-space vector failed verification");
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<IntVector> place_invariants(const GroundedNet& g) {
  const std::size_t np = g.places.size(), nt = g.transitions.size();
  std::vector<IntVector> transposed(nt, IntVector(np));
  for (std::size_t p = 0; p < np; ++p)
    for (std::size_t t = 0; t < nt; ++t) transposed[t][p] = g.incidence[p][t];
  return integer_null_space(transposed, np);
}

std::vector<IntVector> transition_invariants(const GroundedNet& g) {
  return integer_null_space(g.incidence, g.transitions.size());
}

bool in_span(const std::vector<IntVector>& basis, const IntVector& v) {
  if (basis.empty()) return std::all_of(v.begin(), v.end(), [](auto x) { return x == 0; });
  auto extended = basis;
  extended.push_back(v);
  return rank_of(basis, v.size()) == rank_of(extended, v.size());
}

std::int64_t dot(const IntVector& a, const IntVector& b) {
  if (a.size() != b.size()) throw Error("dot product of vectors with different lengths");
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Predicate Predicate::contains(std::string place, Value value) {
  Predicate p;
  p.kind_ = Kind::contains;
  p.place_ = std::move(place);
  p.value_ = std::move(value);
  return p;
}

Predicate Predicate::count(std::string place, Cmp cmp, std::size_t n) {
  Predicate p;
  p.kind_ = Kind::count;
  p.place_ = std::move(place);
  p.cmp_ = cmp;
  p.n_ = n;
  return p;
}

Predicate Predicate::conj(Predicate a, Predicate b) {
  Predicate p;
  p.kind_ = Kind::conj;
  p.args_ = {std::make_shared<Predicate>(std::move(a)), std::make_shared<Predicate>(std::move(b))};
  return p;
}

Predicate Predicate::disj(Predicate a, Predicate b) {
  Predicate p = conj(std::move(a), std::move(b));
  p.kind_ = Kind::disj;
  return p;
}

Predicate Predicate::neg(Predicate a) {
  Predicate p;
  p.kind_ = Kind::neg;
  p.args_ = {std::make_shared<Predicate>(std::move(a))};
  return p;
}

bool Predicate::holds(const SchematicNet& net, const Marking& m) const {
  auto tokens = [&]() -> const Multiset& {
    auto p = net.find_place(place_);
    if (!p) throw Error("predicate refers to unknown place '" + place_ + "'");
    return m.at(*p);
  };
  switch (kind_) {
    case Kind::contains: return tokens().count(value_) > 0;
    case Kind::count: {
      std::size_t c = multiset_size(tokens());
      switch (cmp_) {
        case Cmp::eq: return c == n_;
        case Cmp::ne: return c != n_;
        case Cmp::lt: return c < n_;
        case Cmp::le: return c <= n_;
        case Cmp::gt: return c > n_;
        case Cmp::ge: return c >= n_;
      }
      return false;
    }
    case Kind::conj: return args_[0]->holds(net, m) && args_[1]->holds(net, m);
    case Kind::disj: return args_[0]->holds(net, m) || args_[1]->holds(net, m);
    case Kind::neg: return !args_[0]->holds(net, m);
  }
  return false;
}

std::string Predicate::str() const {
  static const char* ops[] = {"==", "!=", "<", "<=", ">", ">="};
  switch (kind_) {
    case Kind::contains: return place_ + " contains " + value_.str();
    case Kind::count: return "count(" + place_ + ") " + ops[static_cast<int>(cmp_)] + " " + std::to_string(n_);
    case Kind::conj: return "(" + args_[0]->str() + " && " + args_[1]->str() + ")";
    case Kind::disj: return "(" + args_[0]->str() + " || " + args_[1]->str() + ")";
    case Kind::neg: return "!" + args_[0]->str();
  }
  return "";
}

namespace {

/// Shared breadth-first driver; `expand(node, emit)` reports successors in order.
template <class State, class Label, class Expand>
void bfs(std::vector<State>& nodes, const ExploreLimits& limits, bool& truncated, Expand expand,
         std::function<void(std::size_t, std::size_t, Label)> add_edge, std::vector<std::size_t>* deadlocks,
         std::size_t& edge_count) {
  std::map<State, std::size_t> index;
  index.emplace(nodes.front(), 0);
  for (std::size_t cur = 0; cur < nodes.size(); ++cur) {
    auto succ = expand(nodes[cur]);
    if (succ.empty() && deadlocks) deadlocks->push_back(cur);
    for (auto& [label, next] : succ) {
      if (edge_count >= limits.max_edges) {
        truncated = true;
        return;
      }
      auto it = index.find(next);
      if (it == index.end()) {
        if (nodes.size() >= limits.max_nodes) {
          truncated = true;
          continue;
        }
        it = index.emplace(next, nodes.size()).first;
        nodes.push_back(std::move(next));
      }
      add_edge(cur, it->second, std::move(label));
      ++edge_count;
    }
  }
}

}  // namespace

ReachabilityGraph explore(const System& sys, const ExploreLimits& limits, const Predicate* predicate) {
  ReachabilityGraph g;
  g.nodes.push_back(sys.initial);
  if (limits.max_nodes == 0) {
    g.nodes.clear();
    g.truncated = true;
    return g;
  }
  std::size_t edges = 0;
  using Label = std::pair<std::size_t, Binding>;
  bfs<Marking, Label>(
      g.nodes, limits, g.truncated,
      [&](const Marking& m) {
        std::vector<std::pair<Label, Marking>> out;
        for (auto& s : sys.successors(m)) out.push_back({{s.transition, std::move(s.binding)}, std::move(s.marking)});
        return out;
      },
      [&](std::size_t from, std::size_t to, Label l) { g.edges.push_back({from, to, l.first, std::move(l.second)}); },
      &g.deadlocks, edges);
  if (predicate)
    for (std::size_t n = 0; n < g.nodes.size(); ++n)
      if (predicate->holds(sys.net(), g.nodes[n])) g.hits.push_back(n);
  return g;
}

GroundedGraph explore_grounded(const GroundedNet& net, const ExploreLimits& limits) {
  GroundedGraph g;
  if (limits.max_nodes == 0) {
    g.truncated = true;
    return g;
  }
  g.nodes.push_back(net.initial);
  std::size_t edges = 0;
  bfs<IntVector, std::size_t>(
      g.nodes, limits, g.truncated,
      [&](const IntVector& m) {
        std::vector<std::pair<std::size_t, IntVector>> out;
        for (std::size_t t = 0; t < net.transitions.size(); ++t) {
          bool enabled = true;
          for (std::size_t p = 0; p < net.places.size() && enabled; ++p) enabled = m[p] >= net.pre[p][t];
          if (!enabled) continue;
          IntVector next = m;
          for (std::size_t p = 0; p < net.places.size(); ++p) next[p] += net.incidence[p][t];
          out.push_back({t, std::move(next)});
        }
        return out;
      },
      [&](std::size_t from, std::size_t to, std::size_t t) { g.edges.push_back({from, to, t}); }, nullptr, edges);
  return g;
}

std::vector<std::string> compare_graphs(const ReachabilityGraph& high, const GroundedGraph& low, const GroundedNet& g) {
  std::vector<std::string> out;
  if (high.nodes.size() != low.nodes.size())
    out.push_back("node counts differ: " + std::to_string(high.nodes.size()) + " vs " + std::to_string(low.nodes.size()));
  if (high.edges.size() != low.edges.size())
    out.push_back("edge counts differ: " + std::to_string(high.edges.size()) + " vs " + std::to_string(low.edges.size()));

  std::map<IntVector, std::size_t> low_index;
  for (std::size_t i = 0; i < low.nodes.size(); ++i) low_index.emplace(low.nodes[i], i);
  std::vector<std::size_t> image(high.nodes.size());
  std::set<std::size_t> used;
  for (std::size_t i = 0; i < high.nodes.size(); ++i) {
    auto it = low_index.find(g.to_vector(high.nodes[i]));
    if (it == low_index.end()) {
      out.push_back("high-level node " + std::to_string(i) + " has no grounded counterpart");
      return out;
    }
    if (!used.insert(it->second).second) out.push_back("two high-level nodes map to grounded node " + std::to_string(it->second));
    image[i] = it->second;
  }

  std::map<std::pair<std::size_t, Binding>, std::size_t> gt_index;
  for (std::size_t t = 0; t < g.transitions.size(); ++t) gt_index.emplace(std::make_pair(g.transitions[t].transition, g.transitions[t].binding), t);
  std::multiset<std::tuple<std::size_t, std::size_t, std::size_t>> mapped, grounded;
  for (const auto& e : high.edges) {
    auto it = gt_index.find({e.transition, e.binding});
    if (it == gt_index.end()) {
      out.push_back("high-level edge " + binding_str(e.binding) + " has no grounded transition");
      continue;
    }
    mapped.emplace(image[e.from], image[e.to], it->second);
  }
  for (const auto& e : low.edges) grounded.emplace(e.from, e.to, e.transition);
  if (mapped != grounded) out.push_back("edge sets differ under the marking translation");
  return out;
}

}  // namespace hk
