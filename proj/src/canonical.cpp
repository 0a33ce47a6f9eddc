#include "hk/canonical.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <tuple>

namespace hk {

namespace {

using Code = std::vector<long long>;

class Canonizer {
 public:
  explicit Canonizer(const LabeledGraph& g) : g_(g), n_(g.nodes.size()) {
    std::vector<std::string> labels = g.nodes;
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    node_rank_.resize(n_);
    for (std::size_t v = 0; v < n_; ++v)
      node_rank_[v] = std::lower_bound(labels.begin(), labels.end(), g.nodes[v]) - labels.begin();

    std::vector<std::string> edge_labels;
    for (const auto& e : g.edges) edge_labels.push_back(e.label);
    std::sort(edge_labels.begin(), edge_labels.end());
    edge_labels.erase(std::unique(edge_labels.begin(), edge_labels.end()), edge_labels.end());
    out_.resize(n_);
    in_.resize(n_);
    for (const auto& e : g.edges) {
      long long r = std::lower_bound(edge_labels.begin(), edge_labels.end(), e.label) - edge_labels.begin();
      edges_.emplace_back(e.from, e.to, r);
      out_[e.from].emplace_back(e.to, r);
      in_[e.to].emplace_back(e.from, r);
    }
  }

  std::vector<std::size_t> run() {
    if (n_ == 0) return {};
    std::vector<long long> colors(node_rank_.begin(), node_rank_.end());
    std::vector<std::size_t> seq;
    search(std::move(colors), seq);
    std::vector<std::size_t> order(n_);
    for (std::size_t v = 0; v < n_; ++v) order[best_colors_[v]] = v;
    return order;
  }

 private:
  static constexpr int no_jump = INT_MAX;

  static std::size_t rerank(std::vector<long long>& colors, const std::vector<Code>& sigs) {
    std::vector<const Code*> sorted;
    for (const auto& s : sigs) sorted.push_back(&s);
    std::sort(sorted.begin(), sorted.end(), [](const Code* a, const Code* b) { return *a < *b; });
    sorted.erase(std::unique(sorted.begin(), sorted.end(), [](const Code* a, const Code* b) { return *a == *b; }),
                 sorted.end());
    for (std::size_t v = 0; v < sigs.size(); ++v)
      colors[v] = std::lower_bound(sorted.begin(), sorted.end(), &sigs[v],
                                   [](const Code* a, const Code* b) { return *a < *b; }) -
                  sorted.begin();
    return sorted.size();
  }

  std::size_t refine(std::vector<long long>& colors) const {
    std::vector<Code> sigs(n_);
    for (std::size_t v = 0; v < n_; ++v) sigs[v] = {colors[v]};
    std::size_t classes = rerank(colors, sigs);
    while (true) {
      for (std::size_t v = 0; v < n_; ++v) {
        std::vector<std::tuple<long long, long long, long long>> nb;
        for (const auto& [w, r] : out_[v]) nb.emplace_back(0, r, colors[w]);
        for (const auto& [w, r] : in_[v]) nb.emplace_back(1, r, colors[w]);
        std::sort(nb.begin(), nb.end());
        Code& s = sigs[v];
        s.assign({colors[v]});
        for (const auto& [d, r, c] : nb) {
          s.push_back(d);
          s.push_back(r);
          s.push_back(c);
        }
      }
      std::size_t next = rerank(colors, sigs);
      if (next == classes) return classes;
      classes = next;
    }
  }

  Code encode(const std::vector<long long>& colors) const {
    Code code;
    code.reserve(n_ + 3 * edges_.size());
    std::vector<std::size_t> order(n_);
    for (std::size_t v = 0; v < n_; ++v) order[colors[v]] = v;
    for (std::size_t p = 0; p < n_; ++p) code.push_back(node_rank_[order[p]]);
    std::vector<std::tuple<long long, long long, long long>> es;
    for (const auto& [u, v, r] : edges_) es.emplace_back(colors[u], colors[v], r);
    std::sort(es.begin(), es.end());
    for (const auto& [u, v, r] : es) {
      code.push_back(u);
      code.push_back(v);
      code.push_back(r);
    }
    return code;
  }

  int search(std::vector<long long> colors, std::vector<std::size_t>& seq) {
    const int depth = static_cast<int>(seq.size());
    if (refine(colors) == n_) {
      Code code = encode(colors);
      if (!have_best_ || code < best_code_) {
        have_best_ = true;
        best_code_ = std::move(code);
        best_seq_ = seq;
        best_colors_ = colors;
        return no_jump;
      }
      if (code == best_code_) {
        // Equal leaves expose an automorphism fixing the common prefix; the
        // subtree where the sequences diverge is an image of one already seen.
        std::size_t l = 0;
        while (l < seq.size() && l < best_seq_.size() && seq[l] == best_seq_[l]) ++l;
        return static_cast<int>(l);
      }
      return no_jump;
    }
    std::map<long long, std::size_t> sizes;
    for (auto c : colors) ++sizes[c];
    long long target = -1;
    for (const auto& [c, k] : sizes)
      if (k > 1) {
        target = c;
        break;
      }
    for (std::size_t v = 0; v < n_; ++v) {
      if (colors[v] != target) continue;
      std::vector<long long> next(n_);
      for (std::size_t u = 0; u < n_; ++u) next[u] = 2 * colors[u] + ((colors[u] == target && u != v) ? 1 : 0);
      seq.push_back(v);
      int r = search(std::move(next), seq);
      seq.pop_back();
      if (r < depth) return r;
    }
    return no_jump;
  }

  const LabeledGraph& g_;
  std::size_t n_;
  std::vector<long long> node_rank_;
  std::vector<std::tuple<std::size_t, std::size_t, long long>> edges_;
  std::vector<std::vector<std::pair<std::size_t, long long>>> out_, in_;

  bool have_best_ = false;
  Code best_code_;
  std::vector<std::size_t> best_seq_;
  std::vector<long long> best_colors_;
};

}  // namespace

std::vector<std::size_t> canonical_order(const LabeledGraph& g) { return Canonizer(g).run(); }

std::string canonical_form(const LabeledGraph& g) {
  auto order = canonical_order(g);
  std::vector<std::size_t> pos(g.nodes.size());
  for (std::size_t p = 0; p < order.size(); ++p) pos[order[p]] = p;
  std::string out = "nodes " + std::to_string(g.nodes.size()) + "\n";
  for (std::size_t p = 0; p < order.size(); ++p) {
    const auto& label = g.nodes[order[p]];
    out += std::to_string(label.size()) + ":" + label + "\n";
  }
  std::vector<std::tuple<std::size_t, std::size_t, std::string>> es;
  for (const auto& e : g.edges) es.emplace_back(pos[e.from], pos[e.to], e.label);
  std::sort(es.begin(), es.end());
  out += "edges " + std::to_string(es.size()) + "\n";
  for (const auto& [u, v, l] : es) out += std::to_string(u) + ">" + std::to_string(v) + " " + std::to_string(l.size()) + ":" + l + "\n";
  return out;
}

}  // namespace hk
