#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "mobmotif/motif.hpp"

namespace mobmotif {

namespace {

using NodeKey = std::tuple<int, int, std::size_t, std::size_t>;

NodeKey node_key(const Digraph& g, std::span<const ActivityLabel> labels, std::size_t v, std::size_t home,
                 MotifKind kind, bool pin_home) {
  const int home_rank = (pin_home && v == home) ? 0 : 1;
  const int label = kind == MotifKind::abm ? static_cast<int>(labels[v]) : 0;
  return {home_rank, label, g.out_degree(v), g.in_degree(v)};
}

std::string encode(std::size_t n, MotifKind kind, std::span<const ActivityLabel> labels,
                   const std::vector<std::uint8_t>& bits) {
  std::string code = kind == MotifKind::lbm ? "L" : "A";
  code += std::to_string(n);
  code += ':';
  if (kind == MotifKind::abm) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (i) code += '-';
      code += to_string(labels[i]);
    }
    code += ':';
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (i) code += '.';
    for (std::size_t j = 0; j < n; ++j) code += bits[i * n + j] ? '1' : '0';
  }
  return code;
}

}  // namespace

CanonicalForm canonical_form(const Digraph& graph, std::span<const ActivityLabel> labels, std::size_t home,
                             MotifKind kind, const SignatureOptions& options) {
  const std::size_t n = graph.size();
  if (kind == MotifKind::abm && labels.size() != n) throw std::invalid_argument("ABM graphs need one label per node");

  CanonicalForm form;
  form.signature.kind = kind;
  form.signature.node_count = n;
  if (n > options.max_nodes) {
    form.graph = graph;
    form.labels.assign(labels.begin(), labels.end());
    return form;
  }

  std::vector<NodeKey> keys(n);
  for (std::size_t v = 0; v < n; ++v) keys[v] = node_key(graph, labels, v, home, kind, options.pin_home);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });

  // Cells of equal key; candidate orders permute nodes within cells only.
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && keys[order[j]] == keys[order[i]]) ++j;
    cells.emplace_back(i, j);
    i = j;
  }

  std::vector<std::uint8_t> bits(n * n);
  std::vector<std::uint8_t> best_bits;
  std::vector<std::size_t> best_order;
  for (;;) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) bits[i * n + j] = graph.has_edge(order[i], order[j]) ? 1 : 0;
    }
    if (best_order.empty() || bits < best_bits) {
      best_bits = bits;
      best_order = order;
    }

    std::size_t c = cells.size();
    bool advanced = false;
    while (c-- > 0) {
      auto first = order.begin() + static_cast<std::ptrdiff_t>(cells[c].first);
      auto last = order.begin() + static_cast<std::ptrdiff_t>(cells[c].second);
      if (std::next_permutation(first, last)) {
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }

  form.graph = Digraph(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (best_bits[i * n + j]) form.graph.add_edge(i, j);
    }
  }
  if (kind == MotifKind::abm) {
    for (auto v : best_order) form.labels.push_back(labels[v]);
  }
  form.signature.code = encode(n, kind, form.labels, best_bits);
  return form;
}

CanonicalSignature canonical_signature(const Digraph& graph, std::span<const ActivityLabel> labels,
                                       std::size_t home, MotifKind kind, const SignatureOptions& options) {
  return canonical_form(graph, labels, home, kind, options).signature;
}

CanonicalSignature canonical_signature(const DailyNetwork& net, MotifKind kind, const SignatureOptions& options) {
  const auto labels = net.labels();
  return canonical_signature(net.graph, labels, net.home_index, kind, options);
}

namespace {

class Matcher {
 public:
  Matcher(const Digraph& g1, std::span<const ActivityLabel> l1, std::size_t h1, const Digraph& g2,
          std::span<const ActivityLabel> l2, std::size_t h2, MotifKind kind, bool pin_home)
      : g1_(g1), g2_(g2), l1_(l1), l2_(l2), h1_(h1), h2_(h2), kind_(kind), pin_home_(pin_home),
        n_(g1.size()), map12_(n_, kNone), map21_(n_, kNone) {
    for (std::size_t v = 0; v < n_; ++v) {
      out1_.push_back(g1.out_degree(v));
      in1_.push_back(g1.in_degree(v));
      out2_.push_back(g2.out_degree(v));
      in2_.push_back(g2.in_degree(v));
    }
    build_order();
  }

  bool run() { return extend(0); }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  // Home first, then greedily the node with most links into the matched set,
  // so inconsistencies surface early.
  void build_order() {
    std::vector<bool> placed(n_, false);
    if (pin_home_ && n_ > 0) {
      order_.push_back(h1_);
      placed[h1_] = true;
    }
    while (order_.size() < n_) {
      std::size_t best = kNone;
      std::size_t best_links = 0;
      for (std::size_t v = 0; v < n_; ++v) {
        if (placed[v]) continue;
        std::size_t links = 0;
        for (auto u : order_) links += g1_.has_edge(u, v) + g1_.has_edge(v, u);
        if (best == kNone || links > best_links ||
            (links == best_links && out1_[v] + in1_[v] > out1_[best] + in1_[best])) {
          best = v;
          best_links = links;
        }
      }
      order_.push_back(best);
      placed[best] = true;
    }
  }

  bool feasible(std::size_t v, std::size_t w) const {
    if (pin_home_ && ((v == h1_) != (w == h2_))) return false;
    if (kind_ == MotifKind::abm && l1_[v] != l2_[w]) return false;
    if (out1_[v] != out2_[w] || in1_[v] != in2_[w]) return false;
    for (std::size_t u = 0; u < n_; ++u) {
      const std::size_t m = map12_[u];
      if (m == kNone) continue;
      if (g1_.has_edge(v, u) != g2_.has_edge(w, m)) return false;
      if (g1_.has_edge(u, v) != g2_.has_edge(m, w)) return false;
    }
    return true;
  }

  bool extend(std::size_t depth) {
    if (depth == n_) return true;
    const std::size_t v = order_[depth];
    for (std::size_t w = 0; w < n_; ++w) {
      if (map21_[w] != kNone || !feasible(v, w)) continue;
      map12_[v] = w;
      map21_[w] = v;
      if (extend(depth + 1)) return true;
      map12_[v] = kNone;
      map21_[w] = kNone;
    }
    return false;
  }

  const Digraph& g1_;
  const Digraph& g2_;
  std::span<const ActivityLabel> l1_;
  std::span<const ActivityLabel> l2_;
  std::size_t h1_;
  std::size_t h2_;
  MotifKind kind_;
  bool pin_home_;
  std::size_t n_;
  std::vector<std::size_t> map12_;
  std::vector<std::size_t> map21_;
  std::vector<std::size_t> out1_, in1_, out2_, in2_;
  std::vector<std::size_t> order_;
};

}  // namespace

bool isomorphic(const Digraph& g1, std::span<const ActivityLabel> labels1, std::size_t home1, const Digraph& g2,
                std::span<const ActivityLabel> labels2, std::size_t home2, MotifKind kind, bool pin_home) {
  if (g1.size() != g2.size() || g1.edge_count() != g2.edge_count()) return false;
  if (kind == MotifKind::abm && (labels1.size() != g1.size() || labels2.size() != g2.size())) {
    throw std::invalid_argument("ABM graphs need one label per node");
  }
  return Matcher(g1, labels1, home1, g2, labels2, home2, kind, pin_home).run();
}

bool isomorphic(const DailyNetwork& a, const DailyNetwork& b, MotifKind kind, bool pin_home) {
  const auto la = a.labels();
  const auto lb = b.labels();
  return isomorphic(a.graph, la, a.home_index, b.graph, lb, b.home_index, kind, pin_home);
}

}  // namespace mobmotif
