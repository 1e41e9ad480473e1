#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace mobmotif {

/// Small simple directed graph on nodes 0..n-1 with a dense adjacency matrix.
/// Self-loops are rejected.
class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(std::size_t n) : n_(n), adj_(n * n, 0) {}

  std::size_t size() const { return n_; }

  /// Returns false when the edge already existed. Throws std::invalid_argument
  /// on self-loops or out-of-range nodes.
  bool add_edge(std::size_t from, std::size_t to);
  bool has_edge(std::size_t from, std::size_t to) const { return adj_[from * n_ + to] != 0; }

  std::size_t out_degree(std::size_t v) const;
  std::size_t in_degree(std::size_t v) const;
  std::size_t edge_count() const;

  /// Edges in row-major order.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;

  friend bool operator==(const Digraph&, const Digraph&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> adj_;
};

}  // namespace mobmotif
