#include "mobmotif/digraph.hpp"

#include <stdexcept>

namespace mobmotif {

bool Digraph::add_edge(std::size_t from, std::size_t to) {
  if (from >= n_ || to >= n_) throw std::invalid_argument("edge endpoint out of range");
  if (from == to) throw std::invalid_argument("self-loops are not allowed");
  auto& cell = adj_[from * n_ + to];
  const bool fresh = cell == 0;
  cell = 1;
  return fresh;
}

std::size_t Digraph::out_degree(std::size_t v) const {
  std::size_t d = 0;
  for (std::size_t u = 0; u < n_; ++u) d += adj_[v * n_ + u];
  return d;
}

std::size_t Digraph::in_degree(std::size_t v) const {
  std::size_t d = 0;
  for (std::size_t u = 0; u < n_; ++u) d += adj_[u * n_ + v];
  return d;
}

std::size_t Digraph::edge_count() const {
  std::size_t c = 0;
  for (auto cell : adj_) c += cell;
  return c;
}

std::vector<std::pair<std::size_t, std::size_t>> Digraph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (has_edge(i, j)) out.emplace_back(i, j);
    }
  }
  return out;
}

}  // namespace mobmotif
