// Copyright 2026 The PCConv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "pcconv/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pcconv {

Graph::Graph(std::size_t n_nodes,
             std::span<const std::pair<std::size_t, std::size_t>> edges)
    : n_nodes_(n_nodes) {
  edges_.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    if (a >= n_nodes || b >= n_nodes) {
      throw std::invalid_argument("Graph: edge endpoint " +
                                  std::to_string(std::max(a, b)) +
                                  " out of range for " + std::to_string(n_nodes) +
                                  " nodes");
    }
    if (a == b) {
      throw std::invalid_argument("Graph: self-loop at node " + std::to_string(a));
    }
    edges_.push_back({std::min(a, b), std::max(a, b)});
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

Graph::Graph(std::size_t n_nodes,
             std::initializer_list<std::pair<std::size_t, std::size_t>> edges)
    : Graph(n_nodes, std::span<const std::pair<std::size_t, std::size_t>>(
                         edges.begin(), edges.size())) {}

std::vector<double> Graph::degrees() const {
  std::vector<double> deg(n_nodes_, 0.0);
  for (const auto& e : edges_) {
    deg[e.u] += 1.0;
    deg[e.v] += 1.0;
  }
  return deg;
}

void NormalizationConfig::validate() const {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("eta must lie in [0, 1], got " + std::to_string(eta));
  }
  if (!(p >= 2.0)) {
    throw std::invalid_argument("p must be at least 2, got " + std::to_string(p));
  }
}

SparseMatrix normalized_adjacency(const Graph& g, double eta) {
  const std::vector<double> deg = g.degrees();
  std::vector<double> scale(g.n_nodes());
  for (std::size_t i = 0; i < scale.size(); ++i) scale[i] = std::pow(deg[i] + 1.0, -eta);

  std::vector<Triplet> entries;
  entries.reserve(2 * g.n_edges() + g.n_nodes());
  for (std::size_t i = 0; i < g.n_nodes(); ++i) {
    entries.push_back({i, i, scale[i] * scale[i]});
  }
  for (const auto& e : g.edges()) {
    // Same product for both halves keeps the result exactly symmetric.
    const double w = scale[e.u] * scale[e.v];
    entries.push_back({e.u, e.v, w});
    entries.push_back({e.v, e.u, w});
  }
  return SparseMatrix::from_triplets(g.n_nodes(), g.n_nodes(), std::move(entries));
}

SparseMatrix pc_laplacian(const Graph& g, const NormalizationConfig& cfg) {
  cfg.validate();
  // Built as (I - A_norm) + (p-2) I so that shifting p is exact entrywise.
  return normalized_adjacency(g, cfg.eta)
      .scaled(-1.0)
      .add_diagonal(1.0)
      .add_diagonal(cfg.p - 2.0);
}

SparseMatrix standard_laplacian(const Graph& g) {
  return pc_laplacian(g, NormalizationConfig{0.5, 2.0});
}

double edge_homophily(const Graph& g, std::span<const int> labels) {
  if (labels.size() != g.n_nodes()) {
    throw std::invalid_argument("edge_homophily: label count does not match node count");
  }
  if (g.n_edges() == 0) {
    throw std::domain_error("edge_homophily: ratio undefined for a graph without edges");
  }
  std::size_t same = 0;
  for (const auto& e : g.edges()) {
    if (labels[e.u] == labels[e.v]) ++same;
  }
  return static_cast<double>(same) / static_cast<double>(g.n_edges());
}

FeasibleInterval psd_feasible_p(double t, double alpha1) {
  if (!(t > 0.0)) {
    throw std::invalid_argument("psd_feasible_p: t must be positive");
  }
  if (!(alpha1 > 0.0 && alpha1 < 1.0)) {
    throw std::invalid_argument("psd_feasible_p: alpha1 must lie in (0, 1)");
  }
  return FeasibleInterval{2.0, -std::log(alpha1) / t};
}

}  // namespace pcconv
