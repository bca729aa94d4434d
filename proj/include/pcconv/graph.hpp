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


#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "pcconv/linalg.hpp"

namespace pcconv {

// Unordered edge stored with u < v.
struct Edge {
  std::size_t u;
  std::size_t v;

  bool operator==(const Edge&) const = default;
  auto operator<=>(const Edge&) const = default;
};

// Simple undirected graph. Edges are canonicalized (u < v), sorted and
// deduplicated on construction; self-loops are rejected.
class Graph {
 public:
  Graph() = default;
  Graph(std::size_t n_nodes, std::span<const std::pair<std::size_t, std::size_t>> edges);
  Graph(std::size_t n_nodes, std::initializer_list<std::pair<std::size_t, std::size_t>> edges);

  std::size_t n_nodes() const { return n_nodes_; }
  std::size_t n_edges() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }

  // d_i counted from stored edges only.
  std::vector<double> degrees() const;

 private:
  std::size_t n_nodes_ = 0;
  std::vector<Edge> edges_;
};

struct NormalizationConfig {
  double eta = 0.5;  // degree exponent, in [0, 1]
  double p = 2.0;    // self-loop measure, >= 2
  double t = 0.5;    // diffusion scale, only used for feasibility checks

  // Throws std::invalid_argument when eta or p is out of range.
  void validate() const;
};

// (D+I)^-eta (A+I) (D+I)^-eta
SparseMatrix normalized_adjacency(const Graph& g, double eta);

// (p-1) I - normalized_adjacency(g, eta). With eta = 0.5 and p = 2 this is
// the standard normalized Laplacian; raising p shifts the spectrum by p-2.
SparseMatrix pc_laplacian(const Graph& g, const NormalizationConfig& cfg);

// I - (D+I)^-1/2 (A+I) (D+I)^-1/2
SparseMatrix standard_laplacian(const Graph& g);

// Fraction of edges whose endpoints share a label.
double edge_homophily(const Graph& g, std::span<const int> labels);

// Half-open interval [lower, upper) of self-loop measures p for which both
// two-fold energy functions stay positive semi-definite.
struct FeasibleInterval {
  double lower = 2.0;
  double upper = 2.0;

  bool empty() const { return !(upper > lower); }
  bool contains(double p) const { return p >= lower && p < upper; }
};

FeasibleInterval psd_feasible_p(double t, double alpha1);

}  // namespace pcconv
