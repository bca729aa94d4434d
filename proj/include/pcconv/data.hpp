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
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcconv/graph.hpp"
#include "pcconv/linalg.hpp"

namespace pcconv {

struct Dataset {
  Graph graph;
  DenseMatrix features;     // m x d
  std::vector<int> labels;  // values in 0..n_classes-1
  int n_classes = 0;

  std::size_t n_nodes() const { return labels.size(); }
  std::size_t feature_dim() const { return features.cols(); }

  // Row counts agree, labels lie in 0..C-1 and every class occurs.
  void validate() const;
};

// Malformed dataset files; the message carries file and line.
class DataFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reads edges.tsv, features.csv and labels.csv from a directory.
Dataset load_dataset(const std::filesystem::path& directory);
// Writes the same three files; reals are printed with round-trip precision.
void save_dataset(const Dataset& dataset, const std::filesystem::path& directory);

// Scales each feature row to unit L1 norm; all-zero rows are left alone.
void row_normalize(DenseMatrix& features);

struct SbmParams {
  std::size_t n_nodes = 600;
  int n_classes = 3;
  double p_in = 0.05;
  double p_out = 0.005;
  std::size_t feature_dim = 16;
  double mu = 1.0;     // class-mean magnitude
  double sigma = 1.0;  // isotropic feature noise
  std::uint64_t seed = 0;

  void validate() const;
};

// Stochastic block model with round-robin class assignment and Gaussian class
// features. The mean of class c is mu * e_(c mod d).
Dataset sbm_generate(const SbmParams& params);

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;

  // Pairwise disjoint, in range, each part non-empty.
  void validate(std::size_t n_nodes) const;
};

enum class SparseSplitMode {
  kCitation,  // 20 per class / 500 / 1000
  kFraction,  // 2.5% / 2.5% / rest
};

Split split_sparse(const Dataset& dataset, std::uint64_t seed, SparseSplitMode mode);

// floor(train_frac m) / floor(val_frac m) / remainder after a seeded shuffle.
Split split_ratio(const Dataset& dataset, double train_frac, double val_frac,
                  std::uint64_t seed);

}  // namespace pcconv
