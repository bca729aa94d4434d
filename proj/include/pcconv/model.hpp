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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcconv/data.hpp"
#include "pcconv/filter.hpp"
#include "pcconv/linalg.hpp"
#include "pcconv/rng.hpp"

namespace pcconv {

enum class ModelMode {
  kPcnet,    // everything learnable
  kLowpass,  // t pinned near zero: a pure (1 - x)^k filter bank
  kMlpOnly,  // theta frozen at e_0, propagation has no effect
};

ModelMode parse_model_mode(const std::string& name);
std::string to_string(ModelMode mode);

inline constexpr double kLowpassDiffusionScale = 1e-6;
inline constexpr double kProbabilityFloor = 1e-12;

struct ModelConfig {
  std::size_t in_dim = 0;
  std::size_t hidden = 64;
  int n_classes = 0;
  int mlp_layers = 2;  // 1: X W1 + b1; 2: linear-ReLU-dropout-linear
  double dropout = 0.5;
  double t = 0.5;
  double p = 2.0;
  double eta = 0.5;
  int N = 10;
  int K = 5;
  ModelMode mode = ModelMode::kPcnet;

  void validate() const;
  // t actually used by the filter; kLowpass overrides the configured value.
  double effective_t() const;
};

// PCNet: softmax(g_t(L) Theta(X)) with g_t the PC-Conv filter bank.
struct PCNetModel {
  ModelConfig config;
  DenseMatrix w1;  // in_dim x hidden (or in_dim x C with one layer)
  std::vector<double> b1;
  DenseMatrix w2;  // hidden x C; empty with one layer
  std::vector<double> b2;
  std::vector<double> theta;  // theta_0..theta_K
  // Bumped on every parameter update so stale forward caches are detected.
  std::uint64_t revision = 0;

  // Glorot-uniform weights, zero biases; theta_0 = 1 and theta_k = 1/K, or
  // e_0 in kMlpOnly mode.
  static PCNetModel initialize(const ModelConfig& config, std::uint64_t seed);

  FilterParams filter_params() const;
  // Shapes agree with the configuration.
  void validate() const;
};

struct ForwardCache {
  std::uint64_t revision = 0;
  DenseMatrix input;           // X
  DenseMatrix pre_activation;  // X W1 + b1 (two-layer mode)
  DenseMatrix dropout_scale;   // 0 or 1/(1-rate) per hidden unit; empty when inactive
  DenseMatrix hidden;          // ReLU + dropout output (two-layer mode)
  std::vector<DenseMatrix> powers;  // L^n Theta(X), n = 0..N
  DenseMatrix logits;
  DenseMatrix probs;
};

struct ForwardResult {
  DenseMatrix probs;
  ForwardCache cache;
};

// rng is only consulted for dropout when training.
ForwardResult forward(const PCNetModel& model, const SparseMatrix& laplacian,
                      const DenseMatrix& x, bool training, Rng* rng);

DenseMatrix row_softmax(const DenseMatrix& logits);

// Mean negative log-likelihood over train_idx with probabilities floored at
// kProbabilityFloor.
double loss(const DenseMatrix& probs, std::span<const int> labels,
            std::span<const std::size_t> train_idx);

struct Gradients {
  DenseMatrix w1;
  std::vector<double> b1;
  DenseMatrix w2;
  std::vector<double> b2;
  std::vector<double> theta;
};

class StaleCacheError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Gradients of loss() (plus weight_decay/2 * |W|^2 over W1, W2) with respect
// to every parameter.
Gradients backward(const PCNetModel& model, const SparseMatrix& laplacian,
                   const ForwardCache& cache, std::span<const int> labels,
                   std::span<const std::size_t> train_idx, double weight_decay);

// Same, starting from an explicit dLoss/dlogits.
Gradients backward_from_logit_grad(const PCNetModel& model, const SparseMatrix& laplacian,
                                   const ForwardCache& cache, const DenseMatrix& logit_grad,
                                   double weight_decay);

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t step = 0;
};

inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEpsilon = 1e-8;

// One bias-corrected Adam update. The state is sized on first use.
void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads,
               double lr);

struct TrainConfig {
  double learning_rate = 0.01;
  double weight_decay = 5e-4;
  double theta_learning_rate = -1.0;  // negative: reuse learning_rate
  int max_epochs = 1000;
  int patience = 200;
  std::uint64_t seed = 0;

  void validate() const;
  double effective_theta_lr() const {
    return theta_learning_rate < 0.0 ? learning_rate : theta_learning_rate;
  }
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double val_acc = 0.0;
};

struct TrainResult {
  PCNetModel model;  // parameters from the best-validation epoch
  std::vector<EpochRecord> history;
  int best_epoch = 0;
  double best_val_acc = 0.0;
};

// Builds the operator used by the model for a graph.
SparseMatrix model_operator(const ModelConfig& config, const Graph& graph);

// Full-batch training with early stopping on validation accuracy.
TrainResult train(const Dataset& dataset, const Split& split, const ModelConfig& model_config,
                  const TrainConfig& train_config);

// Argmax class per row, ties to the lowest index.
std::vector<int> predict(const DenseMatrix& probs);

double accuracy(const DenseMatrix& probs, std::span<const int> labels,
                std::span<const std::size_t> idx);

double evaluate(const PCNetModel& model, const SparseMatrix& laplacian, const Dataset& dataset,
                std::span<const std::size_t> idx);
double evaluate(const PCNetModel& model, const Dataset& dataset,
                std::span<const std::size_t> idx);

// Binary model file: "PCN1" followed by little-endian u64 dimensions, the
// parameter blocks as little-endian doubles, then the filter hyperparameters.
void save_model(const PCNetModel& model, const std::filesystem::path& path);
PCNetModel load_model(const std::filesystem::path& path);

}  // namespace pcconv
