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


#include "pcconv/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pcconv/graph.hpp"
#include "pcconv/pcpoly.hpp"

namespace pcconv {

namespace {

DenseMatrix glorot_uniform(std::size_t rows, std::size_t cols, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  DenseMatrix w(rows, cols);
  for (double& v : w.data()) v = (2.0 * rng.uniform() - 1.0) * bound;
  return w;
}

// X W + 1 b^T
DenseMatrix affine(const DenseMatrix& x, const DenseMatrix& w, std::span<const double> b) {
  DenseMatrix out = matmul(x, w);
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto row = out.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] += b[j];
  }
  return out;
}

std::vector<double> column_sums(const DenseMatrix& m) {
  std::vector<double> s(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto row = m.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) s[j] += row[j];
  }
  return s;
}

void check_indices(std::span<const std::size_t> idx, std::size_t n, const char* what) {
  if (idx.empty()) throw std::invalid_argument(std::string(what) + ": empty index set");
  for (std::size_t i : idx) {
    if (i >= n) throw std::invalid_argument(std::string(what) + ": index out of range");
  }
}

}  // namespace

ModelMode parse_model_mode(const std::string& name) {
  if (name == "pcnet") return ModelMode::kPcnet;
  if (name == "lowpass") return ModelMode::kLowpass;
  if (name == "mlp_only") return ModelMode::kMlpOnly;
  throw std::invalid_argument("unknown mode '" + name + "' (expected pcnet, lowpass or mlp_only)");
}

std::string to_string(ModelMode mode) {
  switch (mode) {
    case ModelMode::kPcnet:
      return "pcnet";
    case ModelMode::kLowpass:
      return "lowpass";
    case ModelMode::kMlpOnly:
      return "mlp_only";
  }
  return "unknown";
}

void ModelConfig::validate() const {
  if (in_dim == 0) throw std::invalid_argument("model: input dimension must be positive");
  if (n_classes < 1) throw std::invalid_argument("model: need at least one class");
  if (mlp_layers != 1 && mlp_layers != 2) {
    throw std::invalid_argument("model: mlp_layers must be 1 or 2");
  }
  if (mlp_layers == 2 && hidden == 0) {
    throw std::invalid_argument("model: hidden width must be positive");
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw std::invalid_argument("model: dropout must lie in [0, 1)");
  }
  if (K < 1) throw std::invalid_argument("model: K must be at least 1");
  if (N < 0) throw std::invalid_argument("model: N must be non-negative");
  NormalizationConfig{eta, p, t}.validate();
  validate_diffusion_scale(effective_t(), K);
}

double ModelConfig::effective_t() const {
  return mode == ModelMode::kLowpass ? kLowpassDiffusionScale : t;
}

PCNetModel PCNetModel::initialize(const ModelConfig& config, std::uint64_t seed) {
  config.validate();
  Rng rng = Rng(seed).fork(0x5eed);
  PCNetModel model;
  model.config = config;
  const auto n_classes = static_cast<std::size_t>(config.n_classes);
  if (config.mlp_layers == 1) {
    model.w1 = glorot_uniform(config.in_dim, n_classes, rng);
    model.b1.assign(n_classes, 0.0);
  } else {
    model.w1 = glorot_uniform(config.in_dim, config.hidden, rng);
    model.b1.assign(config.hidden, 0.0);
    model.w2 = glorot_uniform(config.hidden, n_classes, rng);
    model.b2.assign(n_classes, 0.0);
  }
  model.theta.assign(static_cast<std::size_t>(config.K) + 1, 0.0);
  model.theta[0] = 1.0;
  if (config.mode != ModelMode::kMlpOnly) {
    for (int k = 1; k <= config.K; ++k) {
      model.theta[static_cast<std::size_t>(k)] = 1.0 / config.K;
    }
  }
  return model;
}

FilterParams PCNetModel::filter_params() const {
  return FilterParams{theta, config.effective_t(), config.p, config.eta, config.N, config.K};
}

void PCNetModel::validate() const {
  config.validate();
  const auto n_classes = static_cast<std::size_t>(config.n_classes);
  const std::size_t width = config.mlp_layers == 1 ? n_classes : config.hidden;
  bool ok = w1.rows() == config.in_dim && w1.cols() == width && b1.size() == width &&
            theta.size() == static_cast<std::size_t>(config.K) + 1;
  if (config.mlp_layers == 2) {
    ok = ok && w2.rows() == config.hidden && w2.cols() == n_classes && b2.size() == n_classes;
  } else {
    ok = ok && w2.empty() && b2.empty();
  }
  if (!ok) throw std::invalid_argument("model: parameter shapes disagree with configuration");
}

DenseMatrix row_softmax(const DenseMatrix& logits) {
  DenseMatrix probs = logits;
  for (std::size_t i = 0; i < probs.rows(); ++i) {
    auto row = probs.row(i);
    const double peak = *std::max_element(row.begin(), row.end());
    double total = 0.0;
    for (double& v : row) {
      v = std::exp(v - peak);
      total += v;
    }
    for (double& v : row) v /= total;
  }
  return probs;
}

ForwardResult forward(const PCNetModel& model, const SparseMatrix& laplacian,
                      const DenseMatrix& x, bool training, Rng* rng) {
  const ModelConfig& cfg = model.config;
  if (x.cols() != cfg.in_dim) {
    throw std::invalid_argument("forward: feature dimension " + std::to_string(x.cols()) +
                                " does not match model input " + std::to_string(cfg.in_dim));
  }
  if (laplacian.rows() != x.rows() || laplacian.cols() != x.rows()) {
    throw std::invalid_argument("forward: operator size does not match node count");
  }
  ForwardCache cache;
  cache.revision = model.revision;
  cache.input = x;

  DenseMatrix transformed;
  if (cfg.mlp_layers == 1) {
    transformed = affine(x, model.w1, model.b1);
  } else {
    cache.pre_activation = affine(x, model.w1, model.b1);
    cache.hidden = cache.pre_activation;
    for (double& v : cache.hidden.data()) v = std::max(v, 0.0);
    if (training && cfg.dropout > 0.0) {
      if (rng == nullptr) throw std::invalid_argument("forward: dropout needs a generator");
      const double keep_scale = 1.0 / (1.0 - cfg.dropout);
      cache.dropout_scale = DenseMatrix(cache.hidden.rows(), cache.hidden.cols());
      auto scale = cache.dropout_scale.data();
      auto hidden = cache.hidden.data();
      for (std::size_t i = 0; i < scale.size(); ++i) {
        scale[i] = rng->uniform() < cfg.dropout ? 0.0 : keep_scale;
        hidden[i] *= scale[i];
      }
    }
    transformed = affine(cache.hidden, model.w2, model.b2);
  }

  const PCCoeffTable table = build_table(cfg.effective_t(), cfg.N, cfg.K);
  const FoldedCoeffs folded = fold_coefficients(model.filter_params(), table);
  cache.powers.reserve(folded.a.size());
  cache.powers.push_back(std::move(transformed));
  cache.logits = cache.powers[0];
  cache.logits *= folded.a[0];
  for (std::size_t n = 1; n < folded.a.size(); ++n) {
    cache.powers.push_back(spmm(laplacian, cache.powers[n - 1]));
    cache.logits.add_scaled(cache.powers[n], folded.a[n]);
  }
  cache.probs = row_softmax(cache.logits);
  return ForwardResult{cache.probs, std::move(cache)};
}

double loss(const DenseMatrix& probs, std::span<const int> labels,
            std::span<const std::size_t> train_idx) {
  check_indices(train_idx, probs.rows(), "loss");
  double total = 0.0;
  for (std::size_t i : train_idx) {
    const auto y = static_cast<std::size_t>(labels[i]);
    total -= std::log(std::max(probs(i, y), kProbabilityFloor));
  }
  return total / static_cast<double>(train_idx.size());
}

Gradients backward(const PCNetModel& model, const SparseMatrix& laplacian,
                   const ForwardCache& cache, std::span<const int> labels,
                   std::span<const std::size_t> train_idx, double weight_decay) {
  check_indices(train_idx, cache.probs.rows(), "backward");
  DenseMatrix logit_grad(cache.probs.rows(), cache.probs.cols());
  const double inv = 1.0 / static_cast<double>(train_idx.size());
  for (std::size_t i : train_idx) {
    auto g = logit_grad.row(i);
    const auto p = cache.probs.row(i);
    for (std::size_t c = 0; c < g.size(); ++c) g[c] = p[c] * inv;
    g[static_cast<std::size_t>(labels[i])] -= inv;
  }
  return backward_from_logit_grad(model, laplacian, cache, logit_grad, weight_decay);
}

Gradients backward_from_logit_grad(const PCNetModel& model, const SparseMatrix& laplacian,
                                   const ForwardCache& cache, const DenseMatrix& logit_grad,
                                   double weight_decay) {
  const ModelConfig& cfg = model.config;
  if (cache.revision != model.revision ||
      cache.powers.size() != static_cast<std::size_t>(cfg.N) + 1) {
    throw StaleCacheError("backward: forward cache does not belong to the current parameters");
  }
  if (logit_grad.rows() != cache.logits.rows() || logit_grad.cols() != cache.logits.cols()) {
    throw std::invalid_argument("backward: logit gradient shape mismatch");
  }
  Gradients grads;

  // Filter coefficients: dL/dtheta_k = sum_n (-1)^n/n! C_n(k,t) <G, L^n H>.
  const PCCoeffTable table = build_table(cfg.effective_t(), cfg.N, cfg.K);
  grads.theta.assign(static_cast<std::size_t>(cfg.K) + 1, 0.0);
  double sign_over_factorial = 1.0;
  for (int n = 0; n <= cfg.N; ++n) {
    if (n > 0) sign_over_factorial *= -1.0 / n;
    const double inner = frobenius_dot(logit_grad, cache.powers[static_cast<std::size_t>(n)]);
    if (n == 0) grads.theta[0] = inner;
    for (int k = 1; k <= cfg.K; ++k) {
      grads.theta[static_cast<std::size_t>(k)] += sign_over_factorial * table.at(n, k) * inner;
    }
  }

  // dL/dH = sum_n a_n L^n G, using the symmetry of L.
  const FoldedCoeffs folded = fold_coefficients(model.filter_params(), table);
  DenseMatrix transformed_grad = logit_grad;
  transformed_grad *= folded.a[0];
  DenseMatrix power = logit_grad;
  for (std::size_t n = 1; n < folded.a.size(); ++n) {
    power = spmm(laplacian, power);
    transformed_grad.add_scaled(power, folded.a[n]);
  }

  if (cfg.mlp_layers == 1) {
    grads.w1 = matmul_tn(cache.input, transformed_grad);
    grads.w1.add_scaled(model.w1, weight_decay);
    grads.b1 = column_sums(transformed_grad);
    return grads;
  }

  grads.w2 = matmul_tn(cache.hidden, transformed_grad);
  grads.w2.add_scaled(model.w2, weight_decay);
  grads.b2 = column_sums(transformed_grad);

  DenseMatrix hidden_grad = matmul_nt(transformed_grad, model.w2);
  auto hg = hidden_grad.data();
  const auto pre = cache.pre_activation.data();
  const bool dropped = !cache.dropout_scale.empty();
  for (std::size_t i = 0; i < hg.size(); ++i) {
    if (dropped) hg[i] *= cache.dropout_scale.data()[i];
    if (!(pre[i] > 0.0)) hg[i] = 0.0;
  }
  grads.w1 = matmul_tn(cache.input, hidden_grad);
  grads.w1.add_scaled(model.w1, weight_decay);
  grads.b1 = column_sums(hidden_grad);
  return grads;
}

void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads,
               double lr) {
  if (params.size() != grads.size()) {
    throw std::invalid_argument("adam_step: parameter and gradient sizes differ");
  }
  if (state.step == 0 && state.m.empty() && state.v.empty()) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
  }
  if (state.m.size() != params.size() || state.v.size() != params.size()) {
    throw std::invalid_argument("adam_step: optimizer state does not match parameters");
  }
  ++state.step;
  const double step = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(kAdamBeta1, step);
  const double correction2 = 1.0 - std::pow(kAdamBeta2, step);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = kAdamBeta1 * state.m[i] + (1.0 - kAdamBeta1) * g;
    state.v[i] = kAdamBeta2 * state.v[i] + (1.0 - kAdamBeta2) * g * g;
    const double m_hat = state.m[i] / correction1;
    const double v_hat = state.v[i] / correction2;
    params[i] -= lr * m_hat / (std::sqrt(v_hat) + kAdamEpsilon);
  }
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("lr must be positive");
  if (!(weight_decay >= 0.0)) throw std::invalid_argument("weight_decay must be non-negative");
  if (!(effective_theta_lr() > 0.0)) throw std::invalid_argument("theta_lr must be positive");
  if (max_epochs < 1) throw std::invalid_argument("max_epochs must be at least 1");
  if (patience < 0 || patience > max_epochs) {
    throw std::invalid_argument("patience must lie in [0, max_epochs]");
  }
}

SparseMatrix model_operator(const ModelConfig& config, const Graph& graph) {
  return pc_laplacian(graph, NormalizationConfig{config.eta, config.p, config.t});
}

TrainResult train(const Dataset& dataset, const Split& split, const ModelConfig& model_config,
                  const TrainConfig& train_config) {
  dataset.validate();
  split.validate(dataset.n_nodes());
  train_config.validate();
  ModelConfig cfg = model_config;
  cfg.in_dim = dataset.feature_dim();
  cfg.n_classes = dataset.n_classes;
  cfg.validate();

  const SparseMatrix laplacian = model_operator(cfg, dataset.graph);
  TrainResult result{PCNetModel::initialize(cfg, train_config.seed), {}, 0, -1.0};
  PCNetModel model = result.model;
  Rng dropout_rng = Rng(train_config.seed).fork(0xd409);
  AdamState w1_state, b1_state, w2_state, b2_state, theta_state;
  const bool theta_frozen = cfg.mode == ModelMode::kMlpOnly;

  int since_improvement = 0;
  for (int epoch = 1; epoch <= train_config.max_epochs; ++epoch) {
    const ForwardResult fw = forward(model, laplacian, dataset.features, true, &dropout_rng);
    const double train_loss = loss(fw.probs, dataset.labels, split.train);
    Gradients g = backward(model, laplacian, fw.cache, dataset.labels, split.train,
                           train_config.weight_decay);

    const double lr = train_config.learning_rate;
    adam_step(w1_state, model.w1.data(), g.w1.data(), lr);
    adam_step(b1_state, model.b1, g.b1, lr);
    if (cfg.mlp_layers == 2) {
      adam_step(w2_state, model.w2.data(), g.w2.data(), lr);
      adam_step(b2_state, model.b2, g.b2, lr);
    }
    if (!theta_frozen) {
      adam_step(theta_state, model.theta, g.theta, train_config.effective_theta_lr());
    }
    ++model.revision;

    const ForwardResult eval = forward(model, laplacian, dataset.features, false, nullptr);
    const double val_acc = accuracy(eval.probs, dataset.labels, split.val);
    result.history.push_back({epoch, train_loss, val_acc});

    if (val_acc > result.best_val_acc) {
      result.best_val_acc = val_acc;
      result.best_epoch = epoch;
      result.model = model;
      since_improvement = 0;
    } else {
      ++since_improvement;
    }
    if (since_improvement >= train_config.patience) break;
  }
  return result;
}

std::vector<int> predict(const DenseMatrix& probs) {
  std::vector<int> out(probs.rows());
  for (std::size_t i = 0; i < probs.rows(); ++i) {
    const auto row = probs.row(i);
    out[i] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return out;
}

double accuracy(const DenseMatrix& probs, std::span<const int> labels,
                std::span<const std::size_t> idx) {
  check_indices(idx, probs.rows(), "accuracy");
  std::size_t correct = 0;
  for (std::size_t i : idx) {
    const auto row = probs.row(i);
    const auto best = std::max_element(row.begin(), row.end()) - row.begin();
    if (best == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(idx.size());
}

double evaluate(const PCNetModel& model, const SparseMatrix& laplacian, const Dataset& dataset,
                std::span<const std::size_t> idx) {
  const ForwardResult fw = forward(model, laplacian, dataset.features, false, nullptr);
  return accuracy(fw.probs, dataset.labels, idx);
}

double evaluate(const PCNetModel& model, const Dataset& dataset,
                std::span<const std::size_t> idx) {
  return evaluate(model, model_operator(model.config, dataset.graph), dataset, idx);
}

}  // namespace pcconv
