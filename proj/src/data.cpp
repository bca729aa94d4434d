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


#include "pcconv/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <utility>

#include "pcconv/rng.hpp"

namespace pcconv {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataFormatError("cannot open " + path.string());
  return in;
}

[[noreturn]] void parse_fail(const std::filesystem::path& path, std::size_t line,
                             const std::string& what) {
  throw DataFormatError(path.filename().string() + ":" + std::to_string(line) + ": " + what);
}

bool blank_or_comment(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

std::vector<std::string> split_fields(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, sep)) fields.push_back(field);
  return fields;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
bool parse_number(const std::string& text, T& out) {
  const std::string s = trim(text);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void Dataset::validate() const {
  if (features.rows() != labels.size()) {
    throw std::invalid_argument("dataset: feature rows (" + std::to_string(features.rows()) +
                                ") and labels (" + std::to_string(labels.size()) +
                                ") disagree");
  }
  if (graph.n_nodes() != labels.size()) {
    throw std::invalid_argument("dataset: graph node count disagrees with labels");
  }
  if (n_classes < 1) throw std::invalid_argument("dataset: no classes");
  std::vector<bool> seen(static_cast<std::size_t>(n_classes), false);
  for (int y : labels) {
    if (y < 0 || y >= n_classes) {
      throw std::invalid_argument("dataset: label " + std::to_string(y) + " out of range");
    }
    seen[static_cast<std::size_t>(y)] = true;
  }
  for (std::size_t c = 0; c < seen.size(); ++c) {
    if (!seen[c]) {
      throw std::invalid_argument("dataset: class " + std::to_string(c) + " has no nodes");
    }
  }
}

Dataset load_dataset(const std::filesystem::path& directory) {
  const auto labels_path = directory / "labels.csv";
  const auto features_path = directory / "features.csv";
  const auto edges_path = directory / "edges.tsv";

  Dataset ds;
  {
    std::ifstream in = open_input(labels_path);
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
      if (blank_or_comment(line)) continue;
      int y = 0;
      if (!parse_number(line, y)) parse_fail(labels_path, lineno, "expected an integer label");
      if (y < 0) parse_fail(labels_path, lineno, "negative label");
      ds.labels.push_back(y);
    }
  }
  const std::size_t m = ds.labels.size();
  if (m == 0) throw DataFormatError("labels.csv: no labels");
  const int max_label = *std::max_element(ds.labels.begin(), ds.labels.end());
  ds.n_classes = max_label + 1;
  {
    std::vector<bool> seen(static_cast<std::size_t>(ds.n_classes), false);
    for (int y : ds.labels) seen[static_cast<std::size_t>(y)] = true;
    for (std::size_t c = 0; c < seen.size(); ++c) {
      if (!seen[c]) {
        throw DataFormatError("labels.csv: label gap, class " + std::to_string(c) +
                              " is never used");
      }
    }
  }

  {
    std::ifstream in = open_input(features_path);
    std::string line;
    std::vector<double> values;
    std::size_t n_rows = 0;
    std::size_t dim = 0;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
      if (blank_or_comment(line)) continue;
      const auto fields = split_fields(line, ',');
      if (n_rows == 0) dim = fields.size();
      if (fields.size() != dim) {
        parse_fail(features_path, lineno,
                   "expected " + std::to_string(dim) + " columns, got " +
                       std::to_string(fields.size()));
      }
      for (const auto& f : fields) {
        double v = 0.0;
        if (!parse_number(f, v)) parse_fail(features_path, lineno, "bad real '" + f + "'");
        values.push_back(v);
      }
      ++n_rows;
    }
    if (n_rows != m) {
      throw DataFormatError("features.csv: " + std::to_string(n_rows) + " rows but " +
                            std::to_string(m) + " labels");
    }
    ds.features = DenseMatrix(n_rows, dim, std::move(values));
  }

  {
    std::ifstream in = open_input(edges_path);
    std::string line;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
      if (blank_or_comment(line)) continue;
      std::istringstream fields(line);
      std::string a_text;
      std::string b_text;
      std::string extra;
      fields >> a_text >> b_text;
      std::size_t a = 0;
      std::size_t b = 0;
      if (!parse_number(a_text, a) || !parse_number(b_text, b) || (fields >> extra)) {
        parse_fail(edges_path, lineno, "expected two node ids");
      }
      if (a >= m || b >= m) parse_fail(edges_path, lineno, "node id out of range");
      if (a == b) parse_fail(edges_path, lineno, "self-loop");
      edges.emplace_back(a, b);
    }
    ds.graph = Graph(m, edges);
  }
  ds.validate();
  return ds;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& directory) {
  std::filesystem::create_directories(directory);
  {
    std::ofstream out(directory / "edges.tsv");
    for (const auto& e : dataset.graph.edges()) out << e.u << '\t' << e.v << '\n';
  }
  {
    std::ofstream out(directory / "features.csv");
    for (std::size_t i = 0; i < dataset.features.rows(); ++i) {
      const auto row = dataset.features.row(i);
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (j > 0) out << ',';
        out << format_real(row[j]);
      }
      out << '\n';
    }
  }
  {
    std::ofstream out(directory / "labels.csv");
    for (int y : dataset.labels) out << y << '\n';
  }
}

void row_normalize(DenseMatrix& features) {
  for (std::size_t i = 0; i < features.rows(); ++i) {
    auto row = features.row(i);
    double s = 0.0;
    for (double v : row) s += std::abs(v);
    if (s == 0.0) continue;
    for (double& v : row) v /= s;
  }
}

void SbmParams::validate() const {
  if (n_classes < 1) throw std::invalid_argument("sbm: need at least one class");
  if (n_nodes < 2 * static_cast<std::size_t>(n_classes)) {
    throw std::invalid_argument("sbm: need at least 2 nodes per class");
  }
  if (!(p_in >= 0.0 && p_in <= 1.0) || !(p_out >= 0.0 && p_out <= 1.0)) {
    throw std::invalid_argument("sbm: edge probabilities must lie in [0, 1]");
  }
  if (p_in == 0.0 && (p_out == 0.0 || n_classes == 1)) {
    throw std::invalid_argument("sbm: all edge probabilities are zero, graph would be edgeless");
  }
  if (feature_dim == 0) throw std::invalid_argument("sbm: feature dimension must be positive");
  if (!(sigma >= 0.0)) throw std::invalid_argument("sbm: sigma must be non-negative");
}

Dataset sbm_generate(const SbmParams& params) {
  params.validate();
  const std::size_t m = params.n_nodes;
  const auto n_classes = static_cast<std::size_t>(params.n_classes);
  Dataset ds;
  ds.n_classes = params.n_classes;
  ds.labels.resize(m);
  for (std::size_t i = 0; i < m; ++i) ds.labels[i] = static_cast<int>(i % n_classes);

  const Rng root(params.seed);
  Rng edge_rng = root.fork(1);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t v = u + 1; v < m; ++v) {
      const double prob = ds.labels[u] == ds.labels[v] ? params.p_in : params.p_out;
      if (edge_rng.uniform() < prob) edges.emplace_back(u, v);
    }
  }
  ds.graph = Graph(m, edges);

  Rng feature_rng = root.fork(2);
  ds.features = DenseMatrix(m, params.feature_dim);
  for (std::size_t i = 0; i < m; ++i) {
    auto row = ds.features.row(i);
    for (double& v : row) v = params.sigma * feature_rng.normal();
    row[static_cast<std::size_t>(ds.labels[i]) % params.feature_dim] += params.mu;
  }
  ds.validate();
  return ds;
}

void Split::validate(std::size_t n_nodes) const {
  if (train.empty() || val.empty() || test.empty()) {
    throw std::invalid_argument("split: train, validation and test must be non-empty");
  }
  std::vector<int> owner(n_nodes, -1);
  int part = 0;
  for (const auto* ids : {&train, &val, &test}) {
    for (std::size_t i : *ids) {
      if (i >= n_nodes) throw std::invalid_argument("split: node index out of range");
      if (owner[i] != -1) throw std::invalid_argument("split: parts are not disjoint");
      owner[i] = part;
    }
    ++part;
  }
}

Split split_sparse(const Dataset& dataset, std::uint64_t seed, SparseSplitMode mode) {
  const std::size_t m = dataset.n_nodes();
  Rng rng(seed);
  Split split;
  if (mode == SparseSplitMode::kCitation) {
    constexpr std::size_t kPerClass = 20;
    constexpr std::size_t kVal = 500;
    constexpr std::size_t kTest = 1000;
    std::vector<bool> taken(m, false);
    for (int c = 0; c < dataset.n_classes; ++c) {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < m; ++i) {
        if (dataset.labels[i] == c) members.push_back(i);
      }
      if (members.size() < kPerClass) {
        throw std::invalid_argument("citation split: class " + std::to_string(c) +
                                    " has fewer than 20 nodes");
      }
      rng.shuffle(std::span<std::size_t>(members));
      for (std::size_t j = 0; j < kPerClass; ++j) {
        split.train.push_back(members[j]);
        taken[members[j]] = true;
      }
    }
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < m; ++i) {
      if (!taken[i]) rest.push_back(i);
    }
    if (rest.size() < kVal + kTest) {
      throw std::invalid_argument("citation split: need 1500 nodes outside the training set");
    }
    rng.shuffle(std::span<std::size_t>(rest));
    split.val.assign(rest.begin(), rest.begin() + kVal);
    split.test.assign(rest.begin() + kVal, rest.begin() + kVal + kTest);
  } else {
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(order));
    const auto n_train = static_cast<std::size_t>(std::floor(0.025 * static_cast<double>(m)));
    const std::size_t n_val = n_train;
    if (n_train == 0 || n_train + n_val >= m) {
      throw std::invalid_argument("fraction split: too few nodes for 2.5%/2.5%/95%");
    }
    split.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    split.val.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train),
                     order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
    split.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), order.end());
  }
  split.validate(m);
  return split;
}

Split split_ratio(const Dataset& dataset, double train_frac, double val_frac,
                  std::uint64_t seed) {
  if (!(train_frac > 0.0 && val_frac > 0.0 && train_frac + val_frac < 1.0)) {
    throw std::invalid_argument("ratio split: need train, val > 0 and train + val < 1");
  }
  const std::size_t m = dataset.n_nodes();
  // The small bias absorbs representation error such as 0.6 * 100 = 59.999...
  const auto count = [m](double frac) {
    return static_cast<std::size_t>(std::floor(frac * static_cast<double>(m) + 1e-9));
  };
  const std::size_t n_train = count(train_frac);
  const std::size_t n_val = count(val_frac);
  if (n_train == 0 || n_val == 0 || n_train + n_val >= m) {
    throw std::invalid_argument("ratio split: a part would be empty");
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  Split split;
  const auto mid = static_cast<std::ptrdiff_t>(n_train);
  const auto end_val = static_cast<std::ptrdiff_t>(n_train + n_val);
  split.train.assign(order.begin(), order.begin() + mid);
  split.val.assign(order.begin() + mid, order.begin() + end_val);
  split.test.assign(order.begin() + end_val, order.end());
  split.validate(m);
  return split;
}

}  // namespace pcconv
