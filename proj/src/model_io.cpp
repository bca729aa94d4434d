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


#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "pcconv/model.hpp"

namespace pcconv {

namespace {

constexpr std::array<char, 4> kMagic = {'P', 'C', 'N', '1'};

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

void put_block(std::string& out, std::span<const double> values) {
  for (double v : values) put_f64(out, v);
}

class Reader {
 public:
  explicit Reader(std::string bytes) : bytes_(std::move(bytes)) {}

  std::uint64_t u64() {
    if (pos_ + 8 > bytes_.size()) throw std::runtime_error("model file truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  void block(std::span<double> out) {
    for (double& v : out) v = f64();
  }
  bool exhausted() const { return pos_ == bytes_.size(); }
  void skip(std::size_t n) { pos_ += n; }

 private:
  std::string bytes_;
  std::size_t pos_ = 0;
};

// Dimensions beyond this are treated as corruption rather than allocated.
constexpr std::uint64_t kMaxDim = std::uint64_t{1} << 28;

std::size_t dim(Reader& r) {
  const std::uint64_t v = r.u64();
  if (v > kMaxDim) throw std::runtime_error("model file: implausible dimension");
  return static_cast<std::size_t>(v);
}

}  // namespace

void save_model(const PCNetModel& model, const std::filesystem::path& path) {
  model.validate();
  const ModelConfig& cfg = model.config;
  std::string out(kMagic.begin(), kMagic.end());
  put_u64(out, cfg.in_dim);
  put_u64(out, cfg.hidden);
  put_u64(out, static_cast<std::uint64_t>(cfg.n_classes));
  put_u64(out, static_cast<std::uint64_t>(cfg.mlp_layers));
  put_u64(out, static_cast<std::uint64_t>(cfg.K));
  put_u64(out, static_cast<std::uint64_t>(cfg.N));
  put_u64(out, static_cast<std::uint64_t>(cfg.mode));
  put_block(out, model.w1.data());
  put_block(out, model.b1);
  if (cfg.mlp_layers == 2) {
    put_block(out, model.w2.data());
    put_block(out, model.b2);
  }
  put_block(out, model.theta);
  put_f64(out, cfg.t);
  put_f64(out, cfg.p);
  put_f64(out, cfg.eta);
  put_f64(out, cfg.dropout);

  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write model file " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
}

PCNetModel load_model(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open model file " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  if (bytes.size() < kMagic.size() || std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
    throw std::runtime_error("not a PCN1 model file: " + path.string());
  }
  Reader r(std::move(bytes));
  r.skip(kMagic.size());

  PCNetModel model;
  ModelConfig& cfg = model.config;
  cfg.in_dim = dim(r);
  cfg.hidden = dim(r);
  cfg.n_classes = static_cast<int>(dim(r));
  cfg.mlp_layers = static_cast<int>(dim(r));
  cfg.K = static_cast<int>(dim(r));
  cfg.N = static_cast<int>(dim(r));
  const std::uint64_t mode = r.u64();
  if (mode > static_cast<std::uint64_t>(ModelMode::kMlpOnly)) {
    throw std::runtime_error("model file: unknown mode");
  }
  cfg.mode = static_cast<ModelMode>(mode);
  if (cfg.mlp_layers != 1 && cfg.mlp_layers != 2) {
    throw std::runtime_error("model file: bad layer count");
  }

  const auto n_classes = static_cast<std::size_t>(cfg.n_classes);
  const std::size_t width = cfg.mlp_layers == 1 ? n_classes : cfg.hidden;
  model.w1 = DenseMatrix(cfg.in_dim, width);
  r.block(model.w1.data());
  model.b1.resize(width);
  r.block(model.b1);
  if (cfg.mlp_layers == 2) {
    model.w2 = DenseMatrix(cfg.hidden, n_classes);
    r.block(model.w2.data());
    model.b2.resize(n_classes);
    r.block(model.b2);
  }
  model.theta.resize(static_cast<std::size_t>(cfg.K) + 1);
  r.block(model.theta);
  cfg.t = r.f64();
  cfg.p = r.f64();
  cfg.eta = r.f64();
  cfg.dropout = r.f64();
  if (!r.exhausted()) throw std::runtime_error("model file: trailing bytes");
  model.validate();
  return model;
}

}  // namespace pcconv
