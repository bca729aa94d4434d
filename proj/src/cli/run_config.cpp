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


#include "run_config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace pcconv::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const KeySpec* find_key(const std::string& key) {
  const auto& keys = known_keys();
  const auto it = std::find_if(keys.begin(), keys.end(),
                               [&](const KeySpec& k) { return k.name == key; });
  return it == keys.end() ? nullptr : &*it;
}

template <typename T>
T parse_as(const std::string& key, const std::string& text) {
  T value{};
  const std::string s = trim(text);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("config key '" + key + "': cannot parse '" + text + "'");
  }
  return value;
}

}  // namespace

const std::vector<KeySpec>& known_keys() {
  static const std::vector<KeySpec> keys = {
      {"eta", "0.5", "degree normalization exponent in [0, 1]"},
      {"p", "2", "self-loop measure, at least 2"},
      {"t", "0.5", "diffusion scale, positive and not an integer in 1..K"},
      {"N", "10", "truncation order of the Poisson-Charlier series"},
      {"K", "5", "filter bank order"},
      {"hidden", "64", "hidden width of the two-layer feature transform"},
      {"mlp_layers", "2", "1 (linear) or 2 (linear-ReLU-dropout-linear)"},
      {"dropout", "0.5", "dropout rate after the hidden ReLU"},
      {"lr", "0.01", "learning rate for weights and biases"},
      {"theta_lr", "", "learning rate for filter coefficients (default: lr)"},
      {"weight_decay", "0.0005", "L2 penalty on weight matrices"},
      {"max_epochs", "1000", "maximum training epochs"},
      {"patience", "200", "early stopping patience in epochs"},
      {"seed", "0", "seed for splits, initialization, dropout and generators"},
      {"mode", "pcnet", "pcnet, lowpass or mlp_only"},
      {"split", "ratio:0.6/0.2", "citation, sparse or ratio:TRAIN/VAL"},
      {"dataset_dir", "", "directory holding edges.tsv, features.csv, labels.csv"},
      {"out_dir", "pcnet_out", "output directory"},
      {"model", "", "model file (eval, response); default out_dir/model.pcn for eval"},
      {"theta", "", "comma-separated theta_0..theta_K for response"},
      {"grid", "201", "number of points on [0, 2] for response and fit"},
      {"target", "low_band_pass", "fit target filter"},
      {"m", "600", "node count for synth (oracle-check defaults to 50)"},
      {"classes", "3", "class count for synth"},
      {"p_in", "0.05", "intra-class edge probability for synth"},
      {"p_out", "0.005", "inter-class edge probability for synth"},
      {"features", "16", "feature dimension for synth"},
      {"mu", "1", "class-mean magnitude for synth"},
      {"sigma", "1", "feature noise for synth"},
      {"row_normalize", "false", "L1-normalize feature rows after loading"},
      {"alpha1", "0.1", "heterophilic balance weight for oracle-check"},
      {"alpha2", "1", "homophilic balance weight for oracle-check"},
  };
  return keys;
}

void RunConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
    }
    set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (find_key(key) == nullptr) throw ConfigError("unknown config key '" + key + "'");
  values_[key] = value;
}

bool RunConfig::is_set(const std::string& key) const { return values_.contains(key); }

std::string RunConfig::get(const std::string& key) const {
  const KeySpec* spec = find_key(key);
  if (spec == nullptr) throw ConfigError("unknown config key '" + key + "'");
  const auto it = values_.find(key);
  return it == values_.end() ? spec->default_value : it->second;
}

double RunConfig::get_double(const std::string& key) const {
  return parse_as<double>(key, get(key));
}

int RunConfig::get_int(const std::string& key) const { return parse_as<int>(key, get(key)); }

std::uint64_t RunConfig::get_u64(const std::string& key) const {
  return parse_as<std::uint64_t>(key, get(key));
}

bool RunConfig::get_bool(const std::string& key) const {
  const std::string v = trim(get(key));
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config key '" + key + "': expected a boolean, got '" + v + "'");
}

std::vector<double> RunConfig::get_doubles(const std::string& key) const {
  std::vector<double> out;
  const std::string text = get(key);
  if (trim(text).empty()) return out;
  std::istringstream stream(text);
  std::string field;
  while (std::getline(stream, field, ',')) out.push_back(parse_as<double>(key, field));
  return out;
}

std::string RunConfig::resolved() const {
  std::vector<std::string> names;
  for (const auto& k : known_keys()) names.push_back(k.name);
  std::sort(names.begin(), names.end());
  std::string out;
  for (const auto& n : names) out += n + "=" + get(n) + "\n";
  return out;
}

}  // namespace pcconv::cli
