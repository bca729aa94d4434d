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

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace pcconv::cli {

// Invalid configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KeySpec {
  std::string name;
  std::string default_value;
  std::string help;
};

// Every key accepted in config files and as --key flags.
const std::vector<KeySpec>& known_keys();

// key=value settings layered over defaults. Later set() calls win, so flags
// applied after load_file() override file values.
class RunConfig {
 public:
  // '#' starts a comment; blank lines are ignored.
  void load_file(const std::filesystem::path& path);
  void set(const std::string& key, const std::string& value);

  bool is_set(const std::string& key) const;
  std::string get(const std::string& key) const;
  double get_double(const std::string& key) const;
  int get_int(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  // Comma-separated reals; empty string gives an empty list.
  std::vector<double> get_doubles(const std::string& key) const;

  // One key=value line per known key, sorted, with defaults filled in.
  std::string resolved() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace pcconv::cli
