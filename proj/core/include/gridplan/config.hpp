// Copyright 2026 The gridplan Authors
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
#include <string>

#include "gridplan/types.hpp"

namespace gridplan {

/// Flat key-value run configuration. One `key = value` pair per line,
/// dotted keys for grouping (`dims.nd = 20`), `#` starts a comment. Values
/// keep their text form until a typed getter is called, so command line
/// `--set key=value` overrides are uniform.
class Config {
 public:
  Config() = default;

  static Config parse_file(const std::filesystem::path& path);

  /// Applies a `key=value` override.
  void set(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key) const;  // throws when missing
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace gridplan
