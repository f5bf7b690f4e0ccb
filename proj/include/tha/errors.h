// Copyright 2026 The THA Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef THA_ERRORS_H_
#define THA_ERRORS_H_

#include <stdexcept>
#include <string>

namespace tha {

// Broken caller contract (shape mismatch, missing tape entries, bad index).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Non-finite values produced or consumed by the simulation.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid experiment configuration. `key()` names the offending key(s).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what),
        key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// Dataset / file-format failures. `kind()` distinguishes the failure modes.
class DataError : public std::runtime_error {
 public:
  enum class Kind {
    kIo,
    kBadMagic,
    kTruncated,
    kCountMismatch,
    kFormat,
    kExists,  // refusing to overwrite an existing output
  };
  DataError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

#define THA_REQUIRE(cond, msg)                                   \
  do {                                                           \
    if (!(cond)) throw ::tha::ContractError(std::string(msg));   \
  } while (0)

}  // namespace tha

#endif  // THA_ERRORS_H_
