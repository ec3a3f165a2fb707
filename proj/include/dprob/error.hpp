// Copyright 2026 The dprob Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPROB_ERROR_HPP
#define DPROB_ERROR_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace dprob {

/// Base exception. The message is prefixed with the module that raised it.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(module + ": " + what), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

/// Bad input data or configuration, as opposed to a numerical failure.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace dprob

#endif  // DPROB_ERROR_HPP
