// Copyright 2026 The decaylab Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace decaylab {

enum class ErrorKind {
  invalid_input,
  shape,
  validation,
  rank_deficient,
  conditioning,
  non_convergence,
  io,
  config,
};

/// Every failure raised by the library carries a kind so the CLI can map it
/// to an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

/// Process exit status for an error kind: 2 config, 3 numerical validation,
/// 4 I/O, 5 non-convergence.
int exit_status(ErrorKind kind) noexcept;

}  // namespace decaylab
