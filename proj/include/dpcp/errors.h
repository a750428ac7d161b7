//
// Copyright 2026 The dpcp Authors
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
//

#ifndef DPCP_ERRORS_H_
#define DPCP_ERRORS_H_

#include <stdexcept>
#include <string>

namespace dpcp {

// Malformed or unreadable input (files, JSON, CSV). CLI exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal invariant failed to hold. CLI exit code 4.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Domain and precondition violations are reported with std::invalid_argument
// and std::out_of_range (CLI exit code 3).

}  // namespace dpcp

#endif  // DPCP_ERRORS_H_
