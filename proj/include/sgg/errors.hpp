// Copyright 2026 The sgg-toolkit Authors
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

#ifndef SGG_ERRORS_HPP
#define SGG_ERRORS_HPP

#include <stdexcept>

namespace sgg {

/// Unreadable or unwritable files and sockets. The CLI maps this to its I/O
/// exit code.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed I/O but unusable content (bad schema, invalid graph, missing
/// ids). The CLI maps this to its data exit code.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sgg

#endif  // SGG_ERRORS_HPP
