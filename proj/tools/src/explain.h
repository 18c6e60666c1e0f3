// Copyright 2026 The tsqp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>

namespace tsqp::cli {

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Prints a hop-by-hop account of one trial from a JSONL trace. Throws
/// TraceError on unparsable input or a trial the trace does not contain.
void Explain(std::istream& trace, std::size_t trial, std::ostream& out);

}  // namespace tsqp::cli
