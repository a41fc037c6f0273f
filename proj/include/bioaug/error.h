//
// Copyright 2026 The bioaug Authors
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

#ifndef BIOAUG_ERROR_H_
#define BIOAUG_ERROR_H_

#include <stdexcept>
#include <string>

namespace bioaug {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input records, config values or agent responses.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A backend call failed in a way that may succeed on retry.
class RetriableError : public Error {
 public:
  RetriableError(const std::string& what, std::string fingerprint)
      : Error(what), fingerprint_(std::move(fingerprint)) {}
  const std::string& fingerprint() const { return fingerprint_; }

 private:
  std::string fingerprint_;
};

// An instance hit a defined singularity (zero reference contribution,
// equal anchors, unresolvable spans) and must be excluded, not aborted on.
class DegenerateInstance : public Error {
 public:
  using Error::Error;
};

// A backend response broke one of the seam invariants.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace bioaug

#endif  // BIOAUG_ERROR_H_
