// Copyright 2026 The Auto-GDA Authors.
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

#ifndef AUTOGDA_ERRORS_H_
#define AUTOGDA_ERRORS_H_

#include <stdexcept>
#include <string>

namespace autogda {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed input data (targets JSONL, datasets, tagged LLM output).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A service answered, but the answer violates the wire protocol.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A service could not be reached after all retries.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every evidence failed; nothing usable was produced.
class UpstreamError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace autogda

#endif  // AUTOGDA_ERRORS_H_
