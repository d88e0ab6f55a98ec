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

#ifndef AUTOGDA_RNG_H_
#define AUTOGDA_RNG_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>
#include <string_view>

namespace autogda {

// Seed of an independent substream, keyed by a master seed and labels:
// first eight bytes of SHA-256("<master>" + "\x1f" + part ...), big-endian.
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::string_view> parts);

// Deterministic random stream. MT19937-64 output is pinned by the C++
// standard, and the mappings below avoid the implementation-defined
// <random> distributions, so streams agree across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng substream(std::uint64_t master,
                       std::initializer_list<std::string_view> parts) {
    return Rng(derive_seed(master, parts));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform on {0, ..., n - 1}; n must be positive.
  std::size_t uniform_index(std::size_t n);

  bool bernoulli(double p) { return uniform01() < p; }

  // Textual engine state, as defined for mersenne_twister_engine streams.
  std::string state() const;
  void restore(const std::string& state);

 private:
  std::mt19937_64 engine_;
};

}  // namespace autogda

#endif  // AUTOGDA_RNG_H_
