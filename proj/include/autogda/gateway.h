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

#ifndef AUTOGDA_GATEWAY_H_
#define AUTOGDA_GATEWAY_H_

// Client side of the scoring/generation services.
//
// Wire protocol (POST, JSON, UTF-8):
//   /v1/complete   {"prompt","n","temperature"} -> {"completions":[str]}
//   /v1/entail     {"premise","hypothesis"}     -> {"probability":float}
//   /v1/utility    {"evidence","claim","label"} -> {"cross_entropy":float}
//   /v1/embed      {"texts":[str]}              -> {"vectors":[[float]]}
//   /v1/paraphrase {"text","n"}                 -> {"texts":[str]}
//
// Every response is cached under SHA-256(endpoint name ":" canonical
// request), canonical meaning sorted keys and no insignificant whitespace.
// The first response stored for a key wins.

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "autogda/embed_space.h"
#include "json.hpp"

namespace autogda {

// Logical roles. The augmentation (link) teacher speaks the same /v1/entail
// protocol as the initial teacher but may live at a different URL.
enum class Endpoint {
  kComplete,
  kEntail,
  kEntailLink,
  kUtility,
  kEmbed,
  kParaphrase,
};

std::string_view endpoint_name(Endpoint endpoint);
std::string_view endpoint_path(Endpoint endpoint);

struct ServiceEndpoints {
  std::string complete;
  std::string entail;
  std::string entail_link;  // falls back to `entail` when empty
  std::string utility;
  std::string embed;
  std::string paraphrase;
  double timeout_seconds = 60.0;
  int max_in_flight = 8;
  int retries = 3;  // attempts per request

  const std::string& base_url(Endpoint endpoint) const;
  // Throws ConfigError.
  void validate() const;
};

class Transport {
 public:
  virtual ~Transport() = default;
  // Sends one request; throws TransportError or ProtocolError.
  virtual nlohmann::json post(Endpoint endpoint,
                              const nlohmann::json& body) = 0;
};

// Transport backed by a callable; handy for tests and in-process services.
class FunctionTransport : public Transport {
 public:
  using Handler =
      std::function<nlohmann::json(Endpoint, const nlohmann::json&)>;
  explicit FunctionTransport(Handler handler) : handler_(std::move(handler)) {}
  nlohmann::json post(Endpoint endpoint, const nlohmann::json& body) override {
    calls_.fetch_add(1, std::memory_order_relaxed);
    return handler_(endpoint, body);
  }
  std::size_t calls() const { return calls_.load(); }

 private:
  Handler handler_;
  std::atomic<std::size_t> calls_{0};
};

std::string canonical_json(const nlohmann::json& value);
std::string cache_key(Endpoint endpoint, const nlohmann::json& request);

// Content-addressed response store. In memory always; mirrored to one file
// per key (filename = key) when a directory is given.
class ResponseCache {
 public:
  ResponseCache() = default;
  explicit ResponseCache(std::filesystem::path dir);

  std::optional<nlohmann::json> lookup(const std::string& key);
  // Ignored when the key is already present.
  void store(const std::string& key, Endpoint endpoint,
             const nlohmann::json& request, const nlohmann::json& response);
  std::size_t size() const;
  const std::optional<std::filesystem::path>& dir() const { return dir_; }

 private:
  std::optional<std::filesystem::path> dir_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, nlohmann::json> entries_;
};

class Gateway {
 public:
  explicit Gateway(std::shared_ptr<Transport> transport,
                   std::shared_ptr<ResponseCache> cache = nullptr);

  // Initial teacher T(premise, hypothesis) in [0, 1].
  double entail(const std::string& premise, const std::string& hypothesis);
  // Augmentation teacher, same contract.
  double entail_link(const std::string& premise, const std::string& hypothesis);
  // Cross-entropy of the model being adapted; >= 0, uncapped.
  double utility(const std::string& evidence, const std::string& claim,
                 int label);
  // One vector per input text, cached per text; all share one dimension for
  // the lifetime of the gateway.
  std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts);
  // Up to n completions (fewer are tolerated; callers decide whether to
  // warn). Throws ProtocolError when none come back.
  std::vector<std::string> complete(const std::string& prompt, int n,
                                    double temperature);
  std::vector<std::string> paraphrase(const std::string& text, int n);

  // Requests that went past the cache to the transport.
  std::size_t upstream_requests() const { return upstream_.load(); }
  long embedding_dim() const { return dim_.load(); }
  ResponseCache& cache() { return *cache_; }

 private:
  nlohmann::json call(Endpoint endpoint, const nlohmann::json& request);
  double entail_via(Endpoint endpoint, const std::string& premise,
                    const std::string& hypothesis);
  EmbeddingVector parse_vector(const nlohmann::json& v);

  std::shared_ptr<Transport> transport_;
  std::shared_ptr<ResponseCache> cache_;
  std::atomic<std::size_t> upstream_{0};
  std::atomic<long> dim_{-1};
};

}  // namespace autogda

#endif  // AUTOGDA_GATEWAY_H_
