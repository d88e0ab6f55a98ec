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

#include "autogda/gateway.h"

#include <chrono>
#include <cmath>
#include <ctime>
#include <unordered_set>

#include "autogda/corpus.h"
#include "autogda/errors.h"
#include "autogda/hashing.h"

namespace autogda {

using json = nlohmann::json;

std::string_view endpoint_name(Endpoint endpoint) {
  switch (endpoint) {
    case Endpoint::kComplete:
      return "complete";
    case Endpoint::kEntail:
      return "entail";
    case Endpoint::kEntailLink:
      return "entail_link";
    case Endpoint::kUtility:
      return "utility";
    case Endpoint::kEmbed:
      return "embed";
    case Endpoint::kParaphrase:
      return "paraphrase";
  }
  return "complete";
}

std::string_view endpoint_path(Endpoint endpoint) {
  switch (endpoint) {
    case Endpoint::kComplete:
      return "/v1/complete";
    case Endpoint::kEntail:
    case Endpoint::kEntailLink:
      return "/v1/entail";
    case Endpoint::kUtility:
      return "/v1/utility";
    case Endpoint::kEmbed:
      return "/v1/embed";
    case Endpoint::kParaphrase:
      return "/v1/paraphrase";
  }
  return "/v1/complete";
}

const std::string& ServiceEndpoints::base_url(Endpoint endpoint) const {
  switch (endpoint) {
    case Endpoint::kComplete:
      return complete;
    case Endpoint::kEntail:
      return entail;
    case Endpoint::kEntailLink:
      return entail_link.empty() ? entail : entail_link;
    case Endpoint::kUtility:
      return utility;
    case Endpoint::kEmbed:
      return embed;
    case Endpoint::kParaphrase:
      return paraphrase;
  }
  return complete;
}

void ServiceEndpoints::validate() const {
  if (!(timeout_seconds > 0.0)) throw ConfigError("timeout_seconds must be > 0");
  if (max_in_flight < 1) throw ConfigError("max_in_flight must be >= 1");
  if (retries < 1) throw ConfigError("retries must be >= 1");
  for (Endpoint e : {Endpoint::kComplete, Endpoint::kEntail, Endpoint::kUtility,
                     Endpoint::kEmbed, Endpoint::kParaphrase}) {
    if (base_url(e).empty()) {
      throw ConfigError("no URL configured for endpoint " +
                        std::string(endpoint_name(e)));
    }
  }
}

std::string canonical_json(const json& value) {
  // nlohmann::json keeps object keys in a std::map, so dump() is sorted.
  return value.dump();
}

std::string cache_key(Endpoint endpoint, const json& request) {
  std::string msg(endpoint_name(endpoint));
  msg.push_back(':');
  msg += canonical_json(request);
  return sha256_hex(msg);
}

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(*dir_, ec);
  if (ec) throw IoError("cannot create cache dir " + dir_->string());
}

std::optional<json> ResponseCache::lookup(const std::string& key) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = entries_.find(key);
    if (it != entries_.end()) return it->second;
  }
  if (!dir_) return std::nullopt;
  const auto path = *dir_ / key;
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return std::nullopt;
  json entry;
  try {
    entry = json::parse(read_file(path));
  } catch (const std::exception&) {
    return std::nullopt;  // torn or foreign file; refetch
  }
  if (!entry.contains("response")) return std::nullopt;
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = entries_.try_emplace(key, entry["response"]);
  return it->second;
}

void ResponseCache::store(const std::string& key, Endpoint endpoint,
                          const json& request, const json& response) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (!entries_.try_emplace(key, response).second) return;
  }
  if (!dir_) return;
  const auto path = *dir_ / key;
  std::error_code ec;
  if (std::filesystem::exists(path, ec)) return;
  json entry;
  entry["key"] = key;
  entry["endpoint"] = std::string(endpoint_name(endpoint));
  entry["request"] = request;
  entry["response"] = response;
  entry["created_at"] = static_cast<std::int64_t>(std::time(nullptr));
  write_file_atomic(path, entry.dump());
}

std::size_t ResponseCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.size();
}

Gateway::Gateway(std::shared_ptr<Transport> transport,
                 std::shared_ptr<ResponseCache> cache)
    : transport_(std::move(transport)),
      cache_(cache ? std::move(cache) : std::make_shared<ResponseCache>()) {}

json Gateway::call(Endpoint endpoint, const json& request) {
  const std::string key = cache_key(endpoint, request);
  if (auto hit = cache_->lookup(key)) return *hit;
  upstream_.fetch_add(1, std::memory_order_relaxed);
  json response = transport_->post(endpoint, request);
  if (!response.is_object()) {
    throw ProtocolError(std::string(endpoint_name(endpoint)) +
                        ": response is not a JSON object");
  }
  cache_->store(key, endpoint, request, response);
  // Re-read so concurrent first writers agree on one response.
  return *cache_->lookup(key);
}

namespace {

double number_field(const json& response, const char* field,
                    std::string_view endpoint) {
  auto it = response.find(field);
  if (it == response.end() || !it->is_number()) {
    throw ProtocolError(std::string(endpoint) + ": missing numeric \"" + field +
                        "\"");
  }
  const double v = it->get<double>();
  if (!std::isfinite(v)) {
    throw ProtocolError(std::string(endpoint) + ": non-finite \"" + field + "\"");
  }
  return v;
}

std::vector<std::string> string_array(const json& response, const char* field,
                                      std::string_view endpoint) {
  auto it = response.find(field);
  if (it == response.end() || !it->is_array()) {
    throw ProtocolError(std::string(endpoint) + ": missing array \"" + field +
                        "\"");
  }
  std::vector<std::string> out;
  for (const json& v : *it) {
    if (!v.is_string()) {
      throw ProtocolError(std::string(endpoint) + ": non-string entry in \"" +
                          field + "\"");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

double Gateway::entail_via(Endpoint endpoint, const std::string& premise,
                           const std::string& hypothesis) {
  if (premise.empty() || hypothesis.empty()) {
    throw std::invalid_argument("entail: empty premise or hypothesis");
  }
  json request = {{"premise", premise}, {"hypothesis", hypothesis}};
  const double p =
      number_field(call(endpoint, request), "probability", endpoint_name(endpoint));
  if (p < 0.0 || p > 1.0) {
    throw ProtocolError("entail: probability outside [0, 1]: " +
                        std::to_string(p));
  }
  return p;
}

double Gateway::entail(const std::string& premise,
                       const std::string& hypothesis) {
  return entail_via(Endpoint::kEntail, premise, hypothesis);
}

double Gateway::entail_link(const std::string& premise,
                            const std::string& hypothesis) {
  return entail_via(Endpoint::kEntailLink, premise, hypothesis);
}

double Gateway::utility(const std::string& evidence, const std::string& claim,
                        int label) {
  if (label != 0 && label != 1) {
    throw std::invalid_argument("utility: label must be 0 or 1");
  }
  json request = {{"evidence", evidence}, {"claim", claim}, {"label", label}};
  const double u =
      number_field(call(Endpoint::kUtility, request), "cross_entropy", "utility");
  if (u < 0.0) {
    throw ProtocolError("utility: negative cross_entropy " + std::to_string(u));
  }
  return u;
}

EmbeddingVector Gateway::parse_vector(const json& v) {
  if (!v.is_array() || v.empty()) {
    throw ProtocolError("embed: vector must be a non-empty array");
  }
  EmbeddingVector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ProtocolError("embed: non-numeric entry");
    out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
    if (!std::isfinite(out[static_cast<Eigen::Index>(i)])) {
      throw ProtocolError("embed: non-finite entry");
    }
  }
  long expected = -1;
  if (!dim_.compare_exchange_strong(expected, static_cast<long>(out.size())) &&
      expected != static_cast<long>(out.size())) {
    throw ProtocolError("embed: dimension changed from " +
                        std::to_string(expected) + " to " +
                        std::to_string(out.size()));
  }
  return out;
}

std::vector<EmbeddingVector> Gateway::embed(
    const std::vector<std::string>& texts) {
  if (texts.empty()) throw std::invalid_argument("embed: empty batch");
  std::unordered_map<std::string, EmbeddingVector> found;
  std::vector<std::string> misses;
  std::unordered_set<std::string> queued;
  for (const std::string& t : texts) {
    if (found.count(t) || queued.count(t)) continue;
    if (auto hit = cache_->lookup(cache_key(Endpoint::kEmbed, {{"texts", {t}}}))) {
      const json& vectors = (*hit)["vectors"];
      found.emplace(t, parse_vector(vectors.at(0)));
    } else {
      misses.push_back(t);
      queued.insert(t);
    }
  }
  if (!misses.empty()) {
    upstream_.fetch_add(1, std::memory_order_relaxed);
    const json request = {{"texts", misses}};
    const json response = transport_->post(Endpoint::kEmbed, request);
    auto it = response.find("vectors");
    if (it == response.end() || !it->is_array() || it->size() != misses.size()) {
      throw ProtocolError("embed: expected one vector per text");
    }
    for (std::size_t i = 0; i < misses.size(); ++i) {
      EmbeddingVector v = parse_vector((*it)[i]);
      const json single_req = {{"texts", {misses[i]}}};
      const json single_resp = {{"vectors", {(*it)[i]}}};
      const std::string key = cache_key(Endpoint::kEmbed, single_req);
      cache_->store(key, Endpoint::kEmbed, single_req, single_resp);
      found.emplace(misses[i],
                    parse_vector((*cache_->lookup(key))["vectors"].at(0)));
    }
  }
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const std::string& t : texts) out.push_back(found.at(t));
  return out;
}

std::vector<std::string> Gateway::complete(const std::string& prompt, int n,
                                           double temperature) {
  if (n < 1) throw std::invalid_argument("complete: n must be >= 1");
  if (!(temperature >= 0.0)) {
    throw std::invalid_argument("complete: temperature must be >= 0");
  }
  json request = {{"prompt", prompt}, {"n", n}, {"temperature", temperature}};
  auto completions =
      string_array(call(Endpoint::kComplete, request), "completions", "complete");
  if (completions.empty()) throw ProtocolError("complete: empty completions");
  if (completions.size() > static_cast<std::size_t>(n)) completions.resize(n);
  return completions;
}

std::vector<std::string> Gateway::paraphrase(const std::string& text, int n) {
  if (n < 1) throw std::invalid_argument("paraphrase: n must be >= 1");
  json request = {{"text", text}, {"n", n}};
  auto texts = string_array(call(Endpoint::kParaphrase, request), "texts",
                            "paraphrase");
  if (texts.size() > static_cast<std::size_t>(n)) texts.resize(n);
  return texts;
}

}  // namespace autogda
