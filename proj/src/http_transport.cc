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

#include "autogda/http_transport.h"

#include <algorithm>
#include <chrono>
#include <thread>

#include "autogda/errors.h"
#include "httplib.h"

namespace autogda {

using json = nlohmann::json;

ParsedUrl parse_base_url(const std::string& url) {
  constexpr std::string_view kScheme = "http://";
  if (url.rfind(kScheme, 0) != 0) {
    throw ConfigError("unsupported endpoint URL (need http://): " + url);
  }
  const std::size_t slash = url.find('/', kScheme.size());
  ParsedUrl out;
  if (slash == std::string::npos) {
    out.origin = url;
  } else {
    out.origin = url.substr(0, slash);
    out.prefix = url.substr(slash);
    while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  }
  if (out.origin.size() == kScheme.size()) {
    throw ConfigError("endpoint URL has no host: " + url);
  }
  return out;
}

HttpTransport::HttpTransport(ServiceEndpoints endpoints)
    : endpoints_(std::move(endpoints)),
      slots_(std::clamp<std::ptrdiff_t>(endpoints_.max_in_flight, 1, 4096)) {
  if (!(endpoints_.timeout_seconds > 0.0)) {
    throw ConfigError("timeout_seconds must be > 0");
  }
}

json HttpTransport::post(Endpoint endpoint, const json& body) {
  const std::string& base = endpoints_.base_url(endpoint);
  if (base.empty()) {
    throw ConfigError("no URL configured for endpoint " +
                      std::string(endpoint_name(endpoint)));
  }
  const ParsedUrl url = parse_base_url(base);
  const std::string path = url.prefix + std::string(endpoint_path(endpoint));
  const std::string payload = body.dump();
  const auto timeout = std::chrono::duration<double>(endpoints_.timeout_seconds);
  const auto timeout_us =
      std::chrono::duration_cast<std::chrono::microseconds>(timeout);
  const int attempts = std::max(1, endpoints_.retries);

  std::string last_error;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(
          std::chrono::milliseconds(backoff_ms_ << (attempt - 1)));
    }
    httplib::Result res{nullptr, httplib::Error::Unknown};
    {
      slots_.acquire();
      httplib::Client client(url.origin);
      client.set_connection_timeout(timeout_us);
      client.set_read_timeout(timeout_us);
      client.set_write_timeout(timeout_us);
      res = client.Post(path, payload, "application/json");
      slots_.release();
    }
    if (!res) {
      last_error = base + path + ": " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500 || res->status == 429) {
      last_error = base + path + ": HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw ProtocolError(base + path + ": HTTP " + std::to_string(res->status));
    }
    try {
      return json::parse(res->body);
    } catch (const json::parse_error& e) {
      throw ProtocolError(base + path + ": malformed JSON response");
    }
  }
  if (last_error.find("HTTP") != std::string::npos) {
    throw ProtocolError(last_error + " after " + std::to_string(attempts) +
                        " attempts");
  }
  throw TransportError(last_error + " after " + std::to_string(attempts) +
                       " attempts");
}

}  // namespace autogda
