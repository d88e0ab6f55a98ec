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

#ifndef AUTOGDA_HTTP_TRANSPORT_H_
#define AUTOGDA_HTTP_TRANSPORT_H_

#include <semaphore>

#include "autogda/gateway.h"

namespace autogda {

// Plain-HTTP transport. Base URLs look like "http://host:port" with an
// optional path prefix ("http://host:port/api"); the /v1/... path is
// appended. Transport failures and 5xx/429 responses are retried with
// exponential backoff; other non-200 statuses fail immediately.
class HttpTransport : public Transport {
 public:
  explicit HttpTransport(ServiceEndpoints endpoints);

  nlohmann::json post(Endpoint endpoint, const nlohmann::json& body) override;

  // First backoff delay; doubles per attempt. Tests shrink it.
  void set_backoff_ms(int ms) { backoff_ms_ = ms; }

 private:
  ServiceEndpoints endpoints_;
  std::counting_semaphore<4096> slots_;
  int backoff_ms_ = 200;
};

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path without trailing slash, may be empty
};

// Throws ConfigError on anything but http:// URLs.
ParsedUrl parse_base_url(const std::string& url);

}  // namespace autogda

#endif  // AUTOGDA_HTTP_TRANSPORT_H_
