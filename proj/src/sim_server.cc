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

#include "autogda/sim_server.h"

#include "autogda/errors.h"
#include "httplib.h"

namespace autogda {

using json = nlohmann::json;

SimServer::SimServer(const World& world, bool link_teacher)
    : sim_(world),
      link_teacher_(link_teacher),
      server_(std::make_unique<httplib::Server>()) {
  auto route = [this](Endpoint endpoint) {
    return [this, endpoint](const httplib::Request& req, httplib::Response& res) {
      requests_.fetch_add(1);
      if (fail_budget_.fetch_sub(1) > 0) {
        res.status = fail_status_.load();
        res.set_content(R"({"error":"injected failure"})", "application/json");
        return;
      }
      json body;
      try {
        body = json::parse(req.body);
      } catch (const json::parse_error&) {
        res.status = 400;
        res.set_content(R"({"error":"malformed JSON"})", "application/json");
        return;
      }
      try {
        const Endpoint e = endpoint == Endpoint::kEntail && link_teacher_
                               ? Endpoint::kEntailLink
                               : endpoint;
        res.set_content(sim_.post(e, body).dump(), "application/json");
      } catch (const std::exception& ex) {
        res.status = 400;
        res.set_content(json{{"error", ex.what()}}.dump(), "application/json");
      }
    };
  };
  server_->Post("/v1/complete", route(Endpoint::kComplete));
  server_->Post("/v1/entail", route(Endpoint::kEntail));
  server_->Post("/v1/utility", route(Endpoint::kUtility));
  server_->Post("/v1/embed", route(Endpoint::kEmbed));
  server_->Post("/v1/paraphrase", route(Endpoint::kParaphrase));

  port_ = server_->bind_to_any_port("127.0.0.1");
  if (port_ < 0) throw IoError("sim server: cannot bind loopback port");
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

SimServer::~SimServer() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::string SimServer::url() const {
  return "http://127.0.0.1:" + std::to_string(port_);
}

}  // namespace autogda
