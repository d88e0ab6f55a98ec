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

#include <gtest/gtest.h>

#include "autogda/errors.h"
#include "autogda/pipeline.h"
#include "autogda/sim_server.h"
#include "autogda/simlab.h"
#include "httplib.h"

namespace autogda {
namespace {

using json = nlohmann::json;

ServiceEndpoints endpoints_for(const std::string& url) {
  ServiceEndpoints e;
  e.complete = e.entail = e.utility = e.embed = e.paraphrase = url;
  e.timeout_seconds = 5;
  e.max_in_flight = 4;
  e.retries = 3;
  return e;
}

class HttpLoopback : public ::testing::Test {
 protected:
  World world = make_world(5, 3, 5);
  SimServer server{world};
};

TEST_F(HttpLoopback, EveryEndpointSpeaksTheProtocol) {
  auto transport = std::make_shared<HttpTransport>(endpoints_for(server.url()));
  Gateway g(transport);
  const SimEvidence& ev = world.evidences[0];
  const std::string claim = ev.targets[0].text();
  const double p = g.entail(ev.text, claim);
  EXPECT_GE(p, 0.0);
  EXPECT_LE(p, 1.0);
  EXPECT_GE(g.entail(ev.text, ev.text), 0.7);
  EXPECT_GE(g.utility(ev.text, claim, 1), 0.0);
  const auto v = g.embed({claim, ev.text});
  EXPECT_EQ(v[0].size(), static_cast<Eigen::Index>(world.universe_size()));
  EXPECT_EQ(g.paraphrase(claim, 3).size(), 3u);
  EXPECT_FALSE(g.complete("Human: hello\n\nAssistant:", 1, 1.0).empty());
  EXPECT_EQ(server.requests(), 6u);
}

TEST_F(HttpLoopback, MatchesInProcessSimulator) {
  Gateway http(std::make_shared<HttpTransport>(endpoints_for(server.url())));
  Gateway local(std::make_shared<SimTransport>(world));
  const SimEvidence& ev = world.evidences[1];
  for (const SimClaim& c : ev.targets) {
    EXPECT_EQ(http.entail(ev.text, c.text()), local.entail(ev.text, c.text()));
    EXPECT_EQ(http.utility(ev.text, c.text(), 0), local.utility(ev.text, c.text(), 0));
  }
}

TEST_F(HttpLoopback, RetriesServerErrors) {
  auto transport = std::make_shared<HttpTransport>(endpoints_for(server.url()));
  transport->set_backoff_ms(1);
  server.fail_next(2, 503);
  Gateway g(transport);
  EXPECT_NO_THROW(g.entail("a f_e000_00", "f_e000_00"));
  EXPECT_EQ(server.requests(), 3u);
}

TEST_F(HttpLoopback, GivesUpAfterBoundedAttempts) {
  auto transport = std::make_shared<HttpTransport>(endpoints_for(server.url()));
  transport->set_backoff_ms(1);
  server.fail_next(10, 500);
  Gateway g(transport);
  EXPECT_THROW(g.entail("a", "b"), ProtocolError);
  EXPECT_EQ(server.requests(), 3u);
}

TEST_F(HttpLoopback, ClientErrorsAreNotRetried) {
  auto transport = std::make_shared<HttpTransport>(endpoints_for(server.url()));
  server.fail_next(1, 404);
  EXPECT_THROW(transport->post(Endpoint::kEntail, {{"premise", "a"}, {"hypothesis", "b"}}),
               ProtocolError);
  EXPECT_EQ(server.requests(), 1u);
}

TEST_F(HttpLoopback, MalformedRequestGets400) {
  httplib::Client client(server.url());
  auto res = client.Post("/v1/entail", "{not json", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
}

TEST_F(HttpLoopback, PipelineRunsOverHttp) {
  RunConfig config;
  config.samples_per_evidence = 4;
  config.max_iterations = 1;
  config.seed = 3;
  config.workers = 2;
  config.endpoints = endpoints_for(server.url());
  // The augmentation teacher is a separate service with its own noise.
  SimServer link_server(world, true);
  config.endpoints.entail_link = link_server.url();
  Gateway http(std::make_shared<HttpTransport>(config.endpoints));
  const RunResult over_http = run_pipeline(config, world.targets(), http);

  config.backend = "sim";
  Gateway local(std::make_shared<SimTransport>(world));
  const RunResult in_process = run_pipeline(config, world.targets(), local);
  EXPECT_EQ(format_dataset(over_http.dataset), format_dataset(in_process.dataset));
  EXPECT_EQ(over_http.dataset.size(), 12u);
}

TEST(HttpTransport, UnreachableHostIsTransportError) {
  ServiceEndpoints e = endpoints_for("http://127.0.0.1:1");
  e.timeout_seconds = 1;
  e.retries = 2;
  HttpTransport t(e);
  t.set_backoff_ms(1);
  EXPECT_THROW(t.post(Endpoint::kEntail, {{"premise", "a"}, {"hypothesis", "b"}}),
               TransportError);
}

TEST(HttpTransport, BaseUrlParsing) {
  ParsedUrl u = parse_base_url("http://localhost:8080/api/");
  EXPECT_EQ(u.origin, "http://localhost:8080");
  EXPECT_EQ(u.prefix, "/api");
  EXPECT_EQ(parse_base_url("http://h:1").prefix, "");
  EXPECT_THROW(parse_base_url("ftp://h"), ConfigError);
  EXPECT_THROW(parse_base_url("http://"), ConfigError);
}

}  // namespace
}  // namespace autogda
