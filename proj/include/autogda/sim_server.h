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

#ifndef AUTOGDA_SIM_SERVER_H_
#define AUTOGDA_SIM_SERVER_H_

// Serves the /v1/* protocol over loopback HTTP from a simulator world, for
// exercising the real HTTP client path.

#include <atomic>
#include <memory>
#include <string>
#include <thread>

#include "autogda/simlab.h"

namespace httplib {
class Server;
}

namespace autogda {

class SimServer {
 public:
  // With link_teacher set, /v1/entail answers with the link-teacher noise.
  explicit SimServer(const World& world, bool link_teacher = false);
  ~SimServer();
  SimServer(const SimServer&) = delete;
  SimServer& operator=(const SimServer&) = delete;

  // "http://127.0.0.1:<port>"
  std::string url() const;
  int port() const { return port_; }
  std::size_t requests() const { return requests_.load(); }
  // The next `count` requests fail with `status` (fault injection).
  void fail_next(int count, int status = 503) {
    fail_status_ = status;
    fail_budget_ = count;
  }

 private:
  SimTransport sim_;
  bool link_teacher_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = -1;
  std::atomic<std::size_t> requests_{0};
  std::atomic<int> fail_budget_{0};
  std::atomic<int> fail_status_{503};
};

}  // namespace autogda

#endif  // AUTOGDA_SIM_SERVER_H_
