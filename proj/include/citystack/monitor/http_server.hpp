/*
 * Copyright (c) 2026 CityStack contributors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 * Licensed under the Apache License, Version 2.0 (the License); you may
 * not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an AS IS BASIS, WITHOUT
 * WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <functional>
#include <memory>
#include <string>
#include <thread>

#include "citystack/monitor/service.hpp"

namespace httplib {
class Server;
}

namespace citystack::monitor {

/// Binds the MonitorService to an HTTP listener. Port 0 picks an
/// ephemeral port (tests).
class MonitorHttpServer {
public:
    explicit MonitorHttpServer(MonitorService& service);
    ~MonitorHttpServer();

    Result<void> start(const std::string& host, int port);
    void stop();
    int port() const { return port_; }

    /// Loopback-only trigger mounted at POST /_admin/seed; returns the
    /// handler's JSON result. Used by the CLI to seed a running process.
    void set_seed_handler(std::function<Json()> handler);

private:
    MonitorService& service_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    int port_ = 0;
    std::function<Json()> seed_handler_;
};

}  // namespace citystack::monitor
