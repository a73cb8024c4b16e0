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
#include "citystack/monitor/http_server.hpp"

#include <httplib.h>

namespace citystack::monitor {

namespace {

ApiRequest to_api_request(const httplib::Request& req) {
    ApiRequest out;
    out.method = req.method;
    out.target = req.target;
    for (const auto& [name, value] : req.headers) {
        std::string lower = name;
        std::transform(lower.begin(), lower.end(), lower.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        out.headers[lower] = value;
    }
    out.body = req.body;
    return out;
}

void write_response(const ApiResponse& api, httplib::Response& res) {
    res.status = api.status;
    if (!api.body.is_null()) res.set_content(api.body.dump(), "application/json");
}

}  // namespace

MonitorHttpServer::MonitorHttpServer(MonitorService& service) : service_(service) {}

MonitorHttpServer::~MonitorHttpServer() { stop(); }

Result<void> MonitorHttpServer::start(const std::string& host, int port) {
    server_ = std::make_unique<httplib::Server>();

    server_->Post("/_admin/seed", [this](const httplib::Request& req, httplib::Response& res) {
        if (req.remote_addr != "127.0.0.1" && req.remote_addr != "::1") {
            res.status = 403;
            return;
        }
        if (!seed_handler_) {
            res.status = 404;
            return;
        }
        res.set_content(seed_handler_().dump(), "application/json");
    });

    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
        write_response(service_.handle(to_api_request(req)), res);
    };
    server_->Get(R"(/.*)", handler);
    server_->Post(R"(/.*)", handler);
    server_->Put(R"(/.*)", handler);
    server_->Delete(R"(/.*)", handler);

    if (port == 0) {
        port_ = server_->bind_to_any_port(host);
        if (port_ <= 0) return make_error(Errc::Io, "cannot bind monitor listener");
    } else {
        if (!server_->bind_to_port(host, port))
            return make_error(Errc::Io, "cannot bind monitor listener on port " +
                                            std::to_string(port));
        port_ = port;
    }
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return {};
}

void MonitorHttpServer::stop() {
    if (server_) server_->stop();
    if (thread_.joinable()) thread_.join();
    server_.reset();
}

void MonitorHttpServer::set_seed_handler(std::function<Json()> handler) {
    seed_handler_ = std::move(handler);
}

}  // namespace citystack::monitor
