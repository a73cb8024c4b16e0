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
#include "citystack/exchange/http_server.hpp"

#include <httplib.h>

namespace citystack::exchange {

namespace {

std::string bearer_token(const httplib::Request& req) {
    if (req.has_header("Authorization")) {
        std::string auth = req.get_header_value("Authorization");
        if (auth.rfind("Bearer ", 0) == 0) return auth.substr(7);
        return auth;
    }
    if (req.has_header("token")) return req.get_header_value("token");
    return {};
}

std::map<std::string, std::string> params_of(const httplib::Request& req) {
    std::map<std::string, std::string> out;
    for (const auto& [k, v] : req.params) out[k] = v;
    return out;
}

void write_reply(const HttpReply& reply, httplib::Response& res) {
    res.status = reply.status;
    res.set_content(reply.body.dump(), "application/json");
}

}  // namespace

ExchangeHttpServer::ExchangeHttpServer(ExchangeService& service) : service_(service) {}

ExchangeHttpServer::~ExchangeHttpServer() { stop(); }

Result<void> ExchangeHttpServer::start(const std::string& host, int port) {
    server_ = std::make_unique<httplib::Server>();

    server_->Get("/temporal/entities", [this](const httplib::Request& req,
                                              httplib::Response& res) {
        write_reply(service_.handle_temporal(bearer_token(req), req.get_param_value("id"),
                                             params_of(req)),
                    res);
    });
    server_->Get("/entities/latest", [this](const httplib::Request& req, httplib::Response& res) {
        write_reply(service_.handle_latest(bearer_token(req), req.get_param_value("id")), res);
    });
    server_->Get("/meta", [this](const httplib::Request& req, httplib::Response& res) {
        write_reply(service_.handle_meta(bearer_token(req), req.get_param_value("id")), res);
    });
    server_->Get("/catalogue", [this](const httplib::Request& req, httplib::Response& res) {
        write_reply(service_.handle_catalogue(req.get_param_value("id")), res);
    });
    server_->Post("/token", [this](const httplib::Request& req, httplib::Response& res) {
        auto body = parse_json(req.body);
        write_reply(service_.handle_token(body ? body.value() : Json()), res);
    });
    server_->Post("/revoke", [this](const httplib::Request& req, httplib::Response& res) {
        auto body = parse_json(req.body);
        write_reply(service_.handle_revoke(body ? body.value() : Json(),
                                           req.get_header_value("X-Internal-Auth")),
                    res);
    });

    if (port == 0) {
        port_ = server_->bind_to_any_port(host);
        if (port_ <= 0) return make_error(Errc::Io, "cannot bind exchange listener");
    } else {
        if (!server_->bind_to_port(host, port))
            return make_error(Errc::Io,
                              "cannot bind exchange listener on port " + std::to_string(port));
        port_ = port;
    }
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return {};
}

void ExchangeHttpServer::stop() {
    if (server_) server_->stop();
    if (thread_.joinable()) thread_.join();
    server_.reset();
}

}  // namespace citystack::exchange
