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

#include <memory>
#include <string>
#include <thread>

#include "citystack/exchange/service.hpp"

namespace httplib {
class Server;
}

namespace citystack::exchange {

/// HTTP listener for the exchange:
///   GET  /temporal/entities?id=&timerel=&time=&endtime=&attrs=&q=&offset=
///   GET  /entities/latest?id=
///   GET  /meta?id=
///   GET  /catalogue?id=
///   POST /token   {userId, itemId, itemType, role}
///   POST /revoke  {sub}            (X-Internal-Auth header)
/// Bearer tokens ride in "Authorization: Bearer <jwt>" or a "token"
/// header.
class ExchangeHttpServer {
public:
    explicit ExchangeHttpServer(ExchangeService& service);
    ~ExchangeHttpServer();

    Result<void> start(const std::string& host, int port);
    void stop();
    int port() const { return port_; }

private:
    ExchangeService& service_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    int port_ = 0;
};

}  // namespace citystack::exchange
