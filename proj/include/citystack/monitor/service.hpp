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

#include <map>
#include <string>
#include <vector>

#include "citystack/core/resource_tree.hpp"
#include "citystack/monitor/subscriptions.hpp"

namespace citystack::monitor {

struct ApiRequest {
    std::string method;  // GET / POST / PUT / DELETE
    std::string target;  // path plus query, e.g. "/~/in-cse/in-name/AE-AQ/AQ-AN00-00/Data/la"
    std::map<std::string, std::string> headers;  // lower-case names
    std::string body;
};

struct ApiResponse {
    int status = 200;
    Json body;  // null = no body
};

/// Routes the oneM2M-style request surface onto the resource tree:
///   GET  .../Data/la | /ol            latest / oldest
///   GET  .../Data?rcn=4               all instances
///   GET  .../<GRP>/fopt/la|ol|?rcn=4  group fan-out
///   GET  /~/in-cse?fu=1&lbl=...       label discovery ("m2m:uril")
///   POST Content-Type ;ty=N           resource creation (ty=4 inserts)
///   PUT / DELETE                      update / delete
/// Credentials ride in X-M2M-Origin ("username:password"); unknown
/// credentials answer 401, known-but-denied 403.
class MonitorService {
public:
    MonitorService(core::ResourceTree& tree, Dispatcher* dispatcher = nullptr,
                   int offset_minutes = timeutil::kDefaultOffsetMinutes);

    ApiResponse handle(const ApiRequest& req);

private:
    ApiResponse handle_get(const std::string& path,
                           const std::vector<std::pair<std::string, std::string>>& query,
                           const std::string& originator);
    ApiResponse handle_post(const ApiRequest& req, const std::string& path,
                            const std::string& originator);
    ApiResponse error_response(const Error& err, const std::string& path,
                               const std::string& originator);

    core::ResourceTree& tree_;
    Dispatcher* dispatcher_;
    int offset_minutes_;
};

/// Splits "…path…?a=1&b=2" and percent/plus-decodes both halves.
std::pair<std::string, std::vector<std::pair<std::string, std::string>>> split_target(
    const std::string& target);

}  // namespace citystack::monitor
