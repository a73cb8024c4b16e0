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

#include <cstdint>
#include <string>
#include <vector>

#include "citystack/support/json.hpp"
#include "citystack/support/result.hpp"
#include "citystack/support/time.hpp"

namespace citystack::platform {

/// Whole-platform configuration. Environment overrides: CITYSTACK_SECRET
/// (signing secret) and CITYSTACK_DATA_DIR.
struct Config {
    std::string data_dir = "./citystack-data";
    std::string monitor_host = "127.0.0.1";
    int monitor_port = 8180;
    std::string lake_host = "127.0.0.1";
    int lake_port = 8181;
    std::string exchange_host = "127.0.0.1";
    int exchange_port = 8182;

    std::string signing_secret;  // refuses to start when empty
    std::string server_id = "iudx-rs-onem2m.iiit.ac.in";
    std::string provider = "research.iiit.ac.in/4786f10afbf48ed5c8c7be9b4d38b33ca16c1d9a";
    std::string admin_originator = "admin:admin";
    std::string guest_originator = "guest:guest";
    std::uint64_t seed = 42;
    int offset_minutes = timeutil::kDefaultOffsetMinutes;
    std::string quality_source = "lake";  // "lake" | "none"
    int notify_retries = 3;               // exponential backoff from 1 s
    int notify_ack_timeout_ms = 5000;     // 2xx within this window acks
    std::size_t exchange_page_size = 2000;
    int exchange_max_span_days = 10;
    std::vector<std::string> intake_allowed_hosts;  // empty = loopback only

    std::string tree_dir() const { return data_dir + "/tree"; }
    std::string lake_dir() const { return data_dir + "/lake"; }
    std::string quality_dir() const { return data_dir + "/quality"; }
    std::string exchange_dir() const { return data_dir + "/exchange"; }
    std::string profiles_dir() const { return data_dir + "/profiles"; }
    std::string catalogue_file() const { return exchange_dir() + "/catalogue.json"; }
    std::string consumers_file() const { return exchange_dir() + "/consumers.json"; }
    std::string kb_file() const { return quality_dir() + "/kb.json"; }
    std::string factors_file() const { return quality_dir() + "/factors.json"; }
    std::string tariff_file() const { return data_dir + "/tariff.json"; }
    std::string dead_letter_file() const { return data_dir + "/notify-deadletter.ndjson"; }
    std::string monitor_url() const {
        return "http://" + monitor_host + ":" + std::to_string(monitor_port);
    }
    std::string lake_url() const { return "http://" + lake_host + ":" + std::to_string(lake_port); }
    std::string exchange_url() const {
        return "http://" + exchange_host + ":" + std::to_string(exchange_port);
    }

    Json to_json() const;
    static Result<Config> from_json(const Json& j);
    static Result<Config> load(const std::string& path);
    /// Checks secrets and paths; called before any server starts.
    Result<void> validate() const;
};

}  // namespace citystack::platform
