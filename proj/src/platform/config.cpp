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
#include "citystack/platform/config.hpp"

#include <cstdlib>

namespace citystack::platform {

Json Config::to_json() const {
    return Json{{"data_dir", data_dir},
                {"monitor_host", monitor_host},
                {"monitor_port", monitor_port},
                {"lake_host", lake_host},
                {"lake_port", lake_port},
                {"exchange_host", exchange_host},
                {"exchange_port", exchange_port},
                {"signing_secret", signing_secret},
                {"server_id", server_id},
                {"provider", provider},
                {"admin_originator", admin_originator},
                {"guest_originator", guest_originator},
                {"seed", seed},
                {"offset_minutes", offset_minutes},
                {"quality_source", quality_source},
                {"notify_retries", notify_retries},
                {"notify_ack_timeout_ms", notify_ack_timeout_ms},
                {"exchange_page_size", exchange_page_size},
                {"exchange_max_span_days", exchange_max_span_days},
                {"intake_allowed_hosts", intake_allowed_hosts}};
}

Result<Config> Config::from_json(const Json& j) {
    if (!j.is_object()) return make_error(Errc::BadConfig, "config must be a json object");
    Config c;
    c.data_dir = j.value("data_dir", c.data_dir);
    c.monitor_host = j.value("monitor_host", c.monitor_host);
    c.monitor_port = j.value("monitor_port", c.monitor_port);
    c.lake_host = j.value("lake_host", c.lake_host);
    c.lake_port = j.value("lake_port", c.lake_port);
    c.exchange_host = j.value("exchange_host", c.exchange_host);
    c.exchange_port = j.value("exchange_port", c.exchange_port);
    c.signing_secret = j.value("signing_secret", c.signing_secret);
    c.server_id = j.value("server_id", c.server_id);
    c.provider = j.value("provider", c.provider);
    c.admin_originator = j.value("admin_originator", c.admin_originator);
    c.guest_originator = j.value("guest_originator", c.guest_originator);
    c.seed = j.value("seed", c.seed);
    c.offset_minutes = j.value("offset_minutes", c.offset_minutes);
    c.quality_source = j.value("quality_source", c.quality_source);
    c.notify_retries = j.value("notify_retries", c.notify_retries);
    c.notify_ack_timeout_ms = j.value("notify_ack_timeout_ms", c.notify_ack_timeout_ms);
    c.exchange_page_size = j.value("exchange_page_size", c.exchange_page_size);
    c.exchange_max_span_days = j.value("exchange_max_span_days", c.exchange_max_span_days);
    if (j.contains("intake_allowed_hosts"))
        for (const auto& h : j.at("intake_allowed_hosts"))
            if (h.is_string()) c.intake_allowed_hosts.push_back(h.get<std::string>());

    if (const char* env = std::getenv("CITYSTACK_SECRET"); env && *env) c.signing_secret = env;
    if (const char* env = std::getenv("CITYSTACK_DATA_DIR"); env && *env) c.data_dir = env;
    return c;
}

Result<Config> Config::load(const std::string& path) {
    auto j = load_json_file(path);
    if (!j) return j.error();
    return from_json(j.value());
}

Result<void> Config::validate() const {
    if (signing_secret.empty())
        return make_error(Errc::BadConfig,
                          "signing_secret is empty (set it in the config or CITYSTACK_SECRET)");
    if (data_dir.empty()) return make_error(Errc::BadConfig, "data_dir is empty");
    if (quality_source != "lake" && quality_source != "none")
        return make_error(Errc::BadConfig, "quality_source must be 'lake' or 'none'");
    if (notify_retries < 0 || exchange_page_size == 0 || exchange_max_span_days <= 0)
        return make_error(Errc::BadConfig, "retry, page size and span settings must be positive");
    return {};
}

}  // namespace citystack::platform
