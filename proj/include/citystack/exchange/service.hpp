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
#include <optional>
#include <string>
#include <vector>

#include "citystack/core/resource_tree.hpp"
#include "citystack/exchange/catalogue.hpp"
#include "citystack/exchange/tokens.hpp"
#include "citystack/lake/store.hpp"

namespace citystack::exchange {

/// The exchange reads live data from the monitor (latest API) and history
/// from the lake; this facade decouples it from their wiring.
struct MonitorFacade {
    std::function<Result<core::ContentInstance>(const std::string& data_path)> latest;
    std::function<Result<core::DescriptorRecord>(const std::string& data_path)> descriptor;
};

struct ValueFilter {
    std::string attr;
    std::string op;  // > < >= <= == !=
    bool numeric = true;
    double number = 0;
    std::string text;
};

struct TemporalQuery {
    enum class Rel { Before, After, During };
    Rel rel = Rel::During;
    std::int64_t start = 0;  // after/during
    std::int64_t end = 0;    // before/during
    std::optional<std::vector<std::string>> attrs;
    std::optional<ValueFilter> filter;
    std::size_t offset = 0;
};

Result<ValueFilter> parse_value_filter(const std::string& expr);

struct HttpReply {
    int status = 200;
    Json body;
};

/// Token-secured data APIs over the catalogue, lake, and monitor:
/// metadata, latest, temporal with paging/filtering, catalogue lookup,
/// token issuance and revocation.
class ExchangeService {
public:
    struct Options {
        std::string server_id;
        std::size_t page_size = 2000;
        int max_span_days = 10;  // calendar days
        int offset_minutes = timeutil::kDefaultOffsetMinutes;
    };

    ExchangeService(Catalogue& catalogue, TokenService& tokens, lake::LakeStore& lake,
                    MonitorFacade monitor, Options opt, Clock clock = system_clock());

    // -- library surface (token checks live in the handle_* wrappers) ----

    Result<Json> get_metadata(const std::string& resource_id) const;
    Result<Json> get_latest(const std::string& resource_id) const;
    Result<Json> query_temporal(const std::string& resource_id, const TemporalQuery& q) const;
    Result<Json> catalogue_lookup(const std::string& id) const;

    // -- request surface ---------------------------------------------------

    HttpReply handle_latest(const std::string& token, const std::string& resource_id) const;
    HttpReply handle_meta(const std::string& token, const std::string& resource_id) const;
    HttpReply handle_temporal(const std::string& token, const std::string& resource_id,
                              const std::map<std::string, std::string>& params) const;
    HttpReply handle_catalogue(const std::string& id) const;
    HttpReply handle_token(const Json& body) const;
    HttpReply handle_revoke(const Json& body, const std::string& internal_auth) const;

    Result<TemporalQuery> parse_temporal_params(
        const std::map<std::string, std::string>& params) const;

    const Options& options() const { return opt_; }

private:
    Json render_attribute(const AttributeSpec& spec, const Json& value) const;
    Result<Json> render_row(const ResourceGroup& group, const CatalogueItem& item,
                            const Json& source_values, std::int64_t ts,
                            const std::string& version,
                            const std::optional<std::vector<std::string>>& attrs) const;
    HttpReply to_reply(const Result<Json>& result) const;

    Catalogue& catalogue_;
    TokenService& tokens_;
    lake::LakeStore& lake_;
    MonitorFacade monitor_;
    Options opt_;
    Clock clock_;
};

}  // namespace citystack::exchange
