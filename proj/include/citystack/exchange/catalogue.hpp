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
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "citystack/support/json.hpp"
#include "citystack/support/result.hpp"

namespace citystack::exchange {

/// How one exchange attribute is rendered from a positional source value.
///   inst      -> {"instValue": <number>} ("nan" string when null)
///   string    -> fixed-decimal string, e.g. "102.27"
///   enum      -> value -> label table, e.g. 3 -> "POOR"
///   hidden    -> never rendered
struct AttributeSpec {
    std::string source;  // descriptor/PFT parameter name, e.g. "PM2.5"
    std::string kind = "inst";
    int decimals = 2;
    std::map<int, std::string> enums;
};

/// Ordered exchange-name -> rendering map for one resource group.
struct DataModel {
    std::vector<std::pair<std::string, AttributeSpec>> attributes;

    const AttributeSpec* find(const std::string& attr) const;
    /// source parameter name -> exchange attribute name
    std::map<std::string, std::string> source_index() const;
};

enum class AccessClass { Open, Secure };

struct CatalogueItem {
    std::string id;  // resourceGroup + "/" + name
    std::string name;
    std::string label;
    std::string description;
    std::vector<std::string> type_tags;
    std::vector<std::string> tags;
    double longitude = 0;
    double latitude = 0;
    std::string address;
    std::string provider;
    std::string resource_group;
    std::string item_status = "ACTIVE";
    std::string created_at;
    std::string monitor_path;  // the node's Data container on the monitor

    Json to_json() const;  // catalogue document shape
};

struct ResourceGroup {
    std::string id;
    std::string name;       // e.g. "iiith-env-aqm"
    std::string vertical;   // lake tenant, e.g. "AQ"
    std::string label;
    AccessClass access = AccessClass::Open;
    std::set<std::string> grants;  // consumers granted on a Secure group
    DataModel model;
    std::vector<std::string> item_ids;
};

/// Embedded catalogue: item/group metadata plus each group's access class
/// and data model. Loaded from one structured config document.
class Catalogue {
public:
    Result<void> load(const Json& config);
    Json to_config() const;

    const std::string& server_id() const { return server_id_; }
    const std::string& provider() const { return provider_; }

    Result<const CatalogueItem*> item(const std::string& id) const;
    Result<const ResourceGroup*> group(const std::string& id) const;
    /// Group owning a resource id (= everything before the last '/').
    Result<const ResourceGroup*> group_of(const std::string& resource_id) const;

    /// Item document, or a member listing for a group id.
    Result<Json> lookup(const std::string& id) const;

    std::vector<std::string> group_ids() const;

    bool has_grant(const std::string& group_id, const std::string& user) const;
    Result<void> add_grant(const std::string& group_id, const std::string& user);

private:
    std::string server_id_;
    std::string provider_;
    std::map<std::string, CatalogueItem> items_;
    std::map<std::string, ResourceGroup> groups_;
};

}  // namespace citystack::exchange
