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
#include "citystack/exchange/catalogue.hpp"

namespace citystack::exchange {

const AttributeSpec* DataModel::find(const std::string& attr) const {
    for (const auto& [name, spec] : attributes)
        if (name == attr) return &spec;
    return nullptr;
}

std::map<std::string, std::string> DataModel::source_index() const {
    std::map<std::string, std::string> out;
    for (const auto& [name, spec] : attributes) out[spec.source] = name;
    return out;
}

Json CatalogueItem::to_json() const {
    Json j;
    j["@context"] = "https://voc.iudx.org.in/";
    j["type"] = type_tags;
    j["id"] = id;
    j["name"] = name;
    j["label"] = label;
    j["description"] = description;
    j["tags"] = tags;
    j["location"] = Json{{"geometry", Json{{"coordinates", Json::array({longitude, latitude})},
                                           {"type", "Point"}}},
                         {"type", "Place"},
                         {"address", address}};
    j["provider"] = provider;
    j["resourceGroup"] = resource_group;
    j["itemStatus"] = item_status;
    j["itemCreatedAt"] = created_at;
    return j;
}

Result<void> Catalogue::load(const Json& config) {
    if (!config.is_object()) return make_error(Errc::BadConfig, "catalogue config not an object");
    server_id_ = config.value("server_id", std::string{});
    provider_ = config.value("provider", std::string{});
    if (server_id_.empty() || provider_.empty())
        return make_error(Errc::BadConfig, "catalogue config needs server_id and provider");
    items_.clear();
    groups_.clear();

    for (const auto& g : config.value("groups", Json::array())) {
        ResourceGroup group;
        group.name = g.value("name", std::string{});
        if (group.name.empty()) return make_error(Errc::BadConfig, "group without name");
        group.id = provider_ + "/" + server_id_ + "/" + group.name;
        group.vertical = g.value("vertical", std::string{});
        group.label = g.value("label", std::string{});
        group.access =
            g.value("access", std::string{"open"}) == "secure" ? AccessClass::Secure
                                                               : AccessClass::Open;
        for (const auto& u : g.value("grants", Json::array()))
            if (u.is_string()) group.grants.insert(u.get<std::string>());
        for (const auto& a : g.value("model", Json::array())) {
            AttributeSpec spec;
            spec.source = a.value("source", std::string{});
            spec.kind = a.value("kind", std::string{"inst"});
            spec.decimals = a.value("decimals", 2);
            if (a.contains("enums"))
                for (const auto& [k, v] : a.at("enums").items())
                    spec.enums[std::stoi(k)] = v.get<std::string>();
            group.model.attributes.emplace_back(a.value("attr", std::string{}), std::move(spec));
        }

        for (const auto& it : g.value("items", Json::array())) {
            CatalogueItem item;
            item.name = it.value("name", std::string{});
            if (item.name.empty()) return make_error(Errc::BadConfig, "item without name");
            item.resource_group = group.id;
            item.id = group.id + "/" + item.name;
            item.label = it.value("label", std::string{});
            item.description = it.value("description", std::string{});
            for (const auto& t : it.value("type", Json::array()))
                if (t.is_string()) item.type_tags.push_back(t.get<std::string>());
            if (item.type_tags.empty()) item.type_tags = {"iudx:Resource"};
            for (const auto& t : it.value("tags", Json::array()))
                if (t.is_string()) item.tags.push_back(t.get<std::string>());
            item.longitude = it.value("longitude", 0.0);
            item.latitude = it.value("latitude", 0.0);
            item.address = it.value("address", std::string{});
            item.provider = provider_;
            item.item_status = it.value("status", std::string{"ACTIVE"});
            item.created_at = it.value("created", std::string{});
            item.monitor_path = it.value("monitor_path", std::string{});
            group.item_ids.push_back(item.id);
            items_[item.id] = std::move(item);
        }
        groups_[group.id] = std::move(group);
    }
    return {};
}

Json Catalogue::to_config() const {
    Json out{{"server_id", server_id_}, {"provider", provider_}};
    Json groups = Json::array();
    for (const auto& [_, g] : groups_) {
        Json gj{{"name", g.name},
                {"vertical", g.vertical},
                {"label", g.label},
                {"access", g.access == AccessClass::Secure ? "secure" : "open"}};
        gj["grants"] = Json::array();
        for (const auto& u : g.grants) gj["grants"].push_back(u);
        Json model = Json::array();
        for (const auto& [name, spec] : g.model.attributes) {
            Json a{{"attr", name}, {"source", spec.source}, {"kind", spec.kind},
                   {"decimals", spec.decimals}};
            if (!spec.enums.empty()) {
                Json enums;
                for (const auto& [k, v] : spec.enums) enums[std::to_string(k)] = v;
                a["enums"] = std::move(enums);
            }
            model.push_back(std::move(a));
        }
        gj["model"] = std::move(model);
        Json items = Json::array();
        for (const auto& id : g.item_ids) {
            const auto& it = items_.at(id);
            items.push_back(Json{{"name", it.name},
                                 {"label", it.label},
                                 {"description", it.description},
                                 {"type", it.type_tags},
                                 {"tags", it.tags},
                                 {"longitude", it.longitude},
                                 {"latitude", it.latitude},
                                 {"address", it.address},
                                 {"status", it.item_status},
                                 {"created", it.created_at},
                                 {"monitor_path", it.monitor_path}});
        }
        gj["items"] = std::move(items);
        groups.push_back(std::move(gj));
    }
    out["groups"] = std::move(groups);
    return out;
}

Result<const CatalogueItem*> Catalogue::item(const std::string& id) const {
    auto it = items_.find(id);
    if (it == items_.end()) return make_error(Errc::UnknownItem, "no catalogue item " + id);
    return &it->second;
}

Result<const ResourceGroup*> Catalogue::group(const std::string& id) const {
    auto it = groups_.find(id);
    if (it == groups_.end()) return make_error(Errc::UnknownItem, "no resource group " + id);
    return &it->second;
}

Result<const ResourceGroup*> Catalogue::group_of(const std::string& resource_id) const {
    auto pos = resource_id.find_last_of('/');
    if (pos == std::string::npos)
        return make_error(Errc::UnknownItem, "not a resource id: " + resource_id);
    return group(resource_id.substr(0, pos));
}

Result<Json> Catalogue::lookup(const std::string& id) const {
    if (auto it = items_.find(id); it != items_.end()) return it->second.to_json();
    if (auto g = groups_.find(id); g != groups_.end()) {
        Json members = Json::array();
        for (const auto& item_id : g->second.item_ids)
            members.push_back(items_.at(item_id).to_json());
        return Json{{"id", g->second.id},
                    {"type", Json::array({"iudx:ResourceGroup"})},
                    {"label", g->second.label},
                    {"results", std::move(members)}};
    }
    return make_error(Errc::UnknownItem, "no catalogue entry " + id);
}

std::vector<std::string> Catalogue::group_ids() const {
    std::vector<std::string> out;
    for (const auto& [id, _] : groups_) out.push_back(id);
    return out;
}

bool Catalogue::has_grant(const std::string& group_id, const std::string& user) const {
    auto it = groups_.find(group_id);
    return it != groups_.end() && it->second.grants.count(user) > 0;
}

Result<void> Catalogue::add_grant(const std::string& group_id, const std::string& user) {
    auto it = groups_.find(group_id);
    if (it == groups_.end()) return make_error(Errc::UnknownItem, "no resource group " + group_id);
    it->second.grants.insert(user);
    return {};
}

}  // namespace citystack::exchange
