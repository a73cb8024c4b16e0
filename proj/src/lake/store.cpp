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
#include "citystack/lake/store.hpp"

#include <algorithm>
#include <filesystem>
#include <limits>

namespace citystack::lake {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// TenantStore

TenantStore::TenantStore(std::string tenant, std::string dir)
    : tenant_(std::move(tenant)), dir_(std::move(dir)) {
    journal_path_ = dir_ + "/journal.ndjson";
}

Result<void> TenantStore::open() {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) return make_error(Errc::Io, "cannot create " + dir_);

    if (fs::exists(journal_path_)) {
        std::ifstream in(journal_path_);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto rec = parse_json(line);
            if (!rec) continue;  // torn tail write
            auto applied = apply(rec.value(), /*from_journal=*/true);
            (void)applied;  // duplicates on replay are expected and counted
        }
    }
    out_.open(journal_path_, std::ios::app);
    if (!out_) return make_error(Errc::Io, "cannot open " + journal_path_);
    return {};
}

Result<void> TenantStore::append(const Json& record) {
    out_ << record.dump() << '\n';
    out_.flush();
    if (!out_) return make_error(Errc::Io, "journal write failed for " + tenant_);
    return {};
}

Result<void> TenantStore::apply(const Json& rec, bool from_journal) {
    const std::string type = rec.value("t", std::string{});
    if (type == "row") {
        std::string node = rec.value("node", std::string{});
        std::int64_t ts = rec.value("ts", std::int64_t{0});
        auto key = std::make_pair(node, ts);
        if (facts_.count(key)) {
            ++duplicates_;
            return make_error(Errc::DuplicateKey,
                              node + "@" + std::to_string(ts) + " already stored");
        }
        DataRow row;
        row.node = std::move(node);
        row.ts = ts;
        row.version = rec.value("version", std::string{});
        row.recorded_at = rec.value("recorded_at", std::int64_t{0});
        row.values = rec.value("values", Json::object());
        facts_.emplace(std::move(key), std::move(row));
        return {};
    }
    if (type == "node") {
        NodeDim n;
        n.node = rec.value("node", std::string{});
        n.latitude = rec.value("lat", 0.0);
        n.longitude = rec.value("lon", 0.0);
        nodes_[n.node] = n;
        return {};
    }
    if (type == "version") {
        VersionDim v;
        v.node = rec.value("node", std::string{});
        v.version = rec.value("version", std::string{});
        v.start = rec.value("start", std::int64_t{0});
        v.end = rec.value("end", std::int64_t{0});
        v.spec = rec.value("spec", Json::object());
        v.comments = rec.value("comments", std::string{});
        auto& list = versions_[v.node];
        auto it = std::find_if(list.begin(), list.end(),
                               [&](const VersionDim& e) { return e.version == v.version; });
        if (it != list.end())
            *it = v;
        else
            list.push_back(v);
        std::sort(list.begin(), list.end(),
                  [](const VersionDim& a, const VersionDim& b) { return a.start < b.start; });
        return {};
    }
    if (type == "parameter") {
        std::string version = rec.value("version", std::string{});
        ParameterRow p;
        p.parameter = rec.value("parameter", std::string{});
        p.position = rec.value("position", 0);
        p.sensor = rec.value("sensor", std::string{});
        p.datatype = rec.value("datatype", std::string{});
        p.unit = rec.value("unit", std::string{});
        p.accuracy = rec.value("accuracy", std::string{});
        p.resolution = rec.value("resolution", std::string{});
        parameters_[version][p.parameter] = std::move(p);
        return {};
    }
    (void)from_journal;
    return make_error(Errc::MalformedContent, "unknown journal record type " + type);
}

Result<void> TenantStore::upsert_node(const NodeDim& node) {
    std::lock_guard wl(write_mu_);
    std::unique_lock lk(mu_);
    Json rec{{"t", "node"}, {"node", node.node}, {"lat", node.latitude}, {"lon", node.longitude}};
    auto applied = apply(rec, false);
    if (!applied) return applied;
    return append(rec);
}

Result<void> TenantStore::upsert_version(const VersionDim& version) {
    std::lock_guard wl(write_mu_);
    std::unique_lock lk(mu_);
    Json rec{{"t", "version"},   {"node", version.node},
             {"version", version.version}, {"start", version.start},
             {"end", version.end},         {"spec", version.spec},
             {"comments", version.comments}};
    auto applied = apply(rec, false);
    if (!applied) return applied;
    return append(rec);
}

Result<void> TenantStore::upsert_parameter(const std::string& version, const ParameterRow& row) {
    std::lock_guard wl(write_mu_);
    std::unique_lock lk(mu_);
    Json rec{{"t", "parameter"},   {"version", version},
             {"parameter", row.parameter}, {"position", row.position},
             {"sensor", row.sensor},       {"datatype", row.datatype},
             {"unit", row.unit},           {"accuracy", row.accuracy},
             {"resolution", row.resolution}};
    auto applied = apply(rec, false);
    if (!applied) return applied;
    return append(rec);
}

Result<void> TenantStore::store_observation(const std::string& node, std::int64_t ts,
                                            const Json& values, std::int64_t recorded_at,
                                            const std::string& version_hint) {
    std::lock_guard wl(write_mu_);
    std::unique_lock lk(mu_);
    std::string version;
    // version resolved from the dimension by ts; the label is a fallback
    if (auto it = versions_.find(node); it != versions_.end()) {
        for (const auto& v : it->second)
            if (ts >= v.start && ts < v.end) {
                version = v.version;
                break;
            }
    }
    if (version.empty()) version = version_hint;

    Json rec{{"t", "row"},       {"node", node},
             {"ts", ts},         {"version", version},
             {"recorded_at", recorded_at}, {"values", values}};
    auto applied = apply(rec, false);
    if (!applied) return applied;  // DuplicateKey: counted, not journaled twice
    return append(rec);
}

Result<std::vector<DataRow>> TenantStore::query_temporal(
    const std::string& node, std::int64_t start, std::int64_t end,
    const std::vector<std::string>* attrs) const {
    std::shared_lock lk(mu_);
    if (!nodes_.count(node) && !versions_.count(node)) {
        // a node is also known once it has rows
        auto probe = facts_.lower_bound({node, std::numeric_limits<std::int64_t>::min()});
        if (probe == facts_.end() || probe->first.first != node)
            return make_error(Errc::UnknownNode, "no node " + node + " in tenant " + tenant_);
    }
    std::vector<DataRow> out;
    for (auto it = facts_.lower_bound({node, start});
         it != facts_.end() && it->first.first == node && it->first.second < end; ++it) {
        if (!attrs) {
            out.push_back(it->second);
            continue;
        }
        DataRow projected = it->second;
        Json values;
        for (const auto& a : *attrs)
            if (projected.values.contains(a)) values[a] = projected.values.at(a);
        projected.values = std::move(values);
        out.push_back(std::move(projected));
    }
    return out;
}

std::optional<std::string> TenantStore::version_for(const std::string& node,
                                                    std::int64_t ts) const {
    std::shared_lock lk(mu_);
    auto it = versions_.find(node);
    if (it == versions_.end()) return std::nullopt;
    for (const auto& v : it->second)
        if (ts >= v.start && ts < v.end) return v.version;
    return std::nullopt;
}

std::vector<VersionDim> TenantStore::versions_of(const std::string& node) const {
    std::shared_lock lk(mu_);
    auto it = versions_.find(node);
    return it == versions_.end() ? std::vector<VersionDim>{} : it->second;
}

std::vector<std::string> TenantStore::parameters_for(const std::string& version) const {
    std::shared_lock lk(mu_);
    auto it = parameters_.find(version);
    if (it == parameters_.end()) return {};
    std::vector<const ParameterRow*> rows;
    for (const auto& [_, row] : it->second) rows.push_back(&row);
    std::sort(rows.begin(), rows.end(),
              [](const ParameterRow* a, const ParameterRow* b) { return a->position < b->position; });
    std::vector<std::string> out;
    for (const auto* r : rows) out.push_back(r->parameter);
    return out;
}

std::optional<ParameterRow> TenantStore::parameter_info(const std::string& version,
                                                        const std::string& parameter) const {
    std::shared_lock lk(mu_);
    auto it = parameters_.find(version);
    if (it == parameters_.end()) return std::nullopt;
    auto pit = it->second.find(parameter);
    if (pit == it->second.end()) return std::nullopt;
    return pit->second;
}

std::optional<NodeDim> TenantStore::node_dim(const std::string& node) const {
    std::shared_lock lk(mu_);
    auto it = nodes_.find(node);
    if (it == nodes_.end()) return std::nullopt;
    return it->second;
}

std::size_t TenantStore::row_count() const {
    std::shared_lock lk(mu_);
    return facts_.size();
}

std::uint64_t TenantStore::duplicate_count() const {
    std::shared_lock lk(mu_);
    return duplicates_;
}

std::vector<std::string> TenantStore::node_names() const {
    std::shared_lock lk(mu_);
    std::vector<std::string> out;
    for (const auto& [name, _] : nodes_) out.push_back(name);
    return out;
}

std::string TenantStore::canonical_export() const {
    std::shared_lock lk(mu_);
    std::string out;
    for (const auto& [key, row] : facts_) {
        Json j{{"node", row.node},
               {"ts", row.ts},
               {"version", row.version},
               {"values", row.values}};
        out += j.dump();
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// LakeStore

LakeStore::LakeStore(std::string root_dir) : root_dir_(std::move(root_dir)) {
    dead_letter_path_ = root_dir_ + "/deadletter.ndjson";
}

Result<TenantStore*> LakeStore::tenant(const std::string& name) {
    std::lock_guard lk(mu_);
    auto it = tenants_.find(name);
    if (it != tenants_.end()) return it->second.get();
    auto store = std::make_unique<TenantStore>(name, root_dir_ + "/" + name);
    auto opened = store->open();
    if (!opened) return opened.error();
    auto* ptr = store.get();
    tenants_[name] = std::move(store);
    return ptr;
}

TenantStore* LakeStore::tenant_if_exists(const std::string& name) {
    std::lock_guard lk(mu_);
    auto it = tenants_.find(name);
    return it == tenants_.end() ? nullptr : it->second.get();
}

std::vector<std::string> LakeStore::tenant_names() const {
    std::lock_guard lk(mu_);
    std::vector<std::string> out;
    for (const auto& [name, _] : tenants_) out.push_back(name);
    return out;
}

void LakeStore::dead_letter(const std::string& reason, const Json& payload) {
    std::lock_guard lk(mu_);
    std::error_code ec;
    fs::create_directories(root_dir_, ec);
    std::ofstream out(dead_letter_path_, std::ios::app);
    out << Json{{"reason", reason}, {"payload", payload}}.dump() << '\n';
}

std::vector<Json> LakeStore::dead_letters() const {
    std::lock_guard lk(mu_);
    std::vector<Json> out;
    std::ifstream in(dead_letter_path_);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto rec = parse_json(line);
        if (rec) out.push_back(std::move(rec).value());
    }
    return out;
}

Result<std::string> route_tenant(const std::vector<std::string>& labels) {
    for (const auto& label : labels) {
        if (label.rfind("AE-", 0) == 0 && label.size() > 3) {
            std::string suffix = label.substr(3);
            auto dash = suffix.find('-');
            return dash == std::string::npos ? suffix : suffix.substr(0, dash);
        }
    }
    return make_error(Errc::UnknownVertical, "no AE label present");
}

}  // namespace citystack::lake
