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
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "citystack/support/json.hpp"
#include "citystack/support/result.hpp"

namespace citystack::lake {

/// Fact row of the data fact table. (node, ts) is the compound primary key.
struct DataRow {
    std::string node;
    std::int64_t ts = 0;
    std::string version;
    std::int64_t recorded_at = 0;
    Json values;  // parameter name -> number | null
};

/// Parameters fact table row, unique per (version, parameter).
struct ParameterRow {
    std::string parameter;
    int position = 0;  // index within the positional content array
    std::string sensor;
    std::string datatype;
    std::string unit;
    std::string accuracy;
    std::string resolution;
};

struct NodeDim {
    std::string node;
    double latitude = 0;
    double longitude = 0;
};

struct VersionDim {
    std::string node;
    std::string version;
    std::int64_t start = 0;
    std::int64_t end = 0;  // year-9999 sentinel = open
    Json spec = Json::object();  // sensor map rendered by the metadata API
    std::string comments;
};

/// One tenant's logical store: an in-memory galaxy schema backed by a
/// per-tenant append-only write-ahead journal. Reload = journal replay.
class TenantStore {
public:
    TenantStore(std::string tenant, std::string dir);

    const std::string& tenant() const { return tenant_; }

    /// Opens the journal (creating directories), replaying existing
    /// records into memory first.
    Result<void> open();

    /// Idempotent dimension/schema upserts (journaled).
    Result<void> upsert_node(const NodeDim& node);
    Result<void> upsert_version(const VersionDim& version);
    Result<void> upsert_parameter(const std::string& version, const ParameterRow& row);

    /// Writes one fact row. DuplicateKey signals exact re-delivery of an
    /// already-stored (node, ts) pair; it is counted, not stored twice.
    Result<void> store_observation(const std::string& node, std::int64_t ts, const Json& values,
                                   std::int64_t recorded_at,
                                   const std::string& version_hint = {});

    /// Rows with start <= ts < end for the node, ascending ts, optionally
    /// projected to the named attributes.
    Result<std::vector<DataRow>> query_temporal(const std::string& node, std::int64_t start,
                                                std::int64_t end,
                                                const std::vector<std::string>* attrs = nullptr) const;

    std::optional<std::string> version_for(const std::string& node, std::int64_t ts) const;
    std::vector<VersionDim> versions_of(const std::string& node) const;
    std::vector<std::string> parameters_for(const std::string& version) const;
    std::optional<ParameterRow> parameter_info(const std::string& version,
                                               const std::string& parameter) const;
    std::optional<NodeDim> node_dim(const std::string& node) const;

    std::size_t row_count() const;
    std::uint64_t duplicate_count() const;
    std::vector<std::string> node_names() const;

    /// Deterministic dump of the whole store (sorted rows), used for the
    /// byte-identical replay checks.
    std::string canonical_export() const;

private:
    Result<void> append(const Json& record);
    Result<void> apply(const Json& record, bool from_journal);

    std::string tenant_;
    std::string dir_;
    std::string journal_path_;
    std::ofstream out_;
    std::map<std::pair<std::string, std::int64_t>, DataRow> facts_;
    std::map<std::string, NodeDim> nodes_;
    std::map<std::string, std::vector<VersionDim>> versions_;                // by node
    std::map<std::string, std::map<std::string, ParameterRow>> parameters_; // by version
    std::uint64_t duplicates_ = 0;
    mutable std::shared_mutex mu_;
    std::mutex write_mu_;  // single writer per tenant
};

/// The multi-tenant lake: one separate logical store per vertical under a
/// common root directory, plus a shared dead-letter journal.
class LakeStore {
public:
    explicit LakeStore(std::string root_dir);

    /// Tenant for the vertical, created on first use.
    Result<TenantStore*> tenant(const std::string& name);
    TenantStore* tenant_if_exists(const std::string& name);
    std::vector<std::string> tenant_names() const;

    void dead_letter(const std::string& reason, const Json& payload);
    std::vector<Json> dead_letters() const;

    const std::string& root_dir() const { return root_dir_; }

private:
    std::string root_dir_;
    std::map<std::string, std::unique_ptr<TenantStore>> tenants_;
    std::string dead_letter_path_;
    mutable std::mutex mu_;
};

/// Tenant id from notification labels: the vertical token of the AE label
/// ("AE-AQ" -> "AQ", "AE-WM-WF" -> "WM").
Result<std::string> route_tenant(const std::vector<std::string>& labels);

}  // namespace citystack::lake
