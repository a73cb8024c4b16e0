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

#include <atomic>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "citystack/core/permissions.hpp"
#include "citystack/support/json.hpp"
#include "citystack/support/time.hpp"

namespace citystack::core {

/// Resource kinds with their oneM2M type codes (the `ty` attribute).
enum class ResourceKind : int {
    Acp = 1,
    Ae = 2,
    Cnt = 3,
    Cin = 4,
    Cse = 5,
    Grp = 9,
    Sub = 23,
};

const char* kind_prefix(ResourceKind k);  // "acp", "ae", "cnt", ...
std::optional<ResourceKind> kind_from_ty(int ty);

/// One immutable datum of a container.
struct ContentInstance {
    std::string rn;
    std::string ri;
    std::string pi;
    std::int64_t ct = 0;
    std::vector<std::string> lbl;
    int st = 0;
    std::string cnf = "text";
    std::string con;

    std::size_t cs() const { return con.size(); }
    Json to_m2m(int offset_minutes) const;
};

/// Per-parameter description held by a descriptor record.
struct ParameterDescription {
    std::string description;
    std::string datatype;
    std::string unit;
    std::string resolution;
    std::string accuracy;
};

/// Device description stored as the Descriptor container's content
/// instance: identifies the node, its versions, and the positional layout
/// of the sibling Data container's content arrays.
struct DescriptorRecord {
    std::string node_id;
    double latitude = 0;
    double longitude = 0;
    Json device_model;  // free-form
    struct VersionEntry {
        std::string version;
        std::int64_t start = 0;
        std::int64_t end = 0;  // open intervals use the year-9999 sentinel
    };
    std::vector<VersionEntry> versions;
    std::vector<std::string> parameters;  // positional order of con arrays
    std::map<std::string, ParameterDescription> parameter_info;

    Json to_json() const;
    static Result<DescriptorRecord> from_json(const Json& j);
};

/// Binds the i-th value of a positional content array ("[1645254204,
/// 867.00, ...]") to the i-th descriptor parameter name. "nan" becomes a
/// JSON null.
Result<Json> parse_positional_payload(const DescriptorRecord& desc, const std::string& con);

/// Inverse of parse_positional_payload for round-trip checks.
std::string serialize_positional_payload(const DescriptorRecord& desc, const Json& values);

struct Subscription {
    std::string rn;
    std::string path;
    std::string container_path;
    std::string nu;
    std::string creator;
};

struct Node {
    ResourceKind kind = ResourceKind::Cnt;
    std::string rn;
    std::string ri;
    std::string path;
    std::string parent_path;
    std::int64_t ct = 0;
    std::int64_t lt = 0;
    int st = 0;
    std::vector<std::string> lbl;
    std::vector<std::string> acpi;

    // CNT
    int mni = 0;
    int mbs = 10000;  // stored, not enforced
    int mia = 0;      // stored, not enforced
    std::uint64_t cbs = 0;
    std::deque<ContentInstance> cins;

    // GRP
    int mt = static_cast<int>(ResourceKind::Cnt);
    int mnm = 0;
    std::vector<std::string> mid;

    // ACP
    AccessPolicy policy;

    // SUB
    std::string nu;
    std::string creator;

    std::vector<std::string> children;  // creation order, non-CIN

    mutable std::shared_mutex cin_mu;  // single writer per container
};

struct InsertOutcome {
    ContentInstance cin;
    std::optional<ContentInstance> evicted;
};

enum class FanVerb { Latest, Oldest, All };

struct MemberResult {
    std::string member_path;
    Result<std::vector<ContentInstance>> data;
};

/// oneM2M-style resource tree: CSE root, AEs per vertical, node containers
/// with Descriptor/Data children, bounded data containers, groups,
/// label discovery, and ACP-guarded access.
///
/// Reads are freely concurrent; mutations are serialized per container;
/// topology changes take the tree lock exclusively.
class ResourceTree {
public:
    struct Options {
        std::string cse_id = "in-cse";
        std::string cse_name = "in-name";
        int default_mni = 120;
        int offset_minutes = timeutil::kDefaultOffsetMinutes;
        /// Allowed everything while no policy resolves (bootstrap; the
        /// seeded tree always attaches policies afterwards).
        std::string admin_originator = "admin:admin";
    };

    ResourceTree() : ResourceTree(Options{}) {}
    explicit ResourceTree(Options opt, Clock clock = system_clock());

    /// Mutation records are emitted here after being applied (journal).
    using MutationSink = std::function<void(const Json& record)>;
    void set_sink(MutationSink sink);

    const std::string& root_path() const { return root_path_; }

    // -- mutations ---------------------------------------------------------

    Result<std::string> create_resource(const std::string& parent_path, ResourceKind kind,
                                        const Json& attrs, const std::string& originator);

    Result<InsertOutcome> insert_cin(const std::string& cnt_path, const std::string& con,
                                     std::vector<std::string> labels,
                                     const std::string& originator);

    Result<void> update_resource(const std::string& path, const Json& attrs,
                                 const std::string& originator);

    Result<void> delete_resource(const std::string& path, const std::string& originator);

    // -- retrieval ---------------------------------------------------------

    Result<ContentInstance> latest(const std::string& cnt_path,
                                   const std::string& originator) const;
    Result<ContentInstance> oldest(const std::string& cnt_path,
                                   const std::string& originator) const;
    Result<std::vector<ContentInstance>> all_data(const std::string& cnt_path,
                                                  const std::string& originator) const;

    Result<std::vector<MemberResult>> group_fanout(const std::string& grp_path, FanVerb verb,
                                                   const std::string& originator) const;

    /// Paths of every container whose labels include ALL requested labels
    /// (AND), sorted lexicographically.
    Result<std::vector<std::string>> discover(const std::vector<std::string>& labels,
                                              const std::string& originator) const;

    /// Snapshot copy of a node's non-CIN attributes.
    Result<Json> describe(const std::string& path, const std::string& originator) const;

    // -- helpers -----------------------------------------------------------

    bool exists(const std::string& path) const;
    std::optional<ResourceKind> kind_of(const std::string& path) const;
    /// Effective policies for `path` (walking up when a node has none).
    std::vector<AccessPolicy> effective_policies(const std::string& path) const;
    bool known_credential(const std::string& path, const std::string& originator) const;
    Result<bool> allowed(const std::string& path, const std::string& originator,
                         Permission op) const;

    /// Descriptor record of the node container owning `data_cnt_path`
    /// (reads the sibling "Descriptor" container's latest instance).
    Result<DescriptorRecord> descriptor_for(const std::string& data_cnt_path) const;

    std::vector<Subscription> subscriptions_of(const std::string& cnt_path) const;
    std::vector<std::string> children_of(const std::string& path) const;

    /// Applies a journal record without access checks or re-emission
    /// (crash recovery / snapshot restore).
    Result<void> replay(const Json& record);

    Json snapshot() const;
    Result<void> load_snapshot(const Json& snap);
    std::uint64_t last_seq() const;

private:
    Node* find_locked(const std::string& path);
    const Node* find_locked(const std::string& path) const;
    std::vector<AccessPolicy> effective_policies_locked(const std::string& path) const;
    Result<bool> allowed_locked(const std::string& path, const std::string& originator,
                                Permission op) const;
    Result<void> apply_create(Json& rec, bool check, const std::string& originator);
    Result<void> apply_update(const Json& rec, bool check, const std::string& originator);
    Result<void> apply_delete(const Json& rec, bool check, const std::string& originator);
    void do_insert_locked(Node& cnt, Json& rec, InsertOutcome* outcome);
    Result<std::vector<ContentInstance>> fetch(const std::string& cnt_path, FanVerb verb,
                                               const std::string& originator) const;
    void emit(Json record);
    std::string next_ri(ResourceKind kind);
    void bump_ri_floor(std::uint64_t seq);
    void touch_parent(Node& parent);

    Options opt_;
    Clock clock_;
    std::string root_path_;
    std::map<std::string, std::unique_ptr<Node>> nodes_;
    std::atomic<std::uint64_t> next_seq_{1};  // ri sequence
    std::uint64_t journal_seq_ = 0;           // guarded by sink_mu_
    MutationSink sink_;
    mutable std::shared_mutex mu_;
    mutable std::mutex sink_mu_;
};

}  // namespace citystack::core
