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
#include "citystack/core/resource_tree.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>

namespace citystack::core {

namespace {

constexpr std::int64_t kYearSeconds = 365LL * 86400;

std::string parent_of(const std::string& path) {
    auto pos = path.find_last_of('/');
    if (pos == std::string::npos || pos == 0) return {};
    return path.substr(0, pos);
}

std::uint64_t ri_sequence(const std::string& ri) {
    auto pos = ri.find_last_of('-');
    if (pos == std::string::npos) return 0;
    std::uint64_t v = 0;
    auto sv = std::string_view(ri).substr(pos + 1);
    std::from_chars(sv.data(), sv.data() + sv.size(), v);
    return v;
}

Json rules_to_json(const std::vector<AccessRule>& rules) {
    Json acr = Json::array();
    for (const auto& r : rules) acr.push_back(Json{{"acor", r.originator}, {"acop", r.acop}});
    return Json{{"acr", acr}};
}

std::vector<AccessRule> rules_from_json(const Json& pv) {
    std::vector<AccessRule> out;
    if (!pv.is_object() || !pv.contains("acr")) return out;
    for (const auto& r : pv.at("acr")) {
        AccessRule rule;
        rule.originator = r.value("acor", std::string{});
        rule.acop = r.value("acop", 0);
        out.push_back(std::move(rule));
    }
    return out;
}

std::vector<std::string> string_list(const Json& j, const char* key) {
    std::vector<std::string> out;
    if (j.contains(key) && j.at(key).is_array())
        for (const auto& v : j.at(key))
            if (v.is_string()) out.push_back(v.get<std::string>());
    return out;
}

}  // namespace

const char* kind_prefix(ResourceKind k) {
    switch (k) {
        case ResourceKind::Acp: return "acp";
        case ResourceKind::Ae: return "ae";
        case ResourceKind::Cnt: return "cnt";
        case ResourceKind::Cin: return "cin";
        case ResourceKind::Cse: return "cse";
        case ResourceKind::Grp: return "grp";
        case ResourceKind::Sub: return "sub";
    }
    return "res";
}

std::optional<ResourceKind> kind_from_ty(int ty) {
    switch (ty) {
        case 1: return ResourceKind::Acp;
        case 2: return ResourceKind::Ae;
        case 3: return ResourceKind::Cnt;
        case 4: return ResourceKind::Cin;
        case 5: return ResourceKind::Cse;
        case 9: return ResourceKind::Grp;
        case 23: return ResourceKind::Sub;
        default: return std::nullopt;
    }
}

Json ContentInstance::to_m2m(int offset_minutes) const {
    Json j;
    j["rn"] = rn;
    j["ty"] = 4;
    j["ri"] = ri;
    j["pi"] = pi;
    j["ct"] = timeutil::format_compact(ct, offset_minutes);
    j["lt"] = timeutil::format_compact(ct, offset_minutes);
    j["lbl"] = lbl;
    j["st"] = st;
    j["cnf"] = cnf;
    j["cs"] = cs();
    j["con"] = con;
    return j;
}

// ---------------------------------------------------------------------------
// DescriptorRecord

Json DescriptorRecord::to_json() const {
    Json j;
    j["Node ID"] = node_id;
    j["Node Location"] = Json{{"Latitude", latitude}, {"Longitude", longitude}};
    j["Device Model"] = device_model;
    Json hist = Json::array();
    for (const auto& v : versions) {
        Json e;
        e["ver"] = v.version;
        e["dt_start"] = timeutil::format_iso(v.start);
        e["dt_end"] = timeutil::format_iso(v.end);
        hist.push_back(std::move(e));
    }
    j["Version History"] = std::move(hist);
    j["Data String Parameters"] = parameters;
    Json pd;
    for (const auto& [name, info] : parameter_info) {
        pd[name] = Json{{"description", info.description},
                        {"datatype", info.datatype},
                        {"unit", info.unit},
                        {"resolution", info.resolution},
                        {"accuracy", info.accuracy}};
    }
    j["Parameters Description"] = std::move(pd);
    return j;
}

Result<DescriptorRecord> DescriptorRecord::from_json(const Json& j) {
    if (!j.is_object()) return make_error(Errc::MalformedContent, "descriptor is not an object");
    DescriptorRecord d;
    d.node_id = j.value("Node ID", std::string{});
    if (j.contains("Node Location")) {
        d.latitude = j.at("Node Location").value("Latitude", 0.0);
        d.longitude = j.at("Node Location").value("Longitude", 0.0);
    }
    d.device_model = j.value("Device Model", Json::object());
    if (j.contains("Version History")) {
        for (const auto& e : j.at("Version History")) {
            VersionEntry v;
            v.version = e.value("ver", std::string{});
            auto parse_dt = [](const std::string& s) -> std::optional<std::int64_t> {
                if (auto t = timeutil::parse_iso(s)) return t;
                return timeutil::parse_descriptor_dt(s);
            };
            auto start = parse_dt(e.value("dt_start", std::string{}));
            auto end = parse_dt(e.value("dt_end", std::string{}));
            if (!start || !end)
                return make_error(Errc::MalformedContent, "bad version interval in descriptor");
            v.start = *start;
            v.end = *end;
            d.versions.push_back(std::move(v));
        }
    }
    d.parameters = string_list(j, "Data String Parameters");
    if (d.parameters.empty())
        return make_error(Errc::MalformedContent, "descriptor lists no parameters");
    if (j.contains("Parameters Description")) {
        for (const auto& [name, info] : j.at("Parameters Description").items()) {
            ParameterDescription p;
            p.description = info.value("description", std::string{});
            p.datatype = info.value("datatype", std::string{});
            p.unit = info.value("unit", std::string{});
            p.resolution = info.value("resolution", std::string{});
            p.accuracy = info.value("accuracy", std::string{});
            d.parameter_info[name] = std::move(p);
        }
    }
    return d;
}

Result<Json> parse_positional_payload(const DescriptorRecord& desc, const std::string& con) {
    std::string_view s(con);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        return make_error(Errc::MalformedContent, "content is not a bracketed array");
    s = s.substr(1, s.size() - 2);

    std::vector<std::string> tokens;
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == ',') {
            std::string_view tok = s.substr(start, i - start);
            while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front())))
                tok.remove_prefix(1);
            while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back())))
                tok.remove_suffix(1);
            tokens.emplace_back(tok);
            start = i + 1;
        }
    }
    if (tokens.size() == 1 && tokens[0].empty()) tokens.clear();
    if (tokens.size() != desc.parameters.size())
        return make_error(Errc::ArityMismatch,
                          "content has " + std::to_string(tokens.size()) + " values, descriptor " +
                              std::to_string(desc.parameters.size()));

    Json out;
    for (size_t i = 0; i < tokens.size(); ++i) {
        const std::string& tok = tokens[i];
        std::string lower = tok;
        std::transform(lower.begin(), lower.end(), lower.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (lower == "nan" || lower == "null") {
            out[desc.parameters[i]] = nullptr;
            continue;
        }
        if (tok.empty()) return make_error(Errc::MalformedContent, "empty value in content");
        char* end = nullptr;
        double v = std::strtod(tok.c_str(), &end);
        if (end != tok.c_str() + tok.size())
            return make_error(Errc::MalformedContent, "non-numeric value '" + tok + "'");
        if (tok.find_first_of(".eE") == std::string::npos)
            out[desc.parameters[i]] =
                static_cast<std::int64_t>(std::strtoll(tok.c_str(), nullptr, 10));
        else
            out[desc.parameters[i]] = v;
    }
    return out;
}

std::string serialize_positional_payload(const DescriptorRecord& desc, const Json& values) {
    std::string out = "[";
    for (size_t i = 0; i < desc.parameters.size(); ++i) {
        if (i) out += ", ";
        const auto& name = desc.parameters[i];
        if (!values.contains(name) || values.at(name).is_null())
            out += "nan";
        else
            out += values.at(name).dump();
    }
    out += "]";
    return out;
}

// ---------------------------------------------------------------------------
// ResourceTree

ResourceTree::ResourceTree(Options opt, Clock clock)
    : opt_(std::move(opt)), clock_(std::move(clock)) {
    root_path_ = "/" + opt_.cse_id + "/" + opt_.cse_name;
    auto root = std::make_unique<Node>();
    root->kind = ResourceKind::Cse;
    root->rn = opt_.cse_name;
    root->ri = "/" + opt_.cse_id;
    root->path = root_path_;
    root->ct = root->lt = clock_();
    nodes_[root_path_] = std::move(root);
}

void ResourceTree::set_sink(MutationSink sink) {
    std::lock_guard lk(sink_mu_);
    sink_ = std::move(sink);
}

// Callers hold the lock that serializes the mutation they are recording,
// so journal order always matches apply order.
void ResourceTree::emit(Json record) {
    std::lock_guard lk(sink_mu_);
    record["seq"] = ++journal_seq_;
    if (sink_) sink_(record);
}

std::string ResourceTree::next_ri(ResourceKind kind) {
    return "/" + opt_.cse_id + "/" + std::string(kind_prefix(kind)) + "-" +
           std::to_string(next_seq_.fetch_add(1));
}

void ResourceTree::bump_ri_floor(std::uint64_t seq) {
    std::uint64_t cur = next_seq_.load();
    while (seq + 1 > cur && !next_seq_.compare_exchange_weak(cur, seq + 1)) {
    }
}

Node* ResourceTree::find_locked(const std::string& path) {
    auto it = nodes_.find(path);
    return it == nodes_.end() ? nullptr : it->second.get();
}

const Node* ResourceTree::find_locked(const std::string& path) const {
    auto it = nodes_.find(path);
    return it == nodes_.end() ? nullptr : it->second.get();
}

std::vector<AccessPolicy> ResourceTree::effective_policies_locked(const std::string& path) const {
    std::string cur = path;
    while (!cur.empty()) {
        const Node* n = find_locked(cur);
        if (n && !n->acpi.empty()) {
            std::vector<AccessPolicy> out;
            for (const auto& ref : n->acpi) {
                for (const auto& [p, node] : nodes_) {
                    if (node->kind == ResourceKind::Acp && (node->ri == ref || node->path == ref)) {
                        out.push_back(node->policy);
                        break;
                    }
                }
            }
            if (!out.empty()) return out;
        }
        cur = parent_of(cur);
    }
    return {};
}

std::vector<AccessPolicy> ResourceTree::effective_policies(const std::string& path) const {
    std::shared_lock lk(mu_);
    return effective_policies_locked(path);
}

Result<bool> ResourceTree::allowed_locked(const std::string& path, const std::string& originator,
                                          Permission op) const {
    if (!find_locked(path)) return make_error(Errc::NotFound, "no resource at " + path);
    auto policies = effective_policies_locked(path);
    if (policies.empty()) return originator == opt_.admin_originator;
    return check_access(policies, originator, op);
}

Result<bool> ResourceTree::allowed(const std::string& path, const std::string& originator,
                                   Permission op) const {
    std::shared_lock lk(mu_);
    return allowed_locked(path, originator, op);
}

bool ResourceTree::known_credential(const std::string& path, const std::string& originator) const {
    std::shared_lock lk(mu_);
    auto policies = effective_policies_locked(path);
    if (policies.empty()) return originator == opt_.admin_originator;
    return known_originator(policies, originator) || originator == opt_.admin_originator;
}

bool ResourceTree::exists(const std::string& path) const {
    std::shared_lock lk(mu_);
    return find_locked(path) != nullptr;
}

std::optional<ResourceKind> ResourceTree::kind_of(const std::string& path) const {
    std::shared_lock lk(mu_);
    const Node* n = find_locked(path);
    if (!n) return std::nullopt;
    return n->kind;
}

void ResourceTree::touch_parent(Node& parent) {
    parent.st += 1;
    parent.lt = clock_();
}

// -- create -------------------------------------------------------------------

Result<std::string> ResourceTree::create_resource(const std::string& parent_path,
                                                  ResourceKind kind, const Json& attrs,
                                                  const std::string& originator) {
    Json rec;
    rec["op"] = "create";
    rec["parent"] = parent_path;
    rec["ty"] = static_cast<int>(kind);
    rec["attrs"] = attrs;

    std::unique_lock lk(mu_);
    auto applied = apply_create(rec, /*check=*/true, originator);
    if (!applied) return applied.error();
    std::string path = rec["path"].get<std::string>();
    emit(std::move(rec));
    return path;
}

Result<void> ResourceTree::apply_create(Json& rec, bool check, const std::string& originator) {
    const std::string parent_path = rec.at("parent").get<std::string>();
    auto kind_opt = kind_from_ty(rec.at("ty").get<int>());
    if (!kind_opt) return make_error(Errc::BadRequest, "unknown resource type");
    ResourceKind kind = *kind_opt;
    // copy: inserting keys into rec below would invalidate a reference
    const Json attrs = rec.at("attrs");

    Node* parent = find_locked(parent_path);
    if (!parent) return make_error(Errc::NotFound, "no resource at " + parent_path);
    if (kind == ResourceKind::Cin)
        return make_error(Errc::BadRequest, "content instances are created via insert");
    if (kind == ResourceKind::Ae && parent->kind != ResourceKind::Cse)
        return make_error(Errc::BadRequest, "application entities live under the CSE root");

    if (check) {
        Permission needed = kind == ResourceKind::Sub ? Permission::Notify : Permission::Create;
        auto ok = allowed_locked(parent_path, originator, needed);
        if (!ok) return ok.error();
        if (!ok.value())
            return make_error(Errc::AccessDenied,
                              std::string(to_string(needed)) + " denied on " + parent_path);
    }

    std::string rn = attrs.value("rn", attrs.value("m", std::string{}));
    if (rn.empty()) return make_error(Errc::BadRequest, "missing rn");
    std::string path = parent_path + "/" + rn;
    if (find_locked(path)) return make_error(Errc::DuplicateName, "sibling rn exists: " + rn);

    auto node = std::make_unique<Node>();
    node->kind = kind;
    node->rn = rn;
    node->path = path;
    node->parent_path = parent_path;
    node->ri = rec.contains("ri") ? rec.at("ri").get<std::string>() : next_ri(kind);
    node->ct = node->lt = rec.contains("ct") ? rec.at("ct").get<std::int64_t>() : clock_();
    node->lbl = string_list(attrs, "lbl");
    node->acpi = string_list(attrs, "acpi");

    switch (kind) {
        case ResourceKind::Cnt:
            node->mni = attrs.value("mni", opt_.default_mni);
            node->mbs = attrs.value("mbs", 10000);
            node->mia = attrs.value("mia", 0);
            if (node->acpi.empty()) {
                // every container carries at least one policy reference
                auto inherited = effective_policies_locked(parent_path);
                for (const auto& p : inherited) node->acpi.push_back(p.acpi);
            }
            break;
        case ResourceKind::Grp: {
            node->mt = attrs.value("mt", 3);
            node->mid = string_list(attrs, "mid");
            node->mnm = attrs.value("mnm", static_cast<int>(node->mid.size()));
            if (static_cast<int>(node->mid.size()) > node->mnm)
                return make_error(Errc::BadRequest, "mid exceeds mnm");
            for (const auto& m : node->mid) {
                const Node* member = find_locked(m);
                if (!member) return make_error(Errc::NotFound, "group member missing: " + m);
                if (static_cast<int>(member->kind) != node->mt)
                    return make_error(Errc::BadRequest, "group member has wrong type: " + m);
            }
            break;
        }
        case ResourceKind::Acp:
            node->policy.acpi = node->ri;
            node->policy.privileges = rules_from_json(attrs.value("pv", Json::object()));
            node->policy.self_privileges = rules_from_json(attrs.value("pvs", Json::object()));
            if (node->policy.privileges.empty())
                return make_error(Errc::BadRequest, "policy needs at least one rule");
            break;
        case ResourceKind::Sub:
            node->nu = attrs.value("nu", std::string{});
            node->creator = check ? originator : attrs.value("creator", originator);
            if (node->nu.empty()) return make_error(Errc::BadRequest, "subscription needs nu");
            if (parent->kind != ResourceKind::Cnt)
                return make_error(Errc::BadRequest, "subscriptions attach to containers");
            break;
        default:
            break;
    }

    rec["ri"] = node->ri;
    rec["ct"] = node->ct;
    rec["path"] = path;
    if (kind == ResourceKind::Sub && !attrs.contains("creator")) {
        Json fixed = attrs;
        fixed["creator"] = node->creator;
        rec["attrs"] = std::move(fixed);
    }

    parent->children.push_back(path);
    touch_parent(*parent);
    nodes_[path] = std::move(node);
    return {};
}

// -- insert -------------------------------------------------------------------

void ResourceTree::do_insert_locked(Node& cnt, Json& rec, InsertOutcome* outcome) {
    ContentInstance cin;
    cin.ri = rec.contains("ri") ? rec.at("ri").get<std::string>() : next_ri(ResourceKind::Cin);
    cin.rn = "cin_" + std::to_string(ri_sequence(cin.ri));
    cin.pi = cnt.ri;
    cin.ct = rec.contains("ct") ? rec.at("ct").get<std::int64_t>() : clock_();
    cin.st = cnt.st + 1;
    cin.lbl = string_list(rec, "lbl");
    cin.con = rec.at("con").get<std::string>();
    rec["ri"] = cin.ri;
    rec["ct"] = cin.ct;

    std::optional<ContentInstance> evicted;
    if (cnt.mni > 0 && static_cast<int>(cnt.cins.size()) >= cnt.mni) {
        evicted = std::move(cnt.cins.front());
        cnt.cbs -= evicted->cs();
        cnt.cins.pop_front();
    }
    cnt.cbs += cin.cs();
    cnt.st += 1;
    cnt.lt = cin.ct;
    cnt.cins.push_back(cin);

    if (outcome) {
        outcome->cin = std::move(cin);
        outcome->evicted = std::move(evicted);
    }
}

Result<InsertOutcome> ResourceTree::insert_cin(const std::string& cnt_path,
                                               const std::string& con,
                                               std::vector<std::string> labels,
                                               const std::string& originator) {
    Json rec;
    rec["op"] = "insert";
    rec["cnt"] = cnt_path;
    rec["con"] = con;
    rec["lbl"] = labels;

    std::shared_lock lk(mu_);
    Node* cnt = find_locked(cnt_path);
    if (!cnt) return make_error(Errc::NotFound, "no container at " + cnt_path);
    if (cnt->kind != ResourceKind::Cnt)
        return make_error(Errc::BadRequest, cnt_path + " is not a container");
    auto ok = allowed_locked(cnt_path, originator, Permission::Create);
    if (!ok) return ok.error();
    if (!ok.value()) return make_error(Errc::AccessDenied, "CREATE denied on " + cnt_path);

    // emit under the container lock so journal order matches apply order
    std::unique_lock cl(cnt->cin_mu);
    InsertOutcome outcome{ContentInstance{}, std::nullopt};
    do_insert_locked(*cnt, rec, &outcome);
    emit(std::move(rec));
    return outcome;
}

// -- update / delete ------------------------------------------------------------

Result<void> ResourceTree::update_resource(const std::string& path, const Json& attrs,
                                           const std::string& originator) {
    Json rec;
    rec["op"] = "update";
    rec["path"] = path;
    rec["attrs"] = attrs;

    std::unique_lock lk(mu_);
    auto applied = apply_update(rec, /*check=*/true, originator);
    if (!applied) return applied;
    emit(std::move(rec));
    return {};
}

Result<void> ResourceTree::apply_update(const Json& rec, bool check,
                                        const std::string& originator) {
    const std::string path = rec.at("path").get<std::string>();
    const Json& attrs = rec.at("attrs");
    Node* n = find_locked(path);
    if (!n) return make_error(Errc::NotFound, "no resource at " + path);

    if (check) {
        if (n->kind == ResourceKind::Acp) {
            // the policy's own PVS rules guard updates to it
            if (!check_access({AccessPolicy{n->ri, n->policy.self_privileges, {}}}, originator,
                              Permission::Update) &&
                originator != opt_.admin_originator)
                return make_error(Errc::AccessDenied, "UPDATE denied on " + path);
        } else {
            auto ok = allowed_locked(path, originator, Permission::Update);
            if (!ok) return ok.error();
            if (!ok.value()) return make_error(Errc::AccessDenied, "UPDATE denied on " + path);
        }
    }

    if (attrs.contains("lbl")) n->lbl = string_list(attrs, "lbl");
    if (attrs.contains("acpi")) n->acpi = string_list(attrs, "acpi");
    if (attrs.contains("mni")) n->mni = attrs.value("mni", n->mni);
    if (attrs.contains("nu")) n->nu = attrs.value("nu", n->nu);
    if (n->kind == ResourceKind::Acp) {
        if (attrs.contains("pv")) n->policy.privileges = rules_from_json(attrs.at("pv"));
        if (attrs.contains("pvs")) n->policy.self_privileges = rules_from_json(attrs.at("pvs"));
    }
    n->st += 1;
    n->lt = clock_();
    return {};
}

Result<void> ResourceTree::delete_resource(const std::string& path,
                                           const std::string& originator) {
    Json rec;
    rec["op"] = "delete";
    rec["path"] = path;

    std::unique_lock lk(mu_);
    auto applied = apply_delete(rec, /*check=*/true, originator);
    if (!applied) return applied;
    emit(std::move(rec));
    return {};
}

Result<void> ResourceTree::apply_delete(const Json& rec, bool check,
                                        const std::string& originator) {
    const std::string path = rec.at("path").get<std::string>();
    Node* n = find_locked(path);
    if (!n) return make_error(Errc::NotFound, "no resource at " + path);
    if (n->kind == ResourceKind::Cse) return make_error(Errc::BadRequest, "cannot delete root");
    if (check) {
        auto ok = allowed_locked(path, originator, Permission::Delete);
        if (!ok) return ok.error();
        if (!ok.value()) return make_error(Errc::AccessDenied, "DELETE denied on " + path);
    }

    std::string parent_path = n->parent_path;
    std::vector<std::string> to_remove;
    std::string prefix = path + "/";
    for (const auto& [p, _] : nodes_)
        if (p == path || p.rfind(prefix, 0) == 0) to_remove.push_back(p);
    for (const auto& p : to_remove) nodes_.erase(p);

    Node* parent = find_locked(parent_path);
    if (parent) {
        auto& ch = parent->children;
        ch.erase(std::remove(ch.begin(), ch.end(), path), ch.end());
        touch_parent(*parent);
    }
    return {};
}

// -- retrieval ------------------------------------------------------------------

namespace {

Result<std::vector<ContentInstance>> fetch_cins(const Node& cnt, FanVerb verb) {
    std::shared_lock cl(cnt.cin_mu);
    if (verb == FanVerb::All)
        return std::vector<ContentInstance>(cnt.cins.begin(), cnt.cins.end());
    if (cnt.cins.empty()) return make_error(Errc::Empty, "container has no content instances");
    if (verb == FanVerb::Latest) return std::vector<ContentInstance>{cnt.cins.back()};
    return std::vector<ContentInstance>{cnt.cins.front()};
}

}  // namespace

Result<ContentInstance> ResourceTree::latest(const std::string& cnt_path,
                                             const std::string& originator) const {
    auto r = fetch(cnt_path, FanVerb::Latest, originator);
    if (!r) return r.error();
    return std::move(r.value().front());
}

Result<ContentInstance> ResourceTree::oldest(const std::string& cnt_path,
                                             const std::string& originator) const {
    auto r = fetch(cnt_path, FanVerb::Oldest, originator);
    if (!r) return r.error();
    return std::move(r.value().front());
}

Result<std::vector<ContentInstance>> ResourceTree::all_data(const std::string& cnt_path,
                                                            const std::string& originator) const {
    return fetch(cnt_path, FanVerb::All, originator);
}

Result<std::vector<ContentInstance>> ResourceTree::fetch(const std::string& cnt_path, FanVerb verb,
                                                         const std::string& originator) const {
    std::shared_lock lk(mu_);
    const Node* cnt = find_locked(cnt_path);
    if (!cnt || cnt->kind != ResourceKind::Cnt)
        return make_error(Errc::NotFound, "no container at " + cnt_path);
    auto ok = allowed_locked(cnt_path, originator, Permission::Retrieve);
    if (!ok) return ok.error();
    if (!ok.value()) return make_error(Errc::AccessDenied, "RETRIEVE denied on " + cnt_path);
    return fetch_cins(*cnt, verb);
}

Result<std::vector<MemberResult>> ResourceTree::group_fanout(const std::string& grp_path,
                                                             FanVerb verb,
                                                             const std::string& originator) const {
    std::shared_lock lk(mu_);
    const Node* grp = find_locked(grp_path);
    if (!grp || grp->kind != ResourceKind::Grp)
        return make_error(Errc::NotFound, "no group at " + grp_path);

    std::vector<MemberResult> out;
    out.reserve(grp->mid.size());
    for (const auto& member : grp->mid) {
        const Node* cnt = find_locked(member);
        if (!cnt || cnt->kind != ResourceKind::Cnt) {
            out.push_back({member, make_error(Errc::NotFound, "no container at " + member)});
            continue;
        }
        auto ok = allowed_locked(member, originator, Permission::Retrieve);
        if (!ok) {
            out.push_back({member, ok.error()});
            continue;
        }
        if (!ok.value()) {
            out.push_back(
                {member, make_error(Errc::AccessDenied, "RETRIEVE denied on " + member)});
            continue;
        }
        out.push_back({member, fetch_cins(*cnt, verb)});
    }
    return out;
}

Result<std::vector<std::string>> ResourceTree::discover(const std::vector<std::string>& labels,
                                                        const std::string& originator) const {
    std::shared_lock lk(mu_);
    auto ok = allowed_locked(root_path_, originator, Permission::Discovery);
    if (!ok) return ok.error();
    if (!ok.value()) return make_error(Errc::AccessDenied, "DISCOVERY denied at root");

    std::vector<std::string> out;
    for (const auto& [path, node] : nodes_) {
        if (node->kind != ResourceKind::Cnt) continue;
        bool all = true;
        for (const auto& want : labels) {
            if (std::find(node->lbl.begin(), node->lbl.end(), want) == node->lbl.end()) {
                all = false;
                break;
            }
        }
        if (all) out.push_back(path);
    }
    std::sort(out.begin(), out.end());
    return out;
}

Result<Json> ResourceTree::describe(const std::string& path, const std::string& originator) const {
    std::shared_lock lk(mu_);
    const Node* n = find_locked(path);
    if (!n) return make_error(Errc::NotFound, "no resource at " + path);
    auto ok = allowed_locked(path, originator, Permission::Retrieve);
    if (!ok) return ok.error();
    if (!ok.value()) return make_error(Errc::AccessDenied, "RETRIEVE denied on " + path);

    const Node* parent = find_locked(n->parent_path);
    const int off = opt_.offset_minutes;
    Json j;
    j["rn"] = n->rn;
    j["ty"] = static_cast<int>(n->kind);
    j["ri"] = n->ri;
    if (parent) j["pi"] = parent->ri;
    j["ct"] = timeutil::format_compact(n->ct, off);
    j["lt"] = timeutil::format_compact(n->lt, off);
    switch (n->kind) {
        case ResourceKind::Cnt: {
            std::shared_lock cl(n->cin_mu);
            j["lbl"] = n->lbl;
            j["acpi"] = n->acpi;
            j["et"] = timeutil::format_compact(n->ct + kYearSeconds, off);
            j["st"] = n->st;
            j["mni"] = n->mni;
            j["mbs"] = n->mbs;
            j["mia"] = n->mia;
            j["cni"] = n->cins.size();
            j["cbs"] = n->cbs;
            j["ol"] = n->path + "/ol";
            j["la"] = n->path + "/la";
            break;
        }
        case ResourceKind::Grp:
            j["mt"] = n->mt;
            j["mnm"] = n->mnm;
            j["mid"] = n->mid;
            break;
        case ResourceKind::Acp:
            j["pv"] = rules_to_json(n->policy.privileges);
            j["pvs"] = rules_to_json(n->policy.self_privileges);
            break;
        case ResourceKind::Sub:
            j["nu"] = n->nu;
            j["creator"] = n->creator;
            break;
        default:
            j["lbl"] = n->lbl;
            j["acpi"] = n->acpi;
            break;
    }
    return j;
}

Result<DescriptorRecord> ResourceTree::descriptor_for(const std::string& data_cnt_path) const {
    std::shared_lock lk(mu_);
    const Node* data = find_locked(data_cnt_path);
    if (!data) return make_error(Errc::NotFound, "no container at " + data_cnt_path);
    std::string desc_path = parent_of(data_cnt_path) + "/Descriptor";
    const Node* desc = find_locked(desc_path);
    if (!desc || desc->kind != ResourceKind::Cnt)
        return make_error(Errc::NotFound, "no descriptor container for " + data_cnt_path);
    auto cins = fetch_cins(*desc, FanVerb::Latest);
    if (!cins) return make_error(Errc::Empty, "descriptor container is empty");
    auto parsed = parse_json(cins.value().front().con);
    if (!parsed) return make_error(Errc::MalformedContent, "descriptor is not valid json");
    return DescriptorRecord::from_json(parsed.value());
}

std::vector<Subscription> ResourceTree::subscriptions_of(const std::string& cnt_path) const {
    std::shared_lock lk(mu_);
    std::vector<Subscription> out;
    const Node* cnt = find_locked(cnt_path);
    if (!cnt) return out;
    for (const auto& child : cnt->children) {
        const Node* n = find_locked(child);
        if (n && n->kind == ResourceKind::Sub)
            out.push_back({n->rn, n->path, cnt_path, n->nu, n->creator});
    }
    return out;
}

std::vector<std::string> ResourceTree::children_of(const std::string& path) const {
    std::shared_lock lk(mu_);
    const Node* n = find_locked(path);
    return n ? n->children : std::vector<std::string>{};
}

// -- journal / snapshot -----------------------------------------------------------

Result<void> ResourceTree::replay(const Json& record) {
    const std::string op = record.value("op", std::string{});
    std::uint64_t seq = record.value("seq", std::uint64_t{0});
    {
        std::lock_guard lk(sink_mu_);
        if (seq != 0 && seq <= journal_seq_) return {};  // covered by snapshot
        if (seq > journal_seq_) journal_seq_ = seq;
    }
    Json rec = record;
    if (rec.contains("ri")) bump_ri_floor(ri_sequence(rec.at("ri").get<std::string>()));

    if (op == "create") {
        std::unique_lock lk(mu_);
        return apply_create(rec, /*check=*/false, {});
    }
    if (op == "insert") {
        std::shared_lock lk(mu_);
        Node* cnt = find_locked(rec.at("cnt").get<std::string>());
        if (!cnt || cnt->kind != ResourceKind::Cnt)
            return make_error(Errc::NotFound, "journal insert into missing container");
        std::unique_lock cl(cnt->cin_mu);
        do_insert_locked(*cnt, rec, nullptr);
        return {};
    }
    if (op == "update") {
        std::unique_lock lk(mu_);
        return apply_update(rec, /*check=*/false, {});
    }
    if (op == "delete") {
        std::unique_lock lk(mu_);
        return apply_delete(rec, /*check=*/false, {});
    }
    return make_error(Errc::BadRequest, "unknown journal op " + op);
}

Json ResourceTree::snapshot() const {
    std::shared_lock lk(mu_);
    Json nodes = Json::array();
    for (const auto& [path, n] : nodes_) {
        Json j;
        j["path"] = path;
        j["parent"] = n->parent_path;
        j["ty"] = static_cast<int>(n->kind);
        j["rn"] = n->rn;
        j["ri"] = n->ri;
        j["ct"] = n->ct;
        j["lt"] = n->lt;
        j["st"] = n->st;
        j["lbl"] = n->lbl;
        j["acpi"] = n->acpi;
        j["children"] = n->children;
        switch (n->kind) {
            case ResourceKind::Cnt: {
                std::shared_lock cl(n->cin_mu);
                j["mni"] = n->mni;
                j["mbs"] = n->mbs;
                j["mia"] = n->mia;
                Json cins = Json::array();
                for (const auto& c : n->cins) {
                    cins.push_back(Json{{"rn", c.rn},
                                        {"ri", c.ri},
                                        {"pi", c.pi},
                                        {"ct", c.ct},
                                        {"st", c.st},
                                        {"lbl", c.lbl},
                                        {"cnf", c.cnf},
                                        {"con", c.con}});
                }
                j["cins"] = std::move(cins);
                break;
            }
            case ResourceKind::Grp:
                j["mt"] = n->mt;
                j["mnm"] = n->mnm;
                j["mid"] = n->mid;
                break;
            case ResourceKind::Acp:
                j["pv"] = rules_to_json(n->policy.privileges);
                j["pvs"] = rules_to_json(n->policy.self_privileges);
                break;
            case ResourceKind::Sub:
                j["nu"] = n->nu;
                j["creator"] = n->creator;
                break;
            default:
                break;
        }
        nodes.push_back(std::move(j));
    }
    std::lock_guard slk(sink_mu_);
    return Json{
        {"last_seq", journal_seq_}, {"next_ri_seq", next_seq_.load()}, {"nodes", std::move(nodes)}};
}

Result<void> ResourceTree::load_snapshot(const Json& snap) {
    std::unique_lock lk(mu_);
    if (!snap.contains("nodes")) return make_error(Errc::MalformedContent, "bad snapshot");
    nodes_.clear();
    for (const auto& j : snap.at("nodes")) {
        auto node = std::make_unique<Node>();
        auto kind = kind_from_ty(j.value("ty", 3));
        if (!kind) return make_error(Errc::MalformedContent, "bad snapshot node");
        node->kind = *kind;
        node->path = j.value("path", std::string{});
        node->parent_path = j.value("parent", std::string{});
        node->rn = j.value("rn", std::string{});
        node->ri = j.value("ri", std::string{});
        node->ct = j.value("ct", std::int64_t{0});
        node->lt = j.value("lt", std::int64_t{0});
        node->st = j.value("st", 0);
        node->lbl = string_list(j, "lbl");
        node->acpi = string_list(j, "acpi");
        node->children = string_list(j, "children");
        switch (node->kind) {
            case ResourceKind::Cnt: {
                node->mni = j.value("mni", opt_.default_mni);
                node->mbs = j.value("mbs", 10000);
                node->mia = j.value("mia", 0);
                if (j.contains("cins")) {
                    for (const auto& c : j.at("cins")) {
                        ContentInstance cin;
                        cin.rn = c.value("rn", std::string{});
                        cin.ri = c.value("ri", std::string{});
                        cin.pi = c.value("pi", std::string{});
                        cin.ct = c.value("ct", std::int64_t{0});
                        cin.st = c.value("st", 0);
                        cin.lbl = string_list(c, "lbl");
                        cin.cnf = c.value("cnf", std::string{"text"});
                        cin.con = c.value("con", std::string{});
                        node->cbs += cin.cs();
                        node->cins.push_back(std::move(cin));
                        bump_ri_floor(ri_sequence(node->cins.back().ri));
                    }
                }
                break;
            }
            case ResourceKind::Grp:
                node->mt = j.value("mt", 3);
                node->mnm = j.value("mnm", 0);
                node->mid = string_list(j, "mid");
                break;
            case ResourceKind::Acp:
                node->policy.acpi = node->ri;
                node->policy.privileges = rules_from_json(j.value("pv", Json::object()));
                node->policy.self_privileges = rules_from_json(j.value("pvs", Json::object()));
                break;
            case ResourceKind::Sub:
                node->nu = j.value("nu", std::string{});
                node->creator = j.value("creator", std::string{});
                break;
            default:
                break;
        }
        bump_ri_floor(ri_sequence(node->ri));
        nodes_[node->path] = std::move(node);
    }
    std::lock_guard slk(sink_mu_);
    journal_seq_ = snap.value("last_seq", std::uint64_t{0});
    if (snap.contains("next_ri_seq")) {
        std::uint64_t s = snap.at("next_ri_seq").get<std::uint64_t>();
        bump_ri_floor(s == 0 ? 0 : s - 1);
    }
    return {};
}

std::uint64_t ResourceTree::last_seq() const {
    std::lock_guard lk(sink_mu_);
    return journal_seq_;
}

}  // namespace citystack::core
