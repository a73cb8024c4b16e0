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
#include "citystack/monitor/service.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

namespace citystack::monitor {

namespace {

std::string url_decode(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '+') {
            out.push_back(' ');
        } else if (s[i] == '%' && i + 2 < s.size() && std::isxdigit((unsigned char)s[i + 1]) &&
                   std::isxdigit((unsigned char)s[i + 2])) {
            auto hex = [](char c) {
                if (c >= '0' && c <= '9') return c - '0';
                if (c >= 'a' && c <= 'f') return c - 'a' + 10;
                return c - 'A' + 10;
            };
            out.push_back(static_cast<char>(hex(s[i + 1]) * 16 + hex(s[i + 2])));
            i += 2;
        } else {
            out.push_back(s[i]);
        }
    }
    return out;
}

const char* envelope_key(core::ResourceKind kind) {
    switch (kind) {
        case core::ResourceKind::Acp: return "m2m:acp";
        case core::ResourceKind::Ae: return "m2m:ae";
        case core::ResourceKind::Cnt: return "m2m:cnt";
        case core::ResourceKind::Cin: return "m2m:cin";
        case core::ResourceKind::Cse: return "m2m:cb";
        case core::ResourceKind::Grp: return "m2m:grp";
        case core::ResourceKind::Sub: return "m2m:sub";
    }
    return "m2m:res";
}

bool query_has(const std::vector<std::pair<std::string, std::string>>& query,
               const std::string& key, const std::string& value) {
    for (const auto& [k, v] : query)
        if (k == key && v == value) return true;
    return false;
}

}  // namespace

std::pair<std::string, std::vector<std::pair<std::string, std::string>>> split_target(
    const std::string& target) {
    std::string path = target;
    std::vector<std::pair<std::string, std::string>> query;
    auto qpos = target.find('?');
    if (qpos != std::string::npos) {
        path = target.substr(0, qpos);
        std::string qs = target.substr(qpos + 1);
        size_t start = 0;
        while (start <= qs.size()) {
            auto amp = qs.find('&', start);
            std::string item =
                qs.substr(start, amp == std::string::npos ? std::string::npos : amp - start);
            if (!item.empty()) {
                auto eq = item.find('=');
                if (eq == std::string::npos)
                    query.emplace_back(url_decode(item), "");
                else
                    query.emplace_back(url_decode(item.substr(0, eq)),
                                       url_decode(item.substr(eq + 1)));
            }
            if (amp == std::string::npos) break;
            start = amp + 1;
        }
    }
    // OM2M-style absolute addressing prefix
    if (path.rfind("/~", 0) == 0) path = path.substr(2);
    if (path.size() > 1 && path.back() == '/') path.pop_back();
    return {url_decode(path), std::move(query)};
}

MonitorService::MonitorService(core::ResourceTree& tree, Dispatcher* dispatcher,
                               int offset_minutes)
    : tree_(tree), dispatcher_(dispatcher), offset_minutes_(offset_minutes) {}

ApiResponse MonitorService::error_response(const Error& err, const std::string& path,
                                           const std::string& originator) {
    Json dbg{{"m2m:dbg", err.message}};
    switch (err.code) {
        case Errc::NotFound:
            return {404, dbg};
        case Errc::AccessDenied: {
            // unknown credentials answer 401, known-but-denied 403
            bool known = tree_.exists(path) ? tree_.known_credential(path, originator) : false;
            return {known ? 403 : 401, dbg};
        }
        case Errc::DuplicateName:
            return {409, dbg};
        case Errc::Empty:
            // distinct from 404 so clients can tell "no data" from
            // "no container"
            return {204, Json()};
        case Errc::ArityMismatch:
        case Errc::MalformedContent:
        case Errc::BadRequest:
            return {400, dbg};
        default:
            return {500, dbg};
    }
}

ApiResponse MonitorService::handle(const ApiRequest& req) {
    auto origin_it = req.headers.find("x-m2m-origin");
    if (origin_it == req.headers.end() || origin_it->second.empty())
        return {401, Json{{"m2m:dbg", "missing X-M2M-Origin"}}};
    const std::string& originator = origin_it->second;

    auto [path, query] = split_target(req.target);

    if (req.method == "GET") return handle_get(path, query, originator);
    if (req.method == "POST") return handle_post(req, path, originator);
    if (req.method == "PUT") {
        auto body = parse_json(req.body);
        if (!body) return {400, Json{{"m2m:dbg", "invalid body"}}};
        Json attrs = body.value();
        if (attrs.is_object() && attrs.size() == 1 && attrs.begin().key().rfind("m2m:", 0) == 0)
            attrs = attrs.begin().value();
        auto updated = tree_.update_resource(path, attrs, originator);
        if (!updated) return error_response(updated.error(), path, originator);
        auto described = tree_.describe(path, originator);
        Json env;
        env[envelope_key(tree_.kind_of(path).value_or(core::ResourceKind::Cnt))] =
            described ? described.value() : Json();
        return {200, env};
    }
    if (req.method == "DELETE") {
        auto deleted = tree_.delete_resource(path, originator);
        if (!deleted) return error_response(deleted.error(), path, originator);
        return {200, Json()};
    }
    return {405, Json{{"m2m:dbg", "unsupported method"}}};
}

ApiResponse MonitorService::handle_get(
    const std::string& path, const std::vector<std::pair<std::string, std::string>>& query,
    const std::string& originator) {
    // label discovery: ?fu=1&lbl=...&lbl=...
    if (query_has(query, "fu", "1")) {
        std::vector<std::string> labels;
        for (const auto& [k, v] : query)
            if (k == "lbl") labels.push_back(v);
        auto found = tree_.discover(labels, originator);
        if (!found) return error_response(found.error(), tree_.root_path(), originator);
        return {200, Json{{"m2m:uril", found.value()}}};
    }

    // group fan-out: .../<GRP>/fopt[/la|/ol]
    auto fopt = path.find("/fopt");
    if (fopt != std::string::npos) {
        std::string grp_path = path.substr(0, fopt);
        std::string tail = path.substr(fopt + 5);
        core::FanVerb verb;
        if (tail == "/la")
            verb = core::FanVerb::Latest;
        else if (tail == "/ol")
            verb = core::FanVerb::Oldest;
        else if (tail.empty() && query_has(query, "rcn", "4"))
            verb = core::FanVerb::All;
        else
            return {400, Json{{"m2m:dbg", "unsupported fopt verb"}}};

        auto fan = tree_.group_fanout(grp_path, verb, originator);
        if (!fan) return error_response(fan.error(), grp_path, originator);
        Json out = Json::array();
        for (const auto& member : fan.value()) {
            if (!member.data.ok()) {
                out.push_back(Json{{"m2m:dbg", member.data.error().message}});
                continue;
            }
            if (verb == core::FanVerb::All) {
                Json list = Json::array();
                for (const auto& cin : member.data.value())
                    list.push_back(Json{{"m2m:cin", cin.to_m2m(offset_minutes_)}});
                out.push_back(std::move(list));
            } else if (member.data.value().empty()) {
                out.push_back(Json{{"m2m:dbg", "EMPTY"}});
            } else {
                out.push_back(
                    Json{{"m2m:cin", member.data.value().front().to_m2m(offset_minutes_)}});
            }
        }
        return {200, out};
    }

    // latest / oldest virtual children
    if (path.size() > 3 && path.compare(path.size() - 3, 3, "/la") == 0) {
        auto cin = tree_.latest(path.substr(0, path.size() - 3), originator);
        if (!cin) return error_response(cin.error(), path.substr(0, path.size() - 3), originator);
        return {200, Json{{"m2m:cin", cin.value().to_m2m(offset_minutes_)}}};
    }
    if (path.size() > 3 && path.compare(path.size() - 3, 3, "/ol") == 0) {
        auto cin = tree_.oldest(path.substr(0, path.size() - 3), originator);
        if (!cin) return error_response(cin.error(), path.substr(0, path.size() - 3), originator);
        return {200, Json{{"m2m:cin", cin.value().to_m2m(offset_minutes_)}}};
    }

    // all data: a list of individual CIN responses
    if (query_has(query, "rcn", "4")) {
        auto all = tree_.all_data(path, originator);
        if (!all) return error_response(all.error(), path, originator);
        Json out = Json::array();
        for (const auto& cin : all.value())
            out.push_back(Json{{"m2m:cin", cin.to_m2m(offset_minutes_)}});
        return {200, out};
    }

    auto described = tree_.describe(path, originator);
    if (!described) return error_response(described.error(), path, originator);
    Json env;
    env[envelope_key(tree_.kind_of(path).value_or(core::ResourceKind::Cnt))] = described.value();
    return {200, env};
}

ApiResponse MonitorService::handle_post(const ApiRequest& req, const std::string& path,
                                        const std::string& originator) {
    auto ct_it = req.headers.find("content-type");
    int ty = 0;
    if (ct_it != req.headers.end()) {
        auto pos = ct_it->second.find("ty=");
        if (pos != std::string::npos) ty = std::atoi(ct_it->second.c_str() + pos + 3);
    }
    if (ty == 0) return {400, Json{{"m2m:dbg", "missing ty in content-type"}}};
    auto kind = core::kind_from_ty(ty);
    if (!kind) return {400, Json{{"m2m:dbg", "unknown ty"}}};

    auto body = parse_json(req.body);
    if (!body || !body.value().is_object())
        return {400, Json{{"m2m:dbg", "invalid body"}}};
    Json attrs = body.value();
    if (attrs.size() == 1 && attrs.begin().key().rfind("m2m:", 0) == 0)
        attrs = attrs.begin().value();

    if (*kind == core::ResourceKind::Cin) {
        std::vector<std::string> labels;
        if (attrs.contains("lbl"))
            for (const auto& l : attrs.at("lbl"))
                if (l.is_string()) labels.push_back(l.get<std::string>());
        auto outcome =
            tree_.insert_cin(path, attrs.value("con", std::string{}), labels, originator);
        if (!outcome) return error_response(outcome.error(), path, originator);
        if (dispatcher_) dispatcher_->on_insert(path, outcome.value().cin);
        return {201, Json{{"m2m:cin", outcome.value().cin.to_m2m(offset_minutes_)}}};
    }

    auto created = tree_.create_resource(path, *kind, attrs, originator);
    if (!created) return error_response(created.error(), path, originator);
    auto described = tree_.describe(created.value(), originator);
    Json env;
    env[envelope_key(*kind)] = described ? described.value() : Json();
    return {201, env};
}

}  // namespace citystack::monitor
