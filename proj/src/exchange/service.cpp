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
#include "citystack/exchange/service.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace citystack::exchange {

namespace {

constexpr const char* kSuccessType = "urn:dx:rs:success";

std::string fixed_decimal(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

}  // namespace

Result<ValueFilter> parse_value_filter(const std::string& expr) {
    static const char* ops[] = {">=", "<=", "==", "!=", ">", "<"};
    for (const char* op : ops) {
        auto pos = expr.find(op);
        if (pos == std::string::npos || pos == 0) continue;
        ValueFilter f;
        f.attr = expr.substr(0, pos);
        f.op = op;
        std::string literal = expr.substr(pos + std::string(op).size());
        if (literal.empty()) return make_error(Errc::BadQuery, "filter needs a literal");
        char* end = nullptr;
        f.number = std::strtod(literal.c_str(), &end);
        if (end == literal.c_str() + literal.size()) {
            f.numeric = true;
        } else {
            f.numeric = false;
            f.text = literal;
            if (f.op != "==" && f.op != "!=")
                return make_error(Errc::BadQuery, "only equality filters apply to strings");
        }
        return f;
    }
    return make_error(Errc::BadQuery, "no comparison operator in filter '" + expr + "'");
}

ExchangeService::ExchangeService(Catalogue& catalogue, TokenService& tokens,
                                 lake::LakeStore& lake, MonitorFacade monitor, Options opt,
                                 Clock clock)
    : catalogue_(catalogue), tokens_(tokens), lake_(lake), monitor_(std::move(monitor)),
      opt_(std::move(opt)), clock_(std::move(clock)) {}

Json ExchangeService::render_attribute(const AttributeSpec& spec, const Json& value) const {
    if (spec.kind == "inst") {
        if (value.is_null()) return Json{{"instValue", "nan"}};
        return Json{{"instValue", value}};
    }
    if (spec.kind == "string") {
        if (value.is_null()) return Json("nan");
        if (value.is_number()) return Json(fixed_decimal(value.get<double>(), spec.decimals));
        return value;
    }
    if (spec.kind == "enum") {
        if (value.is_number()) {
            int key = static_cast<int>(std::llround(value.get<double>()));
            auto it = spec.enums.find(key);
            if (it != spec.enums.end()) return Json(it->second);
            return Json(std::to_string(key));
        }
        if (value.is_string()) return value;
        return Json("nan");
    }
    return value;
}

Result<Json> ExchangeService::render_row(const ResourceGroup& group, const CatalogueItem& item,
                                         const Json& source_values, std::int64_t ts,
                                         const std::string& version,
                                         const std::optional<std::vector<std::string>>& attrs)
    const {
    auto wanted = [&](const std::string& attr) {
        if (!attrs) return true;
        return std::find(attrs->begin(), attrs->end(), attr) != attrs->end();
    };

    Json row;
    if (!attrs) row["id"] = item.id;
    for (const auto& [name, spec] : group.model.attributes) {
        if (spec.kind == "hidden") continue;
        if (!wanted(name)) continue;
        Json value = source_values.contains(spec.source) ? source_values.at(spec.source)
                                                         : Json(nullptr);
        row[name] = render_attribute(spec, value);
    }
    if (!attrs || wanted("observationDateTime"))
        row["observationDateTime"] = timeutil::format_iso(ts, opt_.offset_minutes);
    if (!attrs) row["versionInfo"] = Json{{"versionName", version}};
    return row;
}

Result<Json> ExchangeService::get_latest(const std::string& resource_id) const {
    auto item = catalogue_.item(resource_id);
    if (!item) return make_error(Errc::UnknownResource, item.error().message);
    auto group = catalogue_.group_of(resource_id);
    if (!group) return make_error(Errc::UnknownResource, group.error().message);

    auto cin = monitor_.latest(item.value()->monitor_path);
    if (!cin) {
        if (cin.code() == Errc::Empty)
            return make_error(Errc::NoData, "no observation available upstream");
        return make_error(Errc::UnknownResource, cin.error().message);
    }
    auto desc = monitor_.descriptor(item.value()->monitor_path);
    if (!desc) return make_error(Errc::UnknownResource, desc.error().message);
    auto values = core::parse_positional_payload(desc.value(), cin.value().con);
    if (!values) return make_error(Errc::BadQuery, values.error().message);

    std::int64_t ts = cin.value().ct;
    if (values.value().contains("Timestamp") && values.value()["Timestamp"].is_number())
        ts = values.value()["Timestamp"].get<std::int64_t>();

    std::string version;
    for (const auto& label : cin.value().lbl)
        if (label.size() > 1 && label[0] == 'V' && std::isdigit(static_cast<unsigned char>(label[1])))
            version = label;
    if (version.empty()) {
        if (auto* tenant = lake_.tenant_if_exists(group.value()->vertical))
            version = tenant->version_for(item.value()->name, ts).value_or("");
    }

    auto row = render_row(*group.value(), *item.value(), values.value(), ts, version,
                          std::nullopt);
    if (!row) return row.error();
    Json out;
    out["title"] = "Successful Operation";
    out["type"] = kSuccessType;
    out["results"] = Json::array({row.value()});
    return out;
}

Result<Json> ExchangeService::get_metadata(const std::string& resource_id) const {
    auto item = catalogue_.item(resource_id);
    if (!item) return make_error(Errc::UnknownResource, item.error().message);
    auto group = catalogue_.group_of(resource_id);
    if (!group) return make_error(Errc::UnknownResource, group.error().message);

    auto* tenant = lake_.tenant_if_exists(group.value()->vertical);
    if (!tenant) return make_error(Errc::UnknownResource, "no store for " + group.value()->vertical);
    auto versions = tenant->versions_of(item.value()->name);
    if (versions.empty())
        return make_error(Errc::UnknownResource,
                          "no version dimension rows for " + item.value()->name);

    Json info = Json::array();
    for (const auto& v : versions) {
        Json e;
        e["versionName"] = v.version;
        e["startDateTime"] = timeutil::format_iso(v.start, opt_.offset_minutes);
        e["endDateTime"] = timeutil::format_iso(v.end, opt_.offset_minutes);
        e["versionSpec"] = v.spec;
        e["comments"] = v.comments;
        info.push_back(std::move(e));
    }
    Json result;
    result["id"] = group.value()->id + "-version/version-info";
    result["deviceInfo"] =
        Json{{"deviceID", item.value()->name}, {"deviceName", item.value()->label}};
    result["versionInfo"] = std::move(info);

    Json out;
    out["title"] = "Successful operation";
    out["type"] = kSuccessType;
    out["results"] = Json::array({std::move(result)});
    return out;
}

Result<Json> ExchangeService::query_temporal(const std::string& resource_id,
                                             const TemporalQuery& q) const {
    auto item = catalogue_.item(resource_id);
    if (!item) return make_error(Errc::UnknownResource, item.error().message);
    auto group = catalogue_.group_of(resource_id);
    if (!group) return make_error(Errc::UnknownResource, group.error().message);

    std::int64_t lo = std::numeric_limits<std::int64_t>::min();
    std::int64_t hi = std::numeric_limits<std::int64_t>::max();
    if (q.rel == TemporalQuery::Rel::Before) {
        hi = q.end;  // ts < end
    } else if (q.rel == TemporalQuery::Rel::After) {
        lo = q.start;  // ts >= start
    } else {
        if (q.start > q.end) return make_error(Errc::BadQuery, "during needs start <= end");
        if (q.end - q.start > static_cast<std::int64_t>(opt_.max_span_days) * 86400)
            return make_error(Errc::SpanTooLarge,
                              "window exceeds " + std::to_string(opt_.max_span_days) + " days");
        lo = q.start;
        hi = q.end;
    }

    const AttributeSpec* filter_spec = nullptr;
    if (q.filter) {
        filter_spec = group.value()->model.find(q.filter->attr);
        if (!filter_spec)
            return make_error(Errc::BadQuery, "unknown filter attribute " + q.filter->attr);
    }
    if (q.attrs) {
        for (const auto& attr : *q.attrs)
            if (attr != "observationDateTime" && !group.value()->model.find(attr))
                return make_error(Errc::BadQuery, "unknown attribute " + attr);
    }

    std::vector<lake::DataRow> rows;
    if (auto* tenant = lake_.tenant_if_exists(group.value()->vertical)) {
        auto fetched = tenant->query_temporal(item.value()->name, lo, hi);
        if (fetched) rows = std::move(fetched).value();
    }

    // value filter, applied before paging so totalHits counts matches
    std::vector<const lake::DataRow*> matched;
    for (const auto& row : rows) {
        if (q.filter) {
            Json value = row.values.contains(filter_spec->source)
                             ? row.values.at(filter_spec->source)
                             : Json(nullptr);
            bool keep = false;
            if (q.filter->numeric && value.is_number()) {
                double v = value.get<double>();
                double lit = q.filter->number;
                if (q.filter->op == ">") keep = v > lit;
                else if (q.filter->op == "<") keep = v < lit;
                else if (q.filter->op == ">=") keep = v >= lit;
                else if (q.filter->op == "<=") keep = v <= lit;
                else if (q.filter->op == "==") keep = v == lit;
                else if (q.filter->op == "!=") keep = v != lit;
            } else if (!q.filter->numeric) {
                std::string rendered = render_attribute(*filter_spec, value).is_string()
                                           ? render_attribute(*filter_spec, value).get<std::string>()
                                           : std::string{};
                keep = q.filter->op == "==" ? rendered == q.filter->text
                                            : rendered != q.filter->text;
            }
            if (!keep) continue;
        }
        matched.push_back(&row);
    }

    Json results = Json::array();
    std::size_t from = std::min(q.offset, matched.size());
    std::size_t to = std::min(from + opt_.page_size, matched.size());
    for (std::size_t i = from; i < to; ++i) {
        const auto& row = *matched[i];
        auto rendered =
            render_row(*group.value(), *item.value(), row.values, row.ts, row.version, q.attrs);
        if (!rendered) return rendered.error();
        results.push_back(std::move(rendered).value());
    }

    Json out;
    out["title"] = "Successful Operation";
    out["type"] = kSuccessType;
    out["results"] = std::move(results);
    out["limit"] = opt_.page_size;
    out["offset"] = q.offset;
    out["totalHits"] = matched.size();
    return out;
}

Result<Json> ExchangeService::catalogue_lookup(const std::string& id) const {
    return catalogue_.lookup(id);
}

// -- request surface -----------------------------------------------------------

namespace {

Json error_body(const char* type, const char* title, const std::string& detail) {
    return Json{{"type", type}, {"title", title}, {"detail", detail}};
}

}  // namespace

HttpReply ExchangeService::to_reply(const Result<Json>& result) const {
    if (result.ok()) return {200, result.value()};
    switch (result.code()) {
        case Errc::UnknownResource:
        case Errc::UnknownItem:
            return {404, error_body("urn:dx:rs:resourceNotFound", "Not Found",
                                    result.error().message)};
        case Errc::NoData:
            return {404, error_body("urn:dx:rs:noDataFound", "No Data", result.error().message)};
        case Errc::BadQuery:
        case Errc::SpanTooLarge:
            return {400, error_body("urn:dx:rs:badRequest", "Bad Request",
                                    result.error().message)};
        default:
            return {500, error_body("urn:dx:rs:internalError", "Internal Error",
                                    result.error().message)};
    }
}

HttpReply ExchangeService::handle_latest(const std::string& token,
                                         const std::string& resource_id) const {
    auto claims = tokens_.verify_token(token, resource_id, clock_());
    if (!claims) return {401, invalid_token_body()};
    return to_reply(get_latest(resource_id));
}

HttpReply ExchangeService::handle_meta(const std::string& token,
                                       const std::string& resource_id) const {
    auto claims = tokens_.verify_token(token, resource_id, clock_());
    if (!claims) return {401, invalid_token_body()};
    return to_reply(get_metadata(resource_id));
}

Result<TemporalQuery> ExchangeService::parse_temporal_params(
    const std::map<std::string, std::string>& params) const {
    TemporalQuery q;
    auto rel = params.count("timerel") ? params.at("timerel") : std::string{};
    if (rel == "before")
        q.rel = TemporalQuery::Rel::Before;
    else if (rel == "after")
        q.rel = TemporalQuery::Rel::After;
    else if (rel == "during")
        q.rel = TemporalQuery::Rel::During;
    else
        return make_error(Errc::BadQuery, "timerel must be before, after or during");

    auto time_param = [&](const char* key) -> Result<std::int64_t> {
        if (!params.count(key)) return make_error(Errc::BadQuery, std::string(key) + " missing");
        auto t = timeutil::parse_iso(params.at(key));
        if (!t) return make_error(Errc::BadQuery, std::string("unparseable ") + key);
        return *t;
    };

    if (q.rel == TemporalQuery::Rel::Before) {
        auto t = time_param("time");
        if (!t) return t.error();
        q.end = t.value();
    } else if (q.rel == TemporalQuery::Rel::After) {
        auto t = time_param("time");
        if (!t) return t.error();
        q.start = t.value();
    } else {
        auto t0 = time_param("time");
        if (!t0) return t0.error();
        auto t1 = time_param("endtime");
        if (!t1) return t1.error();
        q.start = t0.value();
        q.end = t1.value();
    }

    if (params.count("attrs") && !params.at("attrs").empty()) {
        std::vector<std::string> attrs;
        const std::string& raw = params.at("attrs");
        size_t start = 0;
        while (start <= raw.size()) {
            auto comma = raw.find(',', start);
            attrs.push_back(raw.substr(
                start, comma == std::string::npos ? std::string::npos : comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        q.attrs = std::move(attrs);
    }
    if (params.count("q") && !params.at("q").empty()) {
        auto filter = parse_value_filter(params.at("q"));
        if (!filter) return filter.error();
        q.filter = filter.value();
    }
    if (params.count("offset")) {
        long v = std::strtol(params.at("offset").c_str(), nullptr, 10);
        if (v < 0) return make_error(Errc::BadQuery, "offset must be >= 0");
        q.offset = static_cast<std::size_t>(v);
    }
    return q;
}

HttpReply ExchangeService::handle_temporal(const std::string& token,
                                           const std::string& resource_id,
                                           const std::map<std::string, std::string>& params) const {
    auto claims = tokens_.verify_token(token, resource_id, clock_());
    if (!claims) return {401, invalid_token_body()};
    auto q = parse_temporal_params(params);
    if (!q) return to_reply(Result<Json>(q.error()));
    return to_reply(query_temporal(resource_id, q.value()));
}

HttpReply ExchangeService::handle_catalogue(const std::string& id) const {
    return to_reply(catalogue_lookup(id));
}

HttpReply ExchangeService::handle_token(const Json& body) const {
    if (!body.is_object()) return {400, error_body("urn:dx:as:badRequest", "Bad Request",
                                                   "body must be a json object")};
    auto token = tokens_.issue_token(body.value("userId", std::string{}),
                                     body.value("itemId", std::string{}),
                                     body.value("itemType", std::string{}),
                                     body.value("role", std::string{"consumer"}));
    if (!token) {
        int status = 400;
        if (token.code() == Errc::NotRegistered) status = 401;
        if (token.code() == Errc::NoPolicy) status = 403;
        if (token.code() == Errc::UnknownItem) status = 404;
        return {status, error_body("urn:dx:as:Error", to_string(token.code()),
                                   token.error().message)};
    }
    Json out;
    out["title"] = "Token created";
    out["type"] = "urn:dx:as:Success";
    out["results"] = Json{{"accessToken", token.value()}};
    return {200, out};
}

HttpReply ExchangeService::handle_revoke(const Json& body,
                                         const std::string& internal_auth) const {
    if (!body.is_object() || !body.contains("sub"))
        return {400, error_body("urn:dx:as:badRequest", "Bad Request", "missing sub")};
    auto cutoff = tokens_.revoke(body.at("sub").get<std::string>(), clock_(), internal_auth);
    if (!cutoff)
        return {401, error_body("urn:dx:as:Error", "Unauthenticated", cutoff.error().message)};
    Json out;
    out["title"] = "Revocation stored";
    out["type"] = "urn:dx:as:Success";
    out["results"] = Json{{"sub", body.at("sub")}, {"cutoff", cutoff.value()}};
    return {200, out};
}

}  // namespace citystack::exchange
