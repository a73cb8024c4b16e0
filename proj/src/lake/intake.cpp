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
#include "citystack/lake/intake.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>

#include <httplib.h>

#include "citystack/core/resource_tree.hpp"

namespace citystack::lake {

namespace fs = std::filesystem;

Result<NotificationRecord> parse_notification(const Json& body, int offset_minutes) {
    if (!body.is_object() || !body.contains("m2m:sgn"))
        return make_error(Errc::MalformedContent, "missing m2m:sgn envelope");
    const Json& sgn = body.at("m2m:sgn");
    if (!sgn.contains("nev") || !sgn.at("nev").contains("rep") ||
        !sgn.at("nev").at("rep").contains("m2m:cin"))
        return make_error(Errc::MalformedContent, "missing m2m:cin representation");
    const Json& cin = sgn.at("nev").at("rep").at("m2m:cin");

    NotificationRecord rec;
    rec.container_path = sgn.value("sur", std::string{});
    rec.rn = cin.value("rn", std::string{});
    rec.ri = cin.value("ri", std::string{});
    rec.con = cin.value("con", std::string{});
    if (cin.contains("lbl"))
        for (const auto& l : cin.at("lbl"))
            if (l.is_string()) rec.labels.push_back(l.get<std::string>());
    if (cin.contains("ct") && cin.at("ct").is_string()) {
        auto t = timeutil::parse_compact(cin.at("ct").get<std::string>(), offset_minutes);
        if (t) rec.recorded_at = *t;
    } else if (cin.contains("ct") && cin.at("ct").is_number()) {
        rec.recorded_at = cin.at("ct").get<std::int64_t>();
    }
    return rec;
}

IntakeService::IntakeService(LakeStore& lake, Options opt) : lake_(lake), opt_(std::move(opt)) {
    journal_path_ = lake_.root_dir() + "/intake.ndjson";
}

IntakeService::~IntakeService() { stop(); }

Result<void> IntakeService::start() {
    std::error_code ec;
    fs::create_directories(lake_.root_dir(), ec);
    if (ec) return make_error(Errc::Io, "cannot create " + lake_.root_dir());
    journal_.open(journal_path_, std::ios::app);
    if (!journal_) return make_error(Errc::Io, "cannot open " + journal_path_);
    started_ = true;
    router_ = std::thread([this] { router_loop(); });
    if (opt_.replay_on_start) {
        auto replayed = replay_journal();
        if (!replayed) return replayed.error();
    }
    return {};
}

void IntakeService::stop() {
    {
        std::lock_guard lk(mu_);
        if (!started_) return;
        stop_ = true;
    }
    cv_.notify_all();
    if (router_.joinable()) router_.join();
    std::lock_guard wl(workers_mu_);
    for (auto& [_, worker] : workers_) {
        {
            std::lock_guard lk(mu_);
            worker->stop = true;
        }
        worker->cv.notify_all();
        if (worker->thread.joinable()) worker->thread.join();
    }
    started_ = false;
}

Result<void> IntakeService::receive(const std::string& body, const std::string& remote_addr) {
    bool allowed = false;
    if (opt_.allowed_hosts.empty()) {
        allowed = remote_addr == "127.0.0.1" || remote_addr == "::1" || remote_addr.empty() ||
                  remote_addr == "localhost";
    } else {
        allowed = std::find(opt_.allowed_hosts.begin(), opt_.allowed_hosts.end(), remote_addr) !=
                  opt_.allowed_hosts.end();
    }
    if (!allowed)
        return make_error(Errc::AccessDenied, "intake not allowed from " + remote_addr);

    // envelope validation only; all parsing/storing happens off the ack path
    auto parsed = parse_json(body);
    if (!parsed || !parsed.value().is_object() || !parsed.value().contains("m2m:sgn"))
        return make_error(Errc::MalformedContent, "unparseable notification envelope");

    std::string line = parsed.value().dump();
    {
        std::lock_guard lk(mu_);
        journal_ << line << '\n';
        journal_.flush();
        inbox_.push_back(std::move(line));
        ++accepted_;
    }
    cv_.notify_one();
    return {};
}

Result<std::size_t> IntakeService::replay_journal() {
    std::ifstream in(journal_path_);
    if (!in) return std::size_t{0};
    std::size_t fed = 0;
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line))
        if (!line.empty()) lines.push_back(line);
    {
        std::lock_guard lk(mu_);
        for (auto& l : lines) {
            inbox_.push_back(std::move(l));
            ++accepted_;
            ++fed;
        }
    }
    cv_.notify_one();
    return fed;
}

void IntakeService::router_loop() {
    for (;;) {
        std::string body;
        {
            std::unique_lock lk(mu_);
            cv_.wait(lk, [this] { return stop_ || !inbox_.empty(); });
            if (stop_ && inbox_.empty()) return;
            body = std::move(inbox_.front());
            inbox_.pop_front();
        }
        route_one(body);
    }
}

void IntakeService::route_one(const std::string& body) {
    auto parsed = parse_json(body);
    if (!parsed) {
        lake_.dead_letter("unparseable", Json{{"raw", body}});
        ++completed_;
        drain_cv_.notify_all();
        return;
    }
    auto note = parse_notification(parsed.value(), opt_.offset_minutes);
    if (!note) {
        lake_.dead_letter(note.error().message, parsed.value());
        ++completed_;
        drain_cv_.notify_all();
        return;
    }
    auto tenant_name = route_tenant(note.value().labels);
    if (!tenant_name) {
        // never dropped: the full payload is preserved for later repair
        lake_.dead_letter("unknown vertical", parsed.value());
        ++completed_;
        drain_cv_.notify_all();
        return;
    }
    auto tenant = lake_.tenant(tenant_name.value());
    if (!tenant) {
        lake_.dead_letter("tenant open failed: " + tenant.error().message, parsed.value());
        ++completed_;
        drain_cv_.notify_all();
        return;
    }

    const NotificationRecord& n = note.value();
    // node name from the source container path .../<node>/Data
    std::string node;
    {
        auto path = n.container_path;
        auto end = path.find_last_of('/');
        if (end != std::string::npos && end > 0) {
            auto begin = path.find_last_of('/', end - 1);
            if (begin != std::string::npos) node = path.substr(begin + 1, end - begin - 1);
        }
    }
    if (node.empty()) {
        for (const auto& l : n.labels)
            if (l.rfind("AE-", 0) != 0 && !(l.size() > 1 && l[0] == 'V' && std::isdigit(l[1])))
                node = l;
    }
    std::string version_label;
    for (const auto& l : n.labels)
        if (l.size() > 1 && l[0] == 'V' && std::isdigit(static_cast<unsigned char>(l[1])))
            version_label = l;

    // positional values need the parameter layout of the node's version
    std::int64_t probe_ts = n.recorded_at;
    std::string version = tenant.value()->version_for(node, probe_ts).value_or(version_label);
    auto params = tenant.value()->parameters_for(version);
    if (params.empty() && !version_label.empty() && version != version_label) {
        version = version_label;
        params = tenant.value()->parameters_for(version);
    }
    if (params.empty()) {
        lake_.dead_letter("no parameter schema for " + node + " version '" + version + "'",
                          parsed.value());
        ++completed_;
        drain_cv_.notify_all();
        return;
    }
    core::DescriptorRecord layout;
    layout.parameters = params;
    auto values = core::parse_positional_payload(layout, n.con);
    if (!values) {
        lake_.dead_letter(values.error().message, parsed.value());
        ++completed_;
        drain_cv_.notify_all();
        return;
    }

    RawRecord record;
    record.tenant = tenant_name.value();
    record.node = node;
    record.t_rec = n.recorded_at;
    record.values = std::move(values).value();
    if (record.values.contains("Timestamp") && record.values.at("Timestamp").is_number()) {
        record.t_new = record.values.at("Timestamp").get<std::int64_t>();
        record.values.erase("Timestamp");
    } else {
        record.t_new = n.recorded_at;
    }
    record.version = tenant.value()->version_for(node, record.t_new).value_or(version_label);
    enqueue_tenant(std::move(record));
}

void IntakeService::enqueue_tenant(RawRecord record) {
    std::string tenant = record.tenant;
    std::lock_guard wl(workers_mu_);
    auto it = workers_.find(tenant);
    if (it == workers_.end()) {
        auto worker = std::make_unique<TenantWorker>();
        auto* ptr = worker.get();
        worker->thread = std::thread([this, tenant, ptr] { tenant_loop(tenant, ptr); });
        it = workers_.emplace(tenant, std::move(worker)).first;
    }
    {
        std::lock_guard lk(mu_);
        it->second->queue.push_back(std::move(record));
    }
    it->second->cv.notify_one();
}

void IntakeService::tenant_loop(const std::string& tenant, TenantWorker* worker) {
    for (;;) {
        RawRecord record;
        {
            std::unique_lock lk(mu_);
            worker->cv.wait(lk, [&] { return worker->stop || !worker->queue.empty(); });
            if (worker->stop && worker->queue.empty()) return;
            record = std::move(worker->queue.front());
            worker->queue.pop_front();
        }
        if (store_hook_) store_hook_();
        auto tenant_store = lake_.tenant(tenant);
        if (tenant_store) {
            auto stored = tenant_store.value()->store_observation(
                record.node, record.t_new, record.values, record.t_rec, record.version);
            (void)stored;  // DuplicateKey = redelivery, counted by the store
        }
        if (record_hook_) record_hook_(record);
        ++completed_;
        drain_cv_.notify_all();
    }
}

void IntakeService::drain() {
    std::unique_lock lk(mu_);
    drain_cv_.wait(lk, [this] { return completed_.load() >= accepted_.load(); });
}

// ---------------------------------------------------------------------------
// IntakeHttpServer

IntakeHttpServer::IntakeHttpServer(IntakeService& intake) : intake_(intake) {}

IntakeHttpServer::~IntakeHttpServer() { stop(); }

Result<void> IntakeHttpServer::start(const std::string& host, int port) {
    server_ = std::make_unique<httplib::Server>();
    server_->Post("/notify", [this](const httplib::Request& req, httplib::Response& res) {
        auto received = intake_.receive(req.body, req.remote_addr);
        if (received) {
            res.status = 200;
            res.set_content("{}", "application/json");
            return;
        }
        res.status = received.code() == Errc::AccessDenied ? 403 : 400;
        res.set_content(Json{{"error", received.error().message}}.dump(), "application/json");
    });
    server_->Get("/health", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("{\"status\":\"ok\"}", "application/json");
    });
    if (port == 0) {
        port_ = server_->bind_to_any_port(host);
        if (port_ <= 0) return make_error(Errc::Io, "cannot bind intake listener");
    } else {
        if (!server_->bind_to_port(host, port))
            return make_error(Errc::Io, "cannot bind intake listener on port " + std::to_string(port));
        port_ = port;
    }
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return {};
}

void IntakeHttpServer::stop() {
    if (server_) server_->stop();
    if (thread_.joinable()) thread_.join();
    server_.reset();
}

}  // namespace citystack::lake
