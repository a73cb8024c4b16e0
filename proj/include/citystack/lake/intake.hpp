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
#include <condition_variable>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "citystack/lake/store.hpp"
#include "citystack/support/time.hpp"

namespace httplib {
class Server;
}

namespace citystack::lake {

/// Parsed notification envelope (the subscriber side of the monitor's
/// dispatch format).
struct NotificationRecord {
    std::string container_path;  // sur
    std::string rn;
    std::string ri;
    std::int64_t recorded_at = 0;  // cin ct
    std::vector<std::string> labels;
    std::string con;
};

Result<NotificationRecord> parse_notification(const Json& body,
                                              int offset_minutes = timeutil::kDefaultOffsetMinutes);

/// One fully parsed observation record as it leaves the intake: named
/// values, observation time, and the time it was recorded on the platform.
struct RawRecord {
    std::string tenant;
    std::string node;
    std::string version;
    std::int64_t t_new = 0;
    std::int64_t t_rec = 0;
    Json values;  // parameter name -> number | null (Timestamp excluded)
};

/// Notification intake: acks immediately (after envelope validation and a
/// durable-queue append), then parses, routes by vertical, and stores on
/// per-tenant writers. Storage failures never delay the ack.
class IntakeService {
public:
    struct Options {
        /// Peers allowed to post notifications; empty list admits loopback
        /// only (the monitor host).
        std::vector<std::string> allowed_hosts;
        int offset_minutes = timeutil::kDefaultOffsetMinutes;
        /// Replay the durable intake journal on start (idempotent thanks
        /// to the (node, ts) primary key).
        bool replay_on_start = true;
    };

    IntakeService(LakeStore& lake, Options opt);
    ~IntakeService();

    /// Fast path. 400 (MalformedContent) only on an unparseable envelope;
    /// a denied peer gets AccessDenied; everything else is queued + acked.
    Result<void> receive(const std::string& body, const std::string& remote_addr);

    Result<void> start();
    void stop();
    /// Blocks until every accepted record is fully processed.
    void drain();

    /// Re-ingests the durable intake journal (admin verb). Returns the
    /// number of records fed.
    Result<std::size_t> replay_journal();

    /// Test hook, runs on the store path before each write (per-tenant).
    void set_store_hook(std::function<void()> hook) { store_hook_ = std::move(hook); }
    /// Downstream consumers (the quality pipeline) see every parsed
    /// record, duplicates included, in per-tenant arrival order.
    void set_record_hook(std::function<void(const RawRecord&)> hook) {
        record_hook_ = std::move(hook);
    }

    std::uint64_t accepted() const { return accepted_.load(); }
    std::uint64_t completed() const { return completed_.load(); }

private:
    struct TenantWorker {
        std::deque<RawRecord> queue;
        std::thread thread;
        std::condition_variable cv;
        bool stop = false;
    };

    void router_loop();
    void tenant_loop(const std::string& tenant, TenantWorker* worker);
    void route_one(const std::string& body);
    void enqueue_tenant(RawRecord record);

    LakeStore& lake_;
    Options opt_;
    std::string journal_path_;
    std::ofstream journal_;

    std::deque<std::string> inbox_;
    std::thread router_;
    bool stop_ = false;
    std::mutex mu_;
    std::condition_variable cv_;
    std::condition_variable drain_cv_;

    std::map<std::string, std::unique_ptr<TenantWorker>> workers_;
    std::mutex workers_mu_;

    std::atomic<std::uint64_t> accepted_{0};
    std::atomic<std::uint64_t> completed_{0};
    std::function<void()> store_hook_;
    std::function<void(const RawRecord&)> record_hook_;
    bool started_ = false;
};

/// HTTP listener for the intake: POST /notify is the nu target; the ack
/// is returned as soon as the envelope is validated and queued.
class IntakeHttpServer {
public:
    explicit IntakeHttpServer(IntakeService& intake);
    ~IntakeHttpServer();

    Result<void> start(const std::string& host, int port);
    void stop();
    int port() const { return port_; }

private:
    IntakeService& intake_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    int port_ = 0;
};

}  // namespace citystack::lake
