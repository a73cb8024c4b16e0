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
#include "citystack/monitor/subscriptions.hpp"

#include <fstream>

#include <httplib.h>

namespace citystack::monitor {

Json make_notification(const std::string& cnt_path, const core::ContentInstance& cin,
                       int offset_minutes) {
    Json sgn;
    sgn["nev"] = Json{{"rep", Json{{"m2m:cin", cin.to_m2m(offset_minutes)}}}};
    sgn["sur"] = cnt_path;
    return Json{{"m2m:sgn", std::move(sgn)}};
}

Transport http_transport(std::chrono::milliseconds ack_timeout) {
    return [ack_timeout](const std::string& nu, const Json& body) -> Result<void> {
        auto scheme_end = nu.find("://");
        if (scheme_end == std::string::npos)
            return make_error(Errc::BadRequest, "unsupported nu " + nu);
        auto path_start = nu.find('/', scheme_end + 3);
        std::string base = nu.substr(0, path_start == std::string::npos ? nu.size() : path_start);
        std::string path = path_start == std::string::npos ? "/" : nu.substr(path_start);
        httplib::Client client(base);
        client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(ack_timeout)
                                          .count(),
                                      (ack_timeout.count() % 1000) * 1000);
        client.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(ack_timeout)
                                    .count(),
                                (ack_timeout.count() % 1000) * 1000);
        auto res = client.Post(path, body.dump(), "application/json");
        if (!res) return make_error(Errc::PlatformUnreachable, "no response from " + nu);
        if (res->status < 200 || res->status >= 300)
            return make_error(Errc::PlatformUnreachable,
                              "subscriber answered " + std::to_string(res->status));
        return {};
    };
}

Dispatcher::Dispatcher(core::ResourceTree& tree, std::string dead_letter_path, RetryPolicy policy,
                       Transport transport)
    : tree_(tree),
      dead_letter_path_(std::move(dead_letter_path)),
      policy_(std::move(policy)),
      transport_(transport ? std::move(transport) : http_transport(policy_.ack_timeout)) {
    worker_ = std::thread([this] { worker_loop(); });
}

Dispatcher::~Dispatcher() { stop(); }

void Dispatcher::stop() {
    {
        std::lock_guard lk(mu_);
        if (stop_) return;
        stop_ = true;
    }
    cv_.notify_all();
    if (worker_.joinable()) worker_.join();
}

void Dispatcher::on_insert(const std::string& cnt_path, const core::ContentInstance& cin) {
    auto subs = tree_.subscriptions_of(cnt_path);
    if (subs.empty()) return;
    Json body = make_notification(cnt_path, cin, offset_minutes_);
    {
        std::lock_guard lk(mu_);
        for (const auto& sub : subs) {
            Entry e;
            e.nu = sub.nu;
            e.body = body;
            e.due = std::chrono::steady_clock::now();
            queues_[sub.path].push_back(std::move(e));
            ++pending_;
        }
    }
    cv_.notify_one();
}

void Dispatcher::worker_loop() {
    std::unique_lock lk(mu_);
    for (;;) {
        // in-flight notifications are abandoned on stop; the retry
        // schedule must never delay shutdown
        if (stop_) return;
        auto now = std::chrono::steady_clock::now();
        auto next_due = now + std::chrono::hours(1);
        std::string ready_key;
        for (auto& [key, queue] : queues_) {
            if (queue.empty()) continue;
            if (queue.front().due <= now) {
                ready_key = key;
                break;
            }
            next_due = std::min(next_due, queue.front().due);
        }
        if (ready_key.empty()) {
            cv_.wait_until(lk, next_due);
            continue;
        }

        Entry entry = queues_[ready_key].front();
        lk.unlock();
        auto sent = transport_(entry.nu, entry.body);
        lk.lock();

        auto& queue = queues_[ready_key];
        if (queue.empty()) continue;  // drained concurrently (stop)
        if (sent) {
            queue.pop_front();
            --pending_;
            ++delivered_;
            drain_cv_.notify_all();
            continue;
        }
        Entry& head = queue.front();
        head.attempts += 1;
        if (head.attempts > static_cast<int>(policy_.backoff.size())) {
            // out of retries: keep the full notification for replay by hand
            Json dead{{"sub", ready_key},
                      {"nu", head.nu},
                      {"attempts", head.attempts},
                      {"notification", head.body}};
            std::ofstream out(dead_letter_path_, std::ios::app);
            out << dead.dump() << '\n';
            queue.pop_front();
            --pending_;
            ++dead_lettered_;
            drain_cv_.notify_all();
            continue;
        }
        head.due = std::chrono::steady_clock::now() + policy_.backoff[head.attempts - 1];
    }
}

void Dispatcher::drain() {
    std::unique_lock lk(mu_);
    drain_cv_.wait(lk, [this] { return pending_ == 0; });
}

std::vector<Json> Dispatcher::dead_letters() const {
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

}  // namespace citystack::monitor
