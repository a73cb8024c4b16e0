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
#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "citystack/core/resource_tree.hpp"

namespace citystack::monitor {

/// Builds the push envelope carried to subscribers (and parsed by the
/// lake): the new CIN plus its source container path.
Json make_notification(const std::string& cnt_path, const core::ContentInstance& cin,
                       int offset_minutes);

/// Posts a notification to a subscriber callback address; ok means the
/// subscriber acked with a 2xx within the timeout.
using Transport =
    std::function<Result<void>(const std::string& nu, const Json& body)>;

Transport http_transport(std::chrono::milliseconds ack_timeout);

struct RetryPolicy {
    std::vector<std::chrono::milliseconds> backoff{std::chrono::seconds(1),
                                                   std::chrono::seconds(2),
                                                   std::chrono::seconds(4)};
    std::chrono::milliseconds ack_timeout{std::chrono::seconds(5)};
};

/// Background at-least-once delivery queue. Inserts only enqueue;
/// delivery, retries, and dead-lettering happen on the dispatcher thread.
/// Order is FIFO per subscription (hence per container).
class Dispatcher {
public:
    Dispatcher(core::ResourceTree& tree, std::string dead_letter_path,
               RetryPolicy policy = RetryPolicy{}, Transport transport = nullptr);
    ~Dispatcher();

    /// Fans the new CIN out to every subscription of the container.
    /// Never blocks on subscriber health.
    void on_insert(const std::string& cnt_path, const core::ContentInstance& cin);

    /// Blocks until every enqueued notification is delivered or
    /// dead-lettered.
    void drain();
    void stop();

    std::uint64_t delivered() const { return delivered_.load(); }
    std::uint64_t dead_lettered() const { return dead_lettered_.load(); }
    std::vector<Json> dead_letters() const;

    void set_offset_minutes(int minutes) { offset_minutes_ = minutes; }

private:
    struct Entry {
        std::string nu;
        Json body;
        int attempts = 0;
        std::chrono::steady_clock::time_point due;
    };

    void worker_loop();

    core::ResourceTree& tree_;
    std::string dead_letter_path_;
    RetryPolicy policy_;
    Transport transport_;
    int offset_minutes_ = timeutil::kDefaultOffsetMinutes;

    std::map<std::string, std::deque<Entry>> queues_;  // by subscription path
    std::mutex mu_;
    std::condition_variable cv_;
    std::condition_variable drain_cv_;
    bool stop_ = false;
    std::size_t pending_ = 0;
    std::thread worker_;
    std::atomic<std::uint64_t> delivered_{0};
    std::atomic<std::uint64_t> dead_lettered_{0};
};

}  // namespace citystack::monitor
