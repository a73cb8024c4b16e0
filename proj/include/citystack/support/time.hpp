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
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace citystack {

/// Injected clock, epoch seconds. Tests pin it; production uses wall time.
using Clock = std::function<std::int64_t()>;

Clock system_clock();

namespace timeutil {

struct Civil {
    int year;
    int month;  // 1..12
    int day;    // 1..31
    int hour;
    int minute;
    int second;
};

/// Default rendering offset for timestamps (+05:30).
inline constexpr int kDefaultOffsetMinutes = 330;

std::int64_t civil_to_epoch(const Civil& c, int offset_minutes);
Civil epoch_to_civil(std::int64_t epoch, int offset_minutes);

/// "20220129T182637" (local at offset).
std::string format_compact(std::int64_t epoch, int offset_minutes = kDefaultOffsetMinutes);
std::optional<std::int64_t> parse_compact(std::string_view s,
                                          int offset_minutes = kDefaultOffsetMinutes);

/// "2022-03-21T00:25:06+05:30"
std::string format_iso(std::int64_t epoch, int offset_minutes = kDefaultOffsetMinutes);

/// Accepts "Z" or "+HH:MM"/"-HH:MM" suffixes; bare timestamps read as UTC.
std::optional<std::int64_t> parse_iso(std::string_view s);

/// Descriptor version-history style, "26-04-2021 00-00-00" (local at offset).
std::optional<std::int64_t> parse_descriptor_dt(std::string_view s,
                                                int offset_minutes = kDefaultOffsetMinutes);

/// Seconds since local midnight at the given offset.
int seconds_of_day(std::int64_t epoch, int offset_minutes = kDefaultOffsetMinutes);

/// Epoch of the open-interval end marker, local 9999-12-31 23:59:59.
std::int64_t open_interval_sentinel(int offset_minutes = kDefaultOffsetMinutes);

}  // namespace timeutil
}  // namespace citystack
