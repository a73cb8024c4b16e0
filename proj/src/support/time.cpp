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
#include "citystack/support/time.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace citystack {

Clock system_clock() {
    return [] {
        return std::chrono::duration_cast<std::chrono::seconds>(
                   std::chrono::system_clock::now().time_since_epoch())
            .count();
    };
}

namespace timeutil {
namespace {

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

bool read_int(std::string_view s, size_t pos, size_t len, int& out) {
    if (pos + len > s.size()) return false;
    int v = 0;
    for (size_t i = 0; i < len; ++i) {
        char c = s[pos + i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    out = v;
    return true;
}

}  // namespace

std::int64_t civil_to_epoch(const Civil& c, int offset_minutes) {
    std::int64_t days = days_from_civil(c.year, c.month, c.day);
    std::int64_t local = days * 86400 + c.hour * 3600 + c.minute * 60 + c.second;
    return local - static_cast<std::int64_t>(offset_minutes) * 60;
}

Civil epoch_to_civil(std::int64_t epoch, int offset_minutes) {
    std::int64_t local = epoch + static_cast<std::int64_t>(offset_minutes) * 60;
    std::int64_t days = local / 86400;
    std::int64_t rem = local % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    Civil c{};
    civil_from_days(days, c.year, c.month, c.day);
    c.hour = static_cast<int>(rem / 3600);
    c.minute = static_cast<int>((rem % 3600) / 60);
    c.second = static_cast<int>(rem % 60);
    return c;
}

std::string format_compact(std::int64_t epoch, int offset_minutes) {
    Civil c = epoch_to_civil(epoch, offset_minutes);
    char buf[20];
    std::snprintf(buf, sizeof buf, "%04d%02d%02dT%02d%02d%02d", c.year, c.month, c.day, c.hour,
                  c.minute, c.second);
    return buf;
}

std::optional<std::int64_t> parse_compact(std::string_view s, int offset_minutes) {
    Civil c{};
    if (s.size() != 15 || s[8] != 'T') return std::nullopt;
    if (!read_int(s, 0, 4, c.year) || !read_int(s, 4, 2, c.month) || !read_int(s, 6, 2, c.day) ||
        !read_int(s, 9, 2, c.hour) || !read_int(s, 11, 2, c.minute) ||
        !read_int(s, 13, 2, c.second))
        return std::nullopt;
    return civil_to_epoch(c, offset_minutes);
}

std::string format_iso(std::int64_t epoch, int offset_minutes) {
    Civil c = epoch_to_civil(epoch, offset_minutes);
    int off = offset_minutes;
    char sign = '+';
    if (off < 0) {
        sign = '-';
        off = -off;
    }
    char buf[36];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d%c%02d:%02d", c.year, c.month,
                  c.day, c.hour, c.minute, c.second, sign, off / 60, off % 60);
    return buf;
}

std::optional<std::int64_t> parse_iso(std::string_view s) {
    Civil c{};
    if (s.size() < 19 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') ||
        s[13] != ':' || s[16] != ':')
        return std::nullopt;
    if (!read_int(s, 0, 4, c.year) || !read_int(s, 5, 2, c.month) || !read_int(s, 8, 2, c.day) ||
        !read_int(s, 11, 2, c.hour) || !read_int(s, 14, 2, c.minute) ||
        !read_int(s, 17, 2, c.second))
        return std::nullopt;
    int offset = 0;
    if (s.size() > 19) {
        std::string_view tail = s.substr(19);
        if (tail == "Z" || tail == "z") {
            offset = 0;
        } else if ((tail[0] == '+' || tail[0] == '-') && tail.size() == 6 && tail[3] == ':') {
            int oh = 0, om = 0;
            if (!read_int(tail, 1, 2, oh) || !read_int(tail, 4, 2, om)) return std::nullopt;
            offset = oh * 60 + om;
            if (tail[0] == '-') offset = -offset;
        } else {
            return std::nullopt;
        }
    }
    return civil_to_epoch(c, offset);
}

std::optional<std::int64_t> parse_descriptor_dt(std::string_view s, int offset_minutes) {
    // "26-04-2021 00-00-00"
    Civil c{};
    if (s.size() != 19 || s[2] != '-' || s[5] != '-' || s[10] != ' ' || s[13] != '-' ||
        s[16] != '-')
        return std::nullopt;
    if (!read_int(s, 0, 2, c.day) || !read_int(s, 3, 2, c.month) || !read_int(s, 6, 4, c.year) ||
        !read_int(s, 11, 2, c.hour) || !read_int(s, 14, 2, c.minute) ||
        !read_int(s, 17, 2, c.second))
        return std::nullopt;
    return civil_to_epoch(c, offset_minutes);
}

std::int64_t open_interval_sentinel(int offset_minutes) {
    return civil_to_epoch(Civil{9999, 12, 31, 23, 59, 59}, offset_minutes);
}

int seconds_of_day(std::int64_t epoch, int offset_minutes) {
    std::int64_t local = epoch + static_cast<std::int64_t>(offset_minutes) * 60;
    std::int64_t rem = local % 86400;
    if (rem < 0) rem += 86400;
    return static_cast<int>(rem);
}

}  // namespace timeutil
}  // namespace citystack
