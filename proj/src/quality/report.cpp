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
#include "citystack/quality/report.hpp"

#include <cmath>
#include <map>

namespace citystack::quality {

namespace {

struct StreamTally {
    std::map<std::uint64_t, std::uint64_t> times_received;  // 1 -> once, 2 -> twice, ...
    std::vector<double> transmission_delays;
    std::vector<double> sampling_delays;
    std::uint64_t negative_transmission = 0;  // device clock ahead of the platform
    std::uint64_t in_range = 0;
    std::uint64_t out_of_range = 0;
    std::uint64_t missing_delay_factor = 0;
    std::uint64_t missing_range_factor = 0;
    std::uint64_t received = 0;
    std::uint64_t unique_obs = 0;
};

Json histogram(const std::vector<double>& values, int bin_width) {
    std::map<long, std::uint64_t> bins;
    for (double v : values) {
        long bin = static_cast<long>(std::floor(v / bin_width)) * bin_width;
        bins[bin] += 1;
    }
    Json out = Json::object();
    for (const auto& [bin, count] : bins) out[std::to_string(bin)] = count;
    return out;
}

}  // namespace

Result<Json> build_report(const AssessedStore& store, const std::string& node, std::int64_t from,
                          std::int64_t to, int bin_width_seconds) {
    auto rows = store.for_node(node, from, to);
    if (rows.empty())
        return make_error(Errc::NoData, "no assessed data for " + node + " in the window");

    std::map<std::pair<std::string, std::string>, StreamTally> tallies;
    for (const auto& a : rows) {
        StreamTally& t = tallies[{a.obs.foi, a.obs.property}];
        t.unique_obs += 1;
        // numOfDuplicates stores the total receipts (n >= 2), 0 for once
        std::uint64_t times = a.result.num_duplicates == 0 ? 1 : a.result.num_duplicates;
        t.received += times;
        t.times_received[times] += 1;
        if (a.result.transmission_delay) {
            t.transmission_delays.push_back(*a.result.transmission_delay);
            if (*a.result.transmission_delay < 0) t.negative_transmission += 1;
        }
        if (a.result.time_delay) t.sampling_delays.push_back(*a.result.time_delay);
        if (a.result.out_of_range) {
            if (*a.result.out_of_range)
                t.out_of_range += 1;
            else
                t.in_range += 1;
        }
        if (a.result.missing_delay_factor) t.missing_delay_factor += 1;
        if (a.result.missing_range_factor) t.missing_range_factor += 1;
    }

    Json streams = Json::array();
    for (const auto& [key, t] : tallies) {
        Json dist = Json::object();
        for (const auto& [times, count] : t.times_received)
            dist[std::to_string(times)] = count;
        Json s;
        s["foi"] = key.first;
        s["property"] = key.second;
        s["received"] = t.received;
        s["uniqueObservations"] = t.unique_obs;
        s["duplicateDistribution"] = std::move(dist);
        s["transmissionDelay"] =
            Json{{"values", t.transmission_delays},
                 {"binWidth", bin_width_seconds},
                 {"histogram", histogram(t.transmission_delays, bin_width_seconds)},
                 {"negativeCount", t.negative_transmission}};
        s["samplingDelay"] = Json{{"values", t.sampling_delays},
                                  {"binWidth", bin_width_seconds},
                                  {"histogram", histogram(t.sampling_delays, bin_width_seconds)}};
        s["range"] = Json{{"inRange", t.in_range}, {"outOfRange", t.out_of_range}};
        if (t.missing_delay_factor || t.missing_range_factor)
            s["missingFactors"] = Json{{"delay", t.missing_delay_factor},
                                       {"range", t.missing_range_factor}};
        streams.push_back(std::move(s));
    }

    Json out;
    out["node"] = node;
    out["window"] = Json{{"from", from}, {"to", to}};
    out["streams"] = std::move(streams);
    return out;
}

}  // namespace citystack::quality
