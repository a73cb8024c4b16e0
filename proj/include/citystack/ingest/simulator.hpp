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
#include <map>
#include <string>
#include <vector>

#include "citystack/support/json.hpp"
#include "citystack/support/result.hpp"

namespace citystack::ingest {

/// Fault injection plan. Probabilistic knobs drive random runs; the
/// exact duplicate histogram pins the received-N-times distribution for
/// oracle-exact evaluations.
struct FaultPlan {
    double duplicate_prob = 0;   // chance an observation is retransmitted
    int max_copies = 4;          // total receipts when duplicated (2..max)
    double outlier_prob = 0;     // chance one property is pushed out of range
    double null_prob = 0;        // chance one property is dropped to null
    double delay_prob = 0;       // chance of extra sampling delay
    double delay_min = 0;        // seconds, uniform
    double delay_max = 0;
    double transmission_min = 1; // t_rec - t_new, uniform
    double transmission_max = 2;
    /// times-received -> number of unique observations (exact mode);
    /// overrides duplicate_prob when non-empty.
    std::map<int, std::uint64_t> exact_duplicates;
};

/// One simulated parameter: value range for generation, which is also
/// the allowed range for the quality factors derived from the profile.
struct SimParam {
    std::string name;
    double min = 0;
    double max = 0;
};

struct SimProfile {
    std::string node;
    std::string vertical;     // "AQ", "WM", ...
    std::string ae;           // monitor AE name, e.g. "AE-AQ"
    std::string version;      // data-model version label
    std::string foi;          // feature of interest for quality factors
    int period_seconds = 15;
    std::int64_t start_time = 0;
    std::vector<SimParam> params;  // positional order after Timestamp
    FaultPlan faults;
    std::uint64_t seed = 42;

    Json to_json() const;
    static Result<SimProfile> from_json(const Json& j);
};

/// One emitted record (a transmission). copy_index 0 is the original;
/// retransmissions repeat t_new and values with a later t_rec.
struct SimRecord {
    std::uint64_t seq = 0;
    std::int64_t slot = 0;   // nominal schedule time
    std::int64_t t_new = 0;  // observation time (slot + injected delay)
    std::int64_t t_rec = 0;  // recorded-at time
    int copy_index = 0;
    Json values;  // name -> number | null (Timestamp excluded)
    std::vector<std::string> nulled;
    std::vector<std::string> outliers;

    /// Positional content array "[t_new, v1, v2, ...]".
    std::string con(const SimProfile& profile) const;
    Json to_json() const;
};

/// Deterministic record stream under a fixed seed; the emission log
/// doubles as the ground truth for the quality-pipeline oracles.
class Simulator {
public:
    explicit Simulator(SimProfile profile);

    /// Emits records covering [start, start + duration).
    std::vector<SimRecord> run(std::int64_t duration_seconds);

    const SimProfile& profile() const { return profile_; }

    static std::string ground_truth_log(const SimProfile& profile,
                                        const std::vector<SimRecord>& records);
    static Result<std::pair<SimProfile, std::vector<SimRecord>>> parse_ground_truth_log(
        const std::string& text);

private:
    SimProfile profile_;
};

}  // namespace citystack::ingest
