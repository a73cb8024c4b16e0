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
#include <optional>
#include <string>
#include <vector>

#include "citystack/support/json.hpp"
#include "citystack/support/result.hpp"

namespace citystack::quality {

/// Static sensor description kept in the knowledge base; it only changes
/// when the physical sensor is replaced.
struct SensorDescription {
    std::string sensor;  // made-by-sensor
    double operating_min = 0;
    double operating_max = 0;
    Json capabilities = Json::object();  // accuracy / frequency / sensitivity / precision
};

struct ObservedProperty {
    std::string name;
    std::string unit;
    std::string datatype;
    SensorDescription sensor;
};

struct KbEntry {
    std::string node;
    std::string foi;  // feature of interest
    std::vector<ObservedProperty> properties;

    const ObservedProperty* property(const std::string& name) const;
};

/// node id -> enrichment semantics.
class KnowledgeBase {
public:
    Result<void> load(const Json& config);
    Json to_config() const;
    Result<const KbEntry*> entry(const std::string& node) const;
    void put(KbEntry entry);
    std::vector<std::string> nodes() const;

private:
    std::map<std::string, KbEntry> entries_;
};

/// One quality factor: a per-(foi, property) constraint valid inside a
/// local time-of-day window [start, end).
struct QualityFactor {
    enum class Kind { RangeValue, ExpectedDelay };
    std::string foi;
    std::string property;
    int interval_start = 0;      // seconds of local day, inclusive
    int interval_end = 86400;    // exclusive
    Kind kind = Kind::RangeValue;
    double min_value = 0;        // RangeValue
    double max_value = 0;
    double delay_seconds = 0;    // ExpectedDelay (T)
};

class FactorTable {
public:
    Result<void> load(const Json& config);
    Json to_config() const;
    void put(QualityFactor factor);

    /// Factor whose window contains the given local second-of-day.
    const QualityFactor* range_for(const std::string& foi, const std::string& property,
                                   int second_of_day) const;
    const QualityFactor* delay_for(const std::string& foi, const std::string& property,
                                   int second_of_day) const;

    std::size_t size() const { return factors_.size(); }

private:
    const QualityFactor* find(const std::string& foi, const std::string& property,
                              QualityFactor::Kind kind, int second_of_day) const;
    std::vector<QualityFactor> factors_;
};

/// One semantically enriched observation: a single (node, property,
/// value) at a result time, with its knowledge-base links resolved.
struct EnrichedObservation {
    std::string uri;  // deterministic over (node, property, t_new)
    std::string node;
    std::string foi;
    std::string property;
    Json value;  // number or null
    std::string unit;
    std::string sensor;
    std::int64_t t_new = 0;  // result time
    std::int64_t t_rec = 0;  // recorded time (may precede t_new on skew)
};

/// Assessment annotations attached to a stored observation. A duplicate
/// record carries only its count; non-duplicates carry the delay and
/// range verdicts.
struct AssessmentResult {
    std::uint64_t num_duplicates = 0;
    std::optional<double> transmission_delay;
    std::optional<double> time_delay;
    std::optional<bool> out_of_range;
    bool missing_delay_factor = false;
    bool missing_range_factor = false;
};

struct AssessedObservation {
    EnrichedObservation obs;
    AssessmentResult result;
};

/// Deterministic observation uri so retransmissions collide onto the
/// same subject (which is what makes per-uri duplicate counters work).
std::string mint_uri(const std::string& node, const std::string& property, std::int64_t t_new);

}  // namespace citystack::quality
