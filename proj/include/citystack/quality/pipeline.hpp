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

#include <fstream>
#include <limits>
#include <mutex>
#include <shared_mutex>

#include "citystack/quality/model.hpp"
#include "citystack/support/time.hpp"

namespace citystack::quality {

/// Per-(foi, property) stream state: the last non-duplicate result time
/// and the duplicate counters keyed by uri.
struct StreamState {
    bool has_last = false;
    std::int64_t t_last = std::numeric_limits<std::int64_t>::min();
    std::string last_uri;
    std::map<std::string, std::uint64_t> duplicate_counts;
};

enum class Duplicacy { NonDuplicate, Duplicate };

struct DuplicacyOutcome {
    Duplicacy verdict = Duplicacy::NonDuplicate;
    std::uint64_t count = 0;     // running count for the uri when Duplicate
    bool had_previous = false;   // stream had a predecessor before this obs
    std::int64_t t_last_prev = 0;  // predecessor's result time (valid if had_previous)
};

/// Timestamp rule: t_new <= t_last means the observation was already
/// received. Non-duplicates advance t_last; duplicates only bump their
/// uri's counter.
DuplicacyOutcome assess_duplicacy(const EnrichedObservation& obs, StreamState& state);

struct DelayResult {
    double transmission_delay = 0;  // t_rec - t_new, recorded as-is
    double time_delay = 0;          // max(0, gap - T)
};

/// Needs the predecessor information captured by assess_duplicacy.
Result<DelayResult> assess_delay(const EnrichedObservation& obs, const DuplicacyOutcome& dup,
                                 const FactorTable& factors, int offset_minutes);

/// Null or outside [min, max] (closed interval) is out of range; a
/// missing factor assesses in-range and is flagged.
struct RangeResult {
    bool out_of_range = false;
    bool missing_factor = false;
};
RangeResult assess_range(const EnrichedObservation& obs, const FactorTable& factors,
                         int offset_minutes);

/// Persisted assessed observations keyed by uri, with an append-only
/// journal. Duplicate arrivals update only the stored count.
class AssessedStore {
public:
    explicit AssessedStore(std::string dir = {});
    Result<void> open();  // replays the journal when a directory is set

    void store(const AssessedObservation& assessed);
    std::uint64_t add_duplicate(const std::string& uri, const EnrichedObservation& obs);

    std::optional<AssessedObservation> find(const std::string& uri) const;
    std::vector<AssessedObservation> for_node(const std::string& node,
                                              std::int64_t from = std::numeric_limits<std::int64_t>::min(),
                                              std::int64_t to = std::numeric_limits<std::int64_t>::max()) const;
    std::size_t size() const;
    std::uint64_t total_duplicates() const;

    /// Deterministic dump (sorted by stream then time then uri).
    std::string canonical_export() const;
    /// Subject-predicate-object lines using the SOSA/IDQA property names.
    std::string triple_export() const;

private:
    void append(const Json& record);

    std::string dir_;
    std::string journal_path_;
    std::ofstream out_;
    std::map<std::string, AssessedObservation> by_uri_;
    mutable std::shared_mutex mu_;
    std::mutex write_mu_;
};

/// One raw platform record: a node's named values at one result time.
struct RawSample {
    std::string node;
    std::int64_t t_new = 0;
    std::int64_t t_rec = 0;
    Json values;  // property name -> number | null
};

struct DeadLetter {
    std::string stage;
    std::string reason;
    Json payload;
};

/// The five-stage pipeline: enrich, duplicacy, delay, range, store.
/// Records fan out into one observation per knowledge-base property;
/// each (foi, property) stream is processed strictly in feed order.
class Pipeline {
public:
    Pipeline(const KnowledgeBase& kb, const FactorTable& factors, AssessedStore& store,
             int offset_minutes = timeutil::kDefaultOffsetMinutes);

    Result<EnrichedObservation> enrich(const std::string& node, const std::string& property,
                                       const Json& value, std::int64_t t_new,
                                       std::int64_t t_rec) const;

    /// Feeds one record through all five stages.
    Result<void> process(const RawSample& raw);

    const std::vector<DeadLetter>& dead_letters() const { return dead_letters_; }
    std::uint64_t observations_in() const { return observations_in_; }

private:
    const KnowledgeBase& kb_;
    const FactorTable& factors_;
    AssessedStore& store_;
    int offset_minutes_;
    std::map<std::pair<std::string, std::string>, StreamState> streams_;
    std::vector<DeadLetter> dead_letters_;
    std::uint64_t observations_in_ = 0;
    std::mutex mu_;
};

}  // namespace citystack::quality
