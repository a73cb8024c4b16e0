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
#include "citystack/quality/pipeline.hpp"

#include <algorithm>
#include <filesystem>

namespace citystack::quality {

namespace fs = std::filesystem;

DuplicacyOutcome assess_duplicacy(const EnrichedObservation& obs, StreamState& state) {
    DuplicacyOutcome out;
    out.had_previous = state.has_last;
    out.t_last_prev = state.t_last;
    if (state.has_last && obs.t_new <= state.t_last) {
        out.verdict = Duplicacy::Duplicate;
        // the counter holds the number of times the observation was
        // received: the first re-receipt makes it 2
        auto& counter = state.duplicate_counts[obs.uri];
        counter = counter == 0 ? 2 : counter + 1;
        out.count = counter;
        return out;
    }
    out.verdict = Duplicacy::NonDuplicate;
    out.count = 0;
    state.has_last = true;
    state.t_last = obs.t_new;
    state.last_uri = obs.uri;
    return out;
}

Result<DelayResult> assess_delay(const EnrichedObservation& obs, const DuplicacyOutcome& dup,
                                 const FactorTable& factors, int offset_minutes) {
    const QualityFactor* factor =
        factors.delay_for(obs.foi, obs.property, timeutil::seconds_of_day(obs.t_new, offset_minutes));
    if (!factor)
        return make_error(Errc::MissingFactor,
                          "no expected-delay factor for " + obs.foi + "/" + obs.property);
    DelayResult r;
    r.transmission_delay = static_cast<double>(obs.t_rec - obs.t_new);
    if (!dup.had_previous) {
        r.time_delay = 0;  // first observation of the stream
    } else {
        double gap = static_cast<double>(obs.t_new - dup.t_last_prev);
        r.time_delay = std::max(0.0, gap - factor->delay_seconds);
    }
    return r;
}

RangeResult assess_range(const EnrichedObservation& obs, const FactorTable& factors,
                         int offset_minutes) {
    RangeResult r;
    const QualityFactor* factor =
        factors.range_for(obs.foi, obs.property, timeutil::seconds_of_day(obs.t_new, offset_minutes));
    if (!factor) {
        r.missing_factor = true;
        r.out_of_range = false;
        return r;
    }
    if (obs.value.is_null()) {
        r.out_of_range = true;
        return r;
    }
    double v = obs.value.get<double>();
    // closed interval: the boundary values themselves are in range
    r.out_of_range = v < factor->min_value || v > factor->max_value;
    return r;
}

// ---------------------------------------------------------------------------
// AssessedStore

AssessedStore::AssessedStore(std::string dir) : dir_(std::move(dir)) {
    if (!dir_.empty()) journal_path_ = dir_ + "/assessed.ndjson";
}

Result<void> AssessedStore::open() {
    if (dir_.empty()) return {};
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) return make_error(Errc::Io, "cannot create " + dir_);
    if (fs::exists(journal_path_)) {
        std::ifstream in(journal_path_);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto rec = parse_json(line);
            if (!rec) continue;
            const Json& j = rec.value();
            if (j.value("t", std::string{}) == "obs") {
                AssessedObservation a;
                a.obs.uri = j.value("uri", std::string{});
                a.obs.node = j.value("node", std::string{});
                a.obs.foi = j.value("foi", std::string{});
                a.obs.property = j.value("property", std::string{});
                a.obs.value = j.value("value", Json(nullptr));
                a.obs.unit = j.value("unit", std::string{});
                a.obs.sensor = j.value("sensor", std::string{});
                a.obs.t_new = j.value("t_new", std::int64_t{0});
                a.obs.t_rec = j.value("t_rec", std::int64_t{0});
                a.result.num_duplicates = j.value("numOfDuplicates", std::uint64_t{0});
                if (j.contains("transmissionDelay"))
                    a.result.transmission_delay = j.at("transmissionDelay").get<double>();
                if (j.contains("timeDelay")) a.result.time_delay = j.at("timeDelay").get<double>();
                if (j.contains("isOutOfRange"))
                    a.result.out_of_range = j.at("isOutOfRange").get<bool>();
                a.result.missing_delay_factor = j.value("missingDelayFactor", false);
                a.result.missing_range_factor = j.value("missingRangeFactor", false);
                by_uri_[a.obs.uri] = std::move(a);
            } else if (j.value("t", std::string{}) == "dup") {
                auto it = by_uri_.find(j.value("uri", std::string{}));
                if (it != by_uri_.end())
                    it->second.result.num_duplicates = j.value("count", std::uint64_t{0});
                else {
                    AssessedObservation a;
                    a.obs.uri = j.value("uri", std::string{});
                    a.obs.node = j.value("node", std::string{});
                    a.obs.foi = j.value("foi", std::string{});
                    a.obs.property = j.value("property", std::string{});
                    a.obs.t_new = j.value("t_new", std::int64_t{0});
                    a.result.num_duplicates = j.value("count", std::uint64_t{0});
                    by_uri_[a.obs.uri] = std::move(a);
                }
            }
        }
    }
    out_.open(journal_path_, std::ios::app);
    if (!out_) return make_error(Errc::Io, "cannot open " + journal_path_);
    return {};
}

void AssessedStore::append(const Json& record) {
    if (journal_path_.empty()) return;
    out_ << record.dump() << '\n';
    out_.flush();
}

void AssessedStore::store(const AssessedObservation& assessed) {
    std::lock_guard wl(write_mu_);
    std::unique_lock lk(mu_);
    by_uri_[assessed.obs.uri] = assessed;
    Json rec{{"t", "obs"},
             {"uri", assessed.obs.uri},
             {"node", assessed.obs.node},
             {"foi", assessed.obs.foi},
             {"property", assessed.obs.property},
             {"value", assessed.obs.value},
             {"unit", assessed.obs.unit},
             {"sensor", assessed.obs.sensor},
             {"t_new", assessed.obs.t_new},
             {"t_rec", assessed.obs.t_rec},
             {"numOfDuplicates", assessed.result.num_duplicates}};
    if (assessed.result.transmission_delay)
        rec["transmissionDelay"] = *assessed.result.transmission_delay;
    if (assessed.result.time_delay) rec["timeDelay"] = *assessed.result.time_delay;
    if (assessed.result.out_of_range) rec["isOutOfRange"] = *assessed.result.out_of_range;
    if (assessed.result.missing_delay_factor) rec["missingDelayFactor"] = true;
    if (assessed.result.missing_range_factor) rec["missingRangeFactor"] = true;
    append(rec);
}

std::uint64_t AssessedStore::add_duplicate(const std::string& uri,
                                           const EnrichedObservation& obs) {
    std::lock_guard wl(write_mu_);
    std::unique_lock lk(mu_);
    auto it = by_uri_.find(uri);
    std::uint64_t count;
    if (it != by_uri_.end()) {
        auto& stored = it->second.result.num_duplicates;
        stored = stored == 0 ? 2 : stored + 1;
        count = stored;
    } else {
        // late observation that never had an accepted original: keep the
        // inferred count only
        AssessedObservation a;
        a.obs = obs;
        a.obs.value = Json(nullptr);
        a.result.num_duplicates = 2;
        by_uri_[uri] = a;
        count = 2;
    }
    append(Json{{"t", "dup"},
                {"uri", uri},
                {"node", obs.node},
                {"foi", obs.foi},
                {"property", obs.property},
                {"t_new", obs.t_new},
                {"count", count}});
    return count;
}

std::optional<AssessedObservation> AssessedStore::find(const std::string& uri) const {
    std::shared_lock lk(mu_);
    auto it = by_uri_.find(uri);
    if (it == by_uri_.end()) return std::nullopt;
    return it->second;
}

std::vector<AssessedObservation> AssessedStore::for_node(const std::string& node,
                                                         std::int64_t from,
                                                         std::int64_t to) const {
    std::shared_lock lk(mu_);
    std::vector<AssessedObservation> out;
    for (const auto& [_, a] : by_uri_)
        if (a.obs.node == node && a.obs.t_new >= from && a.obs.t_new < to) out.push_back(a);
    std::sort(out.begin(), out.end(), [](const AssessedObservation& x, const AssessedObservation& y) {
        return std::tie(x.obs.foi, x.obs.property, x.obs.t_new, x.obs.uri) <
               std::tie(y.obs.foi, y.obs.property, y.obs.t_new, y.obs.uri);
    });
    return out;
}

std::size_t AssessedStore::size() const {
    std::shared_lock lk(mu_);
    return by_uri_.size();
}

std::uint64_t AssessedStore::total_duplicates() const {
    std::shared_lock lk(mu_);
    std::uint64_t total = 0;
    for (const auto& [_, a] : by_uri_) total += a.result.num_duplicates;
    return total;
}

std::string AssessedStore::canonical_export() const {
    std::shared_lock lk(mu_);
    std::vector<const AssessedObservation*> rows;
    for (const auto& [_, a] : by_uri_) rows.push_back(&a);
    std::sort(rows.begin(), rows.end(), [](const AssessedObservation* x, const AssessedObservation* y) {
        return std::tie(x->obs.foi, x->obs.property, x->obs.t_new, x->obs.uri) <
               std::tie(y->obs.foi, y->obs.property, y->obs.t_new, y->obs.uri);
    });
    std::string out;
    for (const auto* a : rows) {
        Json j{{"uri", a->obs.uri},
               {"foi", a->obs.foi},
               {"property", a->obs.property},
               {"t_new", a->obs.t_new},
               {"value", a->obs.value},
               {"numOfDuplicates", a->result.num_duplicates}};
        if (a->result.transmission_delay) j["transmissionDelay"] = *a->result.transmission_delay;
        if (a->result.time_delay) j["timeDelay"] = *a->result.time_delay;
        if (a->result.out_of_range) j["isOutOfRange"] = *a->result.out_of_range;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::string AssessedStore::triple_export() const {
    std::shared_lock lk(mu_);
    std::vector<const AssessedObservation*> rows;
    for (const auto& [_, a] : by_uri_) rows.push_back(&a);
    std::sort(rows.begin(), rows.end(), [](const AssessedObservation* x, const AssessedObservation* y) {
        return std::tie(x->obs.foi, x->obs.property, x->obs.t_new, x->obs.uri) <
               std::tie(y->obs.foi, y->obs.property, y->obs.t_new, y->obs.uri);
    });
    std::string out;
    auto line = [&out](const std::string& s, const char* p, const std::string& o) {
        out += "<" + s + "> " + p + " " + o + " .\n";
    };
    for (const auto* a : rows) {
        const auto& uri = a->obs.uri;
        line(uri, "rdf:type", "sosa:Observation");
        line(uri, "sosa:hasFeatureOfInterest", "\"" + a->obs.foi + "\"");
        line(uri, "sosa:observedProperty", "\"" + a->obs.property + "\"");
        if (!a->obs.sensor.empty()) line(uri, "sosa:madeBySensor", "\"" + a->obs.sensor + "\"");
        line(uri, "sosa:hasResult", a->obs.value.is_null() ? "\"null\"" : a->obs.value.dump());
        if (!a->obs.unit.empty()) line(uri, "qudt-unit-1-1:unit", "\"" + a->obs.unit + "\"");
        line(uri, "sosa:resultTime", std::to_string(a->obs.t_new));
        line(uri, "idqa:numOfDuplicates", std::to_string(a->result.num_duplicates));
        if (a->result.transmission_delay)
            line(uri, "idqa:transmissionDelay", Json(*a->result.transmission_delay).dump());
        if (a->result.time_delay) line(uri, "idqa:timeDelay", Json(*a->result.time_delay).dump());
        if (a->result.out_of_range)
            line(uri, "idqa:isOutOfRange", *a->result.out_of_range ? "true" : "false");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pipeline

Pipeline::Pipeline(const KnowledgeBase& kb, const FactorTable& factors, AssessedStore& store,
                   int offset_minutes)
    : kb_(kb), factors_(factors), store_(store), offset_minutes_(offset_minutes) {}

Result<EnrichedObservation> Pipeline::enrich(const std::string& node, const std::string& property,
                                             const Json& value, std::int64_t t_new,
                                             std::int64_t t_rec) const {
    auto entry = kb_.entry(node);
    if (!entry) return entry.error();
    const ObservedProperty* prop = entry.value()->property(property);
    if (!prop)
        return make_error(Errc::UnknownNode, property + " is not observed by " + node);
    EnrichedObservation obs;
    obs.uri = mint_uri(node, property, t_new);
    obs.node = node;
    obs.foi = entry.value()->foi;
    obs.property = property;
    obs.value = value;
    obs.unit = prop->unit;
    obs.sensor = prop->sensor.sensor;
    obs.t_new = t_new;
    obs.t_rec = t_rec;
    return obs;
}

Result<void> Pipeline::process(const RawSample& raw) {
    std::lock_guard lk(mu_);
    if (raw.t_new == 0) {
        dead_letters_.push_back(
            {"enrich", "record carries no observation time", Json{{"node", raw.node}}});
        return make_error(Errc::MissingTimestamp, "record carries no observation time");
    }
    auto entry = kb_.entry(raw.node);
    if (!entry) {
        dead_letters_.push_back({"enrich", entry.error().message,
                                 Json{{"node", raw.node}, {"t_new", raw.t_new}}});
        return entry.error();
    }

    for (const auto& prop : entry.value()->properties) {
        if (!raw.values.contains(prop.name)) continue;
        ++observations_in_;
        auto enriched = enrich(raw.node, prop.name, raw.values.at(prop.name), raw.t_new, raw.t_rec);
        if (!enriched) {
            dead_letters_.push_back({"enrich", enriched.error().message,
                                     Json{{"node", raw.node}, {"property", prop.name}}});
            continue;
        }
        EnrichedObservation obs = std::move(enriched).value();
        StreamState& state = streams_[{obs.foi, obs.property}];

        auto dup = assess_duplicacy(obs, state);
        if (dup.verdict == Duplicacy::Duplicate) {
            // only the inferred duplicate count flows to the store
            store_.add_duplicate(obs.uri, obs);
            continue;
        }

        AssessedObservation assessed;
        assessed.obs = obs;
        assessed.result.num_duplicates = 0;

        auto delay = assess_delay(obs, dup, factors_, offset_minutes_);
        if (delay) {
            assessed.result.transmission_delay = delay.value().transmission_delay;
            assessed.result.time_delay = delay.value().time_delay;
        } else {
            // observation passes through with the delay fields absent
            assessed.result.missing_delay_factor = true;
        }

        auto range = assess_range(obs, factors_, offset_minutes_);
        assessed.result.out_of_range = range.out_of_range;
        assessed.result.missing_range_factor = range.missing_factor;

        store_.store(assessed);
    }
    return {};
}

}  // namespace citystack::quality
