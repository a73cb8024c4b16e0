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
#include "citystack/ingest/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace citystack::ingest {

Json SimProfile::to_json() const {
    Json params_json = Json::array();
    for (const auto& p : params)
        params_json.push_back(Json{{"name", p.name}, {"min", p.min}, {"max", p.max}});
    Json faults_json{{"duplicate_prob", faults.duplicate_prob},
                     {"max_copies", faults.max_copies},
                     {"outlier_prob", faults.outlier_prob},
                     {"null_prob", faults.null_prob},
                     {"delay_prob", faults.delay_prob},
                     {"delay_min", faults.delay_min},
                     {"delay_max", faults.delay_max},
                     {"transmission_min", faults.transmission_min},
                     {"transmission_max", faults.transmission_max}};
    if (!faults.exact_duplicates.empty()) {
        Json exact;
        for (const auto& [times, count] : faults.exact_duplicates)
            exact[std::to_string(times)] = count;
        faults_json["exact_duplicates"] = std::move(exact);
    }
    return Json{{"node", node},       {"vertical", vertical}, {"ae", ae},
                {"version", version}, {"foi", foi},           {"period_seconds", period_seconds},
                {"start_time", start_time}, {"params", params_json}, {"faults", faults_json},
                {"seed", seed}};
}

Result<SimProfile> SimProfile::from_json(const Json& j) {
    if (!j.is_object()) return make_error(Errc::BadConfig, "profile is not an object");
    SimProfile p;
    p.node = j.value("node", std::string{});
    p.vertical = j.value("vertical", std::string{});
    p.ae = j.value("ae", std::string{});
    p.version = j.value("version", std::string{});
    p.foi = j.value("foi", std::string{});
    p.period_seconds = j.value("period_seconds", 15);
    p.start_time = j.value("start_time", std::int64_t{0});
    p.seed = j.value("seed", std::uint64_t{42});
    if (p.node.empty() || p.period_seconds <= 0)
        return make_error(Errc::BadConfig, "profile needs a node and a positive period");
    for (const auto& pj : j.value("params", Json::array())) {
        SimParam param;
        param.name = pj.value("name", std::string{});
        param.min = pj.value("min", 0.0);
        param.max = pj.value("max", 0.0);
        if (param.name.empty()) return make_error(Errc::BadConfig, "param without name");
        p.params.push_back(std::move(param));
    }
    if (p.params.empty()) return make_error(Errc::BadConfig, "profile lists no parameters");
    if (j.contains("faults")) {
        const Json& f = j.at("faults");
        p.faults.duplicate_prob = f.value("duplicate_prob", 0.0);
        p.faults.max_copies = f.value("max_copies", 4);
        p.faults.outlier_prob = f.value("outlier_prob", 0.0);
        p.faults.null_prob = f.value("null_prob", 0.0);
        p.faults.delay_prob = f.value("delay_prob", 0.0);
        p.faults.delay_min = f.value("delay_min", 0.0);
        p.faults.delay_max = f.value("delay_max", 0.0);
        p.faults.transmission_min = f.value("transmission_min", 1.0);
        p.faults.transmission_max = f.value("transmission_max", 2.0);
        if (f.contains("exact_duplicates"))
            for (const auto& [times, count] : f.at("exact_duplicates").items())
                p.faults.exact_duplicates[std::stoi(times)] = count.get<std::uint64_t>();
    }
    return p;
}

std::string SimRecord::con(const SimProfile& profile) const {
    std::ostringstream out;
    out << "[" << t_new;
    for (const auto& p : profile.params) {
        out << ", ";
        if (!values.contains(p.name) || values.at(p.name).is_null())
            out << "nan";
        else
            out << values.at(p.name).dump();
    }
    out << "]";
    return out.str();
}

Json SimRecord::to_json() const {
    return Json{{"seq", seq},     {"slot", slot},           {"t_new", t_new},
                {"t_rec", t_rec}, {"copy", copy_index},     {"values", values},
                {"nulled", nulled}, {"outliers", outliers}};
}

Simulator::Simulator(SimProfile profile) : profile_(std::move(profile)) {}

std::vector<SimRecord> Simulator::run(std::int64_t duration_seconds) {
    std::mt19937_64 rng(profile_.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const std::int64_t slots = duration_seconds / profile_.period_seconds;
    std::vector<SimRecord> out;

    // exact mode: a pre-assigned receipts count per unique observation,
    // shuffled deterministically
    std::vector<int> receipt_plan;
    if (!profile_.faults.exact_duplicates.empty()) {
        for (const auto& [times, count] : profile_.faults.exact_duplicates)
            for (std::uint64_t i = 0; i < count; ++i) receipt_plan.push_back(times);
        std::shuffle(receipt_plan.begin(), receipt_plan.end(), rng);
    }

    std::uint64_t seq = 0;
    std::int64_t unique_count =
        receipt_plan.empty() ? slots : static_cast<std::int64_t>(receipt_plan.size());

    for (std::int64_t k = 0; k < unique_count; ++k) {
        SimRecord rec;
        rec.slot = profile_.start_time + k * profile_.period_seconds;
        rec.t_new = rec.slot;
        if (profile_.faults.delay_prob > 0 && unit(rng) < profile_.faults.delay_prob) {
            double extra = profile_.faults.delay_min +
                           unit(rng) * (profile_.faults.delay_max - profile_.faults.delay_min);
            rec.t_new += static_cast<std::int64_t>(std::llround(extra));
        }
        double tx = profile_.faults.transmission_min +
                    unit(rng) * (profile_.faults.transmission_max -
                                 profile_.faults.transmission_min);
        rec.t_rec = rec.t_new + static_cast<std::int64_t>(std::llround(tx));

        for (const auto& p : profile_.params) {
            double v = p.min + unit(rng) * (p.max - p.min);
            rec.values[p.name] = std::round(v * 100.0) / 100.0;
        }
        if (profile_.faults.null_prob > 0 && unit(rng) < profile_.faults.null_prob &&
            !profile_.params.empty()) {
            const auto& victim = profile_.params[rng() % profile_.params.size()];
            rec.values[victim.name] = nullptr;
            rec.nulled.push_back(victim.name);
        }
        if (profile_.faults.outlier_prob > 0 && unit(rng) < profile_.faults.outlier_prob &&
            !profile_.params.empty()) {
            const auto& victim = profile_.params[rng() % profile_.params.size()];
            if (!rec.values.at(victim.name).is_null()) {
                double spread = std::max(1.0, victim.max - victim.min);
                rec.values[victim.name] = std::round((victim.max + spread * 0.25) * 100.0) / 100.0;
                rec.outliers.push_back(victim.name);
            }
        }

        int receipts = 1;
        if (!receipt_plan.empty()) {
            receipts = receipt_plan[static_cast<std::size_t>(k)];
        } else if (profile_.faults.duplicate_prob > 0 &&
                   unit(rng) < profile_.faults.duplicate_prob) {
            receipts = 2 + static_cast<int>(rng() % std::max(1, profile_.faults.max_copies - 1));
        }
        for (int copy = 0; copy < receipts; ++copy) {
            SimRecord emitted = rec;
            emitted.seq = seq++;
            emitted.copy_index = copy;
            // retransmissions arrive later
            emitted.t_rec = rec.t_rec + copy;
            out.push_back(std::move(emitted));
        }
    }
    return out;
}

std::string Simulator::ground_truth_log(const SimProfile& profile,
                                        const std::vector<SimRecord>& records) {
    std::string out = Json{{"profile", profile.to_json()}}.dump();
    out += '\n';
    for (const auto& r : records) {
        out += r.to_json().dump();
        out += '\n';
    }
    return out;
}

Result<std::pair<SimProfile, std::vector<SimRecord>>> Simulator::parse_ground_truth_log(
    const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        return make_error(Errc::MalformedContent, "empty ground-truth log");
    auto header = parse_json(line);
    if (!header || !header.value().contains("profile"))
        return make_error(Errc::MalformedContent, "ground-truth log missing profile header");
    auto profile = SimProfile::from_json(header.value().at("profile"));
    if (!profile) return profile.error();

    std::vector<SimRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto rec = parse_json(line);
        if (!rec) return make_error(Errc::MalformedContent, "bad ground-truth record");
        const Json& j = rec.value();
        SimRecord r;
        r.seq = j.value("seq", std::uint64_t{0});
        r.slot = j.value("slot", std::int64_t{0});
        r.t_new = j.value("t_new", std::int64_t{0});
        r.t_rec = j.value("t_rec", std::int64_t{0});
        r.copy_index = j.value("copy", 0);
        r.values = j.value("values", Json::object());
        for (const auto& n : j.value("nulled", Json::array()))
            r.nulled.push_back(n.get<std::string>());
        for (const auto& o : j.value("outliers", Json::array()))
            r.outliers.push_back(o.get<std::string>());
        records.push_back(std::move(r));
    }
    return std::make_pair(std::move(profile).value(), std::move(records));
}

}  // namespace citystack::ingest
