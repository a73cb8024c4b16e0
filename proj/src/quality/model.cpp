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
#include "citystack/quality/model.hpp"

#include "citystack/support/hash.hpp"

namespace citystack::quality {

const ObservedProperty* KbEntry::property(const std::string& name) const {
    for (const auto& p : properties)
        if (p.name == name) return &p;
    return nullptr;
}

Result<void> KnowledgeBase::load(const Json& config) {
    if (!config.is_object() || !config.contains("nodes"))
        return make_error(Errc::BadConfig, "knowledge base config needs a nodes list");
    entries_.clear();
    for (const auto& n : config.at("nodes")) {
        KbEntry entry;
        entry.node = n.value("node", std::string{});
        if (entry.node.empty()) return make_error(Errc::BadConfig, "kb node without id");
        entry.foi = n.value("foi", std::string{});
        for (const auto& p : n.value("properties", Json::array())) {
            ObservedProperty prop;
            prop.name = p.value("name", std::string{});
            prop.unit = p.value("unit", std::string{});
            prop.datatype = p.value("datatype", std::string{});
            prop.sensor.sensor = p.value("sensor", std::string{});
            prop.sensor.operating_min = p.value("operating_min", 0.0);
            prop.sensor.operating_max = p.value("operating_max", 0.0);
            prop.sensor.capabilities = p.value("capabilities", Json::object());
            entry.properties.push_back(std::move(prop));
        }
        entries_[entry.node] = std::move(entry);
    }
    return {};
}

Json KnowledgeBase::to_config() const {
    Json nodes = Json::array();
    for (const auto& [_, entry] : entries_) {
        Json props = Json::array();
        for (const auto& p : entry.properties) {
            props.push_back(Json{{"name", p.name},
                                 {"unit", p.unit},
                                 {"datatype", p.datatype},
                                 {"sensor", p.sensor.sensor},
                                 {"operating_min", p.sensor.operating_min},
                                 {"operating_max", p.sensor.operating_max},
                                 {"capabilities", p.sensor.capabilities}});
        }
        nodes.push_back(Json{{"node", entry.node}, {"foi", entry.foi}, {"properties", props}});
    }
    return Json{{"nodes", std::move(nodes)}};
}

Result<const KbEntry*> KnowledgeBase::entry(const std::string& node) const {
    auto it = entries_.find(node);
    if (it == entries_.end())
        return make_error(Errc::UnknownNode, node + " is not in the knowledge base");
    return &it->second;
}

void KnowledgeBase::put(KbEntry entry) { entries_[entry.node] = std::move(entry); }

std::vector<std::string> KnowledgeBase::nodes() const {
    std::vector<std::string> out;
    for (const auto& [node, _] : entries_) out.push_back(node);
    return out;
}

Result<void> FactorTable::load(const Json& config) {
    if (!config.is_object() || !config.contains("factors"))
        return make_error(Errc::BadConfig, "factor config needs a factors list");
    factors_.clear();
    for (const auto& f : config.at("factors")) {
        QualityFactor factor;
        factor.foi = f.value("foi", std::string{});
        factor.property = f.value("property", std::string{});
        factor.interval_start = f.value("interval_start", 0);
        factor.interval_end = f.value("interval_end", 86400);
        std::string kind = f.value("kind", std::string{"range"});
        if (kind == "delay") {
            factor.kind = QualityFactor::Kind::ExpectedDelay;
            factor.delay_seconds = f.value("delay", 0.0);
            if (factor.delay_seconds <= 0)
                return make_error(Errc::BadConfig, "expected delay must be positive");
        } else {
            factor.kind = QualityFactor::Kind::RangeValue;
            factor.min_value = f.value("min", 0.0);
            factor.max_value = f.value("max", 0.0);
            if (factor.min_value > factor.max_value)
                return make_error(Errc::BadConfig, "range factor with min > max");
        }
        factors_.push_back(std::move(factor));
    }
    return {};
}

Json FactorTable::to_config() const {
    Json out = Json::array();
    for (const auto& f : factors_) {
        Json j{{"foi", f.foi},
               {"property", f.property},
               {"interval_start", f.interval_start},
               {"interval_end", f.interval_end}};
        if (f.kind == QualityFactor::Kind::ExpectedDelay) {
            j["kind"] = "delay";
            j["delay"] = f.delay_seconds;
        } else {
            j["kind"] = "range";
            j["min"] = f.min_value;
            j["max"] = f.max_value;
        }
        out.push_back(std::move(j));
    }
    return Json{{"factors", std::move(out)}};
}

void FactorTable::put(QualityFactor factor) { factors_.push_back(std::move(factor)); }

const QualityFactor* FactorTable::find(const std::string& foi, const std::string& property,
                                       QualityFactor::Kind kind, int second_of_day) const {
    for (const auto& f : factors_) {
        if (f.kind != kind || f.foi != foi || f.property != property) continue;
        if (second_of_day >= f.interval_start && second_of_day < f.interval_end) return &f;
    }
    return nullptr;
}

const QualityFactor* FactorTable::range_for(const std::string& foi, const std::string& property,
                                            int second_of_day) const {
    return find(foi, property, QualityFactor::Kind::RangeValue, second_of_day);
}

const QualityFactor* FactorTable::delay_for(const std::string& foi, const std::string& property,
                                            int second_of_day) const {
    return find(foi, property, QualityFactor::Kind::ExpectedDelay, second_of_day);
}

std::string mint_uri(const std::string& node, const std::string& property, std::int64_t t_new) {
    auto digest = hashing::sha256(node + "|" + property + "|" + std::to_string(t_new));
    return "urn:obs:" + hashing::to_hex(digest).substr(0, 16);
}

}  // namespace citystack::quality
