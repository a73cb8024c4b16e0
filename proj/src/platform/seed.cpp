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
#include <algorithm>
#include <cctype>
#include <filesystem>

#include "citystack/ingest/simulator.hpp"
#include "citystack/platform/platform.hpp"

namespace citystack::platform {
namespace seeding {

namespace {

struct ParamSpec {
    const char* name;
    const char* unit;
    const char* datatype;
    double min;
    double max;
    const char* sensor;
};

struct VerticalSpec {
    const char* vertical;      // tenant name
    int period_seconds;        // Table of sampling periods per vertical
    const char* version;       // current data-model version label
    const char* cin_version;   // version tag carried on content labels
    std::vector<ParamSpec> params;
    std::vector<std::string> extra_labels;
};

const VerticalSpec& aq_spec() {
    static const VerticalSpec spec{
        "AQ",
        15,
        "V3.00.02",
        "V3.0.02",
        {{"Temperature", "°C", "float", 15, 45, "DHT22"},
         {"Relative Humidity", "%", "float", 10, 95, "DHT22"},
         {"PM2.5", "µg/m³", "float", 0, 500, "SDS011"},
         {"PM10", "µg/m³", "float", 0, 500, "SDS011"},
         {"CO", "ppm", "float", 0, 10, "Multichannel Grove Gas Sensor"},
         {"NO2", "ppm", "float", 0, 10, "Multichannel Grove Gas Sensor"},
         {"NH3", "ppm", "float", 0, 10, "Multichannel Grove Gas Sensor"},
         {"AQI", "index", "float", 0, 500, "derived"},
         {"AQL", "enum", "int", 0, 5, "derived"},
         {"AQI-MP", "enum", "int", 0, 4, "derived"},
         {"Data Interval", "s", "int", 0, 1, "derived"}},
        {"AQI-MP (AQI Major Pollutant)", "CO Concentration", "NH3 Concentration",
         "NO2 Concentration"}};
    return spec;
}

const VerticalSpec& we_spec() {
    static const VerticalSpec spec{
        "WE",
        60,
        "V1.0.0",
        "V1.0.0",
        {{"Temperature", "°C", "float", 10, 45, "Weather Station"},
         {"Relative Humidity", "%", "float", 10, 95, "Weather Station"},
         {"Solar Radiation", "W/m²", "float", 0, 1200, "Weather Station"},
         {"Wind Speed", "m/s", "float", 0, 30, "Weather Station"},
         {"Wind Direction", "°", "float", 0, 360, "Weather Station"},
         {"Gust Speed", "m/s", "float", 0, 40, "Weather Station"},
         {"Dew Point", "°C", "float", 0, 30, "Weather Station"}},
        {}};
    return spec;
}

const VerticalSpec& sr_aq_spec() {
    static const VerticalSpec spec{
        "SR",
        60,
        "V1.0.0",
        "V1.0.0",
        {{"Temperature", "°C", "float", 15, 40, "BME280"},
         {"Relative Humidity", "%", "float", 10, 95, "BME280"},
         {"CO2 Concentration", "ppm", "float", 300, 2000, "SCD30"}},
        {}};
    return spec;
}

const VerticalSpec& sr_oc_spec() {
    static const VerticalSpec spec{
        "SR",
        60,
        "V1.0.0",
        "V1.0.0",
        {{"Temperature", "°C", "float", 15, 40, "BME280"},
         {"Relative Humidity", "%", "float", 10, 95, "BME280"},
         {"Occupancy Count", "count", "int", 0, 100, "PIR Array"}},
        {}};
    return spec;
}

const VerticalSpec& aqm_spec() {
    static const VerticalSpec spec{
        "AQM",
        15,
        "V1.0.0",
        "V1.0.0",
        {{"Temperature", "°C", "float", 15, 45, "DHT22"},
         {"Relative Humidity", "%", "float", 10, 95, "DHT22"},
         {"PM2.5", "µg/m³", "float", 0, 500, "SDS011"},
         {"PM10", "µg/m³", "float", 0, 500, "SDS011"}},
        {}};
    return spec;
}

const VerticalSpec& wm_spec() {
    static const VerticalSpec spec{
        "WM",
        180,
        "V6.0.0",
        "V6.0.0",
        {{"Flowrate", "m³/h", "float", 0, 2000, "Wprime Ultrasonic Water Meter"},
         {"Total Flow", "m³", "float", 0, 10000000, "Wprime Ultrasonic Water Meter"},
         {"Pressure", "bar", "float", 0, 600, "Danfoss MBS 3000"},
         {"Pressure Voltage", "V", "float", 0.03, 1.0, "Danfoss MBS 3000"}},
        {}};
    return spec;
}

const VerticalSpec& em_spec() {
    static const VerticalSpec spec{
        "EM",
        900,
        "V1.0.0",
        "V1.0.0",
        {{"R Current", "A", "float", 0, 100, "Energy Meter"},
         {"Y Current", "A", "float", 0, 100, "Energy Meter"},
         {"B Current", "A", "float", 0, 100, "Energy Meter"},
         {"R Voltage", "V", "float", 180, 260, "Energy Meter"},
         {"Y Voltage", "V", "float", 180, 260, "Energy Meter"},
         {"B Voltage", "V", "float", 180, 260, "Energy Meter"},
         {"Avg PF", "", "float", 0, 1, "Energy Meter"},
         {"Avg Freq", "Hz", "float", 49, 51, "Energy Meter"},
         {"Power kVA", "kVA", "float", 0, 100, "Energy Meter"},
         {"Power kW", "kW", "float", 0, 100, "Energy Meter"},
         {"Energy kWh", "kWh", "float", 0, 100000, "Energy Meter"},
         {"kVRh Lead", "kVRh", "float", 0, 100000, "Energy Meter"},
         {"kVRh Lag", "kVRh", "float", 0, 100000, "Energy Meter"},
         {"Energy kVAh", "kVAh", "float", 0, 100000, "Energy Meter"}},
        {}};
    return spec;
}

const VerticalSpec& sm_spec() {
    static const VerticalSpec spec{
        "SM",
        60,
        "V1.0.0",
        "V1.0.0",
        {{"Output Power", "kW", "float", 0, 50, "Solar Inverter"},
         {"Panel Voltage", "V", "float", 0, 400, "Solar Inverter"},
         {"Panel Current", "A", "float", 0, 30, "Solar Inverter"},
         {"Output PF", "", "float", 0, 1, "Solar Inverter"}},
        {}};
    return spec;
}

struct NodeSeed {
    std::string ae;            // application entity rn
    std::string subtree;       // optional intermediate container (AE-SR nesting)
    std::string node;          // node container rn
    const VerticalSpec* spec;
    double lat;
    double lon;
};

const std::vector<NodeSeed>& campus_nodes() {
    static const std::vector<NodeSeed> nodes = [] {
        std::vector<NodeSeed> out;
        const char* aq_nodes[] = {"AQ-AN00-00", "AQ-MG00-00", "AQ-KH00-00", "AQ-KN00-00",
                                  "AQ-VN90-00", "AQ-PH03-00", "AQ-PL00-00", "AQ-FG00-00",
                                  "AQ-SN00-00", "AQ-BN00-00"};
        double lat = 17.4455;
        for (const char* n : aq_nodes) out.push_back({"AE-AQ", "", n, &aq_spec(), lat += 0.0003, 78.3480});
        const char* sr_aq[] = {"SR-AQ-KH03-03", "SR-AQ-KH03-01", "SR-AQ-KH00-00",
                               "SR-AQ-KH00-02", "SR-AQ-KH03-00", "SR-AQ-KH00-01",
                               "SR-AQ-KH95-00", "SR-AQ-KH00-03", "SR-AQ-KH03-02"};
        for (const char* n : sr_aq) out.push_back({"AE-SR", "SR-AQ", n, &sr_aq_spec(), 17.4450, 78.3490});
        const char* sr_oc[] = {"SR-OC-GW-KH03-01", "SR-OC-GW-KH01-00", "SR-OC-GW-KH03-00",
                               "SR-OC-GW-KH03-02", "SR-OC-GW-KH95-00", "SR-OC-GW-KH00-00",
                               "SR-OC-GW-KH00-01"};
        for (const char* n : sr_oc) out.push_back({"AE-SR", "SR-OC", n, &sr_oc_spec(), 17.4452, 78.3492});
        for (const char* n : {"WE-GS04-00", "WE-BN04-00", "WE-VN04-00"})
            out.push_back({"AE-WE", "", n, &we_spec(), 17.4460, 78.3470});
        out.push_back({"AE-AQM", "", "AQM-XX00-00", &aqm_spec(), 17.4449, 78.3481});
        out.push_back({"AE-WM-WF", "", "WM-WF-PH01-00", &wm_spec(), 17.445793, 78.351444});
        for (const char* n : {"EM-PH01-00", "EM-NC-PH02-00"})
            out.push_back({"AE-EM", "", n, &em_spec(), 17.4470, 78.3500});
        out.push_back({"AE-SM", "", "SM-GS00-00", &sm_spec(), 17.4466, 78.3468});
        return out;
    }();
    return nodes;
}

std::vector<std::string> data_labels(const VerticalSpec& spec) {
    std::vector<std::string> labels;
    for (const auto& p : spec.params) labels.push_back(p.name);
    labels.push_back("Timestamp");
    for (const auto& extra : spec.extra_labels) labels.push_back(extra);
    std::sort(labels.begin(), labels.end());
    return labels;
}

std::string camelize(const std::string& name) {
    std::string out;
    bool up = false;
    for (char c : name) {
        if (c == ' ' || c == '-' || c == '.') {
            up = true;
            continue;
        }
        if (out.empty())
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        else
            out.push_back(up ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c);
        up = false;
    }
    return out;
}

}  // namespace

Json tariff_config() {
    Json bands = Json::array();
    bands.push_back(Json{{"from", 0}, {"to", 6}, {"rate", 6.0}});
    bands.push_back(Json{{"from", 6}, {"to", 18}, {"rate", 10.0}});
    bands.push_back(Json{{"from", 18}, {"to", 24}, {"rate", 8.0}});
    return Json{{"bands", std::move(bands)}};
}

Json catalogue_config(const Config& cfg) {
    auto inst = [](const std::string& attr, const std::string& source) {
        return Json{{"attr", attr}, {"source", source}, {"kind", "inst"}};
    };

    Json aq_model = Json::array();
    aq_model.push_back(inst("pm2p5", "PM2.5"));
    aq_model.push_back(inst("pm10", "PM10"));
    aq_model.push_back(inst("airTemperature", "Temperature"));
    aq_model.push_back(inst("relativeHumidity", "Relative Humidity"));
    aq_model.push_back(inst("co", "CO"));
    aq_model.push_back(inst("no2", "NO2"));
    aq_model.push_back(inst("nh3", "NH3"));
    aq_model.push_back(Json{{"attr", "airQualityIndex"}, {"source", "AQI"}, {"kind", "string"},
                            {"decimals", 2}});
    aq_model.push_back(Json{{"attr", "airQualityLevel"},
                            {"source", "AQL"},
                            {"kind", "enum"},
                            {"enums",
                             {{"0", "GOOD"}, {"1", "SATISFACTORY"}, {"2", "MODERATE"},
                              {"3", "POOR"}, {"4", "VERY POOR"}, {"5", "SEVERE"}}}});
    aq_model.push_back(Json{{"attr", "aqiMajorPollutant"},
                            {"source", "AQI-MP"},
                            {"kind", "enum"},
                            {"enums", {{"0", "PM2.5"}, {"1", "PM10"}, {"2", "NO2"},
                                       {"3", "CO"}, {"4", "NH3"}}}});
    aq_model.push_back(Json{{"attr", "dataInterval"}, {"source", "Data Interval"},
                            {"kind", "hidden"}});

    auto model_of = [&](const VerticalSpec& spec) {
        Json model = Json::array();
        for (const auto& p : spec.params) model.push_back(inst(camelize(p.name), p.name));
        return model;
    };

    auto items_of = [&](const char* ae, std::initializer_list<const char*> names,
                        const char* label_prefix) {
        Json items = Json::array();
        for (const char* n : names) {
            items.push_back(Json{{"name", n},
                                 {"label", std::string(label_prefix) + " " + n},
                                 {"description", std::string(label_prefix) + " node " + n},
                                 {"monitor_path",
                                  "/in-cse/in-name/" + std::string(ae) + "/" + n + "/Data"}});
        }
        return items;
    };

    Json cfg_json{{"server_id", cfg.server_id}, {"provider", cfg.provider}};
    cfg_json["groups"] = Json::array();
    cfg_json["groups"].push_back(Json{{"name", "iiith-env-aqm"},
                                      {"vertical", "AQ"},
                                      {"label", "Air quality monitoring"},
                                      {"access", "open"},
                                      {"model", aq_model},
                                      {"items",
                                       items_of("AE-AQ",
                                                {"AQ-AN00-00", "AQ-MG00-00", "AQ-KH00-00",
                                                 "AQ-KN00-00", "AQ-VN90-00", "AQ-PH03-00",
                                                 "AQ-PL00-00", "AQ-FG00-00", "AQ-SN00-00",
                                                 "AQ-BN00-00"},
                                                "Air Quality")}});
    cfg_json["groups"].push_back(
        Json{{"name", "iiith-env-weather"},
             {"vertical", "WE"},
             {"label", "Weather monitoring"},
             {"access", "open"},
             {"model", model_of(we_spec())},
             {"items", items_of("AE-WE", {"WE-GS04-00", "WE-BN04-00", "WE-VN04-00"}, "Weather")}});
    cfg_json["groups"].push_back(
        Json{{"name", "iiith-energy-meter"},
             {"vertical", "EM"},
             {"label", "Energy consumption monitoring"},
             {"access", "secure"},
             {"model", model_of(em_spec())},
             {"items", items_of("AE-EM", {"EM-PH01-00", "EM-NC-PH02-00"}, "Energy Meter")}});
    cfg_json["groups"].push_back(Json{{"name", "iiith-water-monitoring"},
                                      {"vertical", "WM"},
                                      {"label", "Water monitoring"},
                                      {"access", "secure"},
                                      {"model", model_of(wm_spec())},
                                      {"items",
                                       items_of("AE-WM-WF", {"WM-WF-PH01-00"}, "Water Flow")}});
    cfg_json["groups"].push_back(Json{{"name", "iiith-solar-panel"},
                                      {"vertical", "SM"},
                                      {"label", "Solar energy monitoring"},
                                      {"access", "secure"},
                                      {"model", model_of(sm_spec())},
                                      {"items", items_of("AE-SM", {"SM-GS00-00"}, "Solar Panel")}});
    return cfg_json;
}

Json kb_config(const Config& cfg) {
    (void)cfg;
    Json nodes = Json::array();
    for (const auto& seed : campus_nodes()) {
        Json props = Json::array();
        for (const auto& p : seed.spec->params) {
            props.push_back(Json{{"name", p.name},
                                 {"unit", p.unit},
                                 {"datatype", p.datatype},
                                 {"sensor", p.sensor},
                                 {"operating_min", p.min},
                                 {"operating_max", p.max},
                                 {"capabilities",
                                  Json{{"frequency",
                                        std::to_string(seed.spec->period_seconds) + " s"}}}});
        }
        nodes.push_back(
            Json{{"node", seed.node}, {"foi", "site-" + seed.node}, {"properties", props}});
    }
    return Json{{"nodes", std::move(nodes)}};
}

Json factors_config(const Config& cfg) {
    (void)cfg;
    Json factors = Json::array();
    for (const auto& seed : campus_nodes()) {
        for (const auto& p : seed.spec->params) {
            factors.push_back(Json{{"foi", "site-" + seed.node},
                                   {"property", p.name},
                                   {"kind", "delay"},
                                   {"delay", seed.spec->period_seconds}});
            factors.push_back(Json{{"foi", "site-" + seed.node},
                                   {"property", p.name},
                                   {"kind", "range"},
                                   {"min", p.min},
                                   {"max", p.max}});
        }
    }
    return Json{{"factors", std::move(factors)}};
}

std::vector<Json> simulator_profiles(const Config& cfg) {
    std::vector<Json> out;
    // one representative node per vertical, sampling periods per the
    // deployed devices (energy 15 min, water 3 min, weather 1 min, air 15 s)
    const char* picks[] = {"AQ-KH00-00", "WE-GS04-00", "WM-WF-PH01-00", "EM-PH01-00"};
    for (const char* pick : picks) {
        for (const auto& seed : campus_nodes()) {
            if (seed.node != pick) continue;
            ingest::SimProfile profile;
            profile.node = seed.node;
            profile.vertical = seed.spec->vertical;
            profile.ae = seed.ae;
            profile.version = seed.spec->cin_version;
            profile.foi = "site-" + seed.node;
            profile.period_seconds = seed.spec->period_seconds;
            profile.seed = cfg.seed;
            for (const auto& p : seed.spec->params)
                profile.params.push_back({p.name, p.min, p.max});
            profile.faults.duplicate_prob = 0.2;
            profile.faults.max_copies = 4;
            profile.faults.outlier_prob = 0.05;
            profile.faults.null_prob = 0.03;
            profile.faults.delay_prob = 0.2;
            profile.faults.delay_min = 1;
            profile.faults.delay_max = std::max(1, seed.spec->period_seconds / 2);
            out.push_back(profile.to_json());
        }
    }
    return out;
}

}  // namespace seeding

// ---------------------------------------------------------------------------
// Platform::seed_all

namespace {

namespace fs = std::filesystem;
using namespace seeding;

Result<std::string> ensure_resource(core::ResourceTree& tree, const std::string& parent,
                                    core::ResourceKind kind, const Json& attrs,
                                    const std::string& originator) {
    std::string rn = attrs.value("rn", std::string{});
    std::string path = parent + "/" + rn;
    if (tree.exists(path)) return path;
    auto created = tree.create_resource(parent, kind, attrs, originator);
    if (!created && created.code() == Errc::DuplicateName) return path;
    return created;
}

}  // namespace

Result<Json> Platform::seed_all() {
    const std::string admin = cfg_.admin_originator;
    const std::string guest = cfg_.guest_originator;
    auto& tree = *tree_;

    // 1. access control policies and root attachment
    Json admin_acp{{"rn", "acp-admin"},
                   {"pv", {{"acr", {{{"acor", admin}, {"acop", 63}}}}}},
                   {"pvs", {{"acr", {{{"acor", admin}, {"acop", 63}}}}}}};
    Json guest_acp{{"rn", "acp-guest"},
                   {"pv", {{"acr", {{{"acor", guest}, {"acop", 34}}}}}},
                   {"pvs", {{"acr", {{{"acor", admin}, {"acop", 63}}}}}}};
    auto admin_path =
        ensure_resource(tree, tree.root_path(), core::ResourceKind::Acp, admin_acp, admin);
    if (!admin_path) return admin_path.error();
    auto guest_path =
        ensure_resource(tree, tree.root_path(), core::ResourceKind::Acp, guest_acp, admin);
    if (!guest_path) return guest_path.error();
    auto admin_ri = tree.describe(admin_path.value(), admin).value()["ri"].get<std::string>();
    auto guest_ri = tree.describe(guest_path.value(), admin).value()["ri"].get<std::string>();
    Json root_acpi{{"acpi", Json::array({admin_ri, guest_ri})}};
    auto current_root = tree.describe(tree.root_path(), admin);
    if (!current_root || current_root.value().value("acpi", Json::array()) != root_acpi["acpi"]) {
        auto updated = tree.update_resource(tree.root_path(), root_acpi, admin);
        if (!updated) return updated.error();
    }

    std::int64_t now = clock_();
    const std::int64_t v2_start = timeutil::parse_iso("2020-10-10T10:00:00+05:30").value();
    const std::int64_t v2_end = timeutil::parse_iso("2020-12-31T10:00:00+05:30").value();
    const std::int64_t v1_start = timeutil::parse_descriptor_dt("26-04-2021 00-00-00").value();
    const std::int64_t open_end = timeutil::open_interval_sentinel(cfg_.offset_minutes);

    // 2. the campus resource tree with descriptors and labeled data CNTs
    std::map<std::string, std::vector<std::string>> group_members;  // ae -> data paths
    for (const auto& seed : campus_nodes()) {
        auto ae_path = ensure_resource(tree, tree.root_path(), core::ResourceKind::Ae,
                                       Json{{"rn", seed.ae}, {"lbl", {seed.ae}}}, admin);
        if (!ae_path) return ae_path.error();
        std::string parent = ae_path.value();
        if (!seed.subtree.empty()) {
            auto mid = ensure_resource(tree, parent, core::ResourceKind::Cnt,
                                       Json{{"rn", seed.subtree}}, admin);
            if (!mid) return mid.error();
            parent = mid.value();
        }
        auto node_path = ensure_resource(tree, parent, core::ResourceKind::Cnt,
                                         Json{{"rn", seed.node}}, admin);
        if (!node_path) return node_path.error();

        Json data_attrs{{"rn", "Data"},
                        {"mni", 120},
                        {"lbl", data_labels(*seed.spec)},
                        {"acpi", Json::array({admin_ri, guest_ri})}};
        auto data_path =
            ensure_resource(tree, node_path.value(), core::ResourceKind::Cnt, data_attrs, admin);
        if (!data_path) return data_path.error();
        auto desc_path = ensure_resource(tree, node_path.value(), core::ResourceKind::Cnt,
                                         Json{{"rn", "Descriptor"},
                                              {"mni", 10},
                                              {"acpi", Json::array({admin_ri, guest_ri})}},
                                         admin);
        if (!desc_path) return desc_path.error();

        if (tree.all_data(desc_path.value(), admin).value().empty()) {
            core::DescriptorRecord desc;
            desc.node_id = seed.node;
            desc.latitude = seed.lat;
            desc.longitude = seed.lon;
            Json sensors = Json::array();
            sensors.push_back("Timestamp");
            for (const auto& p : seed.spec->params)
                sensors.push_back(std::string(p.name) + " = " + p.sensor);
            desc.device_model = Json{{"Controller", "ESP32"},
                                     {"Device", std::string(seed.spec->vertical) + " node"},
                                     {"Sensors", sensors}};
            if (seed.spec->vertical == std::string("AQ")) {
                desc.versions.push_back({"V2.01.33", v2_start, v2_end});
                desc.versions.push_back({seed.spec->version, v2_end, open_end});
            } else {
                desc.versions.push_back({seed.spec->version, v1_start, open_end});
            }
            desc.parameters.push_back("Timestamp");
            desc.parameter_info["Timestamp"] = {
                "Seconds since 1970-01-01T00:00:00Z", "int", "s",
                std::to_string(seed.spec->period_seconds) + " s", "n/a"};
            for (const auto& p : seed.spec->params) {
                desc.parameters.push_back(p.name);
                desc.parameter_info[p.name] = {std::string("Instantaneous value of ") + p.name,
                                               p.datatype, p.unit, "", ""};
            }
            auto inserted = tree.insert_cin(desc_path.value(), desc.to_json().dump(),
                                            {seed.node, seed.spec->version}, admin);
            if (!inserted) return inserted.error();
        }
        if (seed.ae == "AE-AQ") group_members[seed.ae].push_back(data_path.value());

        // 5. lake dimensions + parameter fact rows per tenant
        auto tenant = lake_->tenant(seed.spec->vertical);
        if (!tenant) return tenant.error();
        auto* store = tenant.value();
        if (!store->node_dim(seed.node)) {
            auto up = store->upsert_node({seed.node, seed.lat, seed.lon});
            if (!up) return up.error();
        }
        if (store->versions_of(seed.node).empty()) {
            Json spec_map = Json::object();
            for (const auto& p : seed.spec->params) spec_map[camelize(p.name)] = p.sensor;
            spec_map["controller"] = "ESP32";
            if (seed.spec->vertical == std::string("AQ")) {
                auto u1 = store->upsert_version({seed.node, "V2.01.33", v2_start, v2_end, spec_map,
                                                 "initial deployment"});
                if (!u1) return u1.error();
                auto u2 = store->upsert_version({seed.node, seed.spec->version, v2_end, open_end,
                                                 spec_map, "comment on version change"});
                if (!u2) return u2.error();
            } else {
                auto u = store->upsert_version({seed.node, seed.spec->version, v1_start, open_end,
                                                spec_map, "initial deployment"});
                if (!u) return u.error();
            }
        }
        if (store->parameters_for(seed.spec->version).empty()) {
            lake::ParameterRow ts_row;
            ts_row.parameter = "Timestamp";
            ts_row.position = 0;
            ts_row.datatype = "int";
            ts_row.unit = "s";
            auto up = store->upsert_parameter(seed.spec->version, ts_row);
            if (!up) return up.error();
            int position = 1;
            for (const auto& p : seed.spec->params) {
                lake::ParameterRow row;
                row.parameter = p.name;
                row.position = position++;
                row.sensor = p.sensor;
                row.datatype = p.datatype;
                row.unit = p.unit;
                auto upp = store->upsert_parameter(seed.spec->version, row);
                if (!upp) return upp.error();
            }
        }
    }

    // 3. the AQ group resource (fan-out over the ten data containers)
    if (!group_members["AE-AQ"].empty()) {
        Json grp{{"rn", "AQ-GRP"}, {"mt", 3}, {"mnm", 10}};
        grp["mid"] = group_members["AE-AQ"];
        auto created = ensure_resource(tree, tree.root_path() + "/AE-AQ", core::ResourceKind::Grp,
                                       grp, admin);
        if (!created) return created.error();
    }

    // 4. lake subscriptions on every data container
    std::string nu = cfg_.lake_url() + "/notify";
    for (const auto& seed : campus_nodes()) {
        std::string base = tree.root_path() + "/" + seed.ae;
        if (!seed.subtree.empty()) base += "/" + seed.subtree;
        std::string data_path = base + "/" + seed.node + "/Data";
        if (tree.subscriptions_of(data_path).empty()) {
            auto sub = ensure_resource(tree, data_path, core::ResourceKind::Sub,
                                       Json{{"rn", "sub-lake"}, {"nu", nu}}, admin);
            if (!sub) return sub.error();
        }
    }

    // 6. EV charger containers and the demo user
    auto ev_ae = ensure_resource(tree, tree.root_path(), core::ResourceKind::Ae,
                                 Json{{"rn", "AE-EV-Chargers"}}, admin);
    if (!ev_ae) return ev_ae.error();
    for (const char* cnt : {"USER-DATA", "CHARGER-DATA"}) {
        auto c = ensure_resource(tree, ev_ae.value(), core::ResourceKind::Cnt, Json{{"rn", cnt}},
                                 admin);
        if (!c) return c.error();
    }
    auto user = ensure_resource(tree, ev_ae.value() + "/USER-DATA", core::ResourceKind::Cnt,
                                Json{{"rn", "test-user"}}, admin);
    if (!user) return user.error();
    for (const char* cnt : {"INFO", "TRANSACTIONS"}) {
        auto c = ensure_resource(tree, user.value(), core::ResourceKind::Cnt, Json{{"rn", cnt}},
                                 admin);
        if (!c) return c.error();
    }
    if (tree.all_data(user.value() + "/TRANSACTIONS", admin).value().empty()) {
        Json opening{{"USER ID", "test-user"},
                     {"METER ID", "registration"},
                     {"TRANSACTION DATE-TIME", timeutil::format_iso(now, cfg_.offset_minutes)},
                     {"TRANSACTION AMOUNT (IN RS)", 0},
                     {"CURRENT AMOUNT IN USER'S ACCOUNT (IN RS)", 10000}};
        auto ins = tree.insert_cin(user.value() + "/TRANSACTIONS", opening.dump(), {}, admin);
        if (!ins) return ins.error();
    }
    if (tree.all_data(user.value() + "/INFO", admin).value().empty()) {
        Json info{{"NAME", "John Doe"}, {"EMAIL ID", "abc@xyz.com"},
                  {"PHONE NUMBER", "(+91)-1234567890"}};
        auto ins = tree.insert_cin(user.value() + "/INFO", info.dump(), {}, admin);
        if (!ins) return ins.error();
    }
    auto charger = ensure_resource(tree, ev_ae.value() + "/CHARGER-DATA", core::ResourceKind::Cnt,
                                   Json{{"rn", "CHARGER-1"}}, admin);
    if (!charger) return charger.error();
    for (const char* cnt : {"INFO", "TRANSACTIONS"}) {
        auto c = ensure_resource(tree, charger.value(), core::ResourceKind::Cnt, Json{{"rn", cnt}},
                                 admin);
        if (!c) return c.error();
    }

    // 7. config-backed tables: catalogue, consumers, KB, factors, tariff,
    //    simulator profiles
    std::error_code ec;
    fs::create_directories(cfg_.exchange_dir(), ec);
    fs::create_directories(cfg_.quality_dir(), ec);
    fs::create_directories(cfg_.profiles_dir(), ec);

    Json catalogue_json = seeding::catalogue_config(cfg_);
    auto saved = save_json_file(cfg_.catalogue_file(), catalogue_json);
    if (!saved) return saved.error();
    std::string em_group = cfg_.provider + "/" + cfg_.server_id + "/iiith-energy-meter";
    Json consumers{{"consumers", Json::array({"consumer@example.com"})},
                   {"grants", Json{{em_group, Json::array({"consumer@example.com"})}}}};
    saved = save_json_file(cfg_.consumers_file(), consumers);
    if (!saved) return saved.error();
    saved = save_json_file(cfg_.kb_file(), seeding::kb_config(cfg_));
    if (!saved) return saved.error();
    saved = save_json_file(cfg_.factors_file(), seeding::factors_config(cfg_));
    if (!saved) return saved.error();
    saved = save_json_file(cfg_.tariff_file(), seeding::tariff_config());
    if (!saved) return saved.error();
    for (const auto& profile : seeding::simulator_profiles(cfg_)) {
        std::string path = cfg_.profiles_dir() + "/" + profile.value("node", std::string{}) +
                           ".json";
        saved = save_json_file(path, profile);
        if (!saved) return saved.error();
    }

    auto reloaded = reload_configs();
    if (!reloaded) return reloaded.error();

    return Json{{"seeded", true},
                {"nodes", campus_nodes().size()},
                {"catalogue_groups", catalogue_.group_ids().size()},
                {"kb_nodes", kb_.nodes().size()}};
}

}  // namespace citystack::platform
