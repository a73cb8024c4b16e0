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
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "citystack/core/permissions.hpp"
#include "citystack/core/resource_tree.hpp"
#include "citystack/ingest/pdu.hpp"
#include "citystack/quality/pipeline.hpp"

namespace py = pybind11;
using namespace citystack;

namespace {

py::object json_to_py(const Json& j) {
    if (j.is_null()) return py::none();
    if (j.is_boolean()) return py::bool_(j.get<bool>());
    if (j.is_number_integer()) return py::int_(j.get<std::int64_t>());
    if (j.is_number()) return py::float_(j.get<double>());
    if (j.is_string()) return py::str(j.get<std::string>());
    if (j.is_array()) {
        py::list out;
        for (const auto& v : j) out.append(json_to_py(v));
        return out;
    }
    py::dict out;
    for (const auto& [k, v] : j.items()) out[py::str(k)] = json_to_py(v);
    return out;
}

Json py_to_json(const py::handle& obj) {
    if (obj.is_none()) return Json(nullptr);
    if (py::isinstance<py::bool_>(obj)) return Json(obj.cast<bool>());
    if (py::isinstance<py::int_>(obj)) return Json(obj.cast<std::int64_t>());
    if (py::isinstance<py::float_>(obj)) return Json(obj.cast<double>());
    if (py::isinstance<py::str>(obj)) return Json(obj.cast<std::string>());
    if (py::isinstance<py::dict>(obj)) {
        Json out = Json::object();
        for (auto item : obj.cast<py::dict>())
            out[item.first.cast<std::string>()] = py_to_json(item.second);
        return out;
    }
    if (py::isinstance<py::list>(obj) || py::isinstance<py::tuple>(obj)) {
        Json out = Json::array();
        for (auto item : obj.cast<py::sequence>()) out.push_back(py_to_json(item));
        return out;
    }
    throw py::type_error("unsupported value type");
}

template <typename T>
T unwrap(Result<T> result) {
    if (!result) throw py::value_error(std::string(to_string(result.code())) + ": " +
                                       result.error().message);
    return std::move(result).value();
}

/// Single-stream quality assessor: duplicacy, transmission/sampling
/// delay against an expected period, and range validation.
class QualityStream {
public:
    QualityStream(double expected_delay, py::object range_min, py::object range_max)
        : expected_delay_(expected_delay) {
        if (!range_min.is_none() && !range_max.is_none()) {
            quality::QualityFactor range;
            range.foi = "stream";
            range.property = "value";
            range.kind = quality::QualityFactor::Kind::RangeValue;
            range.min_value = range_min.cast<double>();
            range.max_value = range_max.cast<double>();
            factors_.put(range);
        }
        quality::QualityFactor delay;
        delay.foi = "stream";
        delay.property = "value";
        delay.kind = quality::QualityFactor::Kind::ExpectedDelay;
        delay.delay_seconds = expected_delay_;
        factors_.put(delay);
    }

    py::dict assess(std::int64_t t_new, std::int64_t t_rec, py::object value) {
        quality::EnrichedObservation obs;
        obs.node = "stream";
        obs.foi = "stream";
        obs.property = "value";
        obs.uri = quality::mint_uri(obs.node, obs.property, t_new);
        obs.value = py_to_json(value);
        obs.t_new = t_new;
        obs.t_rec = t_rec;

        auto dup = quality::assess_duplicacy(obs, state_);
        py::dict out;
        out["uri"] = obs.uri;
        out["duplicate"] = dup.verdict == quality::Duplicacy::Duplicate;
        if (dup.verdict == quality::Duplicacy::Duplicate) {
            out["num_duplicates"] = dup.count;
            return out;
        }
        out["num_duplicates"] = 0;
        auto delay = quality::assess_delay(obs, dup, factors_, 330);
        if (delay) {
            out["transmission_delay"] = delay.value().transmission_delay;
            out["time_delay"] = delay.value().time_delay;
        }
        auto range = quality::assess_range(obs, factors_, 330);
        out["out_of_range"] = range.out_of_range;
        if (range.missing_factor) out["missing_range_factor"] = true;
        return out;
    }

private:
    double expected_delay_;
    quality::FactorTable factors_;
    quality::StreamState state_;
};

}  // namespace

PYBIND11_MODULE(_citystack, m) {
    m.doc() = "Core operations of the smart-city telemetry platform";

    // -- access control -----------------------------------------------------
    py::enum_<core::Permission>(m, "Permission")
        .value("CREATE", core::Permission::Create)
        .value("RETRIEVE", core::Permission::Retrieve)
        .value("UPDATE", core::Permission::Update)
        .value("DELETE", core::Permission::Delete)
        .value("NOTIFY", core::Permission::Notify)
        .value("DISCOVERY", core::Permission::Discovery);

    m.def("acop_encode", &core::acop_encode,
          "Encode a set of permissions into its acop bitmask", py::arg("permissions"));
    m.def(
        "acop_decode",
        [](int acop) { return unwrap(core::acop_decode(acop)); },
        "Expand an acop bitmask (0..63) into the permission set", py::arg("acop"));
    m.def(
        "check_access",
        [](const std::vector<std::pair<std::string, int>>& rules, const std::string& originator,
           core::Permission op) {
            core::AccessPolicy policy;
            policy.acpi = "policy";
            for (const auto& [acor, acop] : rules) policy.privileges.push_back({acor, acop});
            return core::check_access({policy}, originator, op);
        },
        "True iff a rule names the originator and grants the operation",
        py::arg("rules"), py::arg("originator"), py::arg("operation"));

    // -- energy meter frames --------------------------------------------------
    m.def(
        "decode_pdu",
        [](const std::string& hex) {
            return json_to_py(unwrap(ingest::decode_pdu(hex)).to_json());
        },
        "Decode a hexadecimal energy-meter frame into its 14 fields", py::arg("hex"));
    m.def(
        "encode_pdu",
        [](const py::dict& reading) {
            return unwrap(ingest::encode_pdu(ingest::EnergyReading::from_json(py_to_json(reading))));
        },
        "Encode a reading (field -> value) into the fixed hex frame", py::arg("reading"));
    m.def(
        "classify_rssi",
        [](double dbm) { return std::string(ingest::to_string(ingest::classify_rssi(dbm))); },
        "IDEAL within [-120, -30] dBm, BELOW_IDEAL under it, ABOVE_IDEAL over it",
        py::arg("dbm"));

    // -- positional payloads ---------------------------------------------------
    m.def(
        "parse_positional_payload",
        [](const std::vector<std::string>& parameters, const std::string& con) {
            core::DescriptorRecord desc;
            desc.parameters = parameters;
            return json_to_py(unwrap(core::parse_positional_payload(desc, con)));
        },
        "Bind a bracketed content array to parameter names ('nan' -> None)",
        py::arg("parameters"), py::arg("con"));
    m.def(
        "serialize_positional_payload",
        [](const std::vector<std::string>& parameters, const py::dict& values) {
            core::DescriptorRecord desc;
            desc.parameters = parameters;
            return core::serialize_positional_payload(desc, py_to_json(values));
        },
        py::arg("parameters"), py::arg("values"));

    // -- quality assessment -----------------------------------------------------
    m.def("mint_uri", &quality::mint_uri, py::arg("node"), py::arg("property"), py::arg("t_new"));
    py::class_<QualityStream>(m, "QualityStream",
                              "Per-stream duplicacy/delay/range assessor")
        .def(py::init<double, py::object, py::object>(), py::arg("expected_delay"),
             py::arg("range_min") = py::none(), py::arg("range_max") = py::none())
        .def("assess", &QualityStream::assess, py::arg("t_new"), py::arg("t_rec"),
             py::arg("value"));

    m.attr("PDU_HEX_CHARS") = ingest::kPduHexChars;
    m.attr("__version__") = "0.1.0";
}
