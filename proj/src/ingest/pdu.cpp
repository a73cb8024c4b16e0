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
#include "citystack/ingest/pdu.hpp"

#include <cmath>
#include <cstdio>

namespace citystack::ingest {

const std::array<PduField, 14>& pdu_layout() {
    static const std::array<PduField, 14> layout = {{
        {"r_current", 8, 1000, &EnergyReading::r_current},
        {"y_current", 8, 1000, &EnergyReading::y_current},
        {"b_current", 8, 1000, &EnergyReading::b_current},
        {"r_voltage", 4, 100, &EnergyReading::r_voltage},
        {"y_voltage", 4, 100, &EnergyReading::y_voltage},
        {"b_voltage", 4, 100, &EnergyReading::b_voltage},
        {"avg_pf", 4, 100, &EnergyReading::avg_pf},
        {"avg_freq", 4, 100, &EnergyReading::avg_freq},
        {"power_kva", 8, 1000, &EnergyReading::power_kva},
        {"power_kw", 8, 1000, &EnergyReading::power_kw},
        {"energy_kwh", 8, 100, &EnergyReading::energy_kwh},
        {"kvrh_lead", 8, 100, &EnergyReading::kvrh_lead},
        {"kvrh_lag", 8, 100, &EnergyReading::kvrh_lag},
        {"energy_kvah", 8, 100, &EnergyReading::energy_kvah},
    }};
    return layout;
}

Json EnergyReading::to_json() const {
    Json j;
    for (const auto& f : pdu_layout()) j[f.name] = this->*(f.member);
    return j;
}

EnergyReading EnergyReading::from_json(const Json& j) {
    EnergyReading r;
    for (const auto& f : pdu_layout())
        if (j.contains(f.name)) r.*(f.member) = j.at(f.name).get<double>();
    return r;
}

namespace {

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

Result<EnergyReading> decode_pdu(std::string_view hex) {
    if (hex.size() < kPduHexChars)
        return make_error(Errc::TooShort, "frame has " + std::to_string(hex.size()) +
                                              " hex chars, expected >= " +
                                              std::to_string(kPduHexChars));
    EnergyReading r;
    size_t pos = 0;
    for (const auto& f : pdu_layout()) {
        std::uint64_t raw = 0;
        for (int i = 0; i < f.hex_width; ++i) {
            int d = hex_digit(hex[pos + i]);
            if (d < 0)
                return make_error(Errc::NonHexDigit, std::string("invalid hex digit '") +
                                                         hex[pos + i] + "' at offset " +
                                                         std::to_string(pos + i));
            raw = raw * 16 + static_cast<std::uint64_t>(d);
        }
        r.*(f.member) = static_cast<double>(raw) / f.divisor;
        pos += f.hex_width;
    }
    return r;
}

Result<std::string> encode_pdu(const EnergyReading& reading) {
    std::string out;
    out.reserve(kPduHexChars);
    for (const auto& f : pdu_layout()) {
        double value = reading.*(f.member);
        if (!std::isfinite(value) || value < 0)
            return make_error(Errc::FieldOverflow, std::string(f.name) + " is not encodable");
        double scaled = value * f.divisor;
        auto raw = static_cast<std::uint64_t>(std::llround(scaled));
        std::uint64_t limit = (f.hex_width >= 16) ? ~0ULL : (1ULL << (4 * f.hex_width));
        if (scaled > static_cast<double>(limit) || raw >= limit)
            return make_error(Errc::FieldOverflow,
                              std::string(f.name) + " exceeds its field width");
        char buf[17];
        std::snprintf(buf, sizeof buf, "%0*llX", f.hex_width,
                      static_cast<unsigned long long>(raw));
        out += buf;
    }
    return out;
}

RssiBand classify_rssi(double dbm) {
    if (dbm < -120) return RssiBand::BelowIdeal;
    if (dbm <= -30) return RssiBand::Ideal;
    return RssiBand::AboveIdeal;
}

const char* to_string(RssiBand band) {
    switch (band) {
        case RssiBand::Ideal: return "IDEAL";
        case RssiBand::BelowIdeal: return "BELOW_IDEAL";
        case RssiBand::AboveIdeal: return "ABOVE_IDEAL";
    }
    return "?";
}

}  // namespace citystack::ingest
