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

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "citystack/support/json.hpp"
#include "citystack/support/result.hpp"

namespace citystack::ingest {

/// Decoded 14-field electrical record of an energy-meter uplink frame.
struct EnergyReading {
    double r_current = 0;   // A
    double y_current = 0;   // A
    double b_current = 0;   // A
    double r_voltage = 0;   // V
    double y_voltage = 0;   // V
    double b_voltage = 0;   // V
    double avg_pf = 0;      // dimensionless
    double avg_freq = 0;    // Hz
    double power_kva = 0;   // kVA
    double power_kw = 0;    // kW
    double energy_kwh = 0;  // kWh
    double kvrh_lead = 0;   // kVRh
    double kvrh_lag = 0;    // kVRh
    double energy_kvah = 0; // kVAh

    Json to_json() const;
    static EnergyReading from_json(const Json& j);
    bool operator==(const EnergyReading&) const = default;
};

/// One fixed-layout frame field: where it sits, how wide it is, and the
/// divisor that scales the unsigned big-endian hex integer.
struct PduField {
    const char* name;
    int hex_width;
    int divisor;
    double EnergyReading::* member;
};

/// The canonical frame layout. Widths sum to kPduHexChars (46 bytes).
const std::array<PduField, 14>& pdu_layout();

inline constexpr int kPduHexChars = 92;

/// Decodes a hexadecimal frame: each field is the unsigned big-endian
/// integer of its slice divided by its divisor. Characters beyond the
/// canonical 92 are ignored.
Result<EnergyReading> decode_pdu(std::string_view hex);

/// Inverse of decode_pdu; fields are scaled, rounded to the nearest count
/// and rendered as fixed-width uppercase-free hex.
Result<std::string> encode_pdu(const EnergyReading& reading);

enum class RssiBand { Ideal, BelowIdeal, AboveIdeal };

/// [-120, -30] dBm is the ideal window; below -120 signals potential
/// packet loss.
RssiBand classify_rssi(double dbm);

const char* to_string(RssiBand band);

}  // namespace citystack::ingest
