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

#include <deque>
#include <map>
#include <string>

#include "citystack/support/json.hpp"
#include "citystack/support/result.hpp"
#include "citystack/support/time.hpp"

namespace citystack::ingest {

/// Cost per unit keyed by hour of day ("differs according to the region
/// and time of the day").
struct TariffTable {
    struct Band {
        int from_hour = 0;  // inclusive
        int to_hour = 24;   // exclusive
        double rate = 10.0;
    };
    std::vector<Band> bands;

    double rate_at_hour(int hour) const;
    Json to_json() const;
    static Result<TariffTable> from_json(const Json& j);
};

/// The charger's view of the platform: balance lookups and transaction
/// writes against the user/charger containers.
class PlatformClient {
public:
    virtual ~PlatformClient() = default;
    /// Latest wallet balance for the RFID; UserNotFound when the user
    /// container does not exist, PlatformUnreachable on transport loss.
    virtual Result<double> latest_balance(const std::string& rfid) = 0;
    virtual Result<void> append_transaction(const std::string& container_path,
                                            const Json& record) = 0;
};

enum class ChargeState { Idle, Authenticating, Charging, Settling, Updating, Done };

struct ChargeSession {
    std::string rfid;
    double entered_amount = 0;
    double tariff = 0;  // frozen at session start
    double balance_at_start = 0;
    double consumed = 0;
    ChargeState state = ChargeState::Idle;
};

struct SettleOutcome {
    double deducted = 0;
    double new_balance = 0;  // may be negative by the excess
    Json user_txn;
    Json charger_txn;
};

/// The charge point's three sub-processes: authentication, consumption
/// based billing with the tariff frozen at start, and the final status
/// update that writes both transaction records.
class ChargePoint {
public:
    struct Options {
        std::string charger_id = "CHARGER-1";
        std::string user_data_path = "/in-cse/in-name/AE-EV-Chargers/USER-DATA";
        std::string charger_data_path = "/in-cse/in-name/AE-EV-Chargers/CHARGER-DATA";
    };

    ChargePoint(PlatformClient& platform, TariffTable tariff, Options opt,
                Clock clock = system_clock());

    Result<ChargeSession> authenticate(const std::string& rfid, double amount);
    Result<SettleOutcome> settle(ChargeSession& session, double consumed_value);

    /// Transactions buffered while the platform was unreachable.
    std::size_t buffered() const { return buffer_.size(); }
    /// Replays the offline buffer; stops at the first failure.
    Result<std::size_t> flush();

private:
    Result<void> write_or_buffer(const std::string& path, const Json& record);
    std::string timestamp() const;

    PlatformClient& platform_;
    TariffTable tariff_;
    Options opt_;
    Clock clock_;
    std::deque<std::pair<std::string, Json>> buffer_;
};

}  // namespace citystack::ingest
