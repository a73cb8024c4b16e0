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
#include "citystack/ingest/charger.hpp"

#include <cstdio>

namespace citystack::ingest {

double TariffTable::rate_at_hour(int hour) const {
    for (const auto& band : bands)
        if (hour >= band.from_hour && hour < band.to_hour) return band.rate;
    return bands.empty() ? 10.0 : bands.front().rate;
}

Json TariffTable::to_json() const {
    Json bands_json = Json::array();
    for (const auto& b : bands)
        bands_json.push_back(Json{{"from", b.from_hour}, {"to", b.to_hour}, {"rate", b.rate}});
    return Json{{"bands", std::move(bands_json)}};
}

Result<TariffTable> TariffTable::from_json(const Json& j) {
    TariffTable t;
    if (!j.is_object() || !j.contains("bands"))
        return make_error(Errc::BadConfig, "tariff config needs bands");
    for (const auto& b : j.at("bands")) {
        Band band;
        band.from_hour = b.value("from", 0);
        band.to_hour = b.value("to", 24);
        band.rate = b.value("rate", 10.0);
        if (band.from_hour >= band.to_hour)
            return make_error(Errc::BadConfig, "tariff band with from >= to");
        t.bands.push_back(band);
    }
    if (t.bands.empty()) return make_error(Errc::BadConfig, "tariff config needs bands");
    return t;
}

ChargePoint::ChargePoint(PlatformClient& platform, TariffTable tariff, Options opt, Clock clock)
    : platform_(platform), tariff_(std::move(tariff)), opt_(std::move(opt)),
      clock_(std::move(clock)) {}

std::string ChargePoint::timestamp() const {
    auto c = timeutil::epoch_to_civil(clock_(), timeutil::kDefaultOffsetMinutes);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d %02d:%02d:%02d.000000", c.year, c.month, c.day,
                  c.hour, c.minute, c.second);
    return buf;
}

Result<ChargeSession> ChargePoint::authenticate(const std::string& rfid, double amount) {
    if (amount <= 0) return make_error(Errc::BadRequest, "amount must be positive");
    ChargeSession session;
    session.rfid = rfid;
    session.entered_amount = amount;
    session.state = ChargeState::Authenticating;

    auto balance = platform_.latest_balance(rfid);
    if (!balance) {
        if (balance.code() == Errc::UserNotFound)
            return make_error(Errc::UserNotFound, "user not found");
        return balance.error();
    }
    if (balance.value() < amount)
        return make_error(Errc::InsufficientFunds, "Insufficient amount in the account");

    // cost information is retrieved and frozen before charging begins
    int hour = timeutil::epoch_to_civil(clock_(), timeutil::kDefaultOffsetMinutes).hour;
    session.tariff = tariff_.rate_at_hour(hour);
    session.balance_at_start = balance.value();
    session.state = ChargeState::Charging;
    return session;
}

Result<void> ChargePoint::write_or_buffer(const std::string& path, const Json& record) {
    auto written = platform_.append_transaction(path, record);
    if (!written && written.code() == Errc::PlatformUnreachable) {
        buffer_.emplace_back(path, record);  // battery-backed local buffer
        return written;
    }
    return written;
}

Result<SettleOutcome> ChargePoint::settle(ChargeSession& session, double consumed_value) {
    if (session.state != ChargeState::Charging)
        return make_error(Errc::BadRequest, "session is not charging");
    if (consumed_value < 0) return make_error(Errc::BadRequest, "consumed value cannot be negative");

    session.consumed = consumed_value;
    session.state = ChargeState::Settling;

    SettleOutcome outcome;
    // the consumed value is deducted, not the entered amount; overshoot
    // drives the balance negative and is recovered on the next top-up
    outcome.deducted = consumed_value;
    outcome.new_balance = session.balance_at_start - consumed_value;

    std::string when = timestamp();
    outcome.user_txn = Json{{"USER ID", session.rfid},
                            {"METER ID", opt_.charger_id},
                            {"TRANSACTION DATE-TIME", when},
                            {"TRANSACTION AMOUNT (IN RS)", outcome.deducted},
                            {"CURRENT AMOUNT IN USER'S ACCOUNT (IN RS)", outcome.new_balance}};
    outcome.charger_txn = Json{{"USER ID", session.rfid},
                               {"METER ID", opt_.charger_id},
                               {"TRANSACTION DATE-TIME", when},
                               {"TRANSACTION AMOUNT IN RS", outcome.deducted}};

    session.state = ChargeState::Updating;
    std::string user_txns = opt_.user_data_path + "/" + session.rfid + "/TRANSACTIONS";
    std::string charger_txns = opt_.charger_data_path + "/" + opt_.charger_id + "/TRANSACTIONS";
    auto user_write = write_or_buffer(user_txns, outcome.user_txn);
    auto charger_write = write_or_buffer(charger_txns, outcome.charger_txn);
    session.state = ChargeState::Done;
    if (!user_write) return user_write.error();
    if (!charger_write) return charger_write.error();
    return outcome;
}

Result<std::size_t> ChargePoint::flush() {
    std::size_t replayed = 0;
    while (!buffer_.empty()) {
        auto [path, record] = buffer_.front();
        auto written = platform_.append_transaction(path, record);
        if (!written) return written.error();
        buffer_.pop_front();
        ++replayed;
    }
    return replayed;
}

}  // namespace citystack::ingest
