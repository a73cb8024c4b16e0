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
#include "citystack/platform/platform.hpp"

#include <filesystem>

namespace citystack::platform {

namespace fs = std::filesystem;

Platform::Platform(Config cfg, Clock clock) : cfg_(std::move(cfg)), clock_(std::move(clock)) {}

Platform::~Platform() { stop(); }

Result<void> Platform::open() {
    auto valid = cfg_.validate();
    if (!valid) return valid;

    std::error_code ec;
    fs::create_directories(cfg_.data_dir, ec);
    if (ec) return make_error(Errc::Io, "cannot create " + cfg_.data_dir);

    core::ResourceTree::Options tree_opt;
    tree_opt.offset_minutes = cfg_.offset_minutes;
    tree_opt.admin_originator = cfg_.admin_originator;
    tree_ = std::make_unique<core::ResourceTree>(tree_opt, clock_);
    tree_journal_ = std::make_unique<core::TreeJournal>(cfg_.tree_dir());
    auto attached = tree_journal_->attach(*tree_);
    if (!attached) return attached;

    lake_ = std::make_unique<lake::LakeStore>(cfg_.lake_dir());

    assessed_ = std::make_unique<quality::AssessedStore>(cfg_.quality_dir());
    auto opened = assessed_->open();
    if (!opened) return opened;

    exchange::TokenService::Options token_opt;
    token_opt.audience = cfg_.server_id;
    token_opt.internal_secret = cfg_.signing_secret;
    tokens_ = std::make_unique<exchange::TokenService>(
        catalogue_, token_opt, std::make_unique<exchange::HmacSigner>(cfg_.signing_secret),
        clock_);

    exchange::MonitorFacade facade;
    facade.latest = [this](const std::string& path) {
        return tree_->latest(path, cfg_.admin_originator);
    };
    facade.descriptor = [this](const std::string& path) { return tree_->descriptor_for(path); };
    exchange::ExchangeService::Options ex_opt;
    ex_opt.server_id = cfg_.server_id;
    ex_opt.offset_minutes = cfg_.offset_minutes;
    ex_opt.page_size = cfg_.exchange_page_size;
    ex_opt.max_span_days = cfg_.exchange_max_span_days;
    exchange_service_ = std::make_unique<exchange::ExchangeService>(catalogue_, *tokens_, *lake_,
                                                                    facade, ex_opt, clock_);

    pipeline_ = std::make_unique<quality::Pipeline>(kb_, factors_, *assessed_,
                                                    cfg_.offset_minutes);

    auto reloaded = reload_configs();
    if (!reloaded) return reloaded;
    opened_ = true;
    return {};
}

Result<void> Platform::reload_configs() {
    if (fs::exists(cfg_.catalogue_file())) {
        auto j = load_json_file(cfg_.catalogue_file());
        if (!j) return j.error();
        auto loaded = catalogue_.load(j.value());
        if (!loaded) return loaded;
    }
    if (fs::exists(cfg_.consumers_file())) {
        auto j = load_json_file(cfg_.consumers_file());
        if (!j) return j.error();
        for (const auto& u : j.value().value("consumers", Json::array()))
            if (u.is_string()) tokens_->register_user(u.get<std::string>());
        if (j.value().contains("grants"))
            for (const auto& [group, users] : j.value().at("grants").items())
                for (const auto& u : users)
                    if (u.is_string()) (void)catalogue_.add_grant(group, u.get<std::string>());
    }
    if (fs::exists(cfg_.kb_file())) {
        auto j = load_json_file(cfg_.kb_file());
        if (!j) return j.error();
        auto loaded = kb_.load(j.value());
        if (!loaded) return loaded;
    }
    if (fs::exists(cfg_.factors_file())) {
        auto j = load_json_file(cfg_.factors_file());
        if (!j) return j.error();
        auto loaded = factors_.load(j.value());
        if (!loaded) return loaded;
    }
    if (fs::exists(cfg_.tariff_file())) {
        auto j = load_json_file(cfg_.tariff_file());
        if (!j) return j.error();
        auto loaded = ingest::TariffTable::from_json(j.value());
        if (!loaded) return loaded.error();
        tariff_ = std::move(loaded).value();
    }
    return {};
}

Result<void> Platform::start_servers() {
    if (!opened_) return make_error(Errc::BadConfig, "platform not opened");

    monitor::RetryPolicy retry;
    retry.ack_timeout = std::chrono::milliseconds(cfg_.notify_ack_timeout_ms);
    retry.backoff.clear();
    for (int i = 0; i < cfg_.notify_retries; ++i)
        retry.backoff.push_back(std::chrono::seconds(1LL << i));
    dispatcher_ = std::make_unique<monitor::Dispatcher>(*tree_, cfg_.dead_letter_file(), retry);
    dispatcher_->set_offset_minutes(cfg_.offset_minutes);
    monitor_service_ = std::make_unique<monitor::MonitorService>(*tree_, dispatcher_.get(),
                                                                 cfg_.offset_minutes);
    monitor_http_ = std::make_unique<monitor::MonitorHttpServer>(*monitor_service_);
    monitor_http_->set_seed_handler([this] {
        auto seeded = seed_all();
        return seeded ? seeded.value() : Json{{"error", seeded.error().message}};
    });
    auto started = monitor_http_->start(cfg_.monitor_host, cfg_.monitor_port);
    if (!started) return started;
    cfg_.monitor_port = monitor_http_->port();

    lake::IntakeService::Options intake_opt;
    intake_opt.offset_minutes = cfg_.offset_minutes;
    intake_opt.allowed_hosts = cfg_.intake_allowed_hosts;
    intake_ = std::make_unique<lake::IntakeService>(*lake_, intake_opt);
    if (cfg_.quality_source == "lake") {
        intake_->set_record_hook([this](const lake::RawRecord& record) {
            quality::RawSample sample{record.node, record.t_new, record.t_rec, record.values};
            (void)pipeline_->process(sample);
        });
    }
    started = intake_->start();
    if (!started) return started;
    intake_http_ = std::make_unique<lake::IntakeHttpServer>(*intake_);
    started = intake_http_->start(cfg_.lake_host, cfg_.lake_port);
    if (!started) return started;
    cfg_.lake_port = intake_http_->port();

    exchange_http_ = std::make_unique<exchange::ExchangeHttpServer>(*exchange_service_);
    started = exchange_http_->start(cfg_.exchange_host, cfg_.exchange_port);
    if (!started) return started;
    cfg_.exchange_port = exchange_http_->port();

    serving_ = true;
    return {};
}

void Platform::stop() {
    if (exchange_http_) exchange_http_->stop();
    if (intake_http_) intake_http_->stop();
    if (intake_) intake_->stop();
    if (monitor_http_) monitor_http_->stop();
    if (dispatcher_) dispatcher_->stop();
    if (serving_ && tree_ && tree_journal_) (void)tree_journal_->snapshot(*tree_);
    serving_ = false;
}

Result<void> Platform::flush() {
    if (!tree_ || !tree_journal_) return {};
    return tree_journal_->snapshot(*tree_);
}

}  // namespace citystack::platform
