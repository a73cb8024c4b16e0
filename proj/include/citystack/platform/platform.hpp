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

#include <memory>

#include "citystack/core/journal.hpp"
#include "citystack/exchange/http_server.hpp"
#include "citystack/exchange/service.hpp"
#include "citystack/ingest/charger.hpp"
#include "citystack/lake/intake.hpp"
#include "citystack/monitor/http_server.hpp"
#include "citystack/monitor/service.hpp"
#include "citystack/platform/config.hpp"
#include "citystack/quality/pipeline.hpp"
#include "citystack/quality/report.hpp"

namespace citystack::platform {

/// One-process composition of the four services: the monitoring core,
/// the lake, the exchange, and the quality pipeline.
class Platform {
public:
    explicit Platform(Config cfg, Clock clock = system_clock());
    ~Platform();

    /// Opens persistence (tree journal, tenant stores, assessed store)
    /// and loads the config-backed tables if their files exist.
    Result<void> open();

    /// Starts the three listeners and wires monitor -> lake -> quality.
    Result<void> start_servers();
    void stop();

    /// Builds the demo deployment: ACPs, the campus tree with
    /// descriptors, groups, subscriptions, lake dimensions, catalogue,
    /// consumers, knowledge base, quality factors, simulator profiles and
    /// the tariff table. Idempotent.
    Result<Json> seed_all();

    /// Reloads catalogue/KB/factor files after an external seed.
    Result<void> reload_configs();

    /// Flushes a tree snapshot (graceful shutdown).
    Result<void> flush();

    Config& config() { return cfg_; }
    core::ResourceTree& tree() { return *tree_; }
    monitor::MonitorService& monitor() { return *monitor_service_; }
    monitor::Dispatcher& dispatcher() { return *dispatcher_; }
    lake::LakeStore& lake() { return *lake_; }
    lake::IntakeService& intake() { return *intake_; }
    exchange::Catalogue& catalogue() { return catalogue_; }
    exchange::TokenService& tokens() { return *tokens_; }
    exchange::ExchangeService& exchange() { return *exchange_service_; }
    quality::KnowledgeBase& knowledge_base() { return kb_; }
    quality::FactorTable& factors() { return factors_; }
    quality::AssessedStore& assessed() { return *assessed_; }
    quality::Pipeline& pipeline() { return *pipeline_; }
    ingest::TariffTable& tariff() { return tariff_; }

    int monitor_port() const { return monitor_http_ ? monitor_http_->port() : 0; }
    int lake_port() const { return intake_http_ ? intake_http_->port() : 0; }
    int exchange_port() const { return exchange_http_ ? exchange_http_->port() : 0; }

private:
    Config cfg_;
    Clock clock_;

    std::unique_ptr<core::ResourceTree> tree_;
    std::unique_ptr<core::TreeJournal> tree_journal_;
    std::unique_ptr<monitor::Dispatcher> dispatcher_;
    std::unique_ptr<monitor::MonitorService> monitor_service_;
    std::unique_ptr<monitor::MonitorHttpServer> monitor_http_;

    std::unique_ptr<lake::LakeStore> lake_;
    std::unique_ptr<lake::IntakeService> intake_;
    std::unique_ptr<lake::IntakeHttpServer> intake_http_;

    exchange::Catalogue catalogue_;
    std::unique_ptr<exchange::TokenService> tokens_;
    std::unique_ptr<exchange::ExchangeService> exchange_service_;
    std::unique_ptr<exchange::ExchangeHttpServer> exchange_http_;

    quality::KnowledgeBase kb_;
    quality::FactorTable factors_;
    std::unique_ptr<quality::AssessedStore> assessed_;
    std::unique_ptr<quality::Pipeline> pipeline_;
    ingest::TariffTable tariff_;

    bool opened_ = false;
    bool serving_ = false;
};

/// The seed payload builder, split out so tests can inspect pieces.
namespace seeding {
Json catalogue_config(const Config& cfg);
Json kb_config(const Config& cfg);
Json factors_config(const Config& cfg);
Json tariff_config();
std::vector<Json> simulator_profiles(const Config& cfg);
}  // namespace seeding

}  // namespace citystack::platform
