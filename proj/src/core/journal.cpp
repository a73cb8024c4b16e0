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
#include "citystack/core/journal.hpp"

#include <filesystem>

namespace citystack::core {

namespace fs = std::filesystem;

TreeJournal::TreeJournal(std::string dir) : dir_(std::move(dir)) {
    journal_path_ = dir_ + "/tree.journal";
    snapshot_path_ = dir_ + "/tree.snapshot.json";
}

Result<void> TreeJournal::attach(ResourceTree& tree) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) return make_error(Errc::Io, "cannot create " + dir_);

    if (fs::exists(snapshot_path_)) {
        auto snap = load_json_file(snapshot_path_);
        if (!snap) return snap.error();
        auto loaded = tree.load_snapshot(snap.value());
        if (!loaded) return loaded;
    }
    if (fs::exists(journal_path_)) {
        std::ifstream in(journal_path_);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto rec = parse_json(line);
            if (!rec) continue;  // torn tail write after a crash
            auto applied = tree.replay(rec.value());
            if (!applied && applied.code() != Errc::DuplicateName) {
                // records for resources later deleted can fail benignly;
                // anything else is a corrupt journal
                if (applied.code() != Errc::NotFound) return applied;
            }
        }
    }

    out_.open(journal_path_, std::ios::app);
    if (!out_) return make_error(Errc::Io, "cannot open " + journal_path_);
    tree.set_sink([this](const Json& rec) { append(rec); });
    return {};
}

Result<void> TreeJournal::snapshot(ResourceTree& tree) {
    return save_json_file(snapshot_path_, tree.snapshot(), /*indent=*/-1);
}

void TreeJournal::append(const Json& record) {
    std::lock_guard lk(mu_);
    out_ << record.dump() << '\n';
    out_.flush();
}

}  // namespace citystack::core
