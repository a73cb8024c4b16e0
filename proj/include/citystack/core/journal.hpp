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

#include <fstream>
#include <mutex>
#include <string>

#include "citystack/core/resource_tree.hpp"

namespace citystack::core {

/// Append-only line-delimited journal plus snapshot persistence for a
/// ResourceTree. Record schema is documented in docs/formats.md.
class TreeJournal {
public:
    /// Files live at <dir>/tree.journal and <dir>/tree.snapshot.json.
    explicit TreeJournal(std::string dir);

    /// Loads snapshot (if any), replays the journal tail, and wires the
    /// tree's mutation sink to this journal.
    Result<void> attach(ResourceTree& tree);

    /// Writes a snapshot; the journal stays append-only and records
    /// before the snapshot watermark are skipped on the next attach.
    Result<void> snapshot(ResourceTree& tree);

    const std::string& journal_path() const { return journal_path_; }

private:
    void append(const Json& record);

    std::string dir_;
    std::string journal_path_;
    std::string snapshot_path_;
    std::ofstream out_;
    std::mutex mu_;
};

}  // namespace citystack::core
