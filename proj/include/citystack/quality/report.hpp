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

#include "citystack/quality/pipeline.hpp"

namespace citystack::quality {

/// Machine-readable per-node quality report over a time window: the
/// duplicate-count distribution (received once/twice/...), raw and
/// binned transmission/sampling delays, and in/out-of-range counts per
/// observed property.
Result<Json> build_report(const AssessedStore& store, const std::string& node,
                          std::int64_t from, std::int64_t to, int bin_width_seconds = 5);

}  // namespace citystack::quality
