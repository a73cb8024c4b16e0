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
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "citystack/support/result.hpp"

namespace citystack {

// ordered_json keeps insertion order, which the byte-shaped response
// envelopes and golden-file tests depend on.
using Json = nlohmann::ordered_json;

inline Result<Json> parse_json(std::string_view text) {
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) return make_error(Errc::MalformedContent, "invalid json");
    return j;
}

inline Result<Json> load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) return make_error(Errc::Io, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    auto r = parse_json(buf.str());
    if (!r) return make_error(Errc::MalformedContent, "invalid json in " + path);
    return r;
}

inline Result<void> save_json_file(const std::string& path, const Json& j, int indent = 2) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) return make_error(Errc::Io, "cannot write " + path);
    out << j.dump(indent) << '\n';
    return {};
}

}  // namespace citystack
