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
#include "citystack/core/permissions.hpp"

namespace citystack::core {

namespace {
constexpr Permission kAll[] = {Permission::Create, Permission::Retrieve, Permission::Update,
                               Permission::Delete, Permission::Notify,   Permission::Discovery};
}

int acop_encode(const PermissionSet& perms) {
    int acop = 0;
    for (Permission p : perms) acop += static_cast<int>(p);
    return acop;
}

Result<PermissionSet> acop_decode(int acop) {
    if (acop < 0 || acop > kAcopAll)
        return make_error(Errc::InvalidAcop, "acop out of range: " + std::to_string(acop));
    PermissionSet out;
    for (Permission p : kAll)
        if (acop & static_cast<int>(p)) out.insert(p);
    return out;
}

const char* to_string(Permission p) {
    switch (p) {
        case Permission::Create: return "CREATE";
        case Permission::Retrieve: return "RETRIEVE";
        case Permission::Update: return "UPDATE";
        case Permission::Delete: return "DELETE";
        case Permission::Notify: return "NOTIFY";
        case Permission::Discovery: return "DISCOVERY";
    }
    return "?";
}

bool check_access(const std::vector<AccessPolicy>& policies, const std::string& originator,
                  Permission op) {
    for (const AccessPolicy& policy : policies)
        for (const AccessRule& rule : policy.privileges)
            if (rule.originator == originator && (rule.acop & static_cast<int>(op))) return true;
    return false;
}

bool known_originator(const std::vector<AccessPolicy>& policies, const std::string& originator) {
    for (const AccessPolicy& policy : policies)
        for (const AccessRule& rule : policy.privileges)
            if (rule.originator == originator) return true;
    return false;
}

}  // namespace citystack::core
