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

#include <set>
#include <string>
#include <vector>

#include "citystack/support/result.hpp"

namespace citystack::core {

/// Access control operations. Bit positions are part of the wire format
/// and must never change: CREATE=1, RETRIEVE=2, UPDATE=4, DELETE=8,
/// NOTIFY=16, DISCOVERY=32.
enum class Permission : int {
    Create = 1,
    Retrieve = 2,
    Update = 4,
    Delete = 8,
    Notify = 16,
    Discovery = 32,
};

using PermissionSet = std::set<Permission>;

inline constexpr int kAcopAll = 63;

/// Sum of the bit values of the members; inverse of acop_decode.
int acop_encode(const PermissionSet& perms);

/// Exact bit expansion of an acop value in [0, 63].
Result<PermissionSet> acop_decode(int acop);

const char* to_string(Permission p);

/// One privilege rule: an opaque "username:password" originator paired
/// with the operations it is granted.
struct AccessRule {
    std::string originator;
    int acop = 0;
};

/// Access control policy resource (ACP). `privileges` guard the resources
/// the policy is attached to; `self_privileges` guard the policy itself.
struct AccessPolicy {
    std::string acpi;  // policy resource id, e.g. "/in-cse/acp-1"
    std::vector<AccessRule> privileges;
    std::vector<AccessRule> self_privileges;
};

/// True iff some policy rule names `originator` and grants `op`.
/// Deny is a value, not an error.
bool check_access(const std::vector<AccessPolicy>& policies, const std::string& originator,
                  Permission op);

/// True iff any rule of any policy names this originator (used to
/// distinguish bad credentials from insufficient rights).
bool known_originator(const std::vector<AccessPolicy>& policies, const std::string& originator);

}  // namespace citystack::core
