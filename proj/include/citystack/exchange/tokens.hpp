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

#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>

#include "citystack/exchange/catalogue.hpp"
#include "citystack/support/time.hpp"

namespace citystack::exchange {

struct TokenClaims {
    std::string sub;
    std::string iss;
    std::string aud;
    std::int64_t iat = 0;
    std::int64_t exp = 0;
    std::string iid;   // server id for open tokens, group id for secure
    std::string role;
    Json cons = Json::object();  // carried opaquely, never enforced
};

/// Pluggable token signer. The default is a symmetric MAC shared between
/// the embedded token service and the resource server.
class TokenSigner {
public:
    virtual ~TokenSigner() = default;
    virtual std::string sign(const std::string& signing_input) const = 0;
    virtual bool verify(const std::string& signing_input, const std::string& signature) const = 0;
    virtual const char* alg() const = 0;
};

class HmacSigner : public TokenSigner {
public:
    explicit HmacSigner(std::string secret) : secret_(std::move(secret)) {}
    std::string sign(const std::string& signing_input) const override;
    bool verify(const std::string& signing_input, const std::string& signature) const override;
    const char* alg() const override { return "HS256"; }

private:
    std::string secret_;
};

/// Embedded authorization service plus the resource server's verifier:
/// consumer registry, per-group grants (via the catalogue), token
/// issuance, verification, and user-level revocation cutoffs.
class TokenService {
public:
    struct Options {
        std::string issuer = "authorization-server";
        std::string audience;  // the resource server id
        std::int64_t ttl_seconds = 12 * 3600;
        std::string internal_secret;  // authenticates revoke requests
    };

    TokenService(Catalogue& catalogue, Options opt, std::unique_ptr<TokenSigner> signer,
                 Clock clock = system_clock());

    void register_user(const std::string& user);
    bool is_registered(const std::string& user) const;

    /// itemType "resource_server" issues an open token (iid = server id);
    /// "resource_group" issues a secure token and needs a provider grant.
    Result<std::string> issue_token(const std::string& user, const std::string& item_id,
                                    const std::string& item_type, const std::string& role);

    /// Check order: signature, expiry, audience, coverage, revocation.
    Result<TokenClaims> verify_token(const std::string& token, const std::string& resource_id,
                                     std::int64_t now) const;

    /// Stores max(existing, request_time) as the user's cutoff; only the
    /// token service itself (internal secret) may call this.
    Result<std::int64_t> revoke(const std::string& user, std::int64_t request_time,
                                const std::string& internal_auth);

    std::optional<std::int64_t> revocation_cutoff(const std::string& user) const;

    static Result<TokenClaims> decode_unverified(const std::string& token);

private:
    Catalogue& catalogue_;
    Options opt_;
    std::unique_ptr<TokenSigner> signer_;
    Clock clock_;
    std::set<std::string> users_;
    std::map<std::string, std::int64_t> cutoffs_;
    mutable std::mutex mu_;
};

/// The error body every failed verification surfaces.
Json invalid_token_body();

}  // namespace citystack::exchange
