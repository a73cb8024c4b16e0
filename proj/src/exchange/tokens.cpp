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
#include "citystack/exchange/tokens.hpp"

#include "citystack/support/hash.hpp"

namespace citystack::exchange {

namespace {

std::string b64url_json(const Json& j) { return hashing::base64url_encode(j.dump()); }

}  // namespace

Json invalid_token_body() {
    return Json{{"type", "urn:dx:rs:InvalidAuthorizationToken"},
                {"title", "Not Authorized"},
                {"detail", "Token is invalid"}};
}

std::string HmacSigner::sign(const std::string& signing_input) const {
    auto mac = hashing::hmac_sha256(secret_, signing_input);
    return hashing::base64url_encode(
        std::string(reinterpret_cast<const char*>(mac.data()), mac.size()));
}

bool HmacSigner::verify(const std::string& signing_input, const std::string& signature) const {
    return sign(signing_input) == signature;
}

TokenService::TokenService(Catalogue& catalogue, Options opt, std::unique_ptr<TokenSigner> signer,
                           Clock clock)
    : catalogue_(catalogue), opt_(std::move(opt)), signer_(std::move(signer)),
      clock_(std::move(clock)) {}

void TokenService::register_user(const std::string& user) {
    std::lock_guard lk(mu_);
    users_.insert(user);
}

bool TokenService::is_registered(const std::string& user) const {
    std::lock_guard lk(mu_);
    return users_.count(user) > 0;
}

Result<std::string> TokenService::issue_token(const std::string& user, const std::string& item_id,
                                              const std::string& item_type,
                                              const std::string& role) {
    if (!is_registered(user))
        return make_error(Errc::NotRegistered, user + " is not a registered consumer");

    std::string iid;
    if (item_type == "resource_server") {
        if (item_id != opt_.audience)
            return make_error(Errc::UnknownItem, "unknown resource server " + item_id);
        iid = item_id;
    } else if (item_type == "resource_group") {
        auto group = catalogue_.group(item_id);
        if (!group) return make_error(Errc::UnknownItem, "unknown resource group " + item_id);
        if (group.value()->access == AccessClass::Secure && !catalogue_.has_grant(item_id, user))
            return make_error(Errc::NoPolicy,
                              "no provider policy grants " + user + " access to " + item_id);
        iid = item_id;
    } else {
        return make_error(Errc::BadQuery, "unknown itemType " + item_type);
    }

    std::int64_t now = clock_();
    Json header{{"alg", signer_->alg()}, {"typ", "JWT"}};
    Json payload{{"sub", user},        {"iss", opt_.issuer}, {"aud", opt_.audience},
                 {"iat", now},         {"exp", now + opt_.ttl_seconds},
                 {"iid", iid},         {"role", role},       {"cons", Json::object()}};
    std::string signing_input = b64url_json(header) + "." + b64url_json(payload);
    return signing_input + "." + signer_->sign(signing_input);
}

Result<TokenClaims> TokenService::decode_unverified(const std::string& token) {
    auto dot1 = token.find('.');
    auto dot2 = token.find('.', dot1 == std::string::npos ? dot1 : dot1 + 1);
    if (dot1 == std::string::npos || dot2 == std::string::npos)
        return make_error(Errc::InvalidToken, "not a three-part token");
    auto payload_raw = hashing::base64url_decode(token.substr(dot1 + 1, dot2 - dot1 - 1));
    if (!payload_raw) return make_error(Errc::InvalidToken, "payload is not base64url");
    auto payload = parse_json(*payload_raw);
    if (!payload || !payload.value().is_object())
        return make_error(Errc::InvalidToken, "payload is not json");
    const Json& p = payload.value();
    TokenClaims claims;
    claims.sub = p.value("sub", std::string{});
    claims.iss = p.value("iss", std::string{});
    claims.aud = p.value("aud", std::string{});
    claims.iat = p.value("iat", std::int64_t{0});
    claims.exp = p.value("exp", std::int64_t{0});
    claims.iid = p.value("iid", std::string{});
    claims.role = p.value("role", std::string{});
    claims.cons = p.value("cons", Json::object());
    return claims;
}

Result<TokenClaims> TokenService::verify_token(const std::string& token,
                                               const std::string& resource_id,
                                               std::int64_t now) const {
    // 1. signature / format
    auto dot2 = token.find_last_of('.');
    auto dot1 = token.find('.');
    if (dot1 == std::string::npos || dot2 == std::string::npos || dot1 == dot2)
        return make_error(Errc::InvalidToken, "not a three-part token");
    std::string signing_input = token.substr(0, dot2);
    if (!signer_->verify(signing_input, token.substr(dot2 + 1)))
        return make_error(Errc::InvalidToken, "bad signature");
    auto claims = decode_unverified(token);
    if (!claims) return claims.error();
    const TokenClaims& c = claims.value();

    // 2. expiry
    if (c.exp <= now) return make_error(Errc::Expired, "token expired");

    // 3. audience
    if (c.aud != opt_.audience) return make_error(Errc::WrongAudience, "token for another server");

    // 4. coverage: an open token covers any Open resource of this server;
    //    a secure token covers exactly its group
    auto group = catalogue_.group_of(resource_id);
    if (!group) return make_error(Errc::NotCovered, "unknown resource " + resource_id);
    if (c.iid == opt_.audience) {
        if (group.value()->access != AccessClass::Open)
            return make_error(Errc::NotCovered, "open token cannot reach a secure resource");
    } else if (c.iid != group.value()->id) {
        return make_error(Errc::NotCovered, "token covers a different resource group");
    }

    // 5. revocation
    {
        std::lock_guard lk(mu_);
        auto it = cutoffs_.find(c.sub);
        if (it != cutoffs_.end() && c.iat <= it->second)
            return make_error(Errc::Revoked, "token issued before the revocation cutoff");
    }
    return c;
}

Result<std::int64_t> TokenService::revoke(const std::string& user, std::int64_t request_time,
                                          const std::string& internal_auth) {
    if (internal_auth != opt_.internal_secret || opt_.internal_secret.empty())
        return make_error(Errc::Unauthenticated, "revocation must come from the token service");
    std::lock_guard lk(mu_);
    auto& cutoff = cutoffs_[user];
    cutoff = std::max(cutoff, request_time);
    return cutoff;
}

std::optional<std::int64_t> TokenService::revocation_cutoff(const std::string& user) const {
    std::lock_guard lk(mu_);
    auto it = cutoffs_.find(user);
    if (it == cutoffs_.end()) return std::nullopt;
    return it->second;
}

}  // namespace citystack::exchange
