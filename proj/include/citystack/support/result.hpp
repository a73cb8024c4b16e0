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

#include <optional>
#include <string>
#include <utility>
#include <variant>

namespace citystack {

/// Domain error codes shared across the platform.
enum class Errc {
    NotFound,
    AccessDenied,
    DuplicateName,
    Empty,
    InvalidAcop,
    ArityMismatch,
    MalformedContent,
    TooShort,
    NonHexDigit,
    FieldOverflow,
    UserNotFound,
    InsufficientFunds,
    PlatformUnreachable,
    UnknownVertical,
    DuplicateKey,
    UnknownTenant,
    UnknownNode,
    NotRegistered,
    NoPolicy,
    UnknownItem,
    InvalidToken,
    Expired,
    WrongAudience,
    NotCovered,
    Revoked,
    Unauthenticated,
    UnknownResource,
    NoData,
    SpanTooLarge,
    BadQuery,
    MissingTimestamp,
    MissingFactor,
    BadRequest,
    Io,
    BadConfig,
};

const char* to_string(Errc code);

struct Error {
    Errc code;
    std::string message;
};

inline Error make_error(Errc code, std::string message = {}) {
    if (message.empty()) message = to_string(code);
    return Error{code, std::move(message)};
}

/// Value-or-error return type used by all fallible domain operations.
template <typename T>
class [[nodiscard]] Result {
public:
    Result(T value) : v_(std::in_place_index<0>, std::move(value)) {}
    Result(Error err) : v_(std::in_place_index<1>, std::move(err)) {}

    bool ok() const { return v_.index() == 0; }
    explicit operator bool() const { return ok(); }

    T& value() & { return std::get<0>(v_); }
    const T& value() const& { return std::get<0>(v_); }
    T&& value() && { return std::get<0>(std::move(v_)); }

    const Error& error() const { return std::get<1>(v_); }
    Errc code() const { return error().code; }

private:
    std::variant<T, Error> v_;
};

template <>
class [[nodiscard]] Result<void> {
public:
    Result() = default;
    Result(Error err) : err_(std::move(err)) {}

    bool ok() const { return !err_.has_value(); }
    explicit operator bool() const { return ok(); }

    const Error& error() const { return *err_; }
    Errc code() const { return err_->code; }

private:
    std::optional<Error> err_;
};

inline const char* to_string(Errc code) {
    switch (code) {
        case Errc::NotFound: return "NOT_FOUND";
        case Errc::AccessDenied: return "ACCESS_DENIED";
        case Errc::DuplicateName: return "DUPLICATE_NAME";
        case Errc::Empty: return "EMPTY";
        case Errc::InvalidAcop: return "INVALID_ACOP";
        case Errc::ArityMismatch: return "ARITY_MISMATCH";
        case Errc::MalformedContent: return "MALFORMED_CONTENT";
        case Errc::TooShort: return "TOO_SHORT";
        case Errc::NonHexDigit: return "NON_HEX_DIGIT";
        case Errc::FieldOverflow: return "FIELD_OVERFLOW";
        case Errc::UserNotFound: return "USER_NOT_FOUND";
        case Errc::InsufficientFunds: return "INSUFFICIENT_FUNDS";
        case Errc::PlatformUnreachable: return "PLATFORM_UNREACHABLE";
        case Errc::UnknownVertical: return "UNKNOWN_VERTICAL";
        case Errc::DuplicateKey: return "DUPLICATE_KEY";
        case Errc::UnknownTenant: return "UNKNOWN_TENANT";
        case Errc::UnknownNode: return "UNKNOWN_NODE";
        case Errc::NotRegistered: return "NOT_REGISTERED";
        case Errc::NoPolicy: return "NO_POLICY";
        case Errc::UnknownItem: return "UNKNOWN_ITEM";
        case Errc::InvalidToken: return "INVALID_TOKEN";
        case Errc::Expired: return "EXPIRED";
        case Errc::WrongAudience: return "WRONG_AUDIENCE";
        case Errc::NotCovered: return "NOT_COVERED";
        case Errc::Revoked: return "REVOKED";
        case Errc::Unauthenticated: return "UNAUTHENTICATED";
        case Errc::UnknownResource: return "UNKNOWN_RESOURCE";
        case Errc::NoData: return "NO_DATA";
        case Errc::SpanTooLarge: return "SPAN_TOO_LARGE";
        case Errc::BadQuery: return "BAD_QUERY";
        case Errc::MissingTimestamp: return "MISSING_TIMESTAMP";
        case Errc::MissingFactor: return "MISSING_FACTOR";
        case Errc::BadRequest: return "BAD_REQUEST";
        case Errc::Io: return "IO_ERROR";
        case Errc::BadConfig: return "BAD_CONFIG";
    }
    return "UNKNOWN";
}

}  // namespace citystack
