#include <doctest.h>

#include "citystack/support/hash.hpp"
#include "citystack/support/json.hpp"
#include "citystack/support/time.hpp"

using namespace citystack;

TEST_CASE("civil round trip") {
    using namespace timeutil;
    // 2022-03-21T00:25:06+05:30
    Civil c{2022, 3, 21, 0, 25, 6};
    std::int64_t epoch = civil_to_epoch(c, kDefaultOffsetMinutes);
    Civil back = epoch_to_civil(epoch, kDefaultOffsetMinutes);
    CHECK(back.year == 2022);
    CHECK(back.month == 3);
    CHECK(back.day == 21);
    CHECK(back.hour == 0);
    CHECK(back.minute == 25);
    CHECK(back.second == 6);
    // same instant in UTC is 2022-03-20T18:55:06
    Civil utc = epoch_to_civil(epoch, 0);
    CHECK(utc.day == 20);
    CHECK(utc.hour == 18);
    CHECK(utc.minute == 55);
}

TEST_CASE("epoch zero is 1970-01-01") {
    auto c = timeutil::epoch_to_civil(0, 0);
    CHECK(c.year == 1970);
    CHECK(c.month == 1);
    CHECK(c.day == 1);
    CHECK(c.hour == 0);
}

TEST_CASE("iso formatting and parsing") {
    using namespace timeutil;
    std::int64_t t = civil_to_epoch({2022, 1, 12, 0, 0, 0}, 0);  // Z
    CHECK(parse_iso("2022-01-12T00:00:00Z") == t);
    CHECK(format_iso(t, 330) == "2022-01-12T05:30:00+05:30");
    CHECK(parse_iso("2022-01-12T05:30:00+05:30") == t);
    CHECK(parse_iso(format_iso(t)) == t);
    CHECK(!parse_iso("not a time"));
    CHECK(!parse_iso("2022-01-12T00:00:00+5:30"));
}

TEST_CASE("compact oneM2M timestamps") {
    using namespace timeutil;
    std::int64_t t = civil_to_epoch({2022, 1, 29, 18, 26, 37}, kDefaultOffsetMinutes);
    CHECK(format_compact(t) == "20220129T182637");
    CHECK(parse_compact("20220129T182637") == t);
}

TEST_CASE("descriptor datetime format") {
    auto t = timeutil::parse_descriptor_dt("26-04-2021 00-00-00");
    REQUIRE(t.has_value());
    auto c = timeutil::epoch_to_civil(*t, timeutil::kDefaultOffsetMinutes);
    CHECK(c.year == 2021);
    CHECK(c.month == 4);
    CHECK(c.day == 26);
    // year-9999 open-interval sentinel parses and orders after everything real
    auto sentinel = timeutil::parse_descriptor_dt("31-12-9999 23-59-59");
    REQUIRE(sentinel.has_value());
    CHECK(*sentinel > *t + 1000LL * 365 * 86400);
}

TEST_CASE("seconds_of_day") {
    std::int64_t noon = timeutil::civil_to_epoch({2022, 5, 1, 12, 0, 0}, 330);
    CHECK(timeutil::seconds_of_day(noon, 330) == 12 * 3600);
    CHECK(timeutil::seconds_of_day(noon, 0) == 6 * 3600 + 30 * 60);
}

// FIPS 180-4 / RFC 4231 vectors
TEST_CASE("sha256 known vectors") {
    using namespace hashing;
    CHECK(to_hex(sha256("")) ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(to_hex(sha256("abc")) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(to_hex(sha256("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq")) ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
    std::string million(1000000, 'a');
    CHECK(to_hex(sha256(million)) ==
          "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0");
}

TEST_CASE("hmac-sha256 rfc4231 vectors") {
    using namespace hashing;
    std::string key1(20, '\x0b');
    CHECK(to_hex(hmac_sha256(key1, "Hi There")) ==
          "b0344c61d8db38535ca8afceaf0bf12b881dc200c9833da726e9376c2e32cff7");
    CHECK(to_hex(hmac_sha256("Jefe", "what do ya want for nothing?")) ==
          "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843");
    std::string key3(131, '\xaa');
    CHECK(to_hex(hmac_sha256(key3, "Test Using Larger Than Block-Size Key - Hash Key First")) ==
          "60e431591ee0b67f0d8a26aacbf5b77f8e0bc6213728c5140546040f0ee37f54");
}

TEST_CASE("base64url round trip") {
    using namespace hashing;
    CHECK(base64url_encode("") == "");
    CHECK(base64url_encode("f") == "Zg");
    CHECK(base64url_encode("fo") == "Zm8");
    CHECK(base64url_encode("foo") == "Zm9v");
    CHECK(base64url_encode("foobar") == "Zm9vYmFy");
    for (const std::string s : {"", "a", "ab", "abc", "\xff\xfe\x01_binary", "{\"k\":1}"}) {
        auto dec = base64url_decode(base64url_encode(s));
        REQUIRE(dec.has_value());
        CHECK(*dec == s);
    }
    CHECK(!base64url_decode("a"));
    CHECK(!base64url_decode("$$$$"));
}

TEST_CASE("json helpers") {
    auto ok = parse_json(R"({"a": 1})");
    REQUIRE(ok.ok());
    CHECK(ok.value()["a"] == 1);
    auto bad = parse_json("{broken");
    CHECK(!bad.ok());
    CHECK(bad.code() == Errc::MalformedContent);
}
