#include <doctest.h>

#include <filesystem>

#include <httplib.h>

#include "citystack/platform/platform.hpp"

using namespace citystack;
using namespace citystack::platform;

namespace {

namespace fs = std::filesystem;

Config test_config(const fs::path& dir) {
    Config cfg;
    cfg.data_dir = dir.string();
    cfg.signing_secret = "platform-test-secret";
    cfg.monitor_port = 0;  // ephemeral
    cfg.lake_port = 0;
    cfg.exchange_port = 0;
    return cfg;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

// the 30 data containers the seeded campus answers for a
// Temperature + Relative Humidity discovery
const std::vector<std::string> kExpectedUril = {
    "/in-cse/in-name/AE-SR/SR-OC/SR-OC-GW-KH03-01/Data",
    "/in-cse/in-name/AE-SR/SR-AQ/SR-AQ-KH03-03/Data",
    "/in-cse/in-name/AE-AQM/AQM-XX00-00/Data",
    "/in-cse/in-name/AE-SR/SR-AQ/SR-AQ-KH03-01/Data",
    "/in-cse/in-name/AE-AQ/AQ-AN00-00/Data",
    "/in-cse/in-name/AE-SR/SR-AQ/SR-AQ-KH00-00/Data",
    "/in-cse/in-name/AE-AQ/AQ-MG00-00/Data",
    "/in-cse/in-name/AE-WE/WE-GS04-00/Data",
    "/in-cse/in-name/AE-AQ/AQ-KH00-00/Data",
    "/in-cse/in-name/AE-SR/SR-AQ/SR-AQ-KH00-02/Data",
    "/in-cse/in-name/AE-SR/SR-OC/SR-OC-GW-KH01-00/Data",
    "/in-cse/in-name/AE-WE/WE-BN04-00/Data",
    "/in-cse/in-name/AE-SR/SR-OC/SR-OC-GW-KH03-00/Data",
    "/in-cse/in-name/AE-AQ/AQ-KN00-00/Data",
    "/in-cse/in-name/AE-AQ/AQ-VN90-00/Data",
    "/in-cse/in-name/AE-AQ/AQ-PH03-00/Data",
    "/in-cse/in-name/AE-SR/SR-OC/SR-OC-GW-KH03-02/Data",
    "/in-cse/in-name/AE-AQ/AQ-PL00-00/Data",
    "/in-cse/in-name/AE-SR/SR-AQ/SR-AQ-KH03-00/Data",
    "/in-cse/in-name/AE-SR/SR-AQ/SR-AQ-KH00-01/Data",
    "/in-cse/in-name/AE-SR/SR-OC/SR-OC-GW-KH95-00/Data",
    "/in-cse/in-name/AE-AQ/AQ-FG00-00/Data",
    "/in-cse/in-name/AE-WE/WE-VN04-00/Data",
    "/in-cse/in-name/AE-SR/SR-AQ/SR-AQ-KH95-00/Data",
    "/in-cse/in-name/AE-SR/SR-OC/SR-OC-GW-KH00-00/Data",
    "/in-cse/in-name/AE-AQ/AQ-SN00-00/Data",
    "/in-cse/in-name/AE-SR/SR-OC/SR-OC-GW-KH00-01/Data",
    "/in-cse/in-name/AE-SR/SR-AQ/SR-AQ-KH00-03/Data",
    "/in-cse/in-name/AE-SR/SR-AQ/SR-AQ-KH03-02/Data",
    "/in-cse/in-name/AE-AQ/AQ-BN00-00/Data",
};

}  // namespace

TEST_CASE("seeded campus answers the 30-path discovery") {
    TempDir dir("citystack-platform-seed");
    Platform platform(test_config(dir.path), [] { return std::int64_t(1650000000); });
    REQUIRE(platform.open().ok());
    REQUIRE(platform.seed_all().ok());

    auto found = platform.tree().discover({"Temperature", "Relative Humidity"}, "guest:guest");
    REQUIRE(found.ok());
    std::vector<std::string> expected = kExpectedUril;
    std::sort(expected.begin(), expected.end());
    CHECK(found.value() == expected);
    CHECK(found.value().size() == 30);

    // single-label discovery is a superset (AND semantics shrink)
    auto temp_only = platform.tree().discover({"Temperature"}, "guest:guest").value();
    for (const auto& p : found.value())
        CHECK(std::find(temp_only.begin(), temp_only.end(), p) != temp_only.end());

    CHECK(platform.tree().discover({"Flowrate"}, "guest:guest").value() ==
          std::vector<std::string>{"/in-cse/in-name/AE-WM-WF/WM-WF-PH01-00/Data"});
}

TEST_CASE("seeded guests can retrieve but not create") {
    TempDir dir("citystack-platform-guest");
    Platform platform(test_config(dir.path), [] { return std::int64_t(1650000000); });
    REQUIRE(platform.open().ok());
    REQUIRE(platform.seed_all().ok());

    std::string aq = "/in-cse/in-name/AE-AQ/AQ-KH00-00/Data";
    CHECK(platform.tree().insert_cin(aq, "[1]", {}, "guest:guest").code() == Errc::AccessDenied);
    REQUIRE(platform.tree().insert_cin(aq, "[1]", {}, "admin:admin").ok());
    CHECK(platform.tree().latest(aq, "guest:guest").ok());
}

TEST_CASE("seeding twice leaves identical state") {
    TempDir dir("citystack-platform-idem");
    Platform platform(test_config(dir.path), [] { return std::int64_t(1650000000); });
    REQUIRE(platform.open().ok());
    REQUIRE(platform.seed_all().ok());
    std::string tree_before = platform.tree().snapshot().dump();
    std::string catalogue_before = platform.catalogue().to_config().dump();
    auto aq_export_before = platform.lake().tenant("AQ").value()->canonical_export();

    REQUIRE(platform.seed_all().ok());
    CHECK(platform.tree().snapshot().dump() == tree_before);
    CHECK(platform.catalogue().to_config().dump() == catalogue_before);
    CHECK(platform.lake().tenant("AQ").value()->canonical_export() == aq_export_before);
}

TEST_CASE("seeded descriptor parses the water-flow content instance") {
    TempDir dir("citystack-platform-desc");
    Platform platform(test_config(dir.path), [] { return std::int64_t(1650000000); });
    REQUIRE(platform.open().ok());
    REQUIRE(platform.seed_all().ok());

    auto desc = platform.tree().descriptor_for("/in-cse/in-name/AE-WM-WF/WM-WF-PH01-00/Data");
    REQUIRE(desc.ok());
    CHECK(desc.value().node_id == "WM-WF-PH01-00");
    CHECK(desc.value().parameters ==
          std::vector<std::string>{"Timestamp", "Flowrate", "Total Flow", "Pressure",
                                   "Pressure Voltage"});

    auto values = core::parse_positional_payload(
        desc.value(), "[1645254204, 867.00, 3091168.00, 260.00, 0.006418]");
    REQUIRE(values.ok());
    CHECK(values.value()["Flowrate"] == 867.0);
    CHECK(values.value()["Pressure Voltage"] == 0.006418);
}

TEST_CASE("serve wires monitor through lake into the quality pipeline") {
    TempDir dir("citystack-platform-serve");
    Platform platform(test_config(dir.path));
    REQUIRE(platform.open().ok());
    REQUIRE(platform.start_servers().ok());
    REQUIRE(platform.seed_all().ok());

    // post one content instance through the monitor API
    std::int64_t ts = 1646491691;
    httplib::Client monitor("127.0.0.1", platform.monitor_port());
    Json cin{{"m2m:cin",
              {{"con", "[" + std::to_string(ts) +
                           ", 23.50, 42.80, 31.49, 32.25, nan, nan, nan, 42.80, 0, 1, 0]"},
               {"lbl", {"AE-AQ", "AQ-KH00-00", "V3.0.02"}}}}};
    httplib::Headers headers{{"X-M2M-Origin", "admin:admin"}};
    auto res = monitor.Post("/~/in-cse/in-name/AE-AQ/AQ-KH00-00/Data", headers, cin.dump(),
                            "application/json;ty=4");
    REQUIRE(res);
    CHECK(res->status == 201);

    // the dispatcher pushes to the lake's nu; wait for the full path
    platform.dispatcher().drain();
    platform.intake().drain();

    auto rows = platform.lake().tenant("AQ").value()->query_temporal("AQ-KH00-00", ts, ts + 1);
    REQUIRE(rows.ok());
    REQUIRE(rows.value().size() == 1);
    CHECK(rows.value()[0].values["Temperature"] == 23.5);
    CHECK(rows.value()[0].version == "V3.00.02");

    // quality assessed the same record via the lake stream hook
    auto assessed = platform.assessed().find(quality::mint_uri("AQ-KH00-00", "Temperature", ts));
    REQUIRE(assessed.has_value());
    CHECK(assessed->result.out_of_range == false);

    // exchange serves it with a token issued over HTTP
    httplib::Client exchange("127.0.0.1", platform.exchange_port());
    Json token_req{{"userId", "consumer@example.com"},
                   {"itemId", platform.config().server_id},
                   {"itemType", "resource_server"},
                   {"role", "consumer"}};
    auto token_res = exchange.Post("/token", token_req.dump(), "application/json");
    REQUIRE(token_res);
    REQUIRE(token_res->status == 200);
    std::string token =
        parse_json(token_res->body).value()["results"]["accessToken"].get<std::string>();

    std::string rid = platform.config().provider + "/" + platform.config().server_id +
                      "/iiith-env-aqm/AQ-KH00-00";
    httplib::Headers auth{{"Authorization", "Bearer " + token}};
    auto latest = exchange.Get("/entities/latest?id=" + rid, auth);
    REQUIRE(latest);
    CHECK(latest->status == 200);
    auto body = parse_json(latest->body).value();
    CHECK(body["type"] == "urn:dx:rs:success");
    CHECK(body["results"][0]["airTemperature"]["instValue"] == 23.5);

    // a garbage token answers the invalid-token body verbatim
    httplib::Headers bad{{"Authorization", "Bearer garbage"}};
    auto denied = exchange.Get("/entities/latest?id=" + rid, bad);
    REQUIRE(denied);
    CHECK(denied->status == 401);
    CHECK(denied->body ==
          R"({"type":"urn:dx:rs:InvalidAuthorizationToken","title":"Not Authorized","detail":"Token is invalid"})");

    platform.stop();
}

TEST_CASE("restart replays journals and loses nothing") {
    TempDir dir("citystack-platform-restart");
    std::string aq_export;
    {
        Platform platform(test_config(dir.path));
        REQUIRE(platform.open().ok());
        REQUIRE(platform.start_servers().ok());
        REQUIRE(platform.seed_all().ok());
        httplib::Client monitor("127.0.0.1", platform.monitor_port());
        httplib::Headers headers{{"X-M2M-Origin", "admin:admin"}};
        for (int i = 0; i < 5; ++i) {
            Json cin{{"m2m:cin",
                      {{"con", "[" + std::to_string(1646491691 + i * 15) +
                                   ", 23.50, 42.80, 31.49, 32.25, nan, nan, nan, 42.80, 0, 1, 0]"},
                       {"lbl", {"AE-AQ", "AQ-KH00-00", "V3.0.02"}}}}};
            auto res = monitor.Post("/~/in-cse/in-name/AE-AQ/AQ-KH00-00/Data", headers, cin.dump(),
                                    "application/json;ty=4");
            REQUIRE(res);
            REQUIRE(res->status == 201);
        }
        platform.dispatcher().drain();
        platform.intake().drain();
        aq_export = platform.lake().tenant("AQ").value()->canonical_export();
        platform.stop();  // snapshot + journal flush
    }
    {
        Platform platform(test_config(dir.path));
        REQUIRE(platform.open().ok());
        auto all = platform.tree().all_data("/in-cse/in-name/AE-AQ/AQ-KH00-00/Data",
                                            "admin:admin");
        REQUIRE(all.ok());
        CHECK(all.value().size() == 5);
        auto* aq = platform.lake().tenant("AQ").value();
        CHECK(aq->canonical_export() == aq_export);
        CHECK(aq->row_count() == 5);
    }
}

TEST_CASE("startup refuses an empty signing secret") {
    TempDir dir("citystack-platform-nosecret");
    Config cfg = test_config(dir.path);
    cfg.signing_secret.clear();
    Platform platform(cfg);
    auto opened = platform.open();
    CHECK(!opened.ok());
    CHECK(opened.code() == Errc::BadConfig);
}
