#include <doctest.h>

#include <filesystem>
#include <random>

#include "citystack/core/journal.hpp"
#include "citystack/core/resource_tree.hpp"

using namespace citystack;
using namespace citystack::core;

namespace {

constexpr const char* kAdmin = "admin:admin";
constexpr const char* kGuest = "guest:guest";

Clock fixed_clock(std::int64_t t = 1643461597) { return [t] { return t; }; }

struct Fixture {
    ResourceTree tree;
    std::string admin_acp;
    std::string guest_acp;

    explicit Fixture(Clock clock = fixed_clock()) : tree(ResourceTree::Options{}, clock) {
        Json admin_attrs{{"rn", "acp-admin"},
                         {"pv", {{"acr", {{{"acor", kAdmin}, {"acop", 63}}}}}},
                         {"pvs", {{"acr", {{{"acor", kAdmin}, {"acop", 63}}}}}}};
        Json guest_attrs{{"rn", "acp-guest"},
                         {"pv", {{"acr", {{{"acor", kGuest}, {"acop", 34}}}}}},
                         {"pvs", {{"acr", {{{"acor", kAdmin}, {"acop", 63}}}}}}};
        admin_acp = tree.create_resource(tree.root_path(), ResourceKind::Acp, admin_attrs, kAdmin)
                        .value();
        guest_acp = tree.create_resource(tree.root_path(), ResourceKind::Acp, guest_attrs, kAdmin)
                        .value();
        Json root_acpi{{"acpi", Json::array()}};
        auto admin_ri = tree.describe(admin_acp, kAdmin).value()["ri"];
        auto guest_ri = tree.describe(guest_acp, kAdmin).value()["ri"];
        root_acpi["acpi"].push_back(admin_ri);
        root_acpi["acpi"].push_back(guest_ri);
        REQUIRE(tree.update_resource(tree.root_path(), root_acpi, kAdmin).ok());
    }

    std::string make_data_cnt(const std::string& ae, const std::string& node,
                              std::vector<std::string> labels = {}, int mni = 120) {
        std::string ae_path = tree.root_path() + "/" + ae;
        if (!tree.exists(ae_path))
            REQUIRE(tree.create_resource(tree.root_path(), ResourceKind::Ae, Json{{"rn", ae}},
                                         kAdmin)
                        .ok());
        std::string node_path =
            tree.create_resource(ae_path, ResourceKind::Cnt, Json{{"rn", node}}, kAdmin).value();
        Json data_attrs{{"rn", "Data"}, {"mni", mni}};
        data_attrs["lbl"] = labels;
        return tree.create_resource(node_path, ResourceKind::Cnt, data_attrs, kAdmin).value();
    }
};

// independent bound-application oracle for container eviction
struct ReplayOracle {
    int mni;
    std::vector<std::string> cons;
    void insert(const std::string& con) {
        cons.push_back(con);
        if (static_cast<int>(cons.size()) > mni) cons.erase(cons.begin());
    }
};

}  // namespace

TEST_CASE("create AE under the CSE root") {
    Fixture fx;
    auto ae = fx.tree.create_resource(fx.tree.root_path(), ResourceKind::Ae,
                                      Json{{"rn", "AE-AQ"}}, kAdmin);
    REQUIRE(ae.ok());
    CHECK(ae.value() == "/in-cse/in-name/AE-AQ");
    CHECK(fx.tree.kind_of(ae.value()) == ResourceKind::Ae);
}

TEST_CASE("duplicate sibling rn is rejected") {
    Fixture fx;
    Json attrs{{"rn", "AE-AQ"}};
    REQUIRE(fx.tree.create_resource(fx.tree.root_path(), ResourceKind::Ae, attrs, kAdmin).ok());
    auto dup = fx.tree.create_resource(fx.tree.root_path(), ResourceKind::Ae, attrs, kAdmin);
    CHECK(dup.code() == Errc::DuplicateName);
}

TEST_CASE("create under a missing parent") {
    Fixture fx;
    auto r = fx.tree.create_resource("/in-cse/in-name/AE-NOPE", ResourceKind::Cnt,
                                     Json{{"rn", "X"}}, kAdmin);
    CHECK(r.code() == Errc::NotFound);
}

TEST_CASE("guest cannot create but can retrieve") {
    Fixture fx;
    auto data = fx.make_data_cnt("AE-AQ", "AQ-AN00-00");
    CHECK(fx.tree.insert_cin(data, "[1]", {}, kGuest).code() == Errc::AccessDenied);
    REQUIRE(fx.tree.insert_cin(data, "[1646491691, 23.50]", {"AE-AQ"}, kAdmin).ok());
    auto got = fx.tree.latest(data, kGuest);
    REQUIRE(got.ok());
    CHECK(got.value().con == "[1646491691, 23.50]");
    CHECK(fx.tree.latest(data, "nobody:x").code() == Errc::AccessDenied);
}

TEST_CASE("latest/oldest/all and the empty container") {
    Fixture fx;
    auto data = fx.make_data_cnt("AE-AQ", "AQ-AN00-00");
    CHECK(fx.tree.latest(data, kAdmin).code() == Errc::Empty);
    CHECK(fx.tree.oldest(data, kAdmin).code() == Errc::Empty);
    CHECK(fx.tree.all_data(data, kAdmin).value().empty());

    REQUIRE(fx.tree.insert_cin(data, "[1]", {}, kAdmin).ok());
    CHECK(fx.tree.latest(data, kAdmin).value().con == "[1]");
    CHECK(fx.tree.oldest(data, kAdmin).value().con == "[1]");

    REQUIRE(fx.tree.insert_cin(data, "[2]", {}, kAdmin).ok());
    REQUIRE(fx.tree.insert_cin(data, "[3]", {}, kAdmin).ok());
    CHECK(fx.tree.latest(data, kAdmin).value().con == "[3]");
    CHECK(fx.tree.oldest(data, kAdmin).value().con == "[1]");
    auto all = fx.tree.all_data(data, kAdmin).value();
    REQUIRE(all.size() == 3);
    CHECK(all.front().con == "[1]");
    CHECK(all.back().con == "[3]");
}

TEST_CASE("bounded container evicts the oldest") {
    Fixture fx;
    auto data = fx.make_data_cnt("AE-AQ", "AQ-AN00-00", {}, 120);
    for (int i = 0; i < 120; ++i)
        REQUIRE(fx.tree.insert_cin(data, "[" + std::to_string(i) + "]", {}, kAdmin).ok());
    auto outcome = fx.tree.insert_cin(data, "[120]", {}, kAdmin);
    REQUIRE(outcome.ok());
    REQUIRE(outcome.value().evicted.has_value());
    CHECK(outcome.value().evicted->con == "[0]");
    auto all = fx.tree.all_data(data, kAdmin).value();
    CHECK(all.size() == 120);
    CHECK(all.front().con == "[1]");
    CHECK(all.back().con == "[120]");
}

TEST_CASE("mni=1 container keeps only the newest") {
    Fixture fx;
    auto data = fx.make_data_cnt("AE-AQ", "AQ-AN00-00", {}, 1);
    ReplayOracle oracle{1, {}};
    for (const char* con : {"[a]", "[b]", "[c]"}) {
        REQUIRE(fx.tree.insert_cin(data, con, {}, kAdmin).ok());
        oracle.insert(con);
    }
    auto all = fx.tree.all_data(data, kAdmin).value();
    REQUIRE(all.size() == 1);
    CHECK(all[0].con == oracle.cons[0]);
    CHECK(all[0].con == "[c]");
    CHECK(fx.tree.latest(data, kAdmin).value().con == fx.tree.oldest(data, kAdmin).value().con);
}

TEST_CASE("random insert sequences match the replay oracle") {
    std::mt19937 rng(7);
    for (int round = 0; round < 8; ++round) {
        int mni = 1 + static_cast<int>(rng() % 40);
        int inserts = static_cast<int>(rng() % 200);
        Fixture fx;
        auto data = fx.make_data_cnt("AE-AQ", "NODE", {}, mni);
        ReplayOracle oracle{mni, {}};
        for (int i = 0; i < inserts; ++i) {
            std::string con = "[" + std::to_string(i) + "]";
            REQUIRE(fx.tree.insert_cin(data, con, {}, kAdmin).ok());
            oracle.insert(con);
            // la/ol stay consistent with all_data at every step
            auto all = fx.tree.all_data(data, kAdmin).value();
            REQUIRE(all.size() == oracle.cons.size());
            if (!all.empty()) {
                CHECK(fx.tree.oldest(data, kAdmin).value().con == all.front().con);
                CHECK(fx.tree.latest(data, kAdmin).value().con == all.back().con);
            }
        }
        auto all = fx.tree.all_data(data, kAdmin).value();
        REQUIRE(all.size() == oracle.cons.size());
        for (size_t i = 0; i < all.size(); ++i) CHECK(all[i].con == oracle.cons[i]);
    }
}

TEST_CASE("group creation and fan-out in mid order") {
    Fixture fx;
    std::vector<std::string> mids;
    for (const char* node : {"AQ-AN00-00", "AQ-MG00-00", "AQ-KH00-00"}) {
        auto data = fx.make_data_cnt("AE-AQ", node);
        REQUIRE(fx.tree.insert_cin(data, std::string("[") + node + "]", {}, kAdmin).ok());
        mids.push_back(data);
    }
    Json grp_attrs{{"rn", "AQ-GRP"}, {"mt", 3}, {"mnm", 10}};
    grp_attrs["mid"] = mids;
    auto grp = fx.tree.create_resource("/in-cse/in-name/AE-AQ", ResourceKind::Grp, grp_attrs,
                                       kAdmin);
    REQUIRE(grp.ok());

    auto fan = fx.tree.group_fanout(grp.value(), FanVerb::Latest, kGuest);
    REQUIRE(fan.ok());
    REQUIRE(fan.value().size() == 3);
    for (size_t i = 0; i < mids.size(); ++i) {
        CHECK(fan.value()[i].member_path == mids[i]);
        REQUIRE(fan.value()[i].data.ok());
        CHECK(fan.value()[i].data.value().front().con ==
              fx.tree.latest(mids[i], kGuest).value().con);
    }
}

TEST_CASE("group with unknown member is rejected") {
    Fixture fx;
    Json attrs{{"rn", "G"}, {"mt", 3}, {"mnm", 2}, {"mid", {"/in-cse/in-name/AE-X/Y/Data"}}};
    auto r = fx.tree.create_resource(fx.tree.root_path(), ResourceKind::Grp, attrs, kAdmin);
    CHECK(r.code() == Errc::NotFound);
}

TEST_CASE("fan-out reports per-member denials without failing the request") {
    Fixture fx;
    auto open_data = fx.make_data_cnt("AE-AQ", "OPEN");
    // second container only grants admin
    std::string node_path =
        fx.tree.create_resource("/in-cse/in-name/AE-AQ", ResourceKind::Cnt,
                                Json{{"rn", "PRIVATE"}}, kAdmin)
            .value();
    auto admin_ri = fx.tree.describe(fx.admin_acp, kAdmin).value()["ri"].get<std::string>();
    Json data_attrs{{"rn", "Data"}, {"acpi", {admin_ri}}};
    auto priv_data = fx.tree.create_resource(node_path, ResourceKind::Cnt, data_attrs, kAdmin);
    REQUIRE(priv_data.ok());
    REQUIRE(fx.tree.insert_cin(open_data, "[1]", {}, kAdmin).ok());
    REQUIRE(fx.tree.insert_cin(priv_data.value(), "[2]", {}, kAdmin).ok());

    Json grp_attrs{{"rn", "G"}, {"mt", 3}, {"mnm", 2}};
    grp_attrs["mid"] = Json::array({open_data, priv_data.value()});
    auto grp = fx.tree.create_resource("/in-cse/in-name/AE-AQ", ResourceKind::Grp, grp_attrs,
                                       kAdmin);
    REQUIRE(grp.ok());

    auto fan = fx.tree.group_fanout(grp.value(), FanVerb::Latest, kGuest);
    REQUIRE(fan.ok());
    REQUIRE(fan.value().size() == 2);
    CHECK(fan.value()[0].data.ok());
    CHECK(fan.value()[1].data.code() == Errc::AccessDenied);

    // direct per-member calls agree with the fan-out verdicts
    CHECK(fx.tree.latest(open_data, kGuest).ok());
    CHECK(fx.tree.latest(priv_data.value(), kGuest).code() == Errc::AccessDenied);
}

TEST_CASE("discovery uses AND semantics over labels") {
    Fixture fx;
    auto both = fx.make_data_cnt("AE-AQ", "AQ-1", {"Temperature", "Relative Humidity"});
    auto temp_only = fx.make_data_cnt("AE-WE", "WE-1", {"Temperature"});
    auto neither = fx.make_data_cnt("AE-WM", "WM-1", {"Flowrate"});

    auto r_both = fx.tree.discover({"Temperature", "Relative Humidity"}, kGuest);
    REQUIRE(r_both.ok());
    CHECK(r_both.value() == std::vector<std::string>{both});

    auto r_temp = fx.tree.discover({"Temperature"}, kGuest);
    REQUIRE(r_temp.ok());
    CHECK(r_temp.value() == std::vector<std::string>{both, temp_only});

    // AND semantics shrink results
    for (const auto& path : r_both.value())
        CHECK(std::find(r_temp.value().begin(), r_temp.value().end(), path) !=
              r_temp.value().end());

    CHECK(fx.tree.discover({"NoSuchLabel"}, kGuest).value().empty());
    auto one = fx.tree.discover({"Flowrate"}, kGuest);
    CHECK(one.value() == std::vector<std::string>{neither});
}

TEST_CASE("positional payload parsing against the water-flow descriptor") {
    DescriptorRecord desc;
    desc.node_id = "WM-WF-PH01-00";
    desc.parameters = {"Timestamp", "Flowrate", "Total Flow", "Pressure", "Pressure Voltage"};

    auto parsed =
        parse_positional_payload(desc, "[1645254204, 867.00, 3091168.00, 260.00, 0.006418]");
    REQUIRE(parsed.ok());
    const Json& v = parsed.value();
    CHECK(v.at("Timestamp") == 1645254204);
    CHECK(v.at("Flowrate") == 867.0);
    CHECK(v.at("Total Flow") == 3091168.0);
    CHECK(v.at("Pressure") == 260.0);
    CHECK(v.at("Pressure Voltage") == 0.006418);

    DescriptorRecord one;
    one.parameters = {"Timestamp"};
    CHECK(parse_positional_payload(one, "[0]").value().at("Timestamp") == 0);

    auto wrong = parse_positional_payload(one, "[1, 2]");
    CHECK(wrong.code() == Errc::ArityMismatch);
    CHECK(parse_positional_payload(one, "not an array").code() == Errc::MalformedContent);
    CHECK(parse_positional_payload(one, "[bogus]").code() == Errc::MalformedContent);
}

TEST_CASE("nan entries map to null markers") {
    DescriptorRecord desc;
    desc.parameters = {"Timestamp", "Temperature", "Relative Humidity", "PM2.5",
                       "PM10",      "CO",          "NO2",               "NH3",
                       "AQI",       "AQL",         "AQI-MP",            "Data Interval"};
    auto parsed = parse_positional_payload(
        desc, "[1646491691, 23.50, 42.80, 31.49, 32.25, nan, nan, nan, 42.80, 0, 1, 0]");
    REQUIRE(parsed.ok());
    CHECK(parsed.value().at("CO").is_null());
    CHECK(parsed.value().at("NO2").is_null());
    CHECK(parsed.value().at("NH3").is_null());
    CHECK(parsed.value().at("Temperature") == 23.5);
}

TEST_CASE("payload parse is a left inverse of serialization") {
    DescriptorRecord desc;
    desc.parameters = {"Timestamp", "A", "B", "C"};
    std::mt19937 rng(99);
    for (int i = 0; i < 200; ++i) {
        Json values;
        values["Timestamp"] = static_cast<std::int64_t>(rng() % 2000000000);
        values["A"] = (rng() % 2) ? Json(nullptr) : Json(static_cast<double>(rng() % 10000) / 100.0);
        values["B"] = static_cast<double>(rng() % 1000000) / 1000.0;
        values["C"] = static_cast<std::int64_t>(rng() % 100);
        auto round = parse_positional_payload(desc, serialize_positional_payload(desc, values));
        REQUIRE(round.ok());
        CHECK(round.value() == values);
    }
}

TEST_CASE("descriptor record round trips through its container") {
    Fixture fx;
    auto data = fx.make_data_cnt("AE-WM-WF", "WM-WF-PH01-00");
    std::string node_path = "/in-cse/in-name/AE-WM-WF/WM-WF-PH01-00";
    auto desc_cnt =
        fx.tree.create_resource(node_path, ResourceKind::Cnt, Json{{"rn", "Descriptor"}}, kAdmin);
    REQUIRE(desc_cnt.ok());

    DescriptorRecord desc;
    desc.node_id = "WM-WF-PH01-00";
    desc.latitude = 17.445793;
    desc.longitude = 78.351444;
    desc.versions.push_back({"V6.0.0", timeutil::parse_descriptor_dt("26-04-2021 00-00-00").value(),
                             timeutil::parse_descriptor_dt("31-12-9999 23-59-59").value()});
    desc.parameters = {"Timestamp", "Flowrate", "Total Flow", "Pressure", "Pressure Voltage"};
    desc.parameter_info["Flowrate"] = {"Instantaneous flow rate", "float", "m^3/h", "0.001", ""};
    REQUIRE(fx.tree.insert_cin(desc_cnt.value(), desc.to_json().dump(), {}, kAdmin).ok());

    auto loaded = fx.tree.descriptor_for(data);
    REQUIRE(loaded.ok());
    CHECK(loaded.value().node_id == "WM-WF-PH01-00");
    CHECK(loaded.value().parameters.size() == 5);
    CHECK(loaded.value().versions.size() == 1);
    CHECK(loaded.value().parameter_info.at("Flowrate").unit == "m^3/h");
}

TEST_CASE("subscriptions require NOTIFY and are listed per container") {
    Fixture fx;
    auto data = fx.make_data_cnt("AE-AQ", "AQ-AN00-00");
    auto denied = fx.tree.create_resource(
        data, ResourceKind::Sub, Json{{"rn", "sub-lake"}, {"nu", "http://lake/notify"}}, kGuest);
    CHECK(denied.code() == Errc::AccessDenied);

    auto sub = fx.tree.create_resource(
        data, ResourceKind::Sub, Json{{"rn", "sub-lake"}, {"nu", "http://lake/notify"}}, kAdmin);
    REQUIRE(sub.ok());
    auto subs = fx.tree.subscriptions_of(data);
    REQUIRE(subs.size() == 1);
    CHECK(subs[0].nu == "http://lake/notify");
    CHECK(subs[0].creator == kAdmin);

    // duplicate nu coexists (fan-out of two)
    auto sub2 = fx.tree.create_resource(
        data, ResourceKind::Sub, Json{{"rn", "sub-lake2"}, {"nu", "http://lake/notify"}}, kAdmin);
    REQUIRE(sub2.ok());
    CHECK(fx.tree.subscriptions_of(data).size() == 2);
}

TEST_CASE("journal replay reproduces the tree") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "citystack-tree-journal-test";
    fs::remove_all(dir);
    fs::create_directories(dir);

    {
        TreeJournal journal(dir.string());
        Fixture fx;
        REQUIRE(journal.attach(fx.tree).ok());
        // fixture mutations happened before attach; re-run them through the journal
        auto data = fx.make_data_cnt("AE-AQ", "AQ-AN00-00", {"Temperature"});
        for (int i = 0; i < 5; ++i)
            REQUIRE(fx.tree.insert_cin(data, "[" + std::to_string(i) + "]", {"AE-AQ"}, kAdmin)
                        .ok());
    }

    // the journal knows only post-attach mutations; rebuild on a fresh fixture
    {
        TreeJournal journal(dir.string());
        Fixture fx2;
        REQUIRE(journal.attach(fx2.tree).ok());
        auto all = fx2.tree.all_data("/in-cse/in-name/AE-AQ/AQ-AN00-00/Data", kAdmin);
        REQUIRE(all.ok());
        REQUIRE(all.value().size() == 5);
        CHECK(all.value().back().con == "[4]");
        CHECK(fx2.tree.discover({"Temperature"}, kGuest).value().size() == 1);
    }

    fs::remove_all(dir);
}

TEST_CASE("snapshot plus journal tail restores state") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "citystack-tree-snapshot-test";
    fs::remove_all(dir);
    fs::create_directories(dir);

    std::string data;
    {
        TreeJournal journal(dir.string());
        Fixture fx;
        REQUIRE(journal.attach(fx.tree).ok());
        data = fx.make_data_cnt("AE-EM", "EM-1");
        REQUIRE(fx.tree.insert_cin(data, "[1]", {}, kAdmin).ok());
        REQUIRE(journal.snapshot(fx.tree).ok());
        REQUIRE(fx.tree.insert_cin(data, "[2]", {}, kAdmin).ok());
    }
    {
        TreeJournal journal(dir.string());
        ResourceTree fresh(ResourceTree::Options{}, fixed_clock());
        REQUIRE(journal.attach(fresh).ok());
        auto all = fresh.all_data(data, kAdmin);
        REQUIRE(all.ok());
        REQUIRE(all.value().size() == 2);
        CHECK(all.value()[0].con == "[1]");
        CHECK(all.value()[1].con == "[2]");
    }
    fs::remove_all(dir);
}

TEST_CASE("st is informational and increments on child mutation") {
    Fixture fx;
    auto data = fx.make_data_cnt("AE-AQ", "AQ-1");
    auto before = fx.tree.describe(data, kAdmin).value()["st"].get<int>();
    REQUIRE(fx.tree.insert_cin(data, "[1]", {}, kAdmin).ok());
    auto after = fx.tree.describe(data, kAdmin).value()["st"].get<int>();
    CHECK(after == before + 1);
}

TEST_CASE("delete removes the subtree") {
    Fixture fx;
    auto data = fx.make_data_cnt("AE-AQ", "AQ-1");
    CHECK(fx.tree.delete_resource("/in-cse/in-name/AE-AQ", kGuest).code() == Errc::AccessDenied);
    REQUIRE(fx.tree.delete_resource("/in-cse/in-name/AE-AQ", kAdmin).ok());
    CHECK(!fx.tree.exists(data));
    CHECK(!fx.tree.exists("/in-cse/in-name/AE-AQ"));
}
