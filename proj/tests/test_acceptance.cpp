// Acceptance suite: runs every acceptance criterion at its stated
// tolerance and prints one pass/fail line per criterion.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <thread>

#include <httplib.h>

#include "citystack/exchange/service.hpp"
#include "citystack/ingest/charger.hpp"
#include "citystack/ingest/pdu.hpp"
#include "citystack/ingest/simulator.hpp"
#include "citystack/lake/intake.hpp"
#include "citystack/monitor/service.hpp"
#include "citystack/platform/platform.hpp"
#include "citystack/quality/report.hpp"

using namespace citystack;
namespace fs = std::filesystem;

namespace {

struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define ACCEPT(cond)                                                                       \
    do {                                                                                   \
        if (!(cond))                                                                       \
            throw CheckFailure(std::string(__FILE__) + ":" + std::to_string(__LINE__) +    \
                               "  " #cond);                                                \
    } while (0)

#define ACCEPT_EQ(a, b)                                                                    \
    do {                                                                                   \
        if (!((a) == (b)))                                                                 \
            throw CheckFailure(std::string(__FILE__) + ":" + std::to_string(__LINE__) +    \
                               "  " #a " == " #b);                                         \
    } while (0)

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

constexpr const char* kAdmin = "admin:admin";
constexpr const char* kServer = "iudx-rs-onem2m.iiit.ac.in";
constexpr const char* kProvider = "research.iiit.ac.in/4786f10afbf48ed5c8c7be9b4d38b33ca16c1d9a";

std::string gid(const std::string& name) {
    return std::string(kProvider) + "/" + kServer + "/" + name;
}

// ---------------------------------------------------------------------------

// 1. decoding the concatenation of the meter's reference frame yields
//    exactly its value column; encode round-trips; < 1 s
void criterion_pdu_golden() {
    auto t0 = std::chrono::steady_clock::now();
    const std::string hex =
        "00000480" "00000479" "00000467" "5ACD" "5B5C" "5B69" "004C" "1387"
        "0000031E" "0000025E" "00033701" "00023147" "0000021C" "00042B53";
    auto decoded = ingest::decode_pdu(hex);
    ACCEPT(decoded.ok());
    const ingest::EnergyReading& e = decoded.value();
    ACCEPT_EQ(e.r_current, 1.152);
    ACCEPT_EQ(e.y_current, 1.145);
    ACCEPT_EQ(e.b_current, 1.127);
    ACCEPT_EQ(e.r_voltage, 232.45);
    ACCEPT_EQ(e.y_voltage, 233.88);
    ACCEPT_EQ(e.b_voltage, 234.01);
    ACCEPT_EQ(e.avg_pf, 0.76);
    ACCEPT_EQ(e.avg_freq, 49.99);
    ACCEPT_EQ(e.power_kva, 0.798);
    ACCEPT_EQ(e.power_kw, 0.606);
    ACCEPT_EQ(e.energy_kwh, 2106.89);
    ACCEPT_EQ(e.kvrh_lead, 1436.87);
    ACCEPT_EQ(e.kvrh_lag, 5.4);
    ACCEPT_EQ(e.energy_kvah, 2732.35);
    auto encoded = ingest::encode_pdu(e);
    ACCEPT(encoded.ok());
    ACCEPT_EQ(encoded.value(), hex);
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    ACCEPT(ms < 1000);
}

// 2. exhaustive acop table: all 64 values x 6 operations against the bit
//    oracle; 63 grants all, 34 exactly {RETRIEVE, DISCOVERY}; < 1 s
void criterion_acp_algebra() {
    auto t0 = std::chrono::steady_clock::now();
    const core::Permission ops[6] = {core::Permission::Create,  core::Permission::Retrieve,
                                     core::Permission::Update,  core::Permission::Delete,
                                     core::Permission::Notify,  core::Permission::Discovery};
    for (int acop = 0; acop <= 63; ++acop) {
        auto perms = core::acop_decode(acop);
        ACCEPT(perms.ok());
        for (int bit = 0; bit < 6; ++bit) {
            bool expected = (acop >> bit) & 1;
            ACCEPT_EQ(perms.value().count(ops[bit]), expected ? 1u : 0u);
        }
        ACCEPT_EQ(core::acop_encode(perms.value()), acop);
    }
    ACCEPT_EQ(core::acop_decode(63).value().size(), 6u);
    auto guest = core::acop_decode(34).value();
    ACCEPT_EQ(guest, (core::PermissionSet{core::Permission::Retrieve,
                                          core::Permission::Discovery}));
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    ACCEPT(ms < 1000);
}

// 3. 10,000 random inserts into an mni=120 container leave exactly the
//    120 most recent instances, matching a replay oracle; la/ol stay
//    consistent throughout
void criterion_bounded_container() {
    core::ResourceTree tree(core::ResourceTree::Options{}, [] { return std::int64_t(1650000000); });
    Json acp{{"rn", "acp-admin"}, {"pv", {{"acr", {{{"acor", kAdmin}, {"acop", 63}}}}}}};
    auto acp_path = tree.create_resource(tree.root_path(), core::ResourceKind::Acp, acp, kAdmin);
    ACCEPT(acp_path.ok());
    Json acpi{{"acpi", {tree.describe(acp_path.value(), kAdmin).value()["ri"]}}};
    ACCEPT(tree.update_resource(tree.root_path(), acpi, kAdmin).ok());
    ACCEPT(tree.create_resource(tree.root_path(), core::ResourceKind::Ae, Json{{"rn", "AE-AQ"}},
                                kAdmin)
               .ok());
    auto node = tree.create_resource("/in-cse/in-name/AE-AQ", core::ResourceKind::Cnt,
                                     Json{{"rn", "N"}}, kAdmin);
    auto data = tree.create_resource(node.value(), core::ResourceKind::Cnt,
                                     Json{{"rn", "Data"}, {"mni", 120}}, kAdmin);
    ACCEPT(data.ok());

    std::mt19937 rng(42);
    std::vector<std::string> oracle;
    for (int i = 0; i < 10000; ++i) {
        std::string con = "[" + std::to_string(i) + ", " + std::to_string(rng() % 1000) + "]";
        auto outcome = tree.insert_cin(data.value(), con, {}, kAdmin);
        ACCEPT(outcome.ok());
        oracle.push_back(con);
        if (static_cast<int>(oracle.size()) > 120) oracle.erase(oracle.begin());
        ACCEPT_EQ(tree.latest(data.value(), kAdmin).value().con, oracle.back());
        ACCEPT_EQ(tree.oldest(data.value(), kAdmin).value().con, oracle.front());
    }
    auto all = tree.all_data(data.value(), kAdmin).value();
    ACCEPT_EQ(all.size(), std::size_t(120));
    ACCEPT_EQ(all.size(), oracle.size());
    for (std::size_t i = 0; i < all.size(); ++i) ACCEPT_EQ(all[i].con, oracle[i]);
}

// shared exchange fixture used by criteria 4-6
struct ExchangeRig {
    TempDir dir{"citystack-acceptance-exchange"};
    exchange::Catalogue catalogue;
    lake::LakeStore lake{(dir.path / "lake").string()};
    std::int64_t now = 1641988800;
    std::unique_ptr<exchange::TokenService> tokens;
    std::unique_ptr<exchange::ExchangeService> service;

    ExchangeRig() {
        Json model = Json::array();
        model.push_back(Json{{"attr", "pm2p5"}, {"source", "PM2.5"}, {"kind", "inst"}});
        model.push_back(Json{{"attr", "pm10"}, {"source", "PM10"}, {"kind", "inst"}});
        Json cfg{{"server_id", kServer}, {"provider", kProvider}};
        cfg["groups"] = Json::array();
        cfg["groups"].push_back(Json{{"name", "iiith-env-aqm"},
                                     {"vertical", "AQ"},
                                     {"access", "open"},
                                     {"model", model},
                                     {"items", {Json{{"name", "AQ-AN00-00"}}}}});
        cfg["groups"].push_back(Json{{"name", "iiith-energy-meter"},
                                     {"vertical", "EM"},
                                     {"access", "secure"},
                                     {"model", Json::array()},
                                     {"items", {Json{{"name", "EM-PH01-00"}}}}});
        cfg["groups"].push_back(Json{{"name", "iiith-water-monitoring"},
                                     {"vertical", "WM"},
                                     {"access", "secure"},
                                     {"model", Json::array()},
                                     {"items", {Json{{"name", "WM-WF-PH01-00"}}}}});
        if (!catalogue.load(cfg).ok()) throw CheckFailure("catalogue load failed");

        exchange::TokenService::Options topt;
        topt.audience = kServer;
        topt.ttl_seconds = 3600;
        topt.internal_secret = "internal";
        tokens = std::make_unique<exchange::TokenService>(
            catalogue, topt, std::make_unique<exchange::HmacSigner>("acceptance-secret"),
            [this] { return now; });
        tokens->register_user("alice");

        exchange::MonitorFacade facade;
        facade.latest = [](const std::string&) -> Result<core::ContentInstance> {
            return make_error(Errc::Empty, "unused");
        };
        facade.descriptor = [](const std::string&) -> Result<core::DescriptorRecord> {
            return make_error(Errc::NotFound, "unused");
        };
        exchange::ExchangeService::Options eopt;
        eopt.server_id = kServer;
        service = std::make_unique<exchange::ExchangeService>(catalogue, *tokens, lake, facade,
                                                              eopt, [this] { return now; });
    }

    std::string open_token() {
        return tokens->issue_token("alice", kServer, "resource_server", "consumer").value();
    }
};

// 4. 3000 seeded points: first page 2000 with totalHits 3000, offset 2000
//    returns the remaining 1000, concatenation equals the full scan
void criterion_paging() {
    ExchangeRig rig;
    auto* aq = rig.lake.tenant("AQ").value();
    std::int64_t base = timeutil::parse_iso("2022-01-12T00:00:00Z").value();
    for (int i = 0; i < 3000; ++i) {
        auto stored = aq->store_observation("AQ-AN00-00", base + i * 15,
                                            Json{{"PM2.5", (i % 100) / 2.0}}, base + i * 15 + 3);
        ACCEPT(stored.ok());
    }
    std::string rid = gid("iiith-env-aqm") + "/AQ-AN00-00";
    std::string tok = rig.open_token();
    std::map<std::string, std::string> params{{"timerel", "during"},
                                              {"time", "2022-01-12T00:00:00Z"},
                                              {"endtime", "2022-01-13T00:00:00Z"}};
    auto page0 = rig.service->handle_temporal(tok, rid, params);
    ACCEPT_EQ(page0.status, 200);
    ACCEPT_EQ(page0.body["results"].size(), std::size_t(2000));
    ACCEPT_EQ(page0.body["totalHits"].get<std::size_t>(), std::size_t(3000));
    params["offset"] = "2000";
    auto page1 = rig.service->handle_temporal(tok, rid, params);
    ACCEPT_EQ(page1.body["results"].size(), std::size_t(1000));
    ACCEPT_EQ(page1.body["totalHits"].get<std::size_t>(), std::size_t(3000));

    std::vector<std::string> paged;
    for (const auto& r : page0.body["results"])
        paged.push_back(r["observationDateTime"].get<std::string>());
    for (const auto& r : page1.body["results"])
        paged.push_back(r["observationDateTime"].get<std::string>());
    auto full = aq->query_temporal("AQ-AN00-00", base, base + 86400).value();
    ACCEPT_EQ(paged.size(), full.size());
    std::set<std::string> unique(paged.begin(), paged.end());
    ACCEPT_EQ(unique.size(), paged.size());  // each row exactly once
    for (std::size_t i = 0; i < full.size(); ++i)
        ACCEPT_EQ(paged[i], timeutil::format_iso(full[i].ts, 330));
}

// 5. the filtering example: pm2p5>30.00 over the one-minute window
//    returns exactly instValues {31.2, 30.6, 30.7, 31.3}, totalHits 4,
//    byte-shaped envelope
void criterion_filter_golden() {
    ExchangeRig rig;
    auto* aq = rig.lake.tenant("AQ").value();
    std::int64_t base = timeutil::parse_iso("2022-01-12T00:00:00Z").value();
    struct Seed {
        int offset;
        double pm2p5;
    };
    for (const Seed& s : std::initializer_list<Seed>{{5, 31.2}, {12, 29.9}, {20, 30.6},
                                                     {28, 30.7}, {41, 31.3}, {55, 30.0},
                                                     {90, 35.5}}) {
        ACCEPT(aq->store_observation("AQ-AN00-00", base + s.offset, Json{{"PM2.5", s.pm2p5}},
                                     base + s.offset)
                   .ok());
    }
    std::map<std::string, std::string> params{{"timerel", "during"},
                                              {"time", "2022-01-12T00:00:00Z"},
                                              {"endtime", "2022-01-12T00:01:00Z"},
                                              {"attrs", "pm2p5,observationDateTime"},
                                              {"q", "pm2p5>30.00"}};
    auto reply = rig.service->handle_temporal(rig.open_token(), gid("iiith-env-aqm") + "/AQ-AN00-00",
                                              params);
    ACCEPT_EQ(reply.status, 200);
    const Json& body = reply.body;
    ACCEPT_EQ(body["title"].get<std::string>(), std::string("Successful Operation"));
    ACCEPT_EQ(body["type"].get<std::string>(), std::string("urn:dx:rs:success"));
    ACCEPT_EQ(body["limit"].get<int>(), 2000);
    ACCEPT_EQ(body["offset"].get<int>(), 0);
    ACCEPT_EQ(body["totalHits"].get<int>(), 4);
    ACCEPT_EQ(body["results"].size(), std::size_t(4));
    std::vector<double> values;
    for (const auto& r : body["results"]) {
        values.push_back(r["pm2p5"]["instValue"].get<double>());
        std::vector<std::string> keys;
        for (auto it = r.begin(); it != r.end(); ++it) keys.push_back(it.key());
        ACCEPT_EQ(keys, (std::vector<std::string>{"pm2p5", "observationDateTime"}));
    }
    ACCEPT_EQ(values, (std::vector<double>{31.2, 30.6, 30.7, 31.3}));
    std::vector<std::string> top;
    for (auto it = body.begin(); it != body.end(); ++it) top.push_back(it.key());
    ACCEPT_EQ(top, (std::vector<std::string>{"title", "type", "results", "limit", "offset",
                                             "totalHits"}));
}

// 6. the 18-cell token matrix; invalid cells answer the invalid-token
//    body verbatim
void criterion_token_matrix() {
    ExchangeRig rig;
    ACCEPT(rig.catalogue.add_grant(gid("iiith-energy-meter"), "alice").ok());
    ACCEPT(rig.catalogue.add_grant(gid("iiith-water-monitoring"), "alice").ok());

    const std::string open_res = gid("iiith-env-aqm") + "/AQ-AN00-00";
    const std::string res_a = gid("iiith-energy-meter") + "/EM-PH01-00";
    const std::string res_b = gid("iiith-water-monitoring") + "/WM-WF-PH01-00";
    const std::string resources[3] = {open_res, res_a, res_b};

    std::string tok_open = rig.open_token();
    std::string tok_a =
        rig.tokens->issue_token("alice", gid("iiith-energy-meter"), "resource_group", "consumer")
            .value();
    std::string tok_b =
        rig.tokens
            ->issue_token("alice", gid("iiith-water-monitoring"), "resource_group", "consumer")
            .value();
    std::string garbage = "not.a.token";

    // the revoked consumer: issue, then revoke after the iat
    rig.tokens->register_user("bob");
    std::string tok_revoked =
        rig.tokens->issue_token("bob", kServer, "resource_server", "consumer").value();
    ACCEPT(rig.tokens->revoke("bob", rig.now + 1, "internal").ok());

    struct Cell {
        const std::string* token;
        int resource;
        bool valid;
    };
    std::vector<Cell> cells;
    for (int r = 0; r < 3; ++r) {
        cells.push_back({&tok_open, r, r == 0});
        cells.push_back({&tok_a, r, r == 1});
        cells.push_back({&tok_b, r, r == 2});
        cells.push_back({&tok_open, r, false});  // expired probe (clock advanced)
        cells.push_back({&garbage, r, false});
        cells.push_back({&tok_revoked, r, false});
    }
    ACCEPT_EQ(cells.size(), std::size_t(18));

    int idx = 0;
    for (const auto& cell : cells) {
        bool expired_probe = (idx % 6) == 3;
        ++idx;
        std::int64_t when = expired_probe ? rig.now + 7200 : rig.now + 2;
        auto verdict = rig.tokens->verify_token(*cell.token, resources[cell.resource], when);
        if (cell.valid) {
            ACCEPT(verdict.ok());
            continue;
        }
        ACCEPT(!verdict.ok());
        // the request surface answers the exact error body
        std::int64_t saved = rig.now;
        rig.now = when;
        auto reply = rig.service->handle_latest(*cell.token, resources[cell.resource]);
        rig.now = saved;
        ACCEPT_EQ(reply.status, 401);
        ACCEPT_EQ(reply.body.dump(),
                  std::string(R"({"type":"urn:dx:rs:InvalidAuthorizationToken",)"
                              R"("title":"Not Authorized","detail":"Token is invalid"})"));
    }
}

// 7. quality conservation and oracle equality over a seeded faulty run,
//    plus a recorded received-N-times field distribution
void criterion_quality_conservation() {
    ingest::SimProfile profile;
    profile.node = "AQ-KH00-00";
    profile.foi = "site-AQ-KH00-00";
    profile.period_seconds = 15;
    profile.start_time = 1000000;
    profile.params = {{"Temperature", 15, 35}, {"PM2.5", 5, 120}};
    profile.faults.duplicate_prob = 0.3;
    profile.faults.max_copies = 4;
    profile.faults.outlier_prob = 0.05;
    profile.faults.null_prob = 0.05;
    profile.faults.delay_prob = 0.2;
    profile.faults.delay_min = 1;
    profile.faults.delay_max = 7;
    profile.seed = 20260808;

    ingest::Simulator sim(profile);
    auto records = sim.run(3600);  // one hour

    quality::KnowledgeBase kb;
    quality::KbEntry entry;
    entry.node = profile.node;
    entry.foi = profile.foi;
    for (const auto& p : profile.params)
        entry.properties.push_back({p.name, "", "float", {"sensor", 0, 0, Json::object()}});
    kb.put(entry);
    quality::FactorTable factors;
    for (const auto& p : profile.params) {
        quality::QualityFactor delay;
        delay.foi = profile.foi;
        delay.property = p.name;
        delay.kind = quality::QualityFactor::Kind::ExpectedDelay;
        delay.delay_seconds = profile.period_seconds;
        factors.put(delay);
        quality::QualityFactor range;
        range.foi = profile.foi;
        range.property = p.name;
        range.min_value = p.min;
        range.max_value = p.max;
        factors.put(range);
    }

    quality::AssessedStore store;
    quality::Pipeline pipeline(kb, factors, store);
    for (const auto& r : records)
        ACCEPT(pipeline.process({profile.node, r.t_new, r.t_rec, r.values}).ok());

    for (const auto& p : profile.params) {
        // ground-truth replay of the duplicate rule over the emission log
        std::int64_t t_last = std::numeric_limits<std::int64_t>::min();
        bool has_last = false;
        std::map<std::string, std::uint64_t> counts;
        std::set<std::string> accepted;
        std::map<std::string, double> expected_time_delay;
        std::map<std::string, double> expected_tx_delay;
        std::map<std::string, bool> expected_range;
        for (const auto& r : records) {
            std::string uri = quality::mint_uri(profile.node, p.name, r.t_new);
            if (has_last && r.t_new <= t_last) {
                auto& c = counts[uri];
                c = c == 0 ? 2 : c + 1;
                continue;
            }
            std::int64_t prev = t_last;
            bool had_prev = has_last;
            accepted.insert(uri);
            has_last = true;
            t_last = r.t_new;
            expected_time_delay[uri] =
                had_prev
                    ? std::max<double>(0, double(r.t_new - prev) - profile.period_seconds)
                    : 0.0;
            expected_tx_delay[uri] = double(r.t_rec - r.t_new);
            const Json& v = r.values.at(p.name);
            expected_range[uri] = v.is_null() || v.get<double>() < p.min ||
                                  v.get<double>() > p.max;
        }

        std::uint64_t once_expected = 0;
        for (const auto& uri : accepted)
            if (!counts.count(uri)) ++once_expected;

        std::uint64_t stored_once = 0, dup_sum = 0;
        std::map<std::uint64_t, std::uint64_t> distribution;
        for (const auto& a : store.for_node(profile.node)) {
            if (a.obs.property != p.name) continue;
            std::uint64_t n = a.result.num_duplicates;
            distribution[n == 0 ? 1 : n] += 1;
            if (n == 0)
                ++stored_once;
            else
                dup_sum += n;
            // oracle equality for every stored field
            ACCEPT_EQ(n, counts.count(a.obs.uri) ? counts[a.obs.uri] : 0);
            ACCEPT(a.result.time_delay.has_value());
            ACCEPT_EQ(*a.result.time_delay, expected_time_delay[a.obs.uri]);
            ACCEPT_EQ(*a.result.transmission_delay, expected_tx_delay[a.obs.uri]);
            ACCEPT(a.result.out_of_range.has_value());
            ACCEPT_EQ(*a.result.out_of_range, expected_range[a.obs.uri]);
        }
        // conservation, exact: uris received once plus all duplicate
        // receipts cover every emitted record
        ACCEPT_EQ(stored_once + dup_sum, records.size());
        ACCEPT_EQ(stored_once, once_expected);

        // the report's distribution equals the ground-truth tally
        std::map<std::uint64_t, std::uint64_t> expected_distribution;
        for (const auto& uri : accepted)
            expected_distribution[counts.count(uri) ? counts[uri] : 1] += 1;
        ACCEPT_EQ(distribution, expected_distribution);
    }

    // a recorded deployment's received-once/twice/thrice/four-times
    // distribution, reproduced with the exact-count fault plan
    ingest::SimProfile aq_eval;
    aq_eval.node = "AQ-EVAL";
    aq_eval.foi = "site-AQ-EVAL";
    aq_eval.period_seconds = 15;
    aq_eval.start_time = 1000000;
    aq_eval.params = {{"Temperature", 15, 35}};
    aq_eval.faults.exact_duplicates = {{1, 1747}, {2, 1196}, {3, 283}, {4, 247}};
    aq_eval.seed = 7;
    ingest::Simulator eval_sim(aq_eval);
    auto eval_records = eval_sim.run(24 * 3600 * 4);

    quality::KnowledgeBase kb2;
    quality::KbEntry e2;
    e2.node = aq_eval.node;
    e2.foi = aq_eval.foi;
    e2.properties.push_back({"Temperature", "", "float", {"sensor", 0, 0, Json::object()}});
    kb2.put(e2);
    quality::FactorTable f2;
    quality::QualityFactor d2;
    d2.foi = aq_eval.foi;
    d2.property = "Temperature";
    d2.kind = quality::QualityFactor::Kind::ExpectedDelay;
    d2.delay_seconds = 15;
    f2.put(d2);
    quality::AssessedStore store2;
    quality::Pipeline pipeline2(kb2, f2, store2);
    for (const auto& r : eval_records)
        ACCEPT(pipeline2.process({aq_eval.node, r.t_new, r.t_rec, r.values}).ok());

    auto report = quality::build_report(store2, aq_eval.node,
                                        std::numeric_limits<std::int64_t>::min(),
                                        std::numeric_limits<std::int64_t>::max());
    ACCEPT(report.ok());
    const Json& dist = report.value()["streams"][0]["duplicateDistribution"];
    ACCEPT_EQ(dist["1"].get<int>(), 1747);
    ACCEPT_EQ(dist["2"].get<int>(), 1196);
    ACCEPT_EQ(dist["3"].get<int>(), 283);
    ACCEPT_EQ(dist["4"].get<int>(), 247);
    ACCEPT_EQ(report.value()["streams"][0]["uniqueObservations"].get<int>(), 3473);
}

// 8. duplicacy boundary: t_new = t_last is a duplicate, t_new just after
//    is not
void criterion_duplicacy_boundary() {
    quality::StreamState state;
    quality::EnrichedObservation obs;
    obs.node = "N";
    obs.foi = "f";
    obs.property = "p";
    obs.t_new = 1000;
    obs.uri = quality::mint_uri("N", "p", 1000);
    ACCEPT(quality::assess_duplicacy(obs, state).verdict == quality::Duplicacy::NonDuplicate);

    quality::EnrichedObservation equal = obs;  // same result time
    ACCEPT(quality::assess_duplicacy(equal, state).verdict == quality::Duplicacy::Duplicate);

    quality::EnrichedObservation later = obs;
    later.t_new = 1001;  // one second of epsilon at integer resolution
    later.uri = quality::mint_uri("N", "p", 1001);
    ACCEPT(quality::assess_duplicacy(later, state).verdict == quality::Duplicacy::NonDuplicate);
}

// 9. range semantics: null is out of range; the min and max boundary
//    values themselves are in range (closed interval)
void criterion_range_semantics() {
    quality::FactorTable factors;
    quality::QualityFactor range;
    range.foi = "f";
    range.property = "Pressure Voltage";
    range.min_value = 0.03;
    range.max_value = 1.0;
    factors.put(range);

    quality::EnrichedObservation obs;
    obs.foi = "f";
    obs.property = "Pressure Voltage";
    obs.t_new = 1000;

    obs.value = Json(nullptr);
    ACCEPT(quality::assess_range(obs, factors, 330).out_of_range);
    obs.value = 0.03;
    ACCEPT(!quality::assess_range(obs, factors, 330).out_of_range);
    obs.value = 1.0;
    ACCEPT(!quality::assess_range(obs, factors, 330).out_of_range);
    obs.value = 0.0299;
    ACCEPT(quality::assess_range(obs, factors, 330).out_of_range);
    obs.value = 1.0001;
    ACCEPT(quality::assess_range(obs, factors, 330).out_of_range);
}

// 10. three verticals ingested concurrently: cross-tenant probes return
//     zero foreign rows; replaying the journals reproduces a
//     byte-identical store
void criterion_tenant_isolation() {
    TempDir dir("citystack-acceptance-tenants");
    std::map<std::string, std::string> exports;
    {
        lake::LakeStore lake(dir.path.string());
        const char* tenants[3] = {"AQ", "WM", "EM"};
        for (const char* t : tenants) ACCEPT(lake.tenant(t).ok());

        std::vector<std::thread> writers;
        std::atomic<bool> failed{false};
        for (const char* t : tenants) {
            writers.emplace_back([&, t] {
                auto* store = lake.tenant_if_exists(t);
                for (int i = 0; i < 2000; ++i) {
                    auto r = store->store_observation(std::string(t) + "-NODE", 1000 + i,
                                                      Json{{"v", i}}, 2000 + i);
                    if (!r.ok()) failed.store(true);
                }
            });
        }
        for (auto& w : writers) w.join();
        ACCEPT(!failed.load());

        std::mt19937 rng(3);
        for (int probe = 0; probe < 100; ++probe) {
            const char* t = tenants[rng() % 3];
            const char* other = tenants[rng() % 3];
            if (t == other) continue;
            auto foreign = lake.tenant_if_exists(t)->query_temporal(
                std::string(other) + "-NODE", 0, 100000);
            ACCEPT(!foreign.ok());  // the foreign node does not exist here
        }
        for (const char* t : tenants) {
            auto* store = lake.tenant_if_exists(t);
            ACCEPT_EQ(store->row_count(), std::size_t(2000));
            exports[t] = store->canonical_export();
        }
    }
    {
        // fresh process over the same directory: journal replay only
        lake::LakeStore lake(dir.path.string());
        for (const auto& [t, exported] : exports) {
            auto* store = lake.tenant(t).value();
            ACCEPT_EQ(store->canonical_export(), exported);
        }
    }
}

// 11. with the store stalled for 2 s, the notification intake still acks
//     in under 100 ms on loopback
void criterion_ack_before_store() {
    TempDir dir("citystack-acceptance-ack");
    lake::LakeStore lake(dir.path.string());
    lake::IntakeService intake(lake, lake::IntakeService::Options{});
    intake.set_store_hook([] { std::this_thread::sleep_for(std::chrono::seconds(2)); });
    ACCEPT(intake.start().ok());
    lake::IntakeHttpServer server(intake);
    ACCEPT(server.start("127.0.0.1", 0).ok());

    core::ContentInstance cin;
    cin.rn = "cin_1";
    cin.ri = "/in-cse/cin-1";
    cin.ct = 1646491700;
    cin.lbl = {"AE-AQ", "AQ-KH00-00", "V3.0.02"};
    cin.con = "[1646491691, 23.5]";
    Json body = monitor::make_notification("/in-cse/in-name/AE-AQ/AQ-KH00-00/Data", cin, 330);

    httplib::Client client("127.0.0.1", server.port());
    auto t0 = std::chrono::steady_clock::now();
    auto res = client.Post("/notify", body.dump(), "application/json");
    auto ack_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    ACCEPT(res != nullptr);
    ACCEPT_EQ(res->status, 200);
    ACCEPT(ack_ms < 100);
    server.stop();
    intake.stop();
}

// 12. the charger workflow's three billing scenarios
void criterion_charger_billing() {
    core::ResourceTree tree(core::ResourceTree::Options{}, [] { return std::int64_t(1617470734); });
    Json acp{{"rn", "acp-admin"}, {"pv", {{"acr", {{{"acor", kAdmin}, {"acop", 63}}}}}}};
    auto acp_path =
        tree.create_resource(tree.root_path(), core::ResourceKind::Acp, acp, kAdmin).value();
    Json acpi{{"acpi", {tree.describe(acp_path, kAdmin).value()["ri"]}}};
    ACCEPT(tree.update_resource(tree.root_path(), acpi, kAdmin).ok());
    tree.create_resource(tree.root_path(), core::ResourceKind::Ae, Json{{"rn", "AE-EV-Chargers"}},
                         kAdmin)
        .value();
    for (const char* c : {"USER-DATA", "CHARGER-DATA"})
        tree.create_resource("/in-cse/in-name/AE-EV-Chargers", core::ResourceKind::Cnt,
                             Json{{"rn", c}}, kAdmin)
            .value();
    monitor::MonitorService service(tree);

    struct Client : ingest::PlatformClient {
        core::ResourceTree& tree;
        explicit Client(core::ResourceTree& t) : tree(t) {}
        Result<double> latest_balance(const std::string& rfid) override {
            auto la = tree.latest("/in-cse/in-name/AE-EV-Chargers/USER-DATA/" + rfid +
                                      "/TRANSACTIONS",
                                  kAdmin);
            if (!la) {
                if (la.code() == Errc::NotFound)
                    return make_error(Errc::UserNotFound, "user not found");
                if (la.code() == Errc::Empty) return 0.0;
                return la.error();
            }
            auto con = parse_json(la.value().con);
            if (!con) return make_error(Errc::PlatformUnreachable, "bad record");
            return con.value().value("CURRENT AMOUNT IN USER'S ACCOUNT (IN RS)", 0.0);
        }
        Result<void> append_transaction(const std::string& path, const Json& record) override {
            auto r = tree.insert_cin(path, record.dump(), {}, kAdmin);
            if (!r) return r.error();
            return {};
        }
    } client{tree};

    auto register_user = [&](const std::string& rfid, double balance) {
        auto user = tree.create_resource("/in-cse/in-name/AE-EV-Chargers/USER-DATA",
                                         core::ResourceKind::Cnt, Json{{"rn", rfid}}, kAdmin)
                        .value();
        auto txns = tree.create_resource(user, core::ResourceKind::Cnt,
                                         Json{{"rn", "TRANSACTIONS"}}, kAdmin)
                        .value();
        Json opening{{"USER ID", rfid},
                     {"METER ID", "registration"},
                     {"TRANSACTION DATE-TIME", "2021-04-03 23:15:34.000000"},
                     {"TRANSACTION AMOUNT (IN RS)", 0},
                     {"CURRENT AMOUNT IN USER'S ACCOUNT (IN RS)", balance}};
        ACCEPT(tree.insert_cin(txns, opening.dump(), {}, kAdmin).ok());
    };
    auto charger_for = [&](const std::string& id) {
        auto c = tree.create_resource("/in-cse/in-name/AE-EV-Chargers/CHARGER-DATA",
                                      core::ResourceKind::Cnt, Json{{"rn", id}}, kAdmin);
        if (c)
            tree.create_resource(c.value(), core::ResourceKind::Cnt, Json{{"rn", "TRANSACTIONS"}},
                                 kAdmin)
                .value();
    };
    charger_for("CHARGER-1");
    ingest::TariffTable tariff;
    tariff.bands.push_back({0, 24, 10.0});
    ingest::ChargePoint charger(client, tariff, ingest::ChargePoint::Options{},
                                [] { return std::int64_t(1617470734); });

    // scenario 1: consume less than entered -> only the consumed value
    // is deducted
    register_user("user-one", 9000);
    auto s1 = charger.authenticate("user-one", 100);
    ACCEPT(s1.ok());
    auto o1 = charger.settle(s1.value(), 90);
    ACCEPT(o1.ok());
    ACCEPT_EQ(o1.value().deducted, 90.0);
    ACCEPT_EQ(o1.value().new_balance, 8910.0);
    ACCEPT_EQ(client.latest_balance("user-one").value(), 8910.0);

    // scenario 2: consume more than entered with exactly the entered
    // amount in the wallet -> balance goes to -10
    register_user("user-two", 100);
    auto s2 = charger.authenticate("user-two", 100);
    ACCEPT(s2.ok());
    auto o2 = charger.settle(s2.value(), 110);
    ACCEPT(o2.ok());
    ACCEPT_EQ(o2.value().new_balance, -10.0);
    ACCEPT_EQ(client.latest_balance("user-two").value(), -10.0);

    // scenario 3: unknown RFID -> "user not found"
    auto s3 = charger.authenticate("DEADBEEF", 50);
    ACCEPT(!s3.ok());
    ACCEPT(s3.code() == Errc::UserNotFound);
    ACCEPT_EQ(s3.error().message, std::string("user not found"));
}

// 13. desk-scale latency sanity: latest-data p95 < 300 ms over 200
//     loopback requests; 3-tenant parallel ingest >= single-store
//     ingest under the same synthetic load
void criterion_desk_scale() {
    TempDir dir("citystack-acceptance-desk");
    platform::Config cfg;
    cfg.data_dir = (dir.path / "data").string();
    cfg.signing_secret = "acceptance";
    cfg.monitor_port = 0;
    cfg.lake_port = 0;
    cfg.exchange_port = 0;
    platform::Platform plat(cfg);
    ACCEPT(plat.open().ok());
    ACCEPT(plat.start_servers().ok());
    ACCEPT(plat.seed_all().ok());

    // one observation to serve
    std::string con = "[1646491691, 23.50, 42.80, 31.49, 32.25, nan, nan, nan, 42.80, 0, 1, 0]";
    ACCEPT(plat.tree()
               .insert_cin("/in-cse/in-name/AE-AQ/AQ-KH00-00/Data", con,
                           {"AE-AQ", "AQ-KH00-00", "V3.0.02"}, kAdmin)
               .ok());
    std::string token = plat.tokens()
                            .issue_token("consumer@example.com", cfg.server_id,
                                         "resource_server", "consumer")
                            .value();
    std::string rid = cfg.provider + "/" + cfg.server_id + "/iiith-env-aqm/AQ-KH00-00";

    httplib::Client client("127.0.0.1", plat.exchange_port());
    httplib::Headers auth{{"Authorization", "Bearer " + token}};
    std::vector<double> latencies;
    for (int i = 0; i < 200; ++i) {
        auto t0 = std::chrono::steady_clock::now();
        auto res = client.Get("/entities/latest?id=" + rid, auth);
        auto us = std::chrono::duration_cast<std::chrono::microseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
        ACCEPT(res != nullptr);
        ACCEPT_EQ(res->status, 200);
        latencies.push_back(us / 1000.0);
    }
    std::sort(latencies.begin(), latencies.end());
    double p95 = latencies[189];
    ACCEPT(p95 < 300.0);
    plat.stop();

    // throughput direction: one writer into one store vs three parallel
    // per-tenant writers under the same total load (best of two runs on
    // each side, which measures capability rather than scheduler noise)
    const int per_tenant = 4000;
    auto synth = [](int i) { return Json{{"v", i}, {"w", i * 2}}; };
    auto run_single = [&](int round) {
        TempDir sdir("citystack-acceptance-single-" + std::to_string(round));
        lake::LakeStore single(sdir.path.string());
        auto* store = single.tenant("ALL").value();
        auto t0 = std::chrono::steady_clock::now();
        for (int i = 0; i < 3 * per_tenant; ++i)
            ACCEPT(store->store_observation("NODE-" + std::to_string(i % 3), 100000 + i, synth(i),
                                            200000 + i)
                       .ok());
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return (3.0 * per_tenant) / secs;
    };
    auto run_multi = [&](int round) {
        TempDir mdir("citystack-acceptance-multi-" + std::to_string(round));
        lake::LakeStore multi(mdir.path.string());
        const char* tenants[3] = {"AQ", "WM", "EM"};
        for (const char* t : tenants) ACCEPT(multi.tenant(t).ok());
        auto t0 = std::chrono::steady_clock::now();
        std::vector<std::thread> writers;
        std::atomic<bool> failed{false};
        for (const char* t : tenants) {
            writers.emplace_back([&, t] {
                auto* store = multi.tenant_if_exists(t);
                for (int i = 0; i < per_tenant; ++i) {
                    if (!store->store_observation(std::string(t) + "-NODE", 100000 + i, synth(i),
                                                  200000 + i)
                             .ok())
                        failed.store(true);
                }
            });
        }
        for (auto& w : writers) w.join();
        ACCEPT(!failed.load());
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return (3.0 * per_tenant) / secs;
    };
    double single_rate = std::max(run_single(0), run_single(1));
    double multi_rate = std::max(run_multi(0), run_multi(1));
    std::printf("        p95 latest latency %.1f ms | single-store %.0f rows/s | "
                "multi-tenant %.0f rows/s\n",
                p95, single_rate, multi_rate);
    // full-scale load numbers (hundreds of parallel users) are not reproducible at
    // desk scale; only the direction is asserted
    ACCEPT(multi_rate >= single_rate);
}

struct Criterion {
    int id;
    const char* title;
    std::function<void()> run;
};

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "PDU golden decode/encode of the reference frame", criterion_pdu_golden},
        {2, "exhaustive ACP algebra (64 values x 6 operations)", criterion_acp_algebra},
        {3, "bounded container under 10,000 random inserts", criterion_bounded_container},
        {4, "temporal paging partition (3000 points, offset 2000)", criterion_paging},
        {5, "filter golden: pm2p5>30.00 over the one-minute window", criterion_filter_golden},
        {6, "token matrix (18 cells) with verbatim error body", criterion_token_matrix},
        {7, "quality conservation + ground-truth oracle equality", criterion_quality_conservation},
        {8, "duplicacy boundary (equal timestamps are duplicates)", criterion_duplicacy_boundary},
        {9, "range semantics (null out, closed boundaries in)", criterion_range_semantics},
        {10, "tenant isolation + idempotent journal replay", criterion_tenant_isolation},
        {11, "ack-before-store with a 2 s stalled store", criterion_ack_before_store},
        {12, "charger billing scenarios", criterion_charger_billing},
        {13, "desk-scale latency and throughput direction", criterion_desk_scale},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        try {
            c.run();
            std::printf("[PASS] criterion %2d: %s\n", c.id, c.title);
        } catch (const std::exception& e) {
            ++failures;
            std::printf("[FAIL] criterion %2d: %s\n        %s\n", c.id, c.title, e.what());
        }
        std::fflush(stdout);
    }
    std::printf("%d/%zu acceptance criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
