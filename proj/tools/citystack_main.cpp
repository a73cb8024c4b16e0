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
#include <atomic>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <httplib.h>

#include "citystack/ingest/pdu.hpp"
#include "citystack/ingest/simulator.hpp"
#include "citystack/platform/platform.hpp"

using namespace citystack;

namespace {

std::atomic<bool> g_stop{false};

void handle_signal(int) { g_stop.store(true); }

int g_indent = 2;

void print_json(const Json& j) { std::cout << j.dump(g_indent) << std::endl; }

int fail(const std::string& message, Errc code = Errc::BadRequest) {
    print_json(Json{{"error", message}, {"code", to_string(code)}});
    return 1;
}

platform::Config load_config(const std::string& path, const std::string& data_dir_override,
                             const std::string& secret_override) {
    platform::Config cfg;
    if (!path.empty() && std::filesystem::exists(path)) {
        auto loaded = platform::Config::load(path);
        if (loaded) cfg = loaded.value();
    } else {
        auto from_env = platform::Config::from_json(Json::object());
        if (from_env) cfg = from_env.value();
    }
    if (!data_dir_override.empty()) cfg.data_dir = data_dir_override;
    if (!secret_override.empty()) cfg.signing_secret = secret_override;
    return cfg;
}

std::string read_stdin() {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    std::string s = buf.str();
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' '))
        s.pop_back();
    return s;
}

/// PlatformClient over the monitor HTTP API (the charge verb).
class HttpPlatformClient : public ingest::PlatformClient {
public:
    HttpPlatformClient(std::string host, int port, std::string originator)
        : host_(std::move(host)), port_(port), originator_(std::move(originator)) {}

    Result<double> latest_balance(const std::string& rfid) override {
        httplib::Client client(host_, port_);
        httplib::Headers headers{{"X-M2M-Origin", originator_}};
        auto res = client.Get(
            "/~/in-cse/in-name/AE-EV-Chargers/USER-DATA/" + rfid + "/TRANSACTIONS/la", headers);
        if (!res) return make_error(Errc::PlatformUnreachable, "monitor unreachable");
        if (res->status == 404) return make_error(Errc::UserNotFound, "user not found");
        if (res->status == 204) return 0.0;
        if (res->status != 200)
            return make_error(Errc::PlatformUnreachable,
                              "monitor answered " + std::to_string(res->status));
        auto body = parse_json(res->body);
        if (!body) return make_error(Errc::PlatformUnreachable, "bad monitor body");
        auto con = parse_json(body.value()["m2m:cin"]["con"].get<std::string>());
        if (!con) return make_error(Errc::PlatformUnreachable, "bad transaction record");
        return con.value().value("CURRENT AMOUNT IN USER'S ACCOUNT (IN RS)", 0.0);
    }

    Result<void> append_transaction(const std::string& container_path,
                                    const Json& record) override {
        httplib::Client client(host_, port_);
        httplib::Headers headers{{"X-M2M-Origin", originator_}};
        Json body{{"m2m:cin", {{"con", record.dump()}}}};
        auto res = client.Post("/~" + container_path, headers, body.dump(),
                               "application/json;ty=4");
        if (!res || res->status != 201)
            return make_error(Errc::PlatformUnreachable, "transaction insert failed");
        return {};
    }

private:
    std::string host_;
    int port_;
    std::string originator_;
};

int run_serve(const platform::Config& cfg) {
    platform::Platform plat(cfg);
    auto opened = plat.open();
    if (!opened) return fail(opened.error().message, opened.code());
    auto started = plat.start_servers();
    if (!started) return fail(started.error().message, started.code());

    print_json(Json{{"serving", true},
                    {"monitor", cfg.monitor_host + ":" + std::to_string(plat.monitor_port())},
                    {"lake", cfg.lake_host + ":" + std::to_string(plat.lake_port())},
                    {"exchange", cfg.exchange_host + ":" + std::to_string(plat.exchange_port())},
                    {"data_dir", plat.config().data_dir}});

    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    while (!g_stop.load()) std::this_thread::sleep_for(std::chrono::milliseconds(100));

    plat.stop();  // flushes journals and a tree snapshot
    print_json(Json{{"stopped", true}});
    return 0;
}

int run_seed(const platform::Config& cfg) {
    // a running process seeds itself over the loopback admin trigger
    {
        httplib::Client probe(cfg.monitor_host, cfg.monitor_port);
        probe.set_connection_timeout(0, 300000);
        auto res = probe.Post("/_admin/seed", "", "application/json");
        if (res && res->status == 200) {
            auto body = parse_json(res->body);
            print_json(body ? body.value() : Json{{"seeded", true}});
            return 0;
        }
    }
    // otherwise seed the data directory offline
    platform::Platform plat(cfg);
    auto opened = plat.open();
    if (!opened) return fail(opened.error().message, opened.code());
    auto seeded = plat.seed_all();
    if (!seeded) return fail(seeded.error().message, seeded.code());
    auto flushed = plat.flush();
    if (!flushed) return fail(flushed.error().message, flushed.code());
    print_json(seeded.value());
    return 0;
}

int run_simulate(const platform::Config& cfg, const std::string& profile_path,
                 std::int64_t duration, std::int64_t start_override, std::uint64_t seed_override,
                 const std::string& ground_truth_path, bool offline) {
    auto profile_json = load_json_file(profile_path);
    if (!profile_json) return fail(profile_json.error().message, profile_json.code());
    auto profile = ingest::SimProfile::from_json(profile_json.value());
    if (!profile) return fail(profile.error().message, profile.code());
    ingest::SimProfile p = std::move(profile).value();
    if (start_override > 0) p.start_time = start_override;
    if (p.start_time == 0)
        p.start_time = std::chrono::duration_cast<std::chrono::seconds>(
                           std::chrono::system_clock::now().time_since_epoch())
                           .count() -
                       duration;
    if (seed_override != 0) p.seed = seed_override;

    ingest::Simulator sim(p);
    auto records = sim.run(duration);

    std::string log_path = ground_truth_path.empty()
                               ? cfg.data_dir + "/groundtruth-" + p.node + ".ndjson"
                               : ground_truth_path;
    {
        std::filesystem::create_directories(
            std::filesystem::path(log_path).parent_path().empty()
                ? "."
                : std::filesystem::path(log_path).parent_path().string());
        std::ofstream out(log_path, std::ios::trunc);
        if (!out) return fail("cannot write " + log_path, Errc::Io);
        out << ingest::Simulator::ground_truth_log(p, records);
    }

    std::size_t posted = 0;
    if (!offline) {
        httplib::Client client(cfg.monitor_host, cfg.monitor_port);
        httplib::Headers headers{{"X-M2M-Origin", cfg.admin_originator}};
        std::string target = "/~/in-cse/in-name/" + p.ae + "/" + p.node + "/Data";
        for (const auto& rec : records) {
            Json body{{"m2m:cin",
                       {{"con", rec.con(p)}, {"lbl", {p.ae, p.node, p.version}}}}};
            auto res = client.Post(target, headers, body.dump(), "application/json;ty=4");
            if (!res) return fail("monitor unreachable after " + std::to_string(posted) +
                                      " posts",
                                  Errc::PlatformUnreachable);
            if (res->status != 201)
                return fail("monitor answered " + std::to_string(res->status), Errc::BadRequest);
            ++posted;
        }
    }
    print_json(Json{{"node", p.node},
                    {"records", records.size()},
                    {"posted", posted},
                    {"ground_truth", log_path}});
    return 0;
}

int run_assess(const platform::Config& cfg, const std::string& log_path) {
    std::ifstream in(log_path);
    if (!in) return fail("cannot read " + log_path, Errc::Io);
    std::ostringstream buf;
    buf << in.rdbuf();
    auto parsed = ingest::Simulator::parse_ground_truth_log(buf.str());
    if (!parsed) return fail(parsed.error().message, parsed.code());

    platform::Platform plat(cfg);
    auto opened = plat.open();
    if (!opened) return fail(opened.error().message, opened.code());

    const auto& [profile, records] = parsed.value();
    std::size_t fed = 0;
    for (const auto& rec : records) {
        quality::RawSample sample{profile.node, rec.t_new, rec.t_rec, rec.values};
        auto processed = plat.pipeline().process(sample);
        if (!processed) return fail(processed.error().message, processed.code());
        ++fed;
    }
    print_json(Json{{"node", profile.node},
                    {"fed", fed},
                    {"stored", plat.assessed().size()},
                    {"duplicates", plat.assessed().total_duplicates()},
                    {"dead_letters", plat.pipeline().dead_letters().size()}});
    return 0;
}

int run_report(const platform::Config& cfg, const std::string& node, const std::string& from,
               const std::string& to, int bin_width, const std::string& triples_path) {
    platform::Platform plat(cfg);
    auto opened = plat.open();
    if (!opened) return fail(opened.error().message, opened.code());

    std::int64_t t0 = std::numeric_limits<std::int64_t>::min();
    std::int64_t t1 = std::numeric_limits<std::int64_t>::max();
    if (!from.empty()) {
        auto t = timeutil::parse_iso(from);
        if (!t) return fail("unparseable --from", Errc::BadQuery);
        t0 = *t;
    }
    if (!to.empty()) {
        auto t = timeutil::parse_iso(to);
        if (!t) return fail("unparseable --to", Errc::BadQuery);
        t1 = *t;
    }
    auto report = quality::build_report(plat.assessed(), node, t0, t1, bin_width);
    if (!report) return fail(report.error().message, report.code());
    if (!triples_path.empty()) {
        std::ofstream out(triples_path, std::ios::trunc);
        if (!out) return fail("cannot write " + triples_path, Errc::Io);
        out << plat.assessed().triple_export();
    }
    print_json(report.value());
    return 0;
}

int run_query(const platform::Config& cfg, const std::string& verb, const std::string& id,
              const std::string& token, const std::map<std::string, std::string>& params) {
    httplib::Client client(cfg.exchange_host, cfg.exchange_port);
    httplib::Headers headers;
    if (!token.empty()) headers.emplace("Authorization", "Bearer " + token);

    std::string target;
    if (verb == "latest") {
        target = "/entities/latest?id=" + id;
    } else if (verb == "meta") {
        target = "/meta?id=" + id;
    } else if (verb == "catalogue") {
        target = "/catalogue?id=" + id;
    } else if (verb == "temporal") {
        target = "/temporal/entities?id=" + id;
        for (const auto& [k, v] : params)
            if (!v.empty()) target += "&" + k + "=" + v;
    } else {
        return fail("unknown query verb " + verb);
    }
    auto res = client.Get(target, headers);
    if (!res) return fail("exchange unreachable", Errc::PlatformUnreachable);
    auto body = parse_json(res->body);
    print_json(body ? body.value() : Json{{"raw", res->body}});
    return res->status == 200 ? 0 : 1;
}

int run_token_issue(const platform::Config& cfg, const std::string& user, const std::string& item,
                    const std::string& type, const std::string& role) {
    httplib::Client client(cfg.exchange_host, cfg.exchange_port);
    Json body{{"userId", user}, {"itemId", item}, {"itemType", type}, {"role", role}};
    auto res = client.Post("/token", body.dump(), "application/json");
    if (!res) return fail("exchange unreachable", Errc::PlatformUnreachable);
    auto parsed = parse_json(res->body);
    print_json(parsed ? parsed.value() : Json{{"raw", res->body}});
    return res->status == 200 ? 0 : 1;
}

int run_token_revoke(const platform::Config& cfg, const std::string& user) {
    httplib::Client client(cfg.exchange_host, cfg.exchange_port);
    httplib::Headers headers{{"X-Internal-Auth", cfg.signing_secret}};
    auto res = client.Post("/revoke", headers, Json{{"sub", user}}.dump(), "application/json");
    if (!res) return fail("exchange unreachable", Errc::PlatformUnreachable);
    auto parsed = parse_json(res->body);
    print_json(parsed ? parsed.value() : Json{{"raw", res->body}});
    return res->status == 200 ? 0 : 1;
}

int run_charge(const platform::Config& cfg, const std::string& script_path) {
    auto script = load_json_file(script_path);
    if (!script) return fail(script.error().message, script.code());

    HttpPlatformClient client(cfg.monitor_host, cfg.monitor_port, cfg.admin_originator);
    ingest::TariffTable tariff;
    if (std::filesystem::exists(cfg.tariff_file())) {
        auto t = load_json_file(cfg.tariff_file());
        if (t) {
            auto parsed = ingest::TariffTable::from_json(t.value());
            if (parsed) tariff = std::move(parsed).value();
        }
    }
    if (tariff.bands.empty()) tariff.bands.push_back({0, 24, 10.0});
    ingest::ChargePoint charger(client, tariff, ingest::ChargePoint::Options{});

    Json results = Json::array();
    for (const auto& scenario : script.value().value("scenarios", Json::array())) {
        std::string rfid = scenario.value("rfid", std::string{});
        double amount = scenario.value("amount", 0.0);
        double consume = scenario.value("consume", 0.0);
        Json outcome{{"rfid", rfid}, {"amount", amount}, {"consume", consume}};
        auto session = charger.authenticate(rfid, amount);
        if (!session) {
            outcome["error"] = session.error().message;
            outcome["code"] = to_string(session.code());
        } else {
            auto settled = charger.settle(session.value(), consume);
            if (!settled) {
                outcome["error"] = settled.error().message;
                outcome["code"] = to_string(settled.code());
            } else {
                outcome["deducted"] = settled.value().deducted;
                outcome["balance"] = settled.value().new_balance;
                outcome["tariff"] = session.value().tariff;
            }
        }
        results.push_back(std::move(outcome));
    }
    print_json(Json{{"scenarios", results}});
    return 0;
}

int run_lake_replay(const platform::Config& cfg) {
    platform::Platform plat(cfg);
    auto opened = plat.open();
    if (!opened) return fail(opened.error().message, opened.code());
    lake::IntakeService::Options opt;
    opt.offset_minutes = cfg.offset_minutes;
    opt.replay_on_start = false;
    lake::IntakeService intake(plat.lake(), opt);
    auto started = intake.start();
    if (!started) return fail(started.error().message, started.code());
    auto replayed = intake.replay_journal();
    if (!replayed) return fail(replayed.error().message, replayed.code());
    intake.drain();
    intake.stop();
    Json tenants = Json::object();
    for (const auto& name : plat.lake().tenant_names()) {
        auto* store = plat.lake().tenant_if_exists(name);
        tenants[name] = Json{{"rows", store->row_count()},
                             {"redeliveries", store->duplicate_count()}};
    }
    print_json(Json{{"replayed", replayed.value()}, {"tenants", tenants}});
    return 0;
}

int run_lake_dead_letters(const platform::Config& cfg) {
    platform::Platform plat(cfg);
    auto opened = plat.open();
    if (!opened) return fail(opened.error().message, opened.code());
    Json letters = Json::array();
    for (const auto& l : plat.lake().dead_letters()) letters.push_back(l);
    print_json(Json{{"dead_letters", letters}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"citystack: smart-city telemetry platform"};
    app.require_subcommand(1);

    std::string config_path;
    std::string data_dir;
    std::string secret;
    bool compact = false;
    app.add_option("--config", config_path, "configuration file (json)");
    app.add_option("--data-dir", data_dir, "override the data directory");
    app.add_option("--secret", secret, "override the signing secret");
    app.add_flag("--json", compact, "compact single-line json output");

    auto* serve = app.add_subcommand("serve", "run monitor, lake, exchange and quality");

    auto* seed = app.add_subcommand("seed", "seed the demo deployment (idempotent)");

    auto* decode = app.add_subcommand("decode-pdu", "decode an energy-meter frame");
    std::string hex;
    decode->add_option("--hex", hex, "hex frame (stdin when omitted)");

    auto* encode = app.add_subcommand("encode-pdu", "encode a reading into a frame");
    std::string reading_json;
    encode->add_option("--reading", reading_json, "reading as json (stdin when omitted)");

    auto* rssi = app.add_subcommand("classify-rssi", "classify a signal strength");
    double dbm = 0;
    rssi->add_option("--dbm", dbm, "received signal strength in dBm")->required();

    auto* simulate = app.add_subcommand("simulate", "drive a simulator profile");
    std::string profile_path, ground_truth;
    std::int64_t duration = 3600, sim_start = 0;
    std::uint64_t sim_seed = 0;
    bool offline = false;
    simulate->add_option("--profile", profile_path, "profile file")->required();
    simulate->add_option("--duration", duration, "seconds of simulated time");
    simulate->add_option("--start", sim_start, "epoch start (default: now - duration)");
    simulate->add_option("--seed", sim_seed, "override the profile seed");
    simulate->add_option("--ground-truth", ground_truth, "ground-truth log path");
    simulate->add_flag("--offline", offline, "generate the log without posting");

    auto* assess = app.add_subcommand("assess", "run the quality pipeline over a ground-truth log");
    std::string log_path;
    assess->add_option("--log", log_path, "ground-truth log")->required();

    auto* report = app.add_subcommand("report", "print a node's quality report");
    std::string node, from, to;
    int bin_width = 5;
    report->add_option("--node", node, "node id")->required();
    report->add_option("--from", from, "window start (iso8601)");
    report->add_option("--to", to, "window end (iso8601)");
    report->add_option("--bin", bin_width, "histogram bin width in seconds");
    std::string triples_path;
    report->add_option("--triples", triples_path, "also write the triple-lines export here");

    auto* query = app.add_subcommand("query", "query the exchange APIs");
    std::string qverb, qid, qtoken, timerel, qtime, endtime, attrs, filter, offset;
    query->add_option("verb", qverb, "latest | temporal | meta | catalogue")->required();
    query->add_option("--id", qid, "resource id")->required();
    query->add_option("--token", qtoken, "bearer token");
    query->add_option("--timerel", timerel, "before | after | during");
    query->add_option("--time", qtime, "start / pivot time (iso8601)");
    query->add_option("--endtime", endtime, "end time for during");
    query->add_option("--attrs", attrs, "comma-separated attribute projection");
    query->add_option("--q", filter, "value filter, e.g. pm2p5>30.00");
    query->add_option("--offset", offset, "paging offset");

    auto* token_cmd = app.add_subcommand("token", "token service helpers");
    auto* token_issue = token_cmd->add_subcommand("issue", "issue a consumer token");
    std::string tuser, titem, ttype = "resource_server", trole = "consumer";
    token_issue->add_option("--user", tuser)->required();
    token_issue->add_option("--item", titem)->required();
    token_issue->add_option("--type", ttype, "resource_server | resource_group");
    token_issue->add_option("--role", trole);
    auto* token_revoke = token_cmd->add_subcommand("revoke", "revoke a user's tokens");
    std::string ruser;
    token_revoke->add_option("--user", ruser)->required();

    auto* charge = app.add_subcommand("charge", "run scripted charge-point scenarios");
    std::string script;
    charge->add_option("--script", script, "scenario file")->required();

    auto* lake_cmd = app.add_subcommand("lake", "lake admin verbs");
    auto* lake_replay = lake_cmd->add_subcommand("replay", "re-ingest the intake journal");
    auto* lake_dlq = lake_cmd->add_subcommand("dead-letters", "print the dead-letter journal");

    CLI11_PARSE(app, argc, argv);
    if (compact) g_indent = -1;

    platform::Config cfg = load_config(config_path, data_dir, secret);

    if (*serve) return run_serve(cfg);
    if (*seed) return run_seed(cfg);
    if (*decode) {
        std::string frame = hex.empty() ? read_stdin() : hex;
        auto r = ingest::decode_pdu(frame);
        if (!r) return fail(r.error().message, r.code());
        print_json(r.value().to_json());
        return 0;
    }
    if (*encode) {
        std::string text = reading_json.empty() ? read_stdin() : reading_json;
        auto j = parse_json(text);
        if (!j) return fail("reading is not valid json", Errc::MalformedContent);
        auto r = ingest::encode_pdu(ingest::EnergyReading::from_json(j.value()));
        if (!r) return fail(r.error().message, r.code());
        print_json(Json{{"hex", r.value()}});
        return 0;
    }
    if (*rssi) {
        print_json(Json{{"dbm", dbm}, {"band", ingest::to_string(ingest::classify_rssi(dbm))}});
        return 0;
    }
    if (*simulate)
        return run_simulate(cfg, profile_path, duration, sim_start, sim_seed, ground_truth,
                            offline);
    if (*assess) return run_assess(cfg, log_path);
    if (*report) return run_report(cfg, node, from, to, bin_width, triples_path);
    if (*query) {
        std::map<std::string, std::string> params{{"timerel", timerel}, {"time", qtime},
                                                  {"endtime", endtime}, {"attrs", attrs},
                                                  {"q", filter},        {"offset", offset}};
        return run_query(cfg, qverb, qid, qtoken, params);
    }
    if (*token_issue) return run_token_issue(cfg, tuser, titem, ttype, trole);
    if (*token_revoke) return run_token_revoke(cfg, ruser);
    if (*charge) return run_charge(cfg, script);
    if (*lake_replay) return run_lake_replay(cfg);
    if (*lake_dlq) return run_lake_dead_letters(cfg);
    return 0;
}
