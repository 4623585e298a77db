#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "nis/config.hpp"

using namespace nis;

namespace {

Json base_doc() {
    return Json{
        {"seed", 7},
        {"duration", 100000},
        {"topology",
         {{"ports", 4},
          {"hosts",
           Json::array({{{"name", "h1"},
                         {"port", 0},
                         {"ip", "10.0.0.1"},
                         {"mac", "02:00:00:00:00:01"},
                         {"os", "linux"},
                         {"username", "u1"},
                         {"password", "p1"}},
                        {{"name", "h2"},
                         {"port", 1},
                         {"ip", "10.0.0.2"},
                         {"mac", "02:00:00:00:00:02"},
                         {"os", "linux"},
                         {"username", "u2"},
                         {"password", "p2"}}})}}}};
}

Json attacker_block() {
    return Json{{"name", "mallory"}, {"port", 2},
                {"ip", "10.0.0.66"}, {"mac", "0E:66:66:66:66:66"},
                {"os", "linux"},     {"username", "m"},
                {"password", "mpw"}, {"in_directory", true},
                {"reg_response", "valid"}};
}

// "" means it parsed cleanly
std::string error_of(const Json& doc) {
    try {
        parse_config(doc);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_CASE("a minimal document parses with every default filled in") {
    ScenarioConfig cfg = parse_config(base_doc());
    CHECK_EQ(cfg.seed, 7u);
    CHECK_EQ(cfg.duration, 100000u);
    CHECK_EQ(cfg.timers.t_p, 660000u);
    CHECK_EQ(cfg.timers.t_r, 66000u);
    CHECK_EQ(cfg.timers.drop_threshold, 10u);
    CHECK_EQ(cfg.first_round_at, 0u);
    CHECK_EQ(cfg.arp_timeout, 100u);
    CHECK_EQ(cfg.topo.ports, 4);
    CHECK_EQ(cfg.topo.link_latency, 1u);
    REQUIRE_EQ(cfg.topo.hosts.size(), 2u);
    CHECK_EQ(cfg.topo.hosts[0].name, "h1");
    CHECK_EQ(cfg.topo.hosts[0].config.creds.mac.to_string(), "02:00:00:00:00:01");
    CHECK_EQ(cfg.directory.size(), 2u);
    CHECK_FALSE(cfg.topo.attacker.has_value());
    CHECK(cfg.flows.empty());
    CHECK_FALSE(cfg.scenario.has_value());
}

TEST_CASE("unknown keys are fatal at every level") {
    auto doc = base_doc();
    doc["sede"] = 1; // top-level typo
    CHECK(error_of(doc).find("unknown key 'sede' in config") != std::string::npos);

    doc = base_doc();
    doc["timers"] = {{"t_q", 5}};
    CHECK(error_of(doc).find("unknown key 't_q' in timers") != std::string::npos);

    doc = base_doc();
    doc["topology"]["hosts"][0]["mac_address"] = "x";
    CHECK(error_of(doc).find("unknown key 'mac_address' in topology.hosts[0]") !=
          std::string::npos);

    doc = base_doc();
    doc["topology"]["colour"] = "blue";
    CHECK(error_of(doc).find("unknown key 'colour' in topology") != std::string::npos);
}

TEST_CASE("missing required keys and wrong types are reported by name") {
    auto doc = base_doc();
    doc.erase("seed");
    CHECK(error_of(doc).find("missing required key 'seed' in config") != std::string::npos);

    doc = base_doc();
    doc["seed"] = "lots";
    CHECK(error_of(doc).find("key 'seed' in config must be a non-negative integer") !=
          std::string::npos);

    doc = base_doc();
    doc["topology"]["hosts"][1].erase("password");
    CHECK(error_of(doc).find("missing required key 'password' in topology.hosts[1]") !=
          std::string::npos);

    doc = base_doc();
    doc["topology"]["hosts"][0]["mac"] = "zz:00";
    CHECK(error_of(doc).find("invalid address 'zz:00'") != std::string::npos);

    doc = base_doc();
    doc["topology"]["hosts"][0]["ip"] = "10.0.0.999";
    CHECK(error_of(doc).find("invalid IPv4 '10.0.0.999'") != std::string::npos);
}

TEST_CASE("every problem is reported in one pass") {
    auto doc = base_doc();
    doc.erase("seed");
    doc["timers"] = {{"bogus", 1}};
    doc["topology"]["hosts"][1]["port"] = 0; // duplicate port
    std::string err = error_of(doc);
    CHECK(err.find("missing required key 'seed'") != std::string::npos);
    CHECK(err.find("unknown key 'bogus' in timers") != std::string::npos);
    CHECK(err.find("duplicate port assignment (port 0)") != std::string::npos);
}

TEST_CASE("timer and topology constraints surface through parsing") {
    auto doc = base_doc();
    doc["timers"] = {{"t_r", 65000}};
    CHECK(error_of(doc).find("t_d < t_r/65535 violated") != std::string::npos);

    doc = base_doc();
    doc["topology"]["hosts"][1]["port"] = 9;
    CHECK(error_of(doc).find("out of range") != std::string::npos);

    doc = base_doc();
    doc["duration"] = 0;
    CHECK(error_of(doc).find("duration must be at least 1") != std::string::npos);
}

TEST_CASE("a presented password diverging from the directory is kept separate") {
    auto doc = base_doc();
    doc["topology"]["hosts"][0]["presented_password"] = "oops";
    ScenarioConfig cfg = parse_config(doc);
    CHECK_EQ(cfg.topo.hosts[0].config.creds.password, "oops"); // what goes on the wire
    CHECK_EQ(cfg.directory[0].password, "p1");                 // what the server checks
    Json echo = cfg.to_json();
    CHECK_EQ(echo["topology"]["hosts"][0]["password"], "p1");
    CHECK_EQ(echo["topology"]["hosts"][0]["presented_password"], "oops");
    CHECK_FALSE(echo["topology"]["hosts"][1].contains("presented_password"));
}

TEST_CASE("an insider attacker lands in the directory, an outsider does not") {
    auto doc = base_doc();
    doc["topology"]["attacker"] = attacker_block();
    ScenarioConfig cfg = parse_config(doc);
    REQUIRE(cfg.topo.attacker.has_value());
    CHECK_EQ(cfg.topo.attacker->name, "mallory");
    CHECK_EQ(cfg.topo.attacker->capability.port, 2);
    CHECK(cfg.topo.attacker->capability.has_valid_credentials);
    CHECK_EQ(cfg.topo.attacker->reg_mode, RegResponseMode::Valid);
    CHECK_EQ(cfg.directory.size(), 3u); // both hosts plus the insider

    doc["topology"]["attacker"]["in_directory"] = false;
    doc["topology"]["attacker"]["reg_response"] = "none";
    ScenarioConfig outsider = parse_config(doc);
    CHECK_EQ(outsider.directory.size(), 2u);
    CHECK_FALSE(outsider.topo.attacker->capability.has_valid_credentials);

    doc["topology"]["attacker"]["reg_response"] = "quietly";
    CHECK(error_of(doc).find("'reg_response' in topology.attacker") != std::string::npos);
}

TEST_CASE("flows must reference configured hosts and stay within frame limits") {
    auto doc = base_doc();
    doc["flows"] = Json::array({{{"from", "h1"},
                                 {"to_ip", "10.0.0.2"},
                                 {"start_at", 70000},
                                 {"period", 10},
                                 {"count", 5},
                                 {"payload_size", 100}}});
    ScenarioConfig cfg = parse_config(doc);
    REQUIRE_EQ(cfg.flows.size(), 1u);
    CHECK_EQ(cfg.flows[0].from, "h1");
    CHECK_EQ(cfg.flows[0].to_ip.to_string(), "10.0.0.2");
    CHECK_EQ(cfg.flows[0].count, 5u);

    doc["flows"][0]["from"] = "nobody";
    CHECK(error_of(doc).find("flows[0]: unknown host 'nobody'") != std::string::npos);

    doc["flows"][0]["from"] = "h1";
    doc["flows"][0]["payload_size"] = 1501;
    CHECK(error_of(doc).find("payload_size exceeds 1500") != std::string::npos);

    doc["flows"][0]["payload_size"] = 100;
    doc["flows"][0]["period"] = 0;
    CHECK(error_of(doc).find("period must be at least 1") != std::string::npos);
}

TEST_CASE("scenario blocks are validated against the topology") {
    auto doc = base_doc();
    doc["scenario"] = {{"id", 1}, {"attack_at", 500}, {"flood_frames", 40}, {"victim", "h1"}};
    CHECK(error_of(doc).find("scenario requires topology.attacker") != std::string::npos);

    doc["topology"]["attacker"] = attacker_block();
    ScenarioConfig cfg = parse_config(doc);
    REQUIRE(cfg.scenario.has_value());
    CHECK_EQ(cfg.scenario->id, 1);
    CHECK_EQ(cfg.scenario->flood_frames, 40u);

    doc["scenario"]["id"] = 9;
    CHECK(error_of(doc).find("scenario id must be 1, 2 or 3") != std::string::npos);

    doc["scenario"]["id"] = 1;
    doc["scenario"]["flood_frames"] = 0;
    CHECK(error_of(doc).find("flood_frames of at least 1") != std::string::npos);

    doc["scenario"] = {{"id", 3}, {"attack_at", 500}, {"victim", "h1"}, {"peer", "h1"},
                       {"steal_mac", true}};
    CHECK(error_of(doc).find("peer and victim must differ") != std::string::npos);

    doc["scenario"]["peer"] = "h2";
    doc["scenario"]["attack_at"] = 100000; // == duration, outside the run
    CHECK(error_of(doc).find("attack_at must fall inside the run") != std::string::npos);

    doc["scenario"]["attack_at"] = 500;
    CHECK_EQ(error_of(doc), "");
}

TEST_CASE("the resolved echo reparses to the same configuration") {
    auto doc = base_doc();
    doc["topology"]["attacker"] = attacker_block();
    doc["flows"] = Json::array({{{"from", "h2"}, {"to_ip", "10.0.0.1"}}});
    doc["scenario"] = {{"id", 2}, {"attack_at", 900}, {"victim", "h1"}, {"peer", "h2"}};
    doc["outputs"] = {{"trace", "/tmp/t.jsonl"}, {"metrics", "/tmp/m.json"}};

    ScenarioConfig first = parse_config(doc);
    Json echo = first.to_json();
    ScenarioConfig second = parse_config(echo);
    CHECK_EQ(second.seed, first.seed);
    CHECK_EQ(second.duration, first.duration);
    CHECK_EQ(second.directory.size(), first.directory.size());
    CHECK_EQ(second.topo.hosts.size(), first.topo.hosts.size());
    CHECK_EQ(second.flows.size(), first.flows.size());
    CHECK_EQ(second.scenario->id, first.scenario->id);
    CHECK_EQ(second.outputs.trace, first.outputs.trace);
    CHECK_EQ(second.to_json(), echo); // echo is a fixed point
}

TEST_CASE("load_config reads files and reports what went wrong") {
    namespace fs = std::filesystem;
    fs::path good = fs::temp_directory_path() / "nis_cfg_good.json";
    {
        std::ofstream out(good);
        out << base_doc().dump(2);
    }
    ScenarioConfig cfg = load_config(good.string());
    CHECK_EQ(cfg.seed, 7u);
    fs::remove(good);

    CHECK_THROWS_WITH_AS(load_config("/nonexistent/nope.json"),
                         doctest::Contains("cannot open config file"), ConfigError);

    fs::path bad = fs::temp_directory_path() / "nis_cfg_bad.json";
    {
        std::ofstream out(bad);
        out << "{ not json";
    }
    try {
        load_config(bad.string());
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("config parse error") != std::string::npos);
    }
    fs::remove(bad);
}
