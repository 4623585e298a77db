#include "nis/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace nis {

namespace {

struct Errors {
    std::vector<std::string> list;
    void add(std::string e) { list.push_back(std::move(e)); }
};

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += "; ";
        out += p;
    }
    return out;
}

// Strict view over one JSON object: typed extraction plus a final sweep that
// rejects every key no getter asked about.
class Fields {
public:
    Fields(const Json& j, std::string where, Errors& errs)
        : j_(j), where_(std::move(where)), errs_(errs) {
        if (!j_.is_object()) {
            errs_.add(where_ + " must be an object");
            broken_ = true;
        }
    }

    bool broken() const { return broken_; }

    const Json* raw(const char* key, bool required) {
        if (broken_) return nullptr;
        seen_.insert(key);
        auto it = j_.find(key);
        if (it == j_.end()) {
            if (required) errs_.add("missing required key '" + std::string(key) + "' in " + where_);
            return nullptr;
        }
        return &*it;
    }

    bool u64(const char* key, std::uint64_t& out, bool required) {
        const Json* v = raw(key, required);
        if (!v) return false;
        if (v->is_number_unsigned()) {
            out = v->get<std::uint64_t>();
            return true;
        }
        if (v->is_number_integer() && v->get<std::int64_t>() >= 0) {
            out = static_cast<std::uint64_t>(v->get<std::int64_t>());
            return true;
        }
        type_error(key, "a non-negative integer");
        return false;
    }

    bool str(const char* key, std::string& out, bool required) {
        const Json* v = raw(key, required);
        if (!v) return false;
        if (!v->is_string()) {
            type_error(key, "a string");
            return false;
        }
        out = v->get<std::string>();
        return true;
    }

    bool boolean(const char* key, bool& out, bool required) {
        const Json* v = raw(key, required);
        if (!v) return false;
        if (!v->is_boolean()) {
            type_error(key, "a boolean");
            return false;
        }
        out = v->get<bool>();
        return true;
    }

    // object/array sub-nodes; null counts as absent for optional keys
    const Json* object(const char* key, bool required) {
        const Json* v = raw(key, required);
        if (!v || v->is_null()) return nullptr;
        if (!v->is_object()) {
            type_error(key, "an object");
            return nullptr;
        }
        return v;
    }

    const Json* array(const char* key, bool required) {
        const Json* v = raw(key, required);
        if (!v || v->is_null()) return nullptr;
        if (!v->is_array()) {
            type_error(key, "an array");
            return nullptr;
        }
        return v;
    }

    void finish() {
        if (broken_) return;
        for (const auto& item : j_.items())
            if (!seen_.count(item.key()))
                errs_.add("unknown key '" + item.key() + "' in " + where_);
    }

private:
    void type_error(const char* key, const char* expected) {
        errs_.add("key '" + std::string(key) + "' in " + where_ + " must be " + expected);
    }

    const Json& j_;
    std::string where_;
    Errors& errs_;
    std::set<std::string> seen_;
    bool broken_ = false;
};

Address48 parse_mac(Fields& f, const char* key, const std::string& where, Errors& errs) {
    std::string text;
    if (!f.str(key, text, true)) return Address48();
    auto mac = Address48::parse(text);
    if (!mac) {
        errs.add("key '" + std::string(key) + "' in " + where + ": invalid address '" + text + "'");
        return Address48();
    }
    return *mac;
}

Ipv4 parse_ip(Fields& f, const char* key, const std::string& where, Errors& errs) {
    std::string text;
    if (!f.str(key, text, true)) return Ipv4();
    auto ip = Ipv4::parse(text);
    if (!ip) {
        errs.add("key '" + std::string(key) + "' in " + where + ": invalid IPv4 '" + text + "'");
        return Ipv4();
    }
    return *ip;
}

void parse_timers(const Json& j, TimerConfig& t, Errors& errs) {
    Fields f(j, "timers", errs);
    f.u64("t_p", t.t_p, false);
    f.u64("t_r", t.t_r, false);
    f.u64("t_d", t.t_d, false);
    f.u64("report_window", t.report_window, false);
    std::uint64_t threshold = t.drop_threshold;
    f.u64("drop_threshold", threshold, false);
    t.drop_threshold = static_cast<std::uint32_t>(threshold);
    f.finish();
}

// returns the true (directory) credentials; the spec in *out presents
// presented_password when the document supplies one
Credentials parse_host(const Json& j, const std::string& where, HostSpec& out, Errors& errs) {
    Fields f(j, where, errs);
    f.str("name", out.name, true);
    std::uint64_t port = 0;
    f.u64("port", port, true);
    out.config.port = static_cast<PortIndex>(port);
    Credentials truth;
    truth.ip = parse_ip(f, "ip", where, errs);
    truth.mac = parse_mac(f, "mac", where, errs);
    f.str("os", truth.os, true);
    f.str("username", truth.username, true);
    f.str("password", truth.password, true);
    out.config.creds = truth;
    std::string presented;
    if (f.str("presented_password", presented, false)) out.config.creds.password = presented;
    f.finish();
    return truth;
}

RegResponseMode parse_reg_mode(const std::string& text, Errors& errs) {
    if (text == "none") return RegResponseMode::None;
    if (text == "invalid") return RegResponseMode::Invalid;
    if (text == "valid") return RegResponseMode::Valid;
    errs.add("key 'reg_response' in topology.attacker must be one of "
             "\"none\", \"invalid\", \"valid\" (got \"" + text + "\")");
    return RegResponseMode::None;
}

// returns true when the attacker belongs in the directory (insider)
bool parse_attacker(const Json& j, AttackerSpec& out, Errors& errs) {
    const std::string where = "topology.attacker";
    Fields f(j, where, errs);
    f.str("name", out.name, false);
    std::uint64_t port = 0;
    if (f.u64("port", port, true)) out.capability.port = static_cast<PortIndex>(port);
    out.creds.ip = parse_ip(f, "ip", where, errs);
    out.creds.mac = parse_mac(f, "mac", where, errs);
    f.str("os", out.creds.os, false);
    f.str("username", out.creds.username, false);
    f.str("password", out.creds.password, false);
    bool in_directory = false;
    f.boolean("in_directory", in_directory, false);
    std::string mode = "none";
    f.str("reg_response", mode, false);
    out.reg_mode = parse_reg_mode(mode, errs);
    out.capability.has_valid_credentials = in_directory;
    f.finish();
    return in_directory;
}

void parse_flow(const Json& j, const std::string& where, FlowSpec& out, Errors& errs) {
    Fields f(j, where, errs);
    f.str("from", out.from, true);
    out.to_ip = parse_ip(f, "to_ip", where, errs);
    f.u64("start_at", out.start_at, false);
    f.u64("period", out.period, false);
    f.u64("count", out.count, false);
    std::uint64_t size = out.payload_size;
    f.u64("payload_size", size, false);
    out.payload_size = static_cast<std::size_t>(size);
    f.finish();
    if (out.period == 0) errs.add(where + ": period must be at least 1");
    if (out.payload_size > MAX_PAYLOAD_LEN)
        errs.add(where + ": payload_size exceeds " + std::to_string(MAX_PAYLOAD_LEN));
}

void parse_scenario(const Json& j, ScenarioSpec& out, Errors& errs) {
    const std::string where = "scenario";
    Fields f(j, where, errs);
    std::uint64_t id = 0;
    if (f.u64("id", id, true)) out.id = static_cast<int>(id);
    f.u64("attack_at", out.attack_at, true);
    f.u64("flood_frames", out.flood_frames, false);
    f.str("victim", out.victim, false);
    f.str("peer", out.peer, false);
    f.boolean("steal_mac", out.steal_mac, false);
    f.finish();
}

void parse_outputs(const Json& j, OutputSpec& out, Errors& errs) {
    Fields f(j, "outputs", errs);
    f.str("trace", out.trace, false);
    f.str("metrics", out.metrics, false);
    f.finish();
}

} // namespace

ScenarioConfig parse_config(const Json& doc) {
    Errors errs;
    ScenarioConfig cfg;

    Fields top(doc, "config", errs);
    top.u64("seed", cfg.seed, true);
    top.u64("duration", cfg.duration, true);
    top.u64("first_round_at", cfg.first_round_at, false);
    top.u64("arp_timeout", cfg.arp_timeout, false);
    if (const Json* t = top.object("timers", false)) parse_timers(*t, cfg.timers, errs);

    if (const Json* topo = top.object("topology", true)) {
        Fields tf(*topo, "topology", errs);
        std::uint64_t ports = 0;
        if (tf.u64("ports", ports, true)) cfg.topo.ports = static_cast<PortIndex>(ports);
        std::uint64_t latency = cfg.topo.link_latency;
        tf.u64("link_latency", latency, false);
        cfg.topo.link_latency = latency;
        if (const Json* hosts = tf.array("hosts", true)) {
            for (std::size_t i = 0; i < hosts->size(); ++i) {
                HostSpec spec;
                Credentials truth = parse_host(
                    (*hosts)[i], "topology.hosts[" + std::to_string(i) + "]", spec, errs);
                cfg.topo.hosts.push_back(std::move(spec));
                cfg.directory.push_back(std::move(truth));
            }
        }
        if (const Json* atk = tf.raw("attacker", false); atk && !atk->is_null()) {
            AttackerSpec spec;
            bool insider = parse_attacker(*atk, spec, errs);
            if (insider) cfg.directory.push_back(spec.creds);
            cfg.topo.attacker = std::move(spec);
        }
        tf.finish();
    }

    if (const Json* flows = top.array("flows", false)) {
        for (std::size_t i = 0; i < flows->size(); ++i) {
            FlowSpec flow;
            parse_flow((*flows)[i], "flows[" + std::to_string(i) + "]", flow, errs);
            cfg.flows.push_back(std::move(flow));
        }
    }
    if (const Json* sc = top.raw("scenario", false); sc && !sc->is_null()) {
        ScenarioSpec spec;
        parse_scenario(*sc, spec, errs);
        cfg.scenario = std::move(spec);
    }
    if (const Json* out = top.object("outputs", false)) parse_outputs(*out, cfg.outputs, errs);
    top.finish();

    // cross-field checks (only once the shape is sound enough to reason about)
    if (cfg.duration == 0) errs.add("duration must be at least 1");
    for (const auto& e : validate_timer_config(cfg.timers)) errs.add(e);
    for (const auto& e : validate_topology(cfg.topo)) errs.add(e);

    auto known_host = [&](const std::string& name) {
        for (const auto& h : cfg.topo.hosts)
            if (h.name == name) return true;
        return false;
    };
    for (std::size_t i = 0; i < cfg.flows.size(); ++i)
        if (!known_host(cfg.flows[i].from))
            errs.add("flows[" + std::to_string(i) + "]: unknown host '" + cfg.flows[i].from + "'");

    if (cfg.scenario) {
        const ScenarioSpec& s = *cfg.scenario;
        if (s.id < 1 || s.id > 3)
            errs.add("scenario id must be 1, 2 or 3 (got " + std::to_string(s.id) + ")");
        if (!cfg.topo.attacker) errs.add("scenario requires topology.attacker");
        if (s.attack_at >= cfg.duration)
            errs.add("scenario attack_at must fall inside the run (duration " +
                     std::to_string(cfg.duration) + ")");
        if (!known_host(s.victim))
            errs.add("scenario victim '" + s.victim + "' is not a configured host");
        if (s.id == 1 && s.flood_frames == 0)
            errs.add("scenario 1 needs flood_frames of at least 1");
        if ((s.id == 2 || s.id == 3)) {
            if (!known_host(s.peer))
                errs.add("scenario peer '" + s.peer + "' is not a configured host");
            else if (s.peer == s.victim)
                errs.add("scenario peer and victim must differ");
        }
    }

    if (!errs.list.empty()) throw ConfigError(join(errs.list));
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError("config parse error in '" + path + "': " + e.what());
    }
    return parse_config(doc);
}

Json ScenarioConfig::to_json() const {
    Json hosts = Json::array();
    for (std::size_t i = 0; i < topo.hosts.size(); ++i) {
        const HostSpec& h = topo.hosts[i];
        const Credentials& truth = directory[i]; // hosts come first in the directory
        Json entry = {{"name", h.name},
                      {"port", h.config.port},
                      {"ip", truth.ip.to_string()},
                      {"mac", truth.mac.to_string()},
                      {"os", truth.os},
                      {"username", truth.username},
                      {"password", truth.password}};
        if (h.config.creds.password != truth.password)
            entry["presented_password"] = h.config.creds.password;
        hosts.push_back(std::move(entry));
    }

    Json attacker = nullptr;
    if (topo.attacker) {
        const AttackerSpec& a = *topo.attacker;
        const char* mode = a.reg_mode == RegResponseMode::None      ? "none"
                           : a.reg_mode == RegResponseMode::Invalid ? "invalid"
                                                                    : "valid";
        attacker = {{"name", a.name},
                    {"port", a.capability.port},
                    {"ip", a.creds.ip.to_string()},
                    {"mac", a.creds.mac.to_string()},
                    {"os", a.creds.os},
                    {"username", a.creds.username},
                    {"password", a.creds.password},
                    {"in_directory", directory.size() > topo.hosts.size()},
                    {"reg_response", mode}};
    }

    Json flows_json = Json::array();
    for (const auto& fl : flows)
        flows_json.push_back({{"from", fl.from},
                              {"to_ip", fl.to_ip.to_string()},
                              {"start_at", fl.start_at},
                              {"period", fl.period},
                              {"count", fl.count},
                              {"payload_size", fl.payload_size}});

    Json scenario_json = nullptr;
    if (scenario)
        scenario_json = {{"id", scenario->id},
                         {"attack_at", scenario->attack_at},
                         {"flood_frames", scenario->flood_frames},
                         {"victim", scenario->victim},
                         {"peer", scenario->peer},
                         {"steal_mac", scenario->steal_mac}};

    return Json{{"seed", seed},
                {"duration", duration},
                {"first_round_at", first_round_at},
                {"arp_timeout", arp_timeout},
                {"timers",
                 {{"t_p", timers.t_p},
                  {"t_r", timers.t_r},
                  {"t_d", timers.t_d},
                  {"report_window", timers.report_window},
                  {"drop_threshold", timers.drop_threshold}}},
                {"topology",
                 {{"ports", topo.ports},
                  {"link_latency", topo.link_latency},
                  {"hosts", hosts},
                  {"attacker", attacker}}},
                {"flows", flows_json},
                {"scenario", scenario_json},
                {"outputs", {{"trace", outputs.trace}, {"metrics", outputs.metrics}}}};
}

} // namespace nis
