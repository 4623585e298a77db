#include "nis/metrics.hpp"

namespace nis {

namespace {

constexpr int CONTROL_ETHERTYPE = 0x88B5;

bool is_data_event(const TraceEvent& e) {
    return e.fields.value("ethertype", CONTROL_ETHERTYPE) != CONTROL_ETHERTYPE;
}

} // namespace

TraceStats scan_trace(const Trace& trace, const Json& resolved_config) {
    TraceStats s;
    const auto& events = trace.events();
    if (events.empty()) return s;

    // ground truth from the config
    bool has_attacker = false;
    PortIndex attacker_port = 0;
    std::map<std::string, std::string> ip_owner; // ip text -> mac text
    if (resolved_config.contains("topology")) {
        const auto& topo = resolved_config.at("topology");
        if (topo.contains("attacker") && !topo.at("attacker").is_null()) {
            has_attacker = true;
            attacker_port = topo.at("attacker").value("port", 0);
        }
        if (topo.contains("hosts"))
            for (const auto& h : topo.at("hosts"))
                ip_owner[h.value("ip", "")] = h.value("mac", "");
    }

    bool in_auth = false;
    Tick auth_start = 0;
    bool saw_run_end = false;

    for (const auto& e : events) {
        s.end_at = e.at;

        if (e.entity == "sim") {
            if (e.event == "run_end") {
                s.in_flight = e.fields.value("in_flight", 0ull);
                saw_run_end = true;
            } else if (e.event == "link_drop") {
                if (e.fields.value("direction", "") == "to_switch") {
                    if (is_data_event(e)) ++s.link_dropped_to_switch;
                } else {
                    if (is_data_event(e)) ++s.link_dropped_to_endpoint;
                }
            } else if (e.event == "attacker_attach") {
                // the attacker took a new seat; shutdown bookkeeping follows
                // the current seat, not the abandoned one
                attacker_port = e.fields.value("port", attacker_port);
                s.attacker_port_shut_at.reset();
            }
            continue;
        }

        if (e.entity == "switch") {
            if (e.event == "mode_change") {
                bool auth = e.fields.value("mode", "") == "AUTHORIZATION";
                if (auth && !in_auth) {
                    in_auth = true;
                    auth_start = e.at;
                } else if (!auth && in_auth) {
                    s.auth_ticks += e.at - auth_start;
                    in_auth = false;
                }
            } else if (e.event == "deliver" || e.event == "flood") {
                if (is_data_event(e)) {
                    ++s.delivered_data;
                    int in_port = e.fields.value("in_port", -1);
                    bool from_attacker =
                        has_attacker && in_port == static_cast<int>(attacker_port);
                    if (from_attacker)
                        ++s.attack_forwarded;
                    else
                        ++s.delivered_honest;
                    if (e.event == "deliver" && has_attacker &&
                        e.fields.value("out_port", -1) == static_cast<int>(attacker_port))
                        s.attacker_deliveries.push_back(e.at);
                }
            } else if (e.event == "drop") {
                if (is_data_event(e)) ++s.dropped_data;
                std::string reason = e.fields.value("reason", "unknown");
                ++s.dropped_by_reason[reason];
                int port = e.fields.value("port", -1);
                if (has_attacker && port == static_cast<int>(attacker_port))
                    s.attacker_port_drops.push_back(e.at);
                if (reason == "unknown_dst")
                    s.unknown_dst_drops.emplace_back(e.at, e.fields.value("dst", ""));
            } else if (e.event == "report") {
                auto port = static_cast<PortIndex>(e.fields.value("port", 0));
                ++s.reports_per_port[port];
            } else if (e.event == "port_shut") {
                if (has_attacker &&
                    e.fields.value("port", -1) == static_cast<int>(attacker_port) &&
                    !e.fields.value("already_shut", false) && !s.attacker_port_shut_at)
                    s.attacker_port_shut_at = e.at;
            }
            continue;
        }

        if (e.entity == "server") {
            if (e.event == "round_start") {
                ++s.rounds_started;
                s.round_starts.push_back(e.at);
            } else if (e.event == "round_end") {
                ++s.rounds_ended;
            } else if (e.event == "reg_accepted") {
                ++s.reg_accepted;
            } else if (e.event == "reg_rejected") {
                ++s.reg_rejected;
            } else if (e.event == "late_reg_res") {
                ++s.late_reg_res;
            } else if (e.event == "port_shutdown_cmd") {
                ++s.shutdown_commands;
                if (!s.first_shutdown_cmd_at) s.first_shutdown_cmd_at = e.at;
            }
            continue;
        }

        // host or attacker entities
        if (e.event == "tx") {
            if (is_data_event(e)) ++s.sent_honest;
        } else if (e.event == "attack_tx") {
            if (is_data_event(e)) ++s.attack_sent;
        } else if (e.event == "attacker_rx") {
            if (is_data_event(e)) ++s.attacker_rx_data;
        } else if (e.event == "arp_cache_update") {
            auto ip = e.fields.value("ip", "");
            auto mac = e.fields.value("mac", "");
            auto truth = ip_owner.find(ip);
            if (truth != ip_owner.end() && truth->second != mac) {
                s.victim_cache_poisoned = true;
                if (!s.first_poison_at) s.first_poison_at = e.at;
            }
        }
    }

    if (in_auth) s.auth_ticks += (s.end_at + 1) - auth_start; // window still open at the cut
    s.total_ticks = s.end_at + 1;
    if (!saw_run_end) s.in_flight = 0;
    if (s.total_ticks > 0)
        s.downtime_fraction = static_cast<double>(s.auth_ticks) /
                              static_cast<double>(s.total_ticks);
    return s;
}

Json compute_metrics(const Trace& trace, const Json& resolved_config) {
    TraceStats s = scan_trace(trace, resolved_config);

    Json dropped = Json::object();
    std::uint64_t dropped_total = 0;
    for (const auto& [reason, n] : s.dropped_by_reason) {
        dropped[reason] = n;
        dropped_total += n;
    }
    dropped["total"] = dropped_total;

    Json reports = Json::object();
    for (const auto& [port, n] : s.reports_per_port) reports[std::to_string(port)] = n;

    std::uint64_t sent_total = s.sent_honest + s.attack_sent;
    std::uint64_t accounted =
        s.delivered_data + s.dropped_data + s.link_dropped_to_switch + s.in_flight;
    double delivery_rate = s.sent_honest == 0
                               ? 0.0
                               : static_cast<double>(s.delivered_honest) /
                                     static_cast<double>(s.sent_honest);

    Json m = Json::object();
    m["total_ticks"] = s.total_ticks;
    m["auth_ticks"] = s.auth_ticks;
    m["downtime_fraction"] = s.downtime_fraction;
    m["delivery_rate"] = delivery_rate;
    m["frames"] = {{"sent", sent_total},
                   {"sent_honest", s.sent_honest},
                   {"attack_sent", s.attack_sent},
                   {"delivered", s.delivered_data},
                   {"delivered_honest", s.delivered_honest},
                   {"attack_forwarded", s.attack_forwarded},
                   {"dropped", dropped},
                   {"link_dropped_to_switch", s.link_dropped_to_switch},
                   {"link_dropped_to_endpoint", s.link_dropped_to_endpoint},
                   {"in_flight", s.in_flight}};
    m["conservation"] = {{"sent", sent_total},
                         {"accounted", accounted},
                         {"holds", sent_total == accounted}};
    m["reports_per_port"] = reports;
    m["server"] = {{"rounds_started", s.rounds_started},
                   {"rounds_ended", s.rounds_ended},
                   {"registrations_accepted", s.reg_accepted},
                   {"registrations_rejected", s.reg_rejected},
                   {"late_reg_res", s.late_reg_res},
                   {"shutdown_commands", s.shutdown_commands}};
    Json attack = Json::object();
    attack["attacker_rx_data"] = s.attacker_rx_data;
    attack["victim_cache_poisoned"] = s.victim_cache_poisoned;
    attack["attacker_port_shut_at"] =
        s.attacker_port_shut_at ? Json(*s.attacker_port_shut_at) : Json(nullptr);
    m["attack"] = attack;
    m["config"] = resolved_config;
    return m;
}

} // namespace nis
