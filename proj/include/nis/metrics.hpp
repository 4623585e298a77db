#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nis/trace.hpp"

namespace nis {

// Everything the downstream consumers (metrics JSON, scenario verdicts,
// acceptance checks) need from one linear pass over a trace. The resolved
// config supplies ground truth the trace alone cannot carry: the attacker's
// identity/port and the true IP-to-MAC ownership map.
struct TraceStats {
    Tick end_at = 0;
    std::uint64_t total_ticks = 0;

    std::uint64_t sent_honest = 0;  // host "tx" events (data frames only)
    std::uint64_t attack_sent = 0;  // attacker injections
    std::uint64_t delivered_data = 0; // switch deliver+flood of data frames (flood counts once)
    std::uint64_t delivered_honest = 0;
    std::uint64_t attack_forwarded = 0; // deliver/flood whose ingress was the attacker port
    std::uint64_t dropped_data = 0;
    std::map<std::string, std::uint64_t> dropped_by_reason;
    std::uint64_t link_dropped_to_switch = 0;
    std::uint64_t link_dropped_to_endpoint = 0;
    std::uint64_t in_flight = 0; // from the run_end bookkeeping event

    std::uint64_t auth_ticks = 0;
    double downtime_fraction = 0.0;

    std::map<PortIndex, std::uint64_t> reports_per_port;
    std::uint64_t shutdown_commands = 0;
    std::uint64_t rounds_started = 0;
    std::uint64_t rounds_ended = 0;
    std::uint64_t reg_accepted = 0;
    std::uint64_t reg_rejected = 0;
    std::uint64_t late_reg_res = 0;

    // attack-view extras (all empty without an attacker in the config)
    std::vector<Tick> attacker_deliveries;   // data frames DELIVERed to the attacker port
    std::vector<Tick> attacker_port_drops;   // drops of frames the attacker sent
    std::vector<std::pair<Tick, std::string>> unknown_dst_drops; // (at, dst) anywhere
    std::optional<Tick> attacker_port_shut_at;
    std::optional<Tick> first_shutdown_cmd_at;
    std::uint64_t attacker_rx_data = 0;
    bool victim_cache_poisoned = false;
    std::optional<Tick> first_poison_at;
    std::vector<Tick> round_starts;
};

TraceStats scan_trace(const Trace& trace, const Json& resolved_config);

// The metrics document: pure function of (trace, resolved config); the config
// is embedded verbatim under "config".
Json compute_metrics(const Trace& trace, const Json& resolved_config);

} // namespace nis
