#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nis/simulator.hpp"

namespace nis {

// One scripted unicast stream: `count` frames of `payload_size` bytes from
// host `from` to `to_ip`, one every `period` ticks starting at `start_at`.
struct FlowSpec {
    std::string from;
    Ipv4 to_ip;
    Tick start_at = 0;
    Tick period = 1;
    std::uint64_t count = 1;
    std::size_t payload_size = 8;
};

// Attack storyline selector plus its knobs (consumed by run_scenario).
struct ScenarioSpec {
    int id = 0;       // 1 = port stealing, 2 = cache-poison blackhole, 3 = interception
    Tick attack_at = 0;
    std::uint64_t flood_frames = 0; // scenario 1: burst volume
    std::string victim;
    std::string peer;        // scenarios 2/3: whose traffic gets misdirected
    bool steal_mac = false;  // scenario 3: the attacker also holds the victim MAC
};

struct OutputSpec {
    std::string trace;   // JSONL path, "" = don't write
    std::string metrics; // JSON path, "" = don't write
};

// A fully validated scenario document. `topo` carries the credentials each
// host PRESENTS on the wire (a host may present a wrong password); the
// `directory` holds the ground truth the server checks against.
struct ScenarioConfig {
    std::uint64_t seed = 1;
    Tick duration = 1;
    TimerConfig timers;
    Topology topo;
    std::vector<Credentials> directory;
    Tick first_round_at = 0;
    Tick arp_timeout = 100;
    std::vector<FlowSpec> flows;
    std::optional<ScenarioSpec> scenario;
    OutputSpec outputs;

    SimKnobs knobs() const {
        SimKnobs k;
        k.first_round_at = first_round_at;
        k.arp_timeout = arp_timeout;
        return k;
    }

    // the document echoed back with every default made explicit
    Json to_json() const;
};

// Both throw ConfigError listing every problem found, "; "-separated.
// Unknown keys are fatal at every level: a typo must not silently skew a run.
ScenarioConfig parse_config(const Json& doc);
ScenarioConfig load_config(const std::string& path);

} // namespace nis
