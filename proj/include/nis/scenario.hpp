#pragma once

#include <memory>
#include <optional>
#include <string>

#include "nis/config.hpp"
#include "nis/metrics.hpp"

namespace nis {

// What the attack achieved, read back out of the trace.
struct AttackOutcome {
    std::uint64_t frames_sent = 0;    // attack frames injected
    std::uint64_t frames_dropped = 0; // attack frames that never reached a host
    std::uint64_t frames_delivered_to_attacker = 0; // unicasts captured post-hijack
    std::uint64_t reports_generated = 0;
    std::optional<Tick> port_shut_at;         // attacker's port, if ever shut
    bool victim_cache_poisoned = false;
    std::optional<Tick> window_ticks; // attack start -> last capture (id 3)
};

struct ScenarioResult {
    AttackOutcome outcome;
    std::string verdict;
    std::string expected_verdict;
    bool as_expected = false;
    Json metrics;            // compute_metrics over the full run
    std::string trace_jsonl; // the run's event log, one JSON object per line
};

// The defense claim each storyline is expected to demonstrate.
//   1 -> "blocked": the flood is reported and the port shut, nothing forwarded
//   2 -> "degraded": the peer's cache is poisoned but traffic only blackholes
//   3 -> "succeeded_within_window": interception works, dies at the next round
std::string expected_verdict(int scenario_id);

// Simulation plus the config's scripted traffic flows, ready to run.
std::unique_ptr<Simulation> build_simulation(const ScenarioConfig& cfg);

// Runs the configured attack storyline end to end. Throws ConfigError when
// the config carries no scenario block.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

} // namespace nis
