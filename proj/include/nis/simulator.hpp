#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "nis/attacker.hpp"
#include "nis/host.hpp"
#include "nis/lymph_switch.hpp"
#include "nis/nis_server.hpp"
#include "nis/trace.hpp"

namespace nis {

struct HostSpec {
    std::string name;
    HostConfig config;
};

struct AttackerSpec {
    std::string name = "attacker";
    AttackerCapability capability;
    Credentials creds;
    RegResponseMode reg_mode = RegResponseMode::None;
};

// Single-switch star: P ports, one server on the lymph link, hosts and at
// most one attacker on numbered ports.
struct Topology {
    PortIndex ports = 0;
    std::vector<HostSpec> hosts;
    std::optional<AttackerSpec> attacker;
    Tick link_latency = 1;
};

// Everything wrong with the topology, one message per violation.
std::vector<std::string> validate_topology(const Topology& t);

// Simulation-level knobs that are not registration-round timing.
struct SimKnobs {
    Tick first_round_at = 0; // tick of the first registration round
    Tick arp_timeout = 100;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Deterministic discrete-event engine. Events execute in (at, seq) order with
// seq assigned at schedule time; all randomness flows from per-entity streams
// derived from the seed, so equal (config, seed) means byte-identical traces.
class Simulation {
public:
    Simulation(Topology topo, TimerConfig timers, SimKnobs knobs, std::uint64_t seed,
               std::vector<Credentials> directory); // throws ConfigError
    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    // executes every queued event with at <= end; resumable
    void run_until(Tick end);
    // run_until plus the closing bookkeeping event; call once, at the horizon
    void finish(Tick end);

    Tick now() const { return now_; }
    const Trace& trace() const { return trace_; }
    Trace& trace() { return trace_; }

    // orchestration hooks for scenario scripts
    void schedule_action(Tick at, std::function<void(Simulation&)> fn);
    void host_send_ip(const std::string& host, Ipv4 dst, std::uint16_t ethertype,
                      std::vector<std::uint8_t> payload);
    // stamps attack_tx and puts the frames on the attacker's link, one per
    // `spacing` ticks (0 = all in the current tick)
    void inject_attack_frames(std::vector<Frame> frames, Tick spacing = 0);
    // unplugs the host's port (its frames stop reaching the switch)
    void detach_host(const std::string& host);
    // replugs the attacker onto a (possibly stolen) port
    void set_attacker_port(PortIndex port);

    LymphSwitch& lymph_switch() { return switch_; }
    NisServer& server() { return server_; }
    Host* find_host(const std::string& name);
    Attacker* attacker() { return attacker_ ? &*attacker_ : nullptr; }
    const Topology& topology() const { return topo_; }
    const TimerConfig& timers() const { return timers_; }

private:
    struct FrameToSwitch {
        PortIndex port;
        Frame frame;
    };
    struct FrameToEndpoint {
        PortIndex port;
        Frame frame;
    };
    struct RegRelayToServer {
        PortIndex port;
        std::vector<std::uint8_t> payload;
    };
    struct ReportToServer {
        FrameReport report;
    };
    struct ControlToSwitch {
        ControlMsg msg;
    };
    struct EntityTimer {
        int host_index; // -1 = attacker
        TimerRequest req;
    };
    struct RoundStart {};
    struct RoundEnd {};
    struct Scripted {
        std::function<void(Simulation&)> fn;
    };
    using EventPayload = std::variant<FrameToSwitch, FrameToEndpoint, RegRelayToServer,
                                      ReportToServer, ControlToSwitch, EntityTimer, RoundStart,
                                      RoundEnd, Scripted>;
    struct QueuedEvent {
        Tick at;
        std::uint64_t seq;
        EventPayload payload;
        friend bool operator>(const QueuedEvent& a, const QueuedEvent& b) {
            return a.at != b.at ? a.at > b.at : a.seq > b.seq;
        }
    };

    void schedule(Tick at, EventPayload payload);
    void execute(QueuedEvent ev);
    void apply_switch_actions(std::vector<SwitchAction> actions);
    void apply_endpoint_actions(int host_index, std::vector<HostAction> actions);
    void send_control_to_switch(std::vector<ControlMsg> msgs);
    std::optional<PortIndex> endpoint_port(int host_index) const;
    static bool is_data(const Frame& f) { return f.ethertype != ETHERTYPE_NIS_CONTROL; }

    Topology topo_;
    TimerConfig timers_;
    SimKnobs knobs_;
    Trace trace_;

    LymphSwitch switch_;
    NisServer server_;
    std::vector<std::unique_ptr<Host>> hosts_;
    std::optional<Attacker> attacker_;

    // port -> endpoint: index into hosts_, -1 for the attacker, nullopt empty
    std::vector<std::optional<int>> port_map_;
    std::vector<bool> host_detached_;
    PortIndex attacker_port_ = 0;

    std::priority_queue<QueuedEvent, std::vector<QueuedEvent>, std::greater<>> queue_;
    std::uint64_t next_seq_ = 0;
    Tick now_ = 0;
    std::uint64_t data_frames_in_flight_ = 0; // host->switch legs only
};

} // namespace nis
