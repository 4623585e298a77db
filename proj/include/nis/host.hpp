#pragma once

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nis/control.hpp"
#include "nis/frame.hpp"
#include "nis/rng.hpp"
#include "nis/trace.hpp"

namespace nis {

// What a host is configured with; `creds` is what it will present at
// registration (a misconfigured password here exercises the reject path).
struct HostConfig {
    Credentials creds;
    PortIndex port = 0;
};

struct HostTimings {
    Tick t_d = 1;          // backoff decrement interval
    Tick arp_timeout = 100; // resolution failure deadline
};

enum class SendResult { Sent, Deferred, Unregistered };

enum class HostTimerKind { BackoffFire, ArpTimeout };

// Side effects a host hands back to the simulator.
struct SendFrameAction {
    Frame frame;
};
struct TimerRequest {
    Tick at = 0;
    HostTimerKind kind = HostTimerKind::BackoffFire;
    std::uint64_t gen = 0; // stale-timer guard; host ignores fires with old gen
    Ipv4 ip;               // ArpTimeout only
};
using HostAction = std::variant<SendFrameAction, TimerRequest>;

// Honest host: registration backoff, ID-stamped transmission, acceptance
// filtering on its own ID, and the deliberately permissive ARP cache.
class Host {
public:
    Host(std::string name, HostConfig cfg, HostTimings timings, Rng rng, Trace* trace);

    std::vector<HostAction> on_frame(const Frame& f, Tick now);
    std::vector<HostAction> on_timer(const TimerRequest& t, Tick now);

    // data-plane send toward a known MAC; stamps src with the current ID
    std::pair<SendResult, std::vector<HostAction>> send_data(Address48 dst_mac,
                                                             std::uint16_t ethertype,
                                                             std::vector<std::uint8_t> payload,
                                                             Tick now);
    // IP-level send: consults the ARP cache, resolving on a miss
    std::vector<HostAction> send_to_ip(Ipv4 ip, std::uint16_t ethertype,
                                       std::vector<std::uint8_t> payload, Tick now);

    const std::string& name() const { return name_; }
    const HostConfig& config() const { return cfg_; }
    std::optional<HostId> current_id() const { return current_id_; }
    std::optional<std::uint32_t> backoff() const { return backoff_; }
    bool in_auth_window() const { return in_auth_window_; }
    const std::map<Ipv4, Address48>& arp_cache() const { return arp_cache_; }
    std::size_t outbox_size() const { return outbox_.size(); }
    std::uint64_t frames_accepted() const { return accepted_; }
    std::uint64_t frames_ignored() const { return ignored_; }

    static constexpr std::size_t OUTBOX_DEPTH = 64;

private:
    struct Pending {
        std::uint16_t ethertype;
        std::vector<std::uint8_t> payload;
    };

    std::vector<HostAction> on_control(const ControlMsg& msg, Tick now);
    void on_arp(const Frame& f, Tick now, std::vector<HostAction>& out);
    Frame control_frame(const ControlMsg& msg) const;
    void log(Tick at, const char* event, Json fields) const;

    std::string name_;
    HostConfig cfg_;
    HostTimings timings_;
    Rng rng_;
    Trace* trace_;

    std::optional<HostId> current_id_;
    std::optional<std::uint32_t> backoff_;
    std::uint32_t reg_epoch_ = 0;
    std::uint64_t reg_gen_ = 0;
    bool in_auth_window_ = false;

    std::deque<std::pair<Address48, Pending>> outbox_; // deferred sends, oldest first
    std::map<Ipv4, Address48> arp_cache_;
    struct PendingArp {
        std::uint64_t gen = 0;
        std::vector<std::pair<Pending, Tick>> queued; // payloads awaiting resolution
    };
    std::map<Ipv4, PendingArp> pending_arp_;
    std::uint64_t arp_gen_ = 0;

    std::uint64_t accepted_ = 0;
    std::uint64_t ignored_ = 0;
};

} // namespace nis
