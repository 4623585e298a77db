#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "nis/control.hpp"
#include "nis/frame.hpp"
#include "nis/trace.hpp"

namespace nis {

enum class SwitchMode { Normal, Authorization };

enum class PortAdmin { Up, Shut };

struct CamEntry {
    PortIndex port = 0;
    Address48 mac;
    HostId id;
    std::uint32_t epoch = 0;

    friend bool operator==(const CamEntry& a, const CamEntry& b) {
        return a.port == b.port && a.mac == b.mac && a.id == b.id && a.epoch == b.epoch;
    }
};

enum class BindResult { ok, not_in_authorization, duplicate_mac, duplicate_id, port_shut, bad_port };

// Outward effects of a switch step; the simulator turns these into link
// deliveries. Flood is resolved to a concrete port list at action time so the
// trace shows exactly who got a copy.
struct DeliverAction {
    PortIndex in_port; // ingress port, or the port itself for server-originated frames
    PortIndex out_port;
    Frame frame;
};
struct FloodAction {
    std::optional<PortIndex> in_port; // nullopt when the frame originates from the control plane
    std::vector<PortIndex> ports;
    Frame frame;
};
struct DropAction {
    PortIndex port;
    Frame frame;
    DropReason reason;
};
struct ReportAction {
    FrameReport report; // sent to the server on the lymph link
};
struct RelayRegistrationAction {
    PortIndex port; // physical ingress port; overrides whatever the frame claimed
    std::vector<std::uint8_t> payload;
};
using SwitchAction =
    std::variant<DeliverAction, FloodAction, DropAction, ReportAction, RelayRegistrationAction>;

// The lymph switch: extended CAM (port, mac, id, epoch), two modes, ID<->MAC
// swap on the forwarding path, illegal-frame reporting over the lymph link.
class LymphSwitch {
public:
    LymphSwitch(PortIndex num_ports, Trace* trace);

    // data-plane ingress; frames arriving on a SHUT or unknown port vanish
    std::vector<SwitchAction> on_frame_ingress(PortIndex port, const Frame& f, Tick now);

    // control messages arriving from the server over the lymph link
    std::vector<SwitchAction> on_control(const ControlMsg& msg, Tick now);

    BindResult cam_bind(PortIndex port, Address48 mac, HostId id, std::uint32_t epoch, Tick now);
    std::vector<SwitchAction> begin_authorization(std::uint32_t epoch, Tick now);
    std::vector<SwitchAction> end_authorization(Tick now);
    void shutdown_port(PortIndex port, Tick now);

    SwitchMode mode() const { return mode_; }
    PortIndex num_ports() const { return static_cast<PortIndex>(ports_.size()); }
    PortAdmin port_admin(PortIndex p) const { return ports_.at(p); }
    std::size_t cam_size() const;
    const CamEntry* entry_at(PortIndex p) const;
    std::vector<CamEntry> cam_snapshot() const; // ascending port order

private:
    std::vector<PortIndex> up_ports(std::optional<PortIndex> except = std::nullopt) const;
    Frame control_frame(const ControlMsg& msg, Address48 dst) const;
    void log(Tick at, const char* event, Json fields) const;

    SwitchMode mode_ = SwitchMode::Normal;
    std::uint32_t current_epoch_ = 0;
    std::vector<PortAdmin> ports_;
    std::vector<std::optional<CamEntry>> cam_; // indexed by port
    Trace* trace_;
};

} // namespace nis
