#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nis/host.hpp"

namespace nis {

// What the adversary starts with. Stolen identifiers are oracle grants: the
// simulation tests their consequences, not how they were obtained.
struct AttackerCapability {
    PortIndex port = 0;
    std::optional<HostId> knows_id;          // stolen current-epoch ID
    std::optional<Address48> knows_victim_mac; // stolen MAC (full impersonation)
    bool has_valid_credentials = false;      // insider: own directory entry
};

// How the attacker treats REG_REQ rounds.
enum class RegResponseMode {
    None,    // stay silent (the port will be shut as unregistered)
    Invalid, // respond with an unauthentic blob (fails validation)
    Valid,   // respond honestly with own credentials (insider)
};

// Adversary on one switch port: registration (mis)behavior plus the three
// attack-frame builders. Reuses the host action plumbing.
class Attacker {
public:
    Attacker(std::string name, AttackerCapability cap, Credentials own_creds,
             RegResponseMode reg_mode, Rng rng, Trace* trace);

    std::vector<HostAction> on_frame(const Frame& f, Tick now);
    std::vector<HostAction> on_timer(const TimerRequest& t, Tick now);

    // floods n copies of a broadcast frame whose source is the victim's MAC
    // (or the stolen ID when held) to pull the victim's binding to this port
    std::vector<Frame> port_stealing_frames(Address48 victim_mac, int n);
    // n frames with pseudorandom forged source addresses, aimed at CAM exhaustion
    std::vector<Frame> mac_flood_frames(int n);
    // unsolicited broadcast ARP reply claiming `claimed_ip` lives at the
    // attacker-chosen MAC (the stolen victim MAC when held, else its own)
    Frame arp_poison_frame(Ipv4 claimed_ip, Ipv4 target_ip);

    const std::string& name() const { return name_; }
    const AttackerCapability& capability() const { return cap_; }
    std::optional<HostId> earned_id() const { return earned_id_; }
    std::uint64_t frames_received() const { return frames_received_; }

    // the source field the attacker can best stamp on an attack frame
    Address48 best_src() const;

    // oracle grants made mid-run by scenario scripts (the theft itself is
    // outside the model; the simulation tests its consequences)
    void grant_stolen_id(HostId id) { cap_.knows_id = id; }
    void grant_victim_mac(Address48 mac) { cap_.knows_victim_mac = mac; }

private:
    void log(Tick at, const char* event, Json fields) const;

    std::string name_;
    AttackerCapability cap_;
    Credentials own_creds_;
    RegResponseMode reg_mode_;
    Rng rng_;
    Trace* trace_;

    std::optional<HostId> earned_id_; // granted by the server if registration succeeds
    std::uint64_t reg_gen_ = 0;
    std::uint32_t reg_epoch_ = 0;
    std::uint64_t frames_received_ = 0;
};

} // namespace nis
