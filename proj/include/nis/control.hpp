#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "nis/address.hpp"

namespace nis {

// Control messages ride the lymph link between switch and server, and (for
// REG_REQ / REG_RES / REG_ID / REG_END) the payload of frames with the NIS
// control ethertype. Wire encoding: 1-byte tag, then big-endian fields; see
// protocol.md.

enum class DropReason : std::uint8_t {
    id_mismatch = 1, // src_field is not the ID bound to the ingress port
    unknown_dst = 2, // dst MAC has no CAM entry
    auth_mode = 3,   // data frame during the authorization window (not reported)
};

const char* drop_reason_name(DropReason r);

struct RegReq {
    std::uint32_t epoch = 0;
};

// Hosts put their own attachment port here; the switch overwrites it with the
// physical ingress port when relaying, so it cannot be spoofed.
struct RegRes {
    PortIndex port = 0;
    std::vector<std::uint8_t> blob; // sealed credentials, opaque until the server unseals
};

struct RegId {
    PortIndex port = 0;
    Address48 mac;
    HostId id;
    std::uint32_t epoch = 0;
};

struct RegEnd {
    std::uint32_t epoch = 0;
};

struct FrameReport {
    PortIndex port = 0;
    Address48 observed_src;
    Address48 observed_dst;
    DropReason reason = DropReason::id_mismatch;
    Tick at = 0;
};

struct PortShutdown {
    PortIndex port = 0;
};

using ControlMsg = std::variant<RegReq, RegRes, RegId, RegEnd, FrameReport, PortShutdown>;

std::vector<std::uint8_t> encode_control(const ControlMsg& msg);
std::optional<ControlMsg> decode_control(std::span<const std::uint8_t> bytes);

// Credential set a host presents at registration; the directory holds the
// same record as server-side ground truth.
struct Credentials {
    Ipv4 ip;
    Address48 mac;
    std::string os;
    std::string username;
    std::string password;

    friend bool operator==(const Credentials& a, const Credentials& b) {
        return a.ip == b.ip && a.mac == b.mac && a.os == b.os && a.username == b.username &&
               a.password == b.password;
    }
};

// "Encryption" is modeled, not implemented: the blob is opaque to everyone
// but the server, and the authentic flag stands in for unforgeability. An
// attacker can replay captured blob bytes but can only originate blobs with
// authentic=false.
struct SealedCredentials {
    bool authentic = false;
    Credentials creds;
};

std::vector<std::uint8_t> seal_credentials(const Credentials& c, bool authentic);
std::optional<SealedCredentials> unseal_credentials(std::span<const std::uint8_t> blob);

// Simplified ARP payload (ethertype 0x0806). Requests carry no MAC at all
// (the requester is identified by the frame header after the switch swap);
// replies carry the claimed sender MAC, which is what the receiver caches.
constexpr std::uint16_t ARP_REQUEST = 1;
constexpr std::uint16_t ARP_REPLY = 2;

struct ArpPayload {
    std::uint16_t op = ARP_REQUEST;
    Ipv4 sender_ip;
    Address48 sender_mac; // REPLY only; ignored/absent in requests
    Ipv4 target_ip;
};

std::vector<std::uint8_t> encode_arp(const ArpPayload& p);
std::optional<ArpPayload> decode_arp(std::span<const std::uint8_t> bytes);

} // namespace nis
