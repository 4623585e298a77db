#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "nis/address.hpp"

namespace nis {

// ethertypes used by the simulation
constexpr std::uint16_t ETHERTYPE_NIS_CONTROL = 0x88B5; // registration / control plane
constexpr std::uint16_t ETHERTYPE_ARP = 0x0806;
constexpr std::uint16_t ETHERTYPE_IPV4 = 0x0800; // generic data traffic in tests

constexpr std::size_t FRAME_HEADER_LEN = 14;
constexpr std::size_t MAX_PAYLOAD_LEN = 1500;
constexpr std::size_t MAX_FRAME_LEN = FRAME_HEADER_LEN + MAX_PAYLOAD_LEN;

struct CodecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One datalink frame. dst_field/src_field hold MACs or IDs depending on the
// segment: host->switch carries (dst=MAC, src=ID), switch->host carries
// (dst=ID, src=MAC) after the swap. The struct itself doesn't care.
struct Frame {
    Address48 dst_field;
    Address48 src_field;
    std::uint16_t ethertype = 0;
    std::vector<std::uint8_t> payload;

    friend bool operator==(const Frame& a, const Frame& b) {
        return a.dst_field == b.dst_field && a.src_field == b.src_field &&
               a.ethertype == b.ethertype && a.payload == b.payload;
    }
};

// wire format: 6 bytes dst, 6 bytes src, 2 bytes ethertype big-endian, payload
std::vector<std::uint8_t> encode_frame(const Frame& f); // throws CodecError if payload > 1500
Frame decode_frame(std::span<const std::uint8_t> bytes); // throws CodecError if <14 or >1514 bytes

} // namespace nis
