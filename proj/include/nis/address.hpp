#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace nis {

// simulation clock, integer ticks
using Tick = std::uint64_t;

using PortIndex = std::uint16_t;

// 48-bit datalink address. Used both for real MACs and for switch-issued IDs;
// which one a frame field holds depends on which segment the frame is on.
struct Address48 {
    std::uint64_t bits = 0; // low 48 bits only

    static constexpr std::uint64_t mask = 0xFFFF'FFFF'FFFFull;

    constexpr Address48() = default;
    explicit constexpr Address48(std::uint64_t v) : bits(v & mask) {}

    static constexpr Address48 broadcast() { return Address48(mask); }
    static constexpr Address48 zero() { return Address48(0); }

    constexpr bool is_broadcast() const { return bits == mask; }
    constexpr bool is_zero() const { return bits == 0; }

    constexpr std::uint8_t octet(int i) const { // i=0 is the most significant
        return static_cast<std::uint8_t>(bits >> (8 * (5 - i)));
    }

    friend constexpr bool operator==(Address48 a, Address48 b) { return a.bits == b.bits; }
    friend constexpr bool operator!=(Address48 a, Address48 b) { return a.bits != b.bits; }
    friend constexpr bool operator<(Address48 a, Address48 b) { return a.bits < b.bits; }

    // canonical text form: six colon-separated uppercase hex octets
    std::string to_string() const;
    static std::optional<Address48> parse(std::string_view text);
};

// switch-issued identifier; epoch-scoped, never broadcast
struct HostId {
    Address48 value;

    friend constexpr bool operator==(HostId a, HostId b) { return a.value == b.value; }
    friend constexpr bool operator!=(HostId a, HostId b) { return a.value != b.value; }
    friend constexpr bool operator<(HostId a, HostId b) { return a.value < b.value; }
};

// IPv4 address, host byte order
struct Ipv4 {
    std::uint32_t bits = 0;

    friend constexpr bool operator==(Ipv4 a, Ipv4 b) { return a.bits == b.bits; }
    friend constexpr bool operator!=(Ipv4 a, Ipv4 b) { return a.bits != b.bits; }
    friend constexpr bool operator<(Ipv4 a, Ipv4 b) { return a.bits < b.bits; }

    std::string to_string() const; // dotted quad
    static std::optional<Ipv4> parse(std::string_view text);
};

} // namespace nis
