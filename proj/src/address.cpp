#include "nis/address.hpp"

#include <cstdio>

namespace nis {

std::string Address48::to_string() const {
    char buf[18];
    std::snprintf(buf, sizeof buf, "%02X:%02X:%02X:%02X:%02X:%02X", octet(0), octet(1),
                  octet(2), octet(3), octet(4), octet(5));
    return buf;
}

namespace {

int hex_val(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

} // namespace

std::optional<Address48> Address48::parse(std::string_view text) {
    // strict: exactly "XX:XX:XX:XX:XX:XX", hex case-insensitive
    if (text.size() != 17) return std::nullopt;
    std::uint64_t v = 0;
    for (int i = 0; i < 6; ++i) {
        int hi = hex_val(text[static_cast<size_t>(i * 3)]);
        int lo = hex_val(text[static_cast<size_t>(i * 3 + 1)]);
        if (hi < 0 || lo < 0) return std::nullopt;
        if (i < 5 && text[static_cast<size_t>(i * 3 + 2)] != ':') return std::nullopt;
        v = (v << 8) | static_cast<std::uint64_t>(hi * 16 + lo);
    }
    return Address48(v);
}

std::string Ipv4::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%u.%u.%u.%u", (bits >> 24) & 0xFF, (bits >> 16) & 0xFF,
                  (bits >> 8) & 0xFF, bits & 0xFF);
    return buf;
}

std::optional<Ipv4> Ipv4::parse(std::string_view text) {
    std::uint32_t parts[4];
    int part = 0;
    std::uint32_t cur = 0;
    int digits = 0;
    for (char c : text) {
        if (c == '.') {
            if (digits == 0 || part >= 3) return std::nullopt;
            parts[part++] = cur;
            cur = 0;
            digits = 0;
        } else if (c >= '0' && c <= '9') {
            cur = cur * 10 + static_cast<std::uint32_t>(c - '0');
            if (cur > 255 || ++digits > 3) return std::nullopt;
        } else {
            return std::nullopt;
        }
    }
    if (digits == 0 || part != 3) return std::nullopt;
    parts[3] = cur;
    return Ipv4{(parts[0] << 24) | (parts[1] << 16) | (parts[2] << 8) | parts[3]};
}

} // namespace nis
