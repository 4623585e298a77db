#include "nis/control.hpp"

namespace nis {

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int s = 56; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

void put_addr(std::vector<std::uint8_t>& out, Address48 a) {
    for (int i = 0; i < 6; ++i) out.push_back(a.octet(i));
}

// cursor-style reader; every take checks remaining length
struct Reader {
    std::span<const std::uint8_t> buf;
    std::size_t pos = 0;
    bool bad = false;

    std::uint64_t take(std::size_t n) {
        if (bad || buf.size() - pos < n) {
            bad = true;
            return 0;
        }
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < n; ++i) v = (v << 8) | buf[pos++];
        return v;
    }
    std::vector<std::uint8_t> take_bytes(std::size_t n) {
        if (bad || buf.size() - pos < n) {
            bad = true;
            return {};
        }
        std::vector<std::uint8_t> v(buf.begin() + static_cast<long>(pos),
                                    buf.begin() + static_cast<long>(pos + n));
        pos += n;
        return v;
    }
    std::string take_string() { // u8 length prefix
        auto n = static_cast<std::size_t>(take(1));
        auto bytes = take_bytes(n);
        return {bytes.begin(), bytes.end()};
    }
    bool done() const { return !bad && pos == buf.size(); }
};

constexpr std::uint8_t TAG_REG_REQ = 1;
constexpr std::uint8_t TAG_REG_RES = 2;
constexpr std::uint8_t TAG_REG_ID = 3;
constexpr std::uint8_t TAG_REG_END = 4;
constexpr std::uint8_t TAG_FRAME_REPORT = 5;
constexpr std::uint8_t TAG_PORT_SHUTDOWN = 6;

} // namespace

const char* drop_reason_name(DropReason r) {
    switch (r) {
    case DropReason::id_mismatch: return "id_mismatch";
    case DropReason::unknown_dst: return "unknown_dst";
    case DropReason::auth_mode: return "auth_mode";
    }
    return "?";
}

std::vector<std::uint8_t> encode_control(const ControlMsg& msg) {
    std::vector<std::uint8_t> out;
    if (auto* m = std::get_if<RegReq>(&msg)) {
        out.push_back(TAG_REG_REQ);
        put_u32(out, m->epoch);
    } else if (auto* m = std::get_if<RegRes>(&msg)) {
        out.push_back(TAG_REG_RES);
        put_u16(out, m->port);
        put_u16(out, static_cast<std::uint16_t>(m->blob.size()));
        out.insert(out.end(), m->blob.begin(), m->blob.end());
    } else if (auto* m = std::get_if<RegId>(&msg)) {
        out.push_back(TAG_REG_ID);
        put_u16(out, m->port);
        put_addr(out, m->mac);
        put_addr(out, m->id.value);
        put_u32(out, m->epoch);
    } else if (auto* m = std::get_if<RegEnd>(&msg)) {
        out.push_back(TAG_REG_END);
        put_u32(out, m->epoch);
    } else if (auto* m = std::get_if<FrameReport>(&msg)) {
        out.push_back(TAG_FRAME_REPORT);
        put_u16(out, m->port);
        put_addr(out, m->observed_src);
        put_addr(out, m->observed_dst);
        out.push_back(static_cast<std::uint8_t>(m->reason));
        put_u64(out, m->at);
    } else if (auto* m = std::get_if<PortShutdown>(&msg)) {
        out.push_back(TAG_PORT_SHUTDOWN);
        put_u16(out, m->port);
    }
    return out;
}

std::optional<ControlMsg> decode_control(std::span<const std::uint8_t> bytes) {
    Reader r{bytes};
    auto tag = static_cast<std::uint8_t>(r.take(1));
    switch (tag) {
    case TAG_REG_REQ: {
        RegReq m{static_cast<std::uint32_t>(r.take(4))};
        if (!r.done()) return std::nullopt;
        return m;
    }
    case TAG_REG_RES: {
        RegRes m;
        m.port = static_cast<PortIndex>(r.take(2));
        auto len = static_cast<std::size_t>(r.take(2));
        m.blob = r.take_bytes(len);
        if (!r.done()) return std::nullopt;
        return m;
    }
    case TAG_REG_ID: {
        RegId m;
        m.port = static_cast<PortIndex>(r.take(2));
        m.mac = Address48(r.take(6));
        m.id = HostId{Address48(r.take(6))};
        m.epoch = static_cast<std::uint32_t>(r.take(4));
        if (!r.done()) return std::nullopt;
        return m;
    }
    case TAG_REG_END: {
        RegEnd m{static_cast<std::uint32_t>(r.take(4))};
        if (!r.done()) return std::nullopt;
        return m;
    }
    case TAG_FRAME_REPORT: {
        FrameReport m;
        m.port = static_cast<PortIndex>(r.take(2));
        m.observed_src = Address48(r.take(6));
        m.observed_dst = Address48(r.take(6));
        auto reason = r.take(1);
        if (reason != 1 && reason != 2) return std::nullopt;
        m.reason = static_cast<DropReason>(reason);
        m.at = r.take(8);
        if (!r.done()) return std::nullopt;
        return m;
    }
    case TAG_PORT_SHUTDOWN: {
        PortShutdown m{static_cast<PortIndex>(r.take(2))};
        if (!r.done()) return std::nullopt;
        return m;
    }
    default: return std::nullopt;
    }
}

std::vector<std::uint8_t> seal_credentials(const Credentials& c, bool authentic) {
    std::vector<std::uint8_t> out;
    out.push_back(authentic ? 1 : 0);
    put_u32(out, c.ip.bits);
    put_addr(out, c.mac);
    for (const std::string* s : {&c.os, &c.username, &c.password}) {
        out.push_back(static_cast<std::uint8_t>(s->size()));
        out.insert(out.end(), s->begin(), s->end());
    }
    return out;
}

std::optional<SealedCredentials> unseal_credentials(std::span<const std::uint8_t> blob) {
    Reader r{blob};
    SealedCredentials s;
    auto flag = r.take(1);
    if (flag > 1) return std::nullopt;
    s.authentic = flag == 1;
    s.creds.ip = Ipv4{static_cast<std::uint32_t>(r.take(4))};
    s.creds.mac = Address48(r.take(6));
    s.creds.os = r.take_string();
    s.creds.username = r.take_string();
    s.creds.password = r.take_string();
    if (!r.done()) return std::nullopt;
    return s;
}

std::vector<std::uint8_t> encode_arp(const ArpPayload& p) {
    std::vector<std::uint8_t> out;
    put_u16(out, p.op);
    put_u32(out, p.sender_ip.bits);
    if (p.op == ARP_REPLY) put_addr(out, p.sender_mac);
    put_u32(out, p.target_ip.bits);
    return out;
}

std::optional<ArpPayload> decode_arp(std::span<const std::uint8_t> bytes) {
    Reader r{bytes};
    ArpPayload p;
    p.op = static_cast<std::uint16_t>(r.take(2));
    if (p.op != ARP_REQUEST && p.op != ARP_REPLY) return std::nullopt;
    p.sender_ip = Ipv4{static_cast<std::uint32_t>(r.take(4))};
    if (p.op == ARP_REPLY) p.sender_mac = Address48(r.take(6));
    p.target_ip = Ipv4{static_cast<std::uint32_t>(r.take(4))};
    if (!r.done()) return std::nullopt;
    return p;
}

} // namespace nis
