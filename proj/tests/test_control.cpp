#include "doctest.h"

#include "nis/control.hpp"

using namespace nis;

namespace {
Credentials creds_a() {
    return {*Ipv4::parse("10.0.0.1"), *Address48::parse("02:00:00:00:00:01"), "linux", "alice",
            "pw-a"};
}
} // namespace

TEST_CASE("control message tags match the documented values") {
    CHECK_EQ(encode_control(RegReq{})[0], 1);
    CHECK_EQ(encode_control(RegRes{})[0], 2);
    CHECK_EQ(encode_control(RegId{})[0], 3);
    CHECK_EQ(encode_control(RegEnd{})[0], 4);
    CHECK_EQ(encode_control(FrameReport{})[0], 5);
    CHECK_EQ(encode_control(PortShutdown{})[0], 6);
}

TEST_CASE("control messages round trip") {
    auto blob = seal_credentials(creds_a(), true);

    ControlMsg msgs[] = {
        RegReq{7},
        RegRes{3, blob},
        RegId{5, *Address48::parse("02:00:00:00:00:02"),
              HostId{*Address48::parse("5A:12:34:56:78:9A")}, 7},
        RegEnd{7},
        FrameReport{4, *Address48::parse("DE:AD:00:00:00:01"), Address48::broadcast(),
                    DropReason::id_mismatch, 123456},
        PortShutdown{4},
    };
    for (const auto& m : msgs) {
        auto bytes = encode_control(m);
        auto back = decode_control(bytes);
        REQUIRE(back.has_value());
        CHECK_EQ(encode_control(*back), bytes);
    }
}

TEST_CASE("decode_control rejects junk") {
    CHECK_FALSE(decode_control(std::vector<std::uint8_t>{}).has_value());
    CHECK_FALSE(decode_control(std::vector<std::uint8_t>{99}).has_value());
    CHECK_FALSE(decode_control(std::vector<std::uint8_t>{1, 0}).has_value()); // truncated epoch
    auto ok = encode_control(RegId{1, Address48(1), HostId{Address48(2)}, 3});
    ok.push_back(0); // trailing byte
    CHECK_FALSE(decode_control(ok).has_value());
}

TEST_CASE("sealed credentials round trip and carry the authenticity flag") {
    auto c = creds_a();
    auto blob = seal_credentials(c, true);
    auto s = unseal_credentials(blob);
    REQUIRE(s.has_value());
    CHECK(s->authentic);
    CHECK(s->creds == c);

    auto forged = seal_credentials(c, false);
    auto f = unseal_credentials(forged);
    REQUIRE(f.has_value());
    CHECK_FALSE(f->authentic);
}

TEST_CASE("truncated blob is malformed") {
    auto blob = seal_credentials(creds_a(), true);
    blob.pop_back();
    CHECK_FALSE(unseal_credentials(blob).has_value());
    CHECK_FALSE(unseal_credentials(std::vector<std::uint8_t>{}).has_value());
    std::vector<std::uint8_t> junk(40, 0xFF);
    CHECK_FALSE(unseal_credentials(junk).has_value());
}

TEST_CASE("arp request is the 10-byte MAC-free form") {
    ArpPayload req;
    req.op = ARP_REQUEST;
    req.sender_ip = *Ipv4::parse("10.0.0.1");
    req.target_ip = *Ipv4::parse("10.0.0.2");
    auto bytes = encode_arp(req);
    CHECK_EQ(bytes.size(), 10u);
    const std::vector<std::uint8_t> want = {0, 1, 10, 0, 0, 1, 10, 0, 0, 2};
    CHECK_EQ(bytes, want);
    auto back = decode_arp(bytes);
    REQUIRE(back.has_value());
    CHECK_EQ(back->op, ARP_REQUEST);
    CHECK_EQ(back->sender_ip, req.sender_ip);
    CHECK_EQ(back->target_ip, req.target_ip);
}

TEST_CASE("arp reply carries the claimed sender MAC") {
    ArpPayload rep;
    rep.op = ARP_REPLY;
    rep.sender_ip = *Ipv4::parse("10.0.0.2");
    rep.sender_mac = *Address48::parse("02:00:00:00:00:02");
    rep.target_ip = *Ipv4::parse("10.0.0.1");
    auto bytes = encode_arp(rep);
    CHECK_EQ(bytes.size(), 16u);
    auto back = decode_arp(bytes);
    REQUIRE(back.has_value());
    CHECK_EQ(back->sender_mac, rep.sender_mac);
}

TEST_CASE("decode_arp rejects malformed payloads") {
    CHECK_FALSE(decode_arp(std::vector<std::uint8_t>{}).has_value());
    CHECK_FALSE(decode_arp(std::vector<std::uint8_t>{0, 3, 0, 0, 0, 0, 0, 0, 0, 0}).has_value());
    // request-length reply and reply-length request are both malformed
    CHECK_FALSE(decode_arp(std::vector<std::uint8_t>{0, 2, 0, 0, 0, 0, 0, 0, 0, 0}).has_value());
    std::vector<std::uint8_t> long_req(16, 0);
    long_req[1] = 1;
    CHECK_FALSE(decode_arp(long_req).has_value());
}
