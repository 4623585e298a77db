#include "doctest.h"

#include <algorithm>

#include "nis/nis_server.hpp"

using namespace nis;

namespace {

Credentials make_creds(int n) {
    Credentials c;
    c.ip = *Ipv4::parse("10.0.0." + std::to_string(n));
    c.mac = Address48(0x0200'0000'0000ull + static_cast<std::uint64_t>(n));
    c.os = "linux";
    c.username = "user" + std::to_string(n);
    c.password = "pw" + std::to_string(n);
    return c;
}

NisServer make_server(int num_hosts, TimerConfig timers = {}, Trace* trace = nullptr,
                      std::uint64_t seed = 1) {
    std::vector<Credentials> dir;
    for (int i = 1; i <= num_hosts; ++i) dir.push_back(make_creds(i));
    return NisServer(std::move(dir), timers, entity_stream(seed, "server"), trace);
}

int count_event(const Trace& t, const char* name) {
    int n = 0;
    for (const auto& e : t.events())
        if (e.event == name) ++n;
    return n;
}

} // namespace

TEST_CASE("timer config validation names the violated inequality") {
    TimerConfig ok; // defaults: t_d=1, t_r=66000, t_p=660000
    CHECK(validate_timer_config(ok).empty());

    TimerConfig bad = ok;
    bad.t_r = 65000; // 65000/65535 <= 1, so a 65535-step backoff overruns the window
    auto errors = validate_timer_config(bad);
    REQUIRE_EQ(errors.size(), 1u);
    CHECK_EQ(errors[0], "t_d < t_r/65535 violated (65000/65535 ≤ 1)");

    bad.t_r = 65535; // boundary: equality still violates the strict inequality
    CHECK_EQ(validate_timer_config(bad).size(), 1u);
    bad.t_r = 65536; // smallest window that satisfies it at t_d=1
    CHECK(validate_timer_config(bad).empty());

    TimerConfig swapped = ok;
    swapped.t_r = ok.t_p; // t_r == t_p violates t_r < t_p
    auto e2 = validate_timer_config(swapped);
    REQUIRE_EQ(e2.size(), 1u);
    CHECK(e2[0].find("t_r < t_p violated") == 0);

    TimerConfig both = ok;
    both.t_d = 2;     // needs t_r > 131070
    both.t_r = 100000;
    both.t_p = 90000; // and t_r >= t_p: violates both inequalities
    CHECK_EQ(validate_timer_config(both).size(), 2u);
}

TEST_CASE("start_round arms the deadline and emits REG_REQ") {
    TimerConfig t;
    t.t_p = 600000;
    t.t_r = 66000;
    auto server = make_server(2, t);
    auto msgs = server.start_round(600000);
    REQUIRE_EQ(msgs.size(), 1u);
    CHECK_EQ(std::get<RegReq>(msgs[0]).epoch, 1u);
    CHECK_EQ(server.deadline(), 666000u);
    CHECK(server.collecting());

    auto end = server.end_round(666000);
    CHECK_EQ(std::get<RegEnd>(end[0]).epoch, 1u);
    CHECK_FALSE(server.collecting());
}

TEST_CASE("valid credentials get a fresh ID tied to the relay port") {
    Trace trace;
    auto server = make_server(2, {}, &trace);
    server.start_round(0);
    auto blob = seal_credentials(make_creds(1), true);
    auto msgs = server.on_reg_res(3, blob, 100);
    REQUIRE_EQ(msgs.size(), 1u);
    auto reg = std::get<RegId>(msgs[0]);
    CHECK_EQ(reg.port, 3);
    CHECK_EQ(reg.mac, make_creds(1).mac);
    CHECK_EQ(reg.epoch, 1u);
    CHECK_FALSE(reg.id.value.is_broadcast());
    CHECK_FALSE(reg.id.value.is_zero());
    CHECK_NE(reg.id.value, make_creds(1).mac);
    CHECK_NE(reg.id.value, make_creds(2).mac);
    CHECK_EQ(count_event(trace, "reg_accepted"), 1);
    CHECK_EQ(server.current_registrations().size(), 1u);
}

TEST_CASE("wrong password is rejected and mints nothing") {
    Trace trace;
    auto server = make_server(1, {}, &trace);
    server.start_round(0);
    Credentials lying = make_creds(1);
    lying.password = "not-the-password";
    auto msgs = server.on_reg_res(0, seal_credentials(lying, true), 10);
    CHECK(msgs.empty());
    REQUIRE_EQ(count_event(trace, "reg_rejected"), 1);
    for (const auto& e : trace.events())
        if (e.event == "reg_rejected") CHECK_EQ(e.fields.value("reason", ""), "credential_mismatch");
}

TEST_CASE("unauthentic and malformed blobs are rejected") {
    Trace trace;
    auto server = make_server(1, {}, &trace);
    server.start_round(0);
    // forged: right plaintext, but not sealed by the credential holder
    CHECK(server.on_reg_res(0, seal_credentials(make_creds(1), false), 10).empty());
    // garbage bytes
    std::vector<std::uint8_t> junk{0xAA, 0xBB};
    CHECK(server.on_reg_res(0, junk, 11).empty());
    // MAC nobody provisioned
    Credentials ghost = make_creds(42);
    CHECK(server.on_reg_res(0, seal_credentials(ghost, true), 12).empty());
    CHECK_EQ(count_event(trace, "reg_rejected"), 3);
    CHECK_EQ(count_event(trace, "reg_accepted"), 0);
}

TEST_CASE("same MAC replayed from two ports in one epoch: first wins") {
    Trace trace;
    auto server = make_server(1, {}, &trace);
    server.start_round(0);
    auto blob = seal_credentials(make_creds(1), true);
    CHECK_EQ(server.on_reg_res(0, blob, 10).size(), 1u);
    CHECK(server.on_reg_res(1, blob, 11).empty()); // replay from another port
    bool saw_duplicate = false;
    for (const auto& e : trace.events())
        if (e.event == "reg_rejected" && e.fields.value("reason", "") == "duplicate")
            saw_duplicate = true;
    CHECK(saw_duplicate);
    CHECK_EQ(server.current_registrations().size(), 1u);
}

TEST_CASE("REG_RES after the deadline is ignored and logged late") {
    Trace trace;
    TimerConfig t;
    auto server = make_server(1, t, &trace);
    server.start_round(0); // deadline = t_r = 66000
    auto blob = seal_credentials(make_creds(1), true);
    SUBCASE("past the armed deadline while still collecting") {
        CHECK(server.on_reg_res(0, blob, 66001).empty());
    }
    SUBCASE("after end_round") {
        server.end_round(66000);
        CHECK(server.on_reg_res(0, blob, 66000).empty());
    }
    SUBCASE("before any round ever started") {
        auto fresh = make_server(1, t, &trace);
        CHECK(fresh.on_reg_res(0, blob, 5).empty());
    }
    CHECK_EQ(count_event(trace, "late_reg_res"), 1);
    // at the deadline itself it is still accepted
    auto server2 = make_server(1, t);
    server2.start_round(0);
    CHECK_EQ(server2.on_reg_res(0, blob, 66000).size(), 1u);
}

TEST_CASE("minted IDs avoid broadcast, zero, and the exclusion set") {
    Rng rng = entity_stream(7, "server");
    // learn the first candidate the stream would produce, then exclude it
    Rng probe = rng;
    Address48 first(probe.next_u48());
    std::set<Address48> excluded{first};
    HostId got = mint_id(rng, excluded);
    CHECK_NE(got.value, first);
    CHECK_FALSE(excluded.count(got.value));

    // bulk uniqueness: every mint lands outside the growing exclusion set
    std::set<Address48> seen;
    Rng bulk(99);
    for (int i = 0; i < 100000; ++i) {
        HostId id = mint_id(bulk, seen);
        CHECK_FALSE(id.value.is_broadcast());
        CHECK_FALSE(id.value.is_zero());
        auto [_, inserted] = seen.insert(id.value);
        CHECK(inserted);
    }
}

TEST_CASE("IDs rotate: consecutive epochs never reuse a live ID") {
    auto server = make_server(4);
    auto blob1 = seal_credentials(make_creds(1), true);
    std::set<Address48> epoch1_ids;

    server.start_round(0);
    for (int h = 1; h <= 4; ++h) {
        auto msgs = server.on_reg_res(static_cast<PortIndex>(h - 1),
                                      seal_credentials(make_creds(h), true), 10 + h);
        epoch1_ids.insert(std::get<RegId>(msgs[0]).id.value);
    }
    server.end_round(66000);

    server.start_round(660000);
    for (int h = 1; h <= 4; ++h) {
        auto msgs = server.on_reg_res(static_cast<PortIndex>(h - 1),
                                      seal_credentials(make_creds(h), true), 660010 + h);
        auto id = std::get<RegId>(msgs[0]).id.value;
        CHECK_FALSE(epoch1_ids.count(id)); // previous epoch's IDs stay excluded
    }
    (void)blob1;
}

TEST_CASE("report threshold boundary: shutdown on the 11th, once per epoch") {
    Trace trace;
    TimerConfig t; // drop_threshold = 10, report_window = 660000
    auto server = make_server(1, t, &trace);
    auto report_at = [&](Tick at) {
        FrameReport r{3, Address48(0xAA), Address48(0xBB), DropReason::id_mismatch, at};
        return server.on_frame_report(r, at + 1);
    };
    for (Tick i = 1; i <= 10; ++i) CHECK(report_at(i).empty());
    auto msgs = report_at(11);
    REQUIRE_EQ(msgs.size(), 1u);
    CHECK_EQ(std::get<PortShutdown>(msgs[0]).port, 3);
    CHECK_EQ(count_event(trace, "adaptive_escalation"), 1);
    CHECK_EQ(count_event(trace, "port_shutdown_cmd"), 1);
    // suppressed for the rest of the epoch
    for (Tick i = 12; i <= 30; ++i) CHECK(report_at(i).empty());
    CHECK_EQ(count_event(trace, "port_shutdown_cmd"), 1);
    // next epoch re-arms the trigger with a clean slate: ten quiet reports,
    // shutdown on the eleventh, exactly like the first epoch
    server.start_round(660000);
    for (Tick i = 0; i <= 9; ++i) CHECK(report_at(660001 + i).empty());
    CHECK_EQ(report_at(660011).size(), 1u);
}

TEST_CASE("reports older than the window age out") {
    TimerConfig t;
    t.report_window = 100;
    auto server = make_server(1, t);
    // 11 reports spread 20 ticks apart span 200 ticks: at any instant the
    // trailing 100-tick window holds at most 6 of them
    for (int i = 0; i < 11; ++i) {
        Tick at = static_cast<Tick>(i) * 20;
        FrameReport r{0, Address48(1), Address48(2), DropReason::unknown_dst, at};
        CHECK(server.on_frame_report(r, at).empty());
    }
    // same count, tightly packed, crosses the threshold
    auto server2 = make_server(1, t);
    std::vector<ControlMsg> last;
    for (int i = 0; i < 11; ++i) {
        FrameReport r{0, Address48(1), Address48(2), DropReason::unknown_dst,
                      static_cast<Tick>(500 + i)};
        last = server2.on_frame_report(r, static_cast<Tick>(500 + i));
    }
    CHECK_EQ(last.size(), 1u);
}

TEST_CASE("no cross-port aggregation of reports") {
    auto server = make_server(1);
    for (Tick i = 1; i <= 10; ++i) {
        FrameReport r1{1, Address48(1), Address48(2), DropReason::id_mismatch, i};
        FrameReport r2{2, Address48(1), Address48(2), DropReason::id_mismatch, i};
        CHECK(server.on_frame_report(r1, i).empty());
        CHECK(server.on_frame_report(r2, i).empty());
    }
}

TEST_CASE("a round with zero hosts closes empty") {
    Trace trace;
    auto server = make_server(0, {}, &trace);
    server.start_round(0);
    auto end = server.end_round(66000);
    CHECK_EQ(std::get<RegEnd>(end[0]).epoch, 1u);
    CHECK_EQ(server.current_registrations().size(), 0u);
    CHECK_EQ(count_event(trace, "round_start"), 1);
    CHECK_EQ(count_event(trace, "round_end"), 1);
}
