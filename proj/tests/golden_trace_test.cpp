// Pins the full event stream of a small two-host registration round against
// a checked-in golden file. Any change to event ordering, field naming, or
// timing shows up here as a byte diff. Regenerate deliberately with
// NIS_REGEN_GOLDEN=1 after reviewing the new trace.

#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "nis/simulator.hpp"

using namespace nis;

namespace {

Simulation canonical_sim() {
    Topology topo;
    topo.ports = 4;
    for (int n = 1; n <= 2; ++n) {
        HostSpec s;
        s.name = "host" + std::to_string(n);
        s.config.creds.ip = *Ipv4::parse("10.0.0." + std::to_string(n));
        s.config.creds.mac = Address48(0x0200'0000'0000ull + static_cast<std::uint64_t>(n));
        s.config.creds.os = "linux";
        s.config.creds.username = "user" + std::to_string(n);
        s.config.creds.password = "pw" + std::to_string(n);
        s.config.port = static_cast<PortIndex>(n - 1);
        topo.hosts.push_back(s);
    }
    std::vector<Credentials> dir;
    for (const auto& h : topo.hosts) dir.push_back(h.config.creds);
    return Simulation(topo, TimerConfig{}, SimKnobs{}, 7, dir);
}

} // namespace

TEST_CASE("two-host round replays the golden trace byte for byte") {
    Simulation sim = canonical_sim();
    sim.schedule_action(70000, [](Simulation& s) {
        s.host_send_ip("host1", *Ipv4::parse("10.0.0.2"), ETHERTYPE_IPV4, {1, 2, 3});
    });
    sim.finish(70200);
    std::string got = sim.trace().to_jsonl();

    if (std::getenv("NIS_REGEN_GOLDEN")) {
        std::ofstream(GOLDEN_TRACE, std::ios::binary) << got;
        MESSAGE("golden trace regenerated");
        return;
    }

    std::ifstream in(GOLDEN_TRACE, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "golden file missing; run once with NIS_REGEN_GOLDEN=1");
    std::ostringstream want;
    want << in.rdbuf();
    CHECK_EQ(got, want.str());
}
