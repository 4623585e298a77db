#pragma once

#include <deque>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "nis/control.hpp"
#include "nis/rng.hpp"
#include "nis/trace.hpp"

namespace nis {

// Registration-round timing and the report-analysis knobs. All ticks.
struct TimerConfig {
    Tick t_p = 660000;   // round period
    Tick t_r = 66000;    // registration window length
    Tick t_d = 1;        // host backoff decrement interval
    Tick report_window = 660000;
    std::uint32_t drop_threshold = 10;
};

// Every violated constraint, each message naming the inequality. Empty means valid.
std::vector<std::string> validate_timer_config(const TimerConfig& t);

struct Registration {
    std::uint32_t epoch = 0;
    PortIndex port = 0;
    Address48 mac;
    HostId id;
    Tick issued_at = 0;
};

// Fresh uniform 48-bit ID, rerolled while it collides with broadcast, the
// all-zero control placeholder, or anything in `excluded` (directory MACs and
// IDs still live in the current or previous epoch).
HostId mint_id(Rng& rng, const std::set<Address48>& excluded);

// The ID-issuing server. It owns no MAC or IP; everything it says or hears
// travels the lymph link as ControlMsg values, which is why every handler
// returns the list of messages to send to the switch.
class NisServer {
public:
    NisServer(std::vector<Credentials> directory, TimerConfig timers, Rng rng, Trace* trace);

    std::vector<ControlMsg> start_round(Tick now);
    std::vector<ControlMsg> end_round(Tick now);
    // blob is the sealed credential payload relayed by the switch together
    // with the physical ingress port
    std::vector<ControlMsg> on_reg_res(PortIndex port, std::span<const std::uint8_t> blob,
                                       Tick now);
    std::vector<ControlMsg> on_frame_report(const FrameReport& r, Tick now);

    std::uint32_t epoch() const { return epoch_; }
    bool collecting() const { return collecting_; }
    Tick deadline() const { return deadline_; }
    const std::vector<Registration>& current_registrations() const { return registrations_; }

private:
    void log(Tick at, const char* event, Json fields) const;
    std::set<Address48> mint_exclusions() const;

    std::vector<Credentials> directory_;
    std::set<Address48> directory_macs_;
    TimerConfig timers_;
    Rng rng_;
    Trace* trace_;

    std::uint32_t epoch_ = 0;
    bool collecting_ = false;
    Tick deadline_ = 0;
    std::vector<Registration> registrations_;   // current epoch only
    std::set<Address48> registered_macs_;       // current epoch only
    std::set<Address48> live_cur_, live_prev_;  // IDs that may still be bound somewhere
    std::map<PortIndex, std::deque<Tick>> reports_;
    std::set<PortIndex> shut_this_epoch_;
};

} // namespace nis
