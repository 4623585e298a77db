#include "nis/nis_server.hpp"

#include <algorithm>

namespace nis {

std::vector<std::string> validate_timer_config(const TimerConfig& t) {
    std::vector<std::string> errors;
    // strict: t_d < t_r / 65535, i.e. the slowest backoff (65535 decrements)
    // finishes strictly inside the registration window
    if (t.t_r <= t.t_d * 65535) {
        errors.push_back("t_d < t_r/65535 violated (" + std::to_string(t.t_r) + "/65535 ≤ " +
                         std::to_string(t.t_d) + ")");
    }
    if (t.t_r >= t.t_p) {
        errors.push_back("t_r < t_p violated (" + std::to_string(t.t_r) + " ≥ " +
                         std::to_string(t.t_p) + ")");
    }
    if (t.t_d == 0) errors.push_back("t_d must be positive (got 0)");
    if (t.report_window == 0) errors.push_back("report_window must be positive (got 0)");
    return errors;
}

HostId mint_id(Rng& rng, const std::set<Address48>& excluded) {
    for (;;) {
        Address48 candidate(rng.next_u48());
        if (candidate.is_broadcast() || candidate.is_zero()) continue;
        if (excluded.count(candidate)) continue;
        return HostId{candidate};
    }
}

NisServer::NisServer(std::vector<Credentials> directory, TimerConfig timers, Rng rng, Trace* trace)
    : directory_(std::move(directory)), timers_(timers), rng_(rng), trace_(trace) {
    for (const auto& c : directory_) directory_macs_.insert(c.mac);
}

void NisServer::log(Tick at, const char* event, Json fields) const {
    if (trace_) trace_->log(at, "server", event, std::move(fields));
}

std::set<Address48> NisServer::mint_exclusions() const {
    std::set<Address48> out = directory_macs_;
    out.insert(live_cur_.begin(), live_cur_.end());
    out.insert(live_prev_.begin(), live_prev_.end());
    return out;
}

std::vector<ControlMsg> NisServer::start_round(Tick now) {
    epoch_ += 1;
    collecting_ = true;
    deadline_ = now + timers_.t_r;
    live_prev_ = std::move(live_cur_);
    live_cur_.clear();
    registrations_.clear();
    registered_macs_.clear();
    shut_this_epoch_.clear();
    reports_.clear(); // new epoch, new addressing regime: stale reports are moot
    log(now, "round_start", {{"epoch", epoch_}, {"deadline", deadline_}});
    return {RegReq{epoch_}};
}

std::vector<ControlMsg> NisServer::end_round(Tick now) {
    collecting_ = false;
    log(now, "round_end", {{"epoch", epoch_}, {"registrations", registrations_.size()}});
    return {RegEnd{epoch_}};
}

std::vector<ControlMsg> NisServer::on_reg_res(PortIndex port, std::span<const std::uint8_t> blob,
                                              Tick now) {
    if (!collecting_ || now > deadline_) {
        log(now, "late_reg_res", {{"port", port}});
        return {};
    }
    auto reject = [&](const char* why) -> std::vector<ControlMsg> {
        log(now, "reg_rejected", {{"port", port}, {"reason", why}});
        return {};
    };

    auto sealed = unseal_credentials(blob);
    if (!sealed) return reject("malformed");
    if (!sealed->authentic) return reject("unauthentic");

    // ground-truth check: the whole record must match a directory entry
    const Credentials& presented = sealed->creds;
    bool mac_known = directory_macs_.count(presented.mac) > 0;
    auto it = std::find(directory_.begin(), directory_.end(), presented);
    if (it == directory_.end()) return reject(mac_known ? "credential_mismatch" : "unknown_mac");
    if (registered_macs_.count(presented.mac)) return reject("duplicate");

    HostId id = mint_id(rng_, mint_exclusions());
    live_cur_.insert(id.value);
    registered_macs_.insert(presented.mac);
    registrations_.push_back(Registration{epoch_, port, presented.mac, id, now});
    log(now, "reg_accepted",
        {{"port", port},
         {"mac", presented.mac.to_string()},
         {"id", id.value.to_string()},
         {"epoch", epoch_}});
    return {RegId{port, presented.mac, id, epoch_}};
}

std::vector<ControlMsg> NisServer::on_frame_report(const FrameReport& r, Tick now) {
    auto& window = reports_[r.port];
    // a report stamped s still counts at time t iff s > t - report_window
    while (!window.empty() && !(window.front() + timers_.report_window > now)) window.pop_front();
    window.push_back(r.at);
    log(now, "report_received",
        {{"port", r.port},
         {"reason", drop_reason_name(r.reason)},
         {"window_count", window.size()}});

    if (window.size() > timers_.drop_threshold && !shut_this_epoch_.count(r.port)) {
        shut_this_epoch_.insert(r.port);
        log(now, "adaptive_escalation", {{"port", r.port}, {"window_count", window.size()}});
        log(now, "port_shutdown_cmd", {{"port", r.port}});
        return {PortShutdown{r.port}};
    }
    return {};
}

} // namespace nis
