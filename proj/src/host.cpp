#include "nis/host.hpp"

namespace nis {

Host::Host(std::string name, HostConfig cfg, HostTimings timings, Rng rng, Trace* trace)
    : name_(std::move(name)), cfg_(std::move(cfg)), timings_(timings), rng_(rng), trace_(trace) {}

void Host::log(Tick at, const char* event, Json fields) const {
    if (trace_) trace_->log(at, name_, event, std::move(fields));
}

Frame Host::control_frame(const ControlMsg& msg) const {
    Frame f;
    f.dst_field = Address48::zero(); // control plane addressing is positional, not MAC
    f.src_field = Address48::zero();
    f.ethertype = ETHERTYPE_NIS_CONTROL;
    f.payload = encode_control(msg);
    return f;
}

std::vector<HostAction> Host::on_frame(const Frame& f, Tick now) {
    // NIS control frames sit beneath the ID discipline: they are how a host
    // learns its ID in the first place, so the acceptance filter never applies
    if (f.ethertype == ETHERTYPE_NIS_CONTROL) {
        auto msg = decode_control(f.payload);
        if (!msg) {
            log(now, "unexpected_control", {{"reason", "undecodable"}});
            return {};
        }
        return on_control(*msg, now);
    }

    bool mine = current_id_ && f.dst_field == current_id_->value;
    if (!mine && !f.dst_field.is_broadcast()) {
        ++ignored_;
        if (f.dst_field == cfg_.creds.mac) {
            // post-swap traffic must address IDs; a raw MAC here means the
            // swap discipline was bypassed somewhere
            log(now, "rx_anomaly",
                {{"src", f.src_field.to_string()}, {"dst", f.dst_field.to_string()}});
        } else {
            log(now, "rx_ignored",
                {{"src", f.src_field.to_string()}, {"dst", f.dst_field.to_string()}});
        }
        return {};
    }

    ++accepted_;
    log(now, "rx_accept",
        {{"src", f.src_field.to_string()},
         {"dst", f.dst_field.to_string()},
         {"ethertype", f.ethertype}});

    std::vector<HostAction> out;
    if (f.ethertype == ETHERTYPE_ARP) on_arp(f, now, out);
    return out;
}

std::vector<HostAction> Host::on_control(const ControlMsg& msg, Tick now) {
    std::vector<HostAction> out;

    if (auto* req = std::get_if<RegReq>(&msg)) {
        // new round: ID is void until reissued; randomize the response slot
        current_id_.reset();
        in_auth_window_ = true;
        reg_epoch_ = req->epoch;
        backoff_ = draw_backoff(rng_);
        reg_gen_ += 1; // invalidates any previous pending fire
        // the counter decrements once per t_d and fires at zero, so a draw of
        // b lands b*t_d ticks out; b=0 still waits for the next boundary
        Tick fire_at = now + std::max<Tick>(*backoff_, 1) * timings_.t_d;
        log(now, "backoff_drawn", {{"epoch", req->epoch}, {"value", *backoff_}, {"fire_at", fire_at}});
        out.push_back(TimerRequest{fire_at, HostTimerKind::BackoffFire, reg_gen_, Ipv4{}});
        return out;
    }

    if (auto* rid = std::get_if<RegId>(&msg)) {
        if (rid->mac != cfg_.creds.mac) {
            log(now, "unexpected_control", {{"reason", "reg_id_for_other_mac"}});
            return out;
        }
        current_id_ = rid->id;
        backoff_.reset();
        log(now, "id_assigned", {{"id", rid->id.value.to_string()}, {"epoch", rid->epoch}});
        return out;
    }

    if (std::get_if<RegEnd>(&msg)) {
        in_auth_window_ = false;
        std::size_t flushed = 0, dropped = 0;
        while (!outbox_.empty()) {
            auto [dst, pending] = std::move(outbox_.front());
            outbox_.pop_front();
            if (current_id_) {
                Frame f;
                f.dst_field = dst;
                f.src_field = current_id_->value;
                f.ethertype = pending.ethertype;
                f.payload = std::move(pending.payload);
                log(now, "tx", {{"dst", dst.to_string()}, {"ethertype", f.ethertype},
                                {"deferred", true}});
                out.push_back(SendFrameAction{std::move(f)});
                ++flushed;
            } else {
                ++dropped; // window closed with no ID; these frames have no legal source
            }
        }
        log(now, "auth_window_end", {{"flushed", flushed}, {"dropped", dropped}});
        return out;
    }

    log(now, "unexpected_control", {{"reason", "wrong_direction"}});
    return out;
}

void Host::on_arp(const Frame& f, Tick now, std::vector<HostAction>& out) {
    auto arp = decode_arp(f.payload);
    if (!arp) {
        log(now, "arp_malformed", {});
        return;
    }

    if (arp->op == ARP_REQUEST) {
        if (arp->target_ip == cfg_.creds.ip) {
            // answer to the requester's post-swap source MAC, carrying our
            // real MAC in the payload (the part the cache will store)
            ArpPayload reply{ARP_REPLY, cfg_.creds.ip, cfg_.creds.mac, arp->sender_ip};
            log(now, "arp_reply_sent",
                {{"target_ip", arp->sender_ip.to_string()}, {"to", f.src_field.to_string()}});
            auto [res, actions] = send_data(f.src_field, ETHERTYPE_ARP, encode_arp(reply), now);
            (void)res;
            for (auto& a : actions) out.push_back(std::move(a));
        }
        return;
    }

    // ARP_REPLY: update the cache no matter whether we asked — the classic
    // permissive rule, kept on purpose; poisoning scenarios depend on it
    bool solicited = pending_arp_.count(arp->sender_ip) > 0;
    arp_cache_[arp->sender_ip] = arp->sender_mac;
    log(now, "arp_cache_update",
        {{"ip", arp->sender_ip.to_string()},
         {"mac", arp->sender_mac.to_string()},
         {"solicited", solicited}});

    if (solicited) {
        auto pend = std::move(pending_arp_[arp->sender_ip]);
        pending_arp_.erase(arp->sender_ip);
        for (auto& [p, queued_at] : pend.queued) {
            (void)queued_at;
            auto [res, actions] = send_data(arp->sender_mac, p.ethertype, std::move(p.payload), now);
            (void)res;
            for (auto& a : actions) out.push_back(std::move(a));
        }
    }
}

std::vector<HostAction> Host::on_timer(const TimerRequest& t, Tick now) {
    std::vector<HostAction> out;

    if (t.kind == HostTimerKind::BackoffFire) {
        if (t.gen != reg_gen_ || !backoff_) return out; // superseded by a newer REG_REQ
        backoff_.reset();
        auto blob = seal_credentials(cfg_.creds, /*authentic=*/true);
        log(now, "reg_res_sent", {{"port", cfg_.port}, {"epoch", reg_epoch_}});
        out.push_back(SendFrameAction{control_frame(RegRes{cfg_.port, std::move(blob)})});
        return out;
    }

    // ArpTimeout
    auto it = pending_arp_.find(t.ip);
    if (it == pending_arp_.end() || it->second.gen != t.gen) return out; // already resolved
    std::size_t dropped = it->second.queued.size();
    pending_arp_.erase(it);
    log(now, "arp_timeout", {{"ip", t.ip.to_string()}, {"dropped", dropped}});
    return out;
}

std::pair<SendResult, std::vector<HostAction>> Host::send_data(Address48 dst_mac,
                                                               std::uint16_t ethertype,
                                                               std::vector<std::uint8_t> payload,
                                                               Tick now) {
    std::vector<HostAction> out;
    if (in_auth_window_) {
        // the network is mid-registration; park the frame until REG_END
        outbox_.emplace_back(dst_mac, Pending{ethertype, std::move(payload)});
        if (outbox_.size() > OUTBOX_DEPTH) {
            outbox_.pop_front();
            log(now, "outbox_drop", {{"depth", OUTBOX_DEPTH}});
        }
        return {SendResult::Deferred, std::move(out)};
    }
    if (!current_id_) {
        log(now, "send_unregistered", {{"dst", dst_mac.to_string()}});
        return {SendResult::Unregistered, std::move(out)};
    }
    Frame f;
    f.dst_field = dst_mac;
    f.src_field = current_id_->value; // never the MAC: ID substitution is total
    f.ethertype = ethertype;
    f.payload = std::move(payload);
    log(now, "tx", {{"dst", dst_mac.to_string()}, {"ethertype", ethertype}});
    out.push_back(SendFrameAction{std::move(f)});
    return {SendResult::Sent, std::move(out)};
}

std::vector<HostAction> Host::send_to_ip(Ipv4 ip, std::uint16_t ethertype,
                                         std::vector<std::uint8_t> payload, Tick now) {
    auto hit = arp_cache_.find(ip);
    if (hit != arp_cache_.end()) {
        auto [res, actions] = send_data(hit->second, ethertype, std::move(payload), now);
        (void)res;
        return actions;
    }

    // cache miss: queue the payload behind a resolution attempt
    bool already_resolving = pending_arp_.count(ip) > 0;
    auto& pending = pending_arp_[ip];
    if (!already_resolving) pending.gen = ++arp_gen_;
    pending.queued.emplace_back(Pending{ethertype, std::move(payload)}, now);

    std::vector<HostAction> out;
    if (!already_resolving) {
        ArpPayload req{ARP_REQUEST, cfg_.creds.ip, Address48::zero(), ip};
        log(now, "arp_request_sent", {{"target_ip", ip.to_string()}});
        auto [res, actions] = send_data(Address48::broadcast(), ETHERTYPE_ARP, encode_arp(req), now);
        (void)res;
        out = std::move(actions);
        out.push_back(TimerRequest{now + timings_.arp_timeout, HostTimerKind::ArpTimeout,
                                   pending.gen, ip});
    }
    return out;
}

} // namespace nis
