#include "nis/attacker.hpp"

namespace nis {

Attacker::Attacker(std::string name, AttackerCapability cap, Credentials own_creds,
                   RegResponseMode reg_mode, Rng rng, Trace* trace)
    : name_(std::move(name)), cap_(cap), own_creds_(std::move(own_creds)), reg_mode_(reg_mode),
      rng_(rng), trace_(trace) {}

void Attacker::log(Tick at, const char* event, Json fields) const {
    if (trace_) trace_->log(at, name_, event, std::move(fields));
}

Address48 Attacker::best_src() const {
    if (cap_.knows_id) return cap_.knows_id->value; // stolen beats earned: it is the victim's
    if (earned_id_) return earned_id_->value;
    return own_creds_.mac; // raw MAC: will fail the ingress check, which is the point
}

std::vector<HostAction> Attacker::on_frame(const Frame& f, Tick now) {
    std::vector<HostAction> out;

    if (f.ethertype == ETHERTYPE_NIS_CONTROL) {
        auto msg = decode_control(f.payload);
        if (!msg) return out;
        if (auto* req = std::get_if<RegReq>(&msg.value())) {
            if (reg_mode_ == RegResponseMode::None) return out;
            earned_id_.reset();
            reg_epoch_ = req->epoch;
            reg_gen_ += 1;
            auto backoff = draw_backoff(rng_);
            Tick fire_at = now + std::max<Tick>(backoff, 1);
            log(now, "backoff_drawn", {{"epoch", req->epoch}, {"value", backoff},
                                       {"fire_at", fire_at}});
            out.push_back(TimerRequest{fire_at, HostTimerKind::BackoffFire, reg_gen_, Ipv4{}});
        } else if (auto* rid = std::get_if<RegId>(&msg.value())) {
            if (rid->mac == own_creds_.mac) {
                earned_id_ = rid->id;
                log(now, "id_assigned", {{"id", rid->id.value.to_string()}, {"epoch", rid->epoch}});
            }
        }
        return out;
    }

    // promiscuous on its own segment: everything that arrives is a capture
    ++frames_received_;
    log(now, "attacker_rx",
        {{"src", f.src_field.to_string()},
         {"dst", f.dst_field.to_string()},
         {"ethertype", f.ethertype}});
    return out;
}

std::vector<HostAction> Attacker::on_timer(const TimerRequest& t, Tick now) {
    std::vector<HostAction> out;
    if (t.kind != HostTimerKind::BackoffFire || t.gen != reg_gen_) return out;

    // Valid mode seals honestly; Invalid mode presents the same record but
    // cannot produce an authentic seal for credentials it does not hold
    bool authentic = reg_mode_ == RegResponseMode::Valid && cap_.has_valid_credentials;
    Frame f;
    f.dst_field = Address48::zero();
    f.src_field = Address48::zero();
    f.ethertype = ETHERTYPE_NIS_CONTROL;
    f.payload = encode_control(RegRes{cap_.port, seal_credentials(own_creds_, authentic)});
    log(now, "reg_res_sent", {{"port", cap_.port}, {"authentic", authentic}});
    out.push_back(SendFrameAction{std::move(f)});
    return out;
}

std::vector<Frame> Attacker::port_stealing_frames(Address48 victim_mac, int n) {
    std::vector<Frame> out;
    Address48 src = cap_.knows_id ? cap_.knows_id->value : victim_mac;
    for (int i = 0; i < n; ++i) {
        Frame f;
        f.dst_field = Address48::broadcast();
        f.src_field = src;
        f.ethertype = ETHERTYPE_ARP;
        f.payload = encode_arp(ArpPayload{ARP_REQUEST, own_creds_.ip, Address48::zero(),
                                          own_creds_.ip});
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<Frame> Attacker::mac_flood_frames(int n) {
    std::vector<Frame> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Frame f;
        f.dst_field = Address48::broadcast();
        f.src_field = Address48(rng_.next_u48()); // forged, fresh every frame
        f.ethertype = ETHERTYPE_IPV4;
        f.payload = {0xFF};
        out.push_back(std::move(f));
    }
    return out;
}

Frame Attacker::arp_poison_frame(Ipv4 claimed_ip, Ipv4 target_ip) {
    // the MAC planted in the victim's cache: the stolen one routes the
    // victim's traffic here, the attacker's own one merely blackholes it
    Address48 planted = cap_.knows_victim_mac ? *cap_.knows_victim_mac : own_creds_.mac;
    Frame f;
    f.dst_field = Address48::broadcast();
    f.src_field = best_src();
    f.ethertype = ETHERTYPE_ARP;
    f.payload = encode_arp(ArpPayload{ARP_REPLY, claimed_ip, planted, target_ip});
    return f;
}

} // namespace nis
