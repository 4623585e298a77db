#include "nis/lymph_switch.hpp"

namespace nis {

namespace {
const char* mode_name(SwitchMode m) {
    return m == SwitchMode::Normal ? "NORMAL" : "AUTHORIZATION";
}
} // namespace

LymphSwitch::LymphSwitch(PortIndex num_ports, Trace* trace)
    : ports_(num_ports, PortAdmin::Up), cam_(num_ports), trace_(trace) {}

void LymphSwitch::log(Tick at, const char* event, Json fields) const {
    if (trace_) trace_->log(at, "switch", event, std::move(fields));
}

std::vector<PortIndex> LymphSwitch::up_ports(std::optional<PortIndex> except) const {
    std::vector<PortIndex> out;
    for (PortIndex p = 0; p < num_ports(); ++p)
        if (ports_[p] == PortAdmin::Up && !(except && *except == p)) out.push_back(p);
    return out;
}

Frame LymphSwitch::control_frame(const ControlMsg& msg, Address48 dst) const {
    Frame f;
    f.dst_field = dst;
    f.src_field = Address48::zero(); // control plane has no address (server has no MAC)
    f.ethertype = ETHERTYPE_NIS_CONTROL;
    f.payload = encode_control(msg);
    return f;
}

std::size_t LymphSwitch::cam_size() const {
    std::size_t n = 0;
    for (const auto& e : cam_)
        if (e) ++n;
    return n;
}

const CamEntry* LymphSwitch::entry_at(PortIndex p) const {
    if (p >= cam_.size() || !cam_[p]) return nullptr;
    return &*cam_[p];
}

std::vector<CamEntry> LymphSwitch::cam_snapshot() const {
    std::vector<CamEntry> out;
    for (const auto& e : cam_)
        if (e) out.push_back(*e);
    return out;
}

std::vector<SwitchAction> LymphSwitch::on_frame_ingress(PortIndex port, const Frame& f, Tick now) {
    std::vector<SwitchAction> actions;
    if (port >= num_ports() || ports_[port] == PortAdmin::Shut) return actions; // link is down

    log(now, "ingress",
        {{"port", port},
         {"src", f.src_field.to_string()},
         {"dst", f.dst_field.to_string()},
         {"ethertype", f.ethertype}});

    if (mode_ == SwitchMode::Authorization) {
        if (f.ethertype == ETHERTYPE_NIS_CONTROL) {
            // registration path: relay to the server with the true ingress port
            log(now, "reg_relay", {{"port", port}, {"bytes", f.payload.size()}});
            actions.push_back(RelayRegistrationAction{port, f.payload});
        } else {
            log(now, "drop",
                {{"port", port},
                 {"src", f.src_field.to_string()},
                 {"dst", f.dst_field.to_string()},
                 {"ethertype", f.ethertype},
                 {"reason", drop_reason_name(DropReason::auth_mode)}});
            actions.push_back(DropAction{port, f, DropReason::auth_mode}); // no report
        }
        return actions;
    }

    // NORMAL mode: the src field must be exactly the ID bound to this port
    const CamEntry* bound = entry_at(port);
    if (!bound || bound->id.value != f.src_field) {
        FrameReport report{port, f.src_field, f.dst_field, DropReason::id_mismatch, now};
        log(now, "drop",
            {{"port", port},
             {"src", f.src_field.to_string()},
             {"dst", f.dst_field.to_string()},
             {"ethertype", f.ethertype},
             {"reason", drop_reason_name(DropReason::id_mismatch)}});
        log(now, "report", {{"port", port}, {"reason", drop_reason_name(report.reason)}});
        actions.push_back(DropAction{port, f, DropReason::id_mismatch});
        actions.push_back(ReportAction{report});
        return actions;
    }

    Frame out = f;
    out.src_field = bound->mac; // ID -> MAC on the way through

    if (f.dst_field.is_broadcast()) {
        log(now, "swap",
            {{"port", port},
             {"src_in", f.src_field.to_string()},
             {"src_out", out.src_field.to_string()},
             {"dst_in", f.dst_field.to_string()},
             {"dst_out", f.dst_field.to_string()}});
        auto targets = up_ports(port);
        log(now, "flood",
            {{"in_port", port},
             {"ports", targets},
             {"src", out.src_field.to_string()},
             {"dst", out.dst_field.to_string()},
             {"ethertype", out.ethertype}});
        actions.push_back(FloodAction{port, std::move(targets), std::move(out)});
        return actions;
    }

    // unicast: dst MAC must be bound somewhere; unknown dst is drop+report,
    // never flood (flooding MAC-addressed frames would hand MACs to everyone)
    const CamEntry* dst_entry = nullptr;
    for (PortIndex p = 0; p < num_ports(); ++p)
        if (cam_[p] && cam_[p]->mac == f.dst_field) {
            dst_entry = &*cam_[p];
            break;
        }
    if (!dst_entry) {
        FrameReport report{port, f.src_field, f.dst_field, DropReason::unknown_dst, now};
        log(now, "drop",
            {{"port", port},
             {"src", f.src_field.to_string()},
             {"dst", f.dst_field.to_string()},
             {"ethertype", f.ethertype},
             {"reason", drop_reason_name(DropReason::unknown_dst)}});
        log(now, "report", {{"port", port}, {"reason", drop_reason_name(report.reason)}});
        actions.push_back(DropAction{port, f, DropReason::unknown_dst});
        actions.push_back(ReportAction{report});
        return actions;
    }

    out.dst_field = dst_entry->id.value; // MAC -> ID toward the receiver
    log(now, "swap",
        {{"port", port},
         {"src_in", f.src_field.to_string()},
         {"src_out", out.src_field.to_string()},
         {"dst_in", f.dst_field.to_string()},
         {"dst_out", out.dst_field.to_string()}});
    log(now, "deliver",
        {{"in_port", port},
         {"out_port", dst_entry->port},
         {"src", out.src_field.to_string()},
         {"dst", out.dst_field.to_string()},
         {"ethertype", out.ethertype}});
    actions.push_back(DeliverAction{port, dst_entry->port, std::move(out)});
    return actions;
}

BindResult LymphSwitch::cam_bind(PortIndex port, Address48 mac, HostId id, std::uint32_t epoch,
                                 Tick now) {
    auto reject = [&](BindResult r, const char* why) {
        log(now, "cam_bind_rejected", {{"port", port}, {"reason", why}});
        return r;
    };
    if (port >= num_ports()) return reject(BindResult::bad_port, "unknown_port");
    if (mode_ != SwitchMode::Authorization)
        return reject(BindResult::not_in_authorization, "normal_mode_immutable");
    if (ports_[port] == PortAdmin::Shut) return reject(BindResult::port_shut, "port_shut");
    for (PortIndex p = 0; p < num_ports(); ++p) {
        if (p == port || !cam_[p] || cam_[p]->epoch != epoch) continue;
        if (cam_[p]->mac == mac) return reject(BindResult::duplicate_mac, "duplicate_mac");
        if (cam_[p]->id == id) return reject(BindResult::duplicate_id, "duplicate_id");
    }
    cam_[port] = CamEntry{port, mac, id, epoch};
    log(now, "cam_bind",
        {{"port", port},
         {"mac", mac.to_string()},
         {"id", id.value.to_string()},
         {"epoch", epoch}});
    return BindResult::ok;
}

std::vector<SwitchAction> LymphSwitch::begin_authorization(std::uint32_t epoch, Tick now) {
    std::vector<SwitchAction> actions;
    bool reentry = mode_ == SwitchMode::Authorization;
    mode_ = SwitchMode::Authorization;
    current_epoch_ = epoch;
    log(now, "mode_change",
        {{"mode", mode_name(mode_)}, {"epoch", epoch}, {"reentry", reentry}});

    // the new round re-admits every SHUT port so its host can try to register
    for (PortIndex p = 0; p < num_ports(); ++p) {
        if (ports_[p] == PortAdmin::Shut) {
            ports_[p] = PortAdmin::Up;
            log(now, "port_readmit", {{"port", p}});
        }
    }

    auto targets = up_ports();
    if (!targets.empty()) {
        Frame req = control_frame(RegReq{epoch}, Address48::broadcast());
        log(now, "flood",
            {{"ports", targets},
             {"src", req.src_field.to_string()},
             {"dst", req.dst_field.to_string()},
             {"ethertype", req.ethertype}});
        actions.push_back(FloodAction{std::nullopt, std::move(targets), std::move(req)});
    }
    return actions;
}

std::vector<SwitchAction> LymphSwitch::end_authorization(Tick now) {
    std::vector<SwitchAction> actions;
    mode_ = SwitchMode::Normal;
    log(now, "mode_change", {{"mode", mode_name(mode_)}, {"epoch", current_epoch_}});

    // evict entries the round did not renew
    for (PortIndex p = 0; p < num_ports(); ++p) {
        if (cam_[p] && cam_[p]->epoch != current_epoch_) {
            log(now, "cam_evict",
                {{"port", p},
                 {"mac", cam_[p]->mac.to_string()},
                 {"id", cam_[p]->id.value.to_string()},
                 {"epoch", cam_[p]->epoch}});
            cam_[p].reset();
        }
    }
    // any UP port that didn't register this round goes dark
    for (PortIndex p = 0; p < num_ports(); ++p) {
        if (ports_[p] == PortAdmin::Up && !cam_[p]) {
            ports_[p] = PortAdmin::Shut;
            log(now, "port_shut", {{"port", p}, {"cause", "unregistered"}});
        }
    }

    auto targets = up_ports();
    if (!targets.empty()) {
        Frame end = control_frame(RegEnd{current_epoch_}, Address48::zero());
        log(now, "flood",
            {{"ports", targets},
             {"src", end.src_field.to_string()},
             {"dst", end.dst_field.to_string()},
             {"ethertype", end.ethertype}});
        actions.push_back(FloodAction{std::nullopt, std::move(targets), std::move(end)});
    }
    return actions;
}

void LymphSwitch::shutdown_port(PortIndex port, Tick now) {
    if (port >= num_ports()) {
        log(now, "port_shut_rejected", {{"port", port}, {"reason", "unknown_port"}});
        return;
    }
    if (ports_[port] == PortAdmin::Shut) {
        log(now, "port_shut", {{"port", port}, {"cause", "server_cmd"}, {"already_shut", true}});
        return;
    }
    ports_[port] = PortAdmin::Shut;
    if (cam_[port]) {
        log(now, "cam_evict",
            {{"port", port},
             {"mac", cam_[port]->mac.to_string()},
             {"id", cam_[port]->id.value.to_string()},
             {"epoch", cam_[port]->epoch}});
        cam_[port].reset();
    }
    log(now, "port_shut", {{"port", port}, {"cause", "server_cmd"}});
}

std::vector<SwitchAction> LymphSwitch::on_control(const ControlMsg& msg, Tick now) {
    if (auto* m = std::get_if<RegReq>(&msg)) return begin_authorization(m->epoch, now);
    if (auto* m = std::get_if<RegEnd>(&msg)) {
        (void)m;
        return end_authorization(now);
    }
    if (auto* m = std::get_if<RegId>(&msg)) {
        std::vector<SwitchAction> actions;
        if (cam_bind(m->port, m->mac, m->id, m->epoch, now) == BindResult::ok) {
            // forward the freshly minted ID to the host on that port
            Frame f = control_frame(*m, Address48::zero());
            log(now, "deliver",
                {{"in_port", m->port},
                 {"out_port", m->port},
                 {"src", f.src_field.to_string()},
                 {"dst", f.dst_field.to_string()},
                 {"ethertype", f.ethertype}});
            actions.push_back(DeliverAction{m->port, m->port, std::move(f)});
        }
        return actions;
    }
    if (auto* m = std::get_if<PortShutdown>(&msg)) {
        shutdown_port(m->port, now);
        return {};
    }
    // REG_RES / FRAME_REPORT never arrive from the server side
    log(now, "unexpected_control", {});
    return {};
}

} // namespace nis
