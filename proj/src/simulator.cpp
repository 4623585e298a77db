#include "nis/simulator.hpp"

#include <algorithm>
#include <set>

namespace nis {

std::vector<std::string> validate_topology(const Topology& t) {
    std::vector<std::string> errors;
    std::set<PortIndex> used;
    std::set<std::string> names;
    std::set<Address48> macs;

    auto claim_port = [&](const std::string& who, PortIndex p) {
        if (p >= t.ports) {
            errors.push_back(who + " port " + std::to_string(p) + " out of range (switch has " +
                             std::to_string(t.ports) + " ports)");
            return;
        }
        if (!used.insert(p).second)
            errors.push_back("duplicate port assignment (port " + std::to_string(p) + ")");
    };

    for (const auto& h : t.hosts) {
        if (!names.insert(h.name).second)
            errors.push_back("duplicate host name '" + h.name + "'");
        if (!macs.insert(h.config.creds.mac).second)
            errors.push_back("duplicate MAC " + h.config.creds.mac.to_string());
        claim_port("host '" + h.name + "'", h.config.port);
    }
    if (t.attacker) {
        if (!names.insert(t.attacker->name).second)
            errors.push_back("duplicate host name '" + t.attacker->name + "'");
        if (!macs.insert(t.attacker->creds.mac).second)
            errors.push_back("duplicate MAC " + t.attacker->creds.mac.to_string());
        claim_port("attacker", t.attacker->capability.port);
    }
    if (t.link_latency == 0) errors.push_back("link_latency must be at least 1");
    return errors;
}

Simulation::Simulation(Topology topo, TimerConfig timers, SimKnobs knobs, std::uint64_t seed,
                       std::vector<Credentials> directory)
    : topo_(std::move(topo)), timers_(timers), knobs_(knobs),
      switch_(topo_.ports, &trace_),
      server_(std::move(directory), timers_, entity_stream(seed, "server"), &trace_),
      port_map_(topo_.ports) {
    std::vector<std::string> errors = validate_timer_config(timers_);
    for (auto& e : validate_topology(topo_)) errors.push_back(std::move(e));
    if (!errors.empty()) {
        std::string joined;
        for (std::size_t i = 0; i < errors.size(); ++i)
            joined += (i ? "; " : "") + errors[i];
        throw ConfigError(joined);
    }

    HostTimings timings{timers_.t_d, knobs_.arp_timeout};
    for (std::size_t i = 0; i < topo_.hosts.size(); ++i) {
        const auto& spec = topo_.hosts[i];
        hosts_.push_back(std::make_unique<Host>(spec.name, spec.config, timings,
                                                entity_stream(seed, spec.name), &trace_));
        port_map_[spec.config.port] = static_cast<int>(i);
    }
    host_detached_.assign(hosts_.size(), false);

    if (topo_.attacker) {
        const auto& spec = *topo_.attacker;
        attacker_.emplace(spec.name, spec.capability, spec.creds, spec.reg_mode,
                          entity_stream(seed, spec.name), &trace_);
        attacker_port_ = spec.capability.port;
        port_map_[attacker_port_] = -1;
    }

    trace_.log(0, "sim", "run_start",
               {{"seed", seed},
                {"ports", topo_.ports},
                {"hosts", topo_.hosts.size()},
                {"attacker", topo_.attacker.has_value()},
                {"first_round_at", knobs_.first_round_at}});
    schedule(knobs_.first_round_at, RoundStart{});
}

void Simulation::schedule(Tick at, EventPayload payload) {
    queue_.push(QueuedEvent{at, next_seq_++, std::move(payload)});
}

void Simulation::schedule_action(Tick at, std::function<void(Simulation&)> fn) {
    schedule(at, Scripted{std::move(fn)});
}

void Simulation::run_until(Tick end) {
    while (!queue_.empty() && queue_.top().at <= end) {
        QueuedEvent ev = queue_.top();
        queue_.pop();
        now_ = ev.at;
        execute(std::move(ev));
    }
    now_ = end;
}

void Simulation::finish(Tick end) {
    run_until(end);
    trace_.log(end, "sim", "run_end", {{"in_flight", data_frames_in_flight_}});
}

Host* Simulation::find_host(const std::string& name) {
    for (auto& h : hosts_)
        if (h->name() == name) return h.get();
    return nullptr;
}

std::optional<PortIndex> Simulation::endpoint_port(int host_index) const {
    if (host_index < 0) return attacker_port_;
    if (host_detached_[static_cast<std::size_t>(host_index)]) return std::nullopt;
    return hosts_[static_cast<std::size_t>(host_index)]->config().port;
}

void Simulation::host_send_ip(const std::string& host, Ipv4 dst, std::uint16_t ethertype,
                              std::vector<std::uint8_t> payload) {
    for (std::size_t i = 0; i < hosts_.size(); ++i) {
        if (hosts_[i]->name() != host) continue;
        if (host_detached_[i]) {
            trace_.log(now_, "sim", "send_while_detached", {{"host", host}});
            return;
        }
        apply_endpoint_actions(static_cast<int>(i),
                               hosts_[i]->send_to_ip(dst, ethertype, std::move(payload), now_));
        return;
    }
    trace_.log(now_, "sim", "unknown_host", {{"host", host}});
}

void Simulation::inject_attack_frames(std::vector<Frame> frames, Tick spacing) {
    if (!attacker_) return;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        Tick at = now_ + spacing * i;
        schedule(at, Scripted{[f = std::move(frames[i])](Simulation& s) {
                     s.trace_.log(s.now_, s.attacker_->name(), "attack_tx",
                                  {{"src", f.src_field.to_string()},
                                   {"dst", f.dst_field.to_string()},
                                   {"ethertype", f.ethertype}});
                     if (is_data(f)) ++s.data_frames_in_flight_;
                     s.schedule(s.now_ + s.topo_.link_latency,
                                FrameToSwitch{s.attacker_port_, f});
                 }});
    }
}

void Simulation::detach_host(const std::string& host) {
    for (std::size_t i = 0; i < hosts_.size(); ++i) {
        if (hosts_[i]->name() != host) continue;
        host_detached_[i] = true;
        PortIndex p = hosts_[i]->config().port;
        if (port_map_[p] == static_cast<int>(i)) port_map_[p].reset();
        trace_.log(now_, "sim", "detach", {{"host", host}, {"port", p}});
        return;
    }
}

void Simulation::set_attacker_port(PortIndex port) {
    if (!attacker_) return;
    if (port_map_[attacker_port_] == -1) port_map_[attacker_port_].reset();
    attacker_port_ = port;
    port_map_[port] = -1;
    trace_.log(now_, "sim", "attacker_attach", {{"port", port}});
}

void Simulation::send_control_to_switch(std::vector<ControlMsg> msgs) {
    for (auto& m : msgs) schedule(now_ + topo_.link_latency, ControlToSwitch{std::move(m)});
}

void Simulation::apply_switch_actions(std::vector<SwitchAction> actions) {
    for (auto& action : actions) {
        if (auto* d = std::get_if<DeliverAction>(&action)) {
            schedule(now_ + topo_.link_latency, FrameToEndpoint{d->out_port, std::move(d->frame)});
        } else if (auto* fl = std::get_if<FloodAction>(&action)) {
            for (PortIndex p : fl->ports)
                schedule(now_ + topo_.link_latency, FrameToEndpoint{p, fl->frame});
        } else if (std::get_if<DropAction>(&action)) {
            // terminal; the switch already logged it
        } else if (auto* r = std::get_if<ReportAction>(&action)) {
            schedule(now_ + topo_.link_latency, ReportToServer{r->report});
        } else if (auto* rel = std::get_if<RelayRegistrationAction>(&action)) {
            schedule(now_ + topo_.link_latency,
                     RegRelayToServer{rel->port, std::move(rel->payload)});
        }
    }
}

void Simulation::apply_endpoint_actions(int host_index, std::vector<HostAction> actions) {
    for (auto& action : actions) {
        if (auto* s = std::get_if<SendFrameAction>(&action)) {
            auto port = endpoint_port(host_index);
            if (!port) {
                trace_.log(now_, "sim", "link_drop",
                           {{"direction", "to_switch"},
                            {"reason", "detached"},
                            {"ethertype", s->frame.ethertype}});
                continue;
            }
            if (is_data(s->frame)) ++data_frames_in_flight_;
            schedule(now_ + topo_.link_latency, FrameToSwitch{*port, std::move(s->frame)});
        } else if (auto* t = std::get_if<TimerRequest>(&action)) {
            schedule(t->at, EntityTimer{host_index, *t});
        }
    }
}

void Simulation::execute(QueuedEvent ev) {
    if (auto* f = std::get_if<FrameToSwitch>(&ev.payload)) {
        if (is_data(f->frame) && data_frames_in_flight_ > 0) --data_frames_in_flight_;
        if (switch_.port_admin(f->port) == PortAdmin::Shut) {
            trace_.log(now_, "sim", "link_drop",
                       {{"port", f->port},
                        {"direction", "to_switch"},
                        {"ethertype", f->frame.ethertype}});
            return;
        }
        apply_switch_actions(switch_.on_frame_ingress(f->port, f->frame, now_));
        return;
    }
    if (auto* f = std::get_if<FrameToEndpoint>(&ev.payload)) {
        if (switch_.port_admin(f->port) == PortAdmin::Shut || !port_map_[f->port]) {
            trace_.log(now_, "sim", "link_drop",
                       {{"port", f->port},
                        {"direction", "to_endpoint"},
                        {"ethertype", f->frame.ethertype}});
            return;
        }
        int idx = *port_map_[f->port];
        if (idx < 0)
            apply_endpoint_actions(idx, attacker_->on_frame(f->frame, now_));
        else
            apply_endpoint_actions(idx, hosts_[static_cast<std::size_t>(idx)]->on_frame(f->frame,
                                                                                        now_));
        return;
    }
    if (auto* rel = std::get_if<RegRelayToServer>(&ev.payload)) {
        auto msg = decode_control(rel->payload);
        if (!msg || !std::holds_alternative<RegRes>(*msg)) {
            trace_.log(now_, "sim", "relay_undecodable", {{"port", rel->port}});
            return;
        }
        send_control_to_switch(server_.on_reg_res(rel->port, std::get<RegRes>(*msg).blob, now_));
        return;
    }
    if (auto* rep = std::get_if<ReportToServer>(&ev.payload)) {
        send_control_to_switch(server_.on_frame_report(rep->report, now_));
        return;
    }
    if (auto* ctl = std::get_if<ControlToSwitch>(&ev.payload)) {
        apply_switch_actions(switch_.on_control(ctl->msg, now_));
        return;
    }
    if (auto* t = std::get_if<EntityTimer>(&ev.payload)) {
        if (t->host_index < 0) {
            if (attacker_) apply_endpoint_actions(-1, attacker_->on_timer(t->req, now_));
        } else {
            auto& host = hosts_[static_cast<std::size_t>(t->host_index)];
            apply_endpoint_actions(t->host_index, host->on_timer(t->req, now_));
        }
        return;
    }
    if (std::get_if<RoundStart>(&ev.payload)) {
        send_control_to_switch(server_.start_round(now_));
        schedule(now_ + timers_.t_r, RoundEnd{});
        schedule(now_ + timers_.t_p, RoundStart{});
        return;
    }
    if (std::get_if<RoundEnd>(&ev.payload)) {
        send_control_to_switch(server_.end_round(now_));
        return;
    }
    if (auto* sc = std::get_if<Scripted>(&ev.payload)) {
        sc->fn(*this);
        return;
    }
}

} // namespace nis
