#include "rsq/netsim.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <ostream>

namespace rsq {

void QueryDescriptor::validate() const {
    if (!(range > 0.0)) throw ContractError("query range must be positive");
    if (window_begin > window_end) throw ContractError("query window start after end");
    if (ttl < 0) throw ContractError("query ttl must be non-negative");
}

void LinkModel::validate() const {
    if (!(range > 0.0)) throw ContractError("transmission range must be positive");
    if (!(delivery_prob > 0.0 && delivery_prob <= 1.0))
        throw ContractError("delivery probability must lie in (0, 1]");
    if (!(bandwidth > 0.0) || !(packet_bits > 0.0))
        throw ContractError("bandwidth and packet size must be positive");
    if (per_hop_latency < 0.0) throw ContractError("per-hop latency must be non-negative");
}

const char* to_string(MsgType t) {
    switch (t) {
        case MsgType::rsq: return "RSQ_TYPE";
        case MsgType::rsq_reply: return "RSQ_REPLY_TYPE";
        case MsgType::update: return "UPDATE";
    }
    return "?";
}

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::message_delivery: return "message-delivery";
        case EventKind::waypoint_arrival: return "waypoint-arrival";
        case EventKind::periodic_report: return "periodic-report";
        case EventKind::safe_time_trigger: return "safe-time-trigger";
        case EventKind::query_issue: return "query-issue";
        case EventKind::query_expire: return "query-expire";
        case EventKind::collect_timeout: return "collect-timeout";
    }
    return "?";
}

MotionState World::motion(NodeId n, double t) const {
    const auto& plan = plans.at(n);
    const Leg& leg = plan.legs()[plan.leg_index_at(t)];
    return MotionState{leg.from, leg.velocity(), leg.depart};
}

Vec2 World::position(NodeId n, double t) const { return position_at(motion(n, t), t); }

DataObject World::object(NodeId n, double t) const {
    if (!has_object(n)) throw ContractError("node carries no data object");
    const MotionState m = motion(n, t);
    return DataObject{n, m.position, m.velocity, *attrs[n], m.valid_from};
}

std::vector<int> World::hop_counts(NodeId from, double r, double t) const {
    std::vector<Vec2> pos(size());
    for (NodeId n = 0; n < size(); ++n) pos[n] = position(n, t);
    std::vector<int> hops(size(), -1);
    std::deque<NodeId> frontier{from};
    hops.at(from) = 0;
    while (!frontier.empty()) {
        const NodeId u = frontier.front();
        frontier.pop_front();
        for (NodeId v = 0; v < size(); ++v)
            if (hops[v] < 0 && distance(pos[u], pos[v]) <= r) {
                hops[v] = hops[u] + 1;
                frontier.push_back(v);
            }
    }
    return hops;
}

DataObject World::object_now(NodeId n, double t) const {
    DataObject o = object(n, t);
    o.position = o.position_at(t);
    o.observed_at = t;
    return o;
}

Simulator::Simulator(const World& world, LinkModel link, std::uint64_t seed, double horizon)
    : world_(world), link_(link), seed_(seed), horizon_(horizon) {
    link_.validate();
    if (world_.attrs.size() != world_.plans.size())
        throw ConfigError("world: attribute table does not match node count");
    tx_free_.assign(world_.size(), 0.0);
    link_gen_.assign(world_.size() * world_.size(), 0);
    link_up_.assign(world_.size() * world_.size(), 0);
}

void Simulator::push(Event e) {
    e.seq = seq_++;
    queue_.push(e);
}

void Simulator::schedule(double at, const TimerEvent& ev) {
    if (at < now_) throw ContractError("cannot schedule an event in the past");
    push(Event{at, 0, ev.kind, ev.node, kBroadcast, ev.query, ev.tag, static_cast<std::size_t>(-1)});
}

std::vector<NodeId> Simulator::neighbors(NodeId n) const {
    std::vector<NodeId> out;
    const Vec2 p = world_.position(n, now_);
    const double r2 = link_.range * link_.range;
    for (NodeId m = 0; m < world_.size(); ++m)
        if (m != n && (world_.position(m, now_) - p).norm2() <= r2) out.push_back(m);
    return out;
}

bool Simulator::linked(NodeId a, NodeId b) const {
    return a != b && distance(world_.position(a, now_), world_.position(b, now_)) <= link_.range;
}

void Simulator::count_sent(MsgType t) {
    switch (t) {
        case MsgType::rsq: ++counters_.sent_flood; break;
        case MsgType::rsq_reply: ++counters_.sent_reply; break;
        case MsgType::update: ++counters_.sent_update; break;
    }
}

bool Simulator::draw_delivery(NodeId src, NodeId dst) {
    if (link_.delivery_prob >= 1.0) return true;
    const std::uint64_t link_key = (std::uint64_t{src} << 32) | dst;
    const std::uint64_t index = link_draws_[link_key]++;
    const std::uint64_t h = derive_seed(seed_ ^ 0x6c6f7373ULL, link_key, index);
    return static_cast<double>(h >> 11) * 0x1.0p-53 < link_.delivery_prob;
}

void Simulator::transmit(NodeId src, const std::vector<NodeId>& receivers, Message m) {
    count_sent(m.type);
    const double start = std::max(now_, tx_free_[src]);
    tx_free_[src] = start + link_.tx_time();
    const double arrive = start + link_.hop_delay();
    m.source = src;
    for (NodeId dst : receivers) {
        ++counters_.attempts;
        if (!draw_delivery(src, dst)) {
            ++counters_.lost;
            continue;
        }
        ++counters_.delivered;
        std::size_t slot;
        if (!free_slots_.empty()) {
            slot = free_slots_.back();
            free_slots_.pop_back();
            in_flight_[slot] = m;
        } else {
            slot = in_flight_.size();
            in_flight_.push_back(m);
        }
        push(Event{arrive, 0, EventKind::message_delivery, dst, src, m.query, 0, slot});
    }
}

void Simulator::broadcast(NodeId src, Message m) {
    m.destination = kBroadcast;
    transmit(src, neighbors(src), std::move(m));
}

void Simulator::unicast(NodeId src, NodeId dst, Message m) {
    m.destination = dst;
    if (!linked(src, dst)) {
        count_sent(m.type);
        ++counters_.attempts;
        ++counters_.lost;
        return;
    }
    transmit(src, {dst}, std::move(m));
}

void Simulator::drop_unroutable(const Message&) {
    ++counters_.attempts;
    ++counters_.lost;
}

void Simulator::schedule_waypoint(NodeId n) {
    const auto& plan = world_.plans[n];
    const Leg& leg = plan.legs()[plan.leg_index_at(now_)];
    if (leg.arrive <= horizon_)
        push(Event{leg.arrive, 0, EventKind::waypoint_arrival, n, kBroadcast, 0, 0,
                   static_cast<std::size_t>(-1)});
}

void Simulator::schedule_link(NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    const std::uint64_t gen = ++link_gen_[pair_index(a, b)];
    const auto roots =
        disk_crossings(world_.motion(a, now_), world_.motion(b, now_), link_.range, 0.0);
    if (!roots) return;
    double next = kInf;
    if (roots->first > now_) next = roots->first;
    else if (roots->second > now_) next = roots->second;
    // Fire just past the crossing so the closed-disk test sees the new state.
    next += 1e-6;
    if (next <= horizon_)
        push(Event{next, 0, EventKind::safe_time_trigger, a, b, 0, gen,
                   static_cast<std::size_t>(-1)});
}

void Simulator::trace_line(const Event& e, const Message* m) {
    if (!trace_) return;
    char buf[256];
    auto id = [](NodeId n, char* out, std::size_t len) {
        if (n == kBroadcast) std::snprintf(out, len, "-");
        else std::snprintf(out, len, "%u", n);
    };
    char src[16], dst[16], ttl[16], qid[16], oid[16];
    const char* type = "-";
    std::snprintf(ttl, sizeof ttl, "-");
    std::snprintf(qid, sizeof qid, "-");
    std::snprintf(oid, sizeof oid, "-");
    if (m) {
        id(m->source, src, sizeof src);
        id(e.node, dst, sizeof dst);
        type = to_string(m->type);
        std::snprintf(ttl, sizeof ttl, "%d", m->ttl);
        std::snprintf(qid, sizeof qid, "%u", m->query);
        if (const auto* o = m->object()) std::snprintf(oid, sizeof oid, "%u", o->id);
    } else {
        id(e.node, src, sizeof src);
        id(e.peer, dst, sizeof dst);
        if (e.kind != EventKind::waypoint_arrival && e.kind != EventKind::safe_time_trigger)
            std::snprintf(qid, sizeof qid, "%u", e.query);
    }
    std::snprintf(buf, sizeof buf, "%.9f\t%s\t%s\t%s\t%s\t%s\t%s\t%s\n", e.at, to_string(e.kind),
                  src, dst, type, ttl, qid, oid);
    *trace_ << buf;
}

void Simulator::run(Protocol& protocol) {
    const auto n = static_cast<NodeId>(world_.size());
    for (NodeId a = 0; a < n; ++a) {
        schedule_waypoint(a);
        for (NodeId b = a + 1; b < n; ++b) {
            link_up_[pair_index(a, b)] = linked(a, b) ? 1 : 0;
            schedule_link(a, b);
        }
    }
    protocol.on_start(*this);

    while (!queue_.empty()) {
        const Event e = queue_.top();
        if (e.at > horizon_) break;
        queue_.pop();
        now_ = e.at;
        switch (e.kind) {
            case EventKind::message_delivery: {
                const Message m = std::move(in_flight_[e.message]);
                free_slots_.push_back(e.message);
                trace_line(e, &m);
                protocol.on_message(*this, e.node, m);
                break;
            }
            case EventKind::waypoint_arrival: {
                trace_line(e, nullptr);
                for (NodeId b = 0; b < n; ++b)
                    if (b != e.node) schedule_link(e.node, b);
                schedule_waypoint(e.node);
                protocol.on_waypoint(*this, e.node);
                break;
            }
            case EventKind::safe_time_trigger: {
                if (e.peer == kBroadcast) {
                    trace_line(e, nullptr);
                    protocol.on_timer(*this, TimerEvent{e.kind, e.node, e.query, e.tag});
                    break;
                }
                const std::size_t idx = pair_index(e.node, e.peer);
                if (e.tag != link_gen_[idx]) break;  // invalidated by a leg change
                const std::uint8_t up = linked(e.node, e.peer) ? 1 : 0;
                schedule_link(e.node, e.peer);
                if (up == link_up_[idx]) break;
                link_up_[idx] = up;
                trace_line(e, nullptr);
                protocol.on_link_change(*this, e.node, e.peer, up != 0);
                break;
            }
            default:
                trace_line(e, nullptr);
                protocol.on_timer(*this, TimerEvent{e.kind, e.node, e.query, e.tag});
                break;
        }
    }
}

void FloodRouter::originate(Simulator& sim, NodeId origin, std::uint64_t key, Message m) {
    routes_[{key, origin}] = Route{kBroadcast, 0};
    m.hops = 0;
    m.path.assign(1, origin);
    sim.broadcast(origin, std::move(m));
}

bool FloodRouter::on_flood(Simulator& sim, NodeId node, std::uint64_t key, const Message& m) {
    auto [it, inserted] = routes_.try_emplace({key, node}, Route{m.source, m.hops + 1});
    if (!inserted) return false;
    if (m.ttl > 0) {
        Message fwd = m;
        fwd.ttl = m.ttl - 1;
        fwd.hops = m.hops + 1;
        fwd.path.push_back(node);
        sim.broadcast(node, std::move(fwd));
    }
    return true;
}

const FloodRouter::Route* FloodRouter::route(NodeId node, std::uint64_t key) const {
    auto it = routes_.find({key, node});
    return it == routes_.end() ? nullptr : &it->second;
}

void FloodRouter::set_route(NodeId node, std::uint64_t key, Route r) { routes_[{key, node}] = r; }

bool FloodRouter::reverse_forward(Simulator& sim, NodeId node, std::uint64_t key,
                                  Message m) const {
    const Route* r = route(node, key);
    if (!r || r->parent == kBroadcast) {
        sim.drop_unroutable(m);
        return false;
    }
    m.path.push_back(node);
    sim.unicast(node, r->parent, std::move(m));
    return true;
}

namespace {

class SingleFlood : public Protocol {
public:
    SingleFlood(NodeId origin, int ttl, double at) : origin_(origin), ttl_(ttl), at_(at) {}

    void on_start(Simulator& sim) override {
        sim.schedule(at_, TimerEvent{EventKind::query_issue, origin_, 0, 0});
    }
    void on_timer(Simulator& sim, const TimerEvent& ev) override {
        if (ev.kind != EventKind::query_issue) return;
        Message m;
        m.type = MsgType::rsq;
        m.ttl = ttl_;
        router_.originate(sim, origin_, 0, std::move(m));
    }
    void on_message(Simulator& sim, NodeId at, const Message& m) override {
        if (m.type == MsgType::rsq && router_.on_flood(sim, at, 0, m)) out.parent[at] = m.source;
    }

    FloodOutcome out;

private:
    NodeId origin_;
    int ttl_;
    double at_;
    FloodRouter router_;
};

}  // namespace

FloodOutcome flood(const World& world, const LinkModel& link, std::uint64_t seed, NodeId origin,
                   int ttl, double at) {
    if (ttl < 0) throw ContractError("flood: ttl must be non-negative");
    if (origin >= world.size()) throw ContractError("flood: unknown origin");
    Simulator sim(world, link, seed, at + 10.0);
    SingleFlood p(origin, ttl, at);
    sim.run(p);
    p.out.parent.erase(origin);
    for (const auto& [node, parent] : p.out.parent) p.out.delivered.push_back(node);
    p.out.counters = sim.counters();
    return std::move(p.out);
}

}  // namespace rsq
