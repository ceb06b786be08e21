#include "rsq/protocols.hpp"

#include <algorithm>
#include <cmath>

namespace rsq {

namespace {

std::uint64_t flood_key(QueryId q, std::uint32_t version) {
    return (std::uint64_t{q} << 32) | version;
}

bool close(double a, double b, double tol) {
    if (a == b) return true;  // covers matching infinities
    return std::abs(a - b) <= tol;
}

void validate_plan(const QueryPlan& p) {
    if (!(p.range > 0.0)) throw ContractError("query range must be positive");
    if (p.window_begin > p.window_end) throw ContractError("query window start after end");
    if (p.window_begin < 0.0) throw ContractError("query window starts before time zero");
    if (p.ttl < 0) throw ContractError("query ttl must be non-negative");
}

// One record per id over [lo, hi]: the latest observation wins, equal
// observations merge their availability.
std::vector<TrackedObject> dedup_tracked(std::vector<TrackedObject> known, double lo, double hi) {
    std::map<NodeId, TrackedObject> by_id;
    for (auto& k : known) {
        k.availability = normalize(clip(k.availability, lo, hi));
        if (k.availability.empty()) continue;
        auto [it, inserted] = by_id.try_emplace(k.object.id, k);
        if (inserted) continue;
        TrackedObject& cur = it->second;
        if (k.object.observed_at > cur.object.observed_at) {
            cur = std::move(k);
        } else if (k.object.observed_at == cur.object.observed_at) {
            cur.availability = unite(cur.availability, k.availability);
        }
    }
    std::vector<TrackedObject> out;
    out.reserve(by_id.size());
    for (auto& [id, t] : by_id) out.push_back(std::move(t));
    return out;
}

LocalResult clipped(const LocalResult& r, double lo, double hi) {
    LocalResult out;
    for (const auto& [id, e] : r) {
        IntervalSet v = clip(e.valid, lo, hi);
        if (!v.empty()) out.emplace(id, LocalEntry{e.object, std::move(v)});
    }
    return out;
}

}  // namespace

bool same_result(const LocalResult& a, const LocalResult& b, double tol) {
    if (a.size() != b.size()) return false;
    for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib) {
        if (ia->first != ib->first || !(ia->second.object == ib->second.object)) return false;
        const auto& va = ia->second.valid;
        const auto& vb = ib->second.valid;
        if (va.size() != vb.size()) return false;
        for (std::size_t i = 0; i < va.size(); ++i)
            if (!close(va[i].begin, vb[i].begin, tol) || !close(va[i].end, vb[i].end, tol))
                return false;
    }
    return true;
}

LocalResult local_range_skyline(const MotionState& query, double range,
                                std::vector<TrackedObject> known, double lo, double hi) {
    const auto tracked = dedup_tracked(std::move(known), lo, hi);
    const SetTimeline tl = skyline_timeline(query, range, tracked, lo, hi);
    LocalResult out;
    for (auto& [id, iv] : membership(tl)) {
        auto it = std::find_if(tracked.begin(), tracked.end(),
                               [id = id](const TrackedObject& t) { return t.object.id == id; });
        out.emplace(id, LocalEntry{it->object, std::move(iv)});
    }
    return out;
}

double collect_timeout(const LinkModel& link, int ttl, std::size_t node_count) {
    // One level more than a first-hop relay waits, plus a queueing allowance.
    return subtree_wait(link, ttl + 1) + static_cast<double>(node_count) * link.tx_time();
}

double subtree_wait(const LinkModel& link, int ttl_received) {
    return ttl_received * (4.0 * link.hop_delay() + 8.0 * link.tx_time());
}

void append_clipped(SetTimeline& dst, const SetTimeline& src, double from, double to) {
    if (!(from < to)) return;
    double cursor = from;
    for (const auto& seg : src.segments) {
        const double b = std::max(seg.begin, cursor);
        const double e = std::min(seg.end, to);
        if (!(b < e)) continue;
        if (b > cursor) dst.append(cursor, b, {});
        dst.append(b, e, seg.members);
        cursor = e;
    }
    if (cursor < to) dst.append(cursor, to, {});
}

// ---------------------------------------------------------------------------

DistributedRsq::DistributedRsq(std::vector<QueryPlan> queries, DistributedOptions opts)
    : opts_(opts) {
    for (auto& q : queries) {
        validate_plan(q);
        Active a;
        a.plan = q;
        a.outcome = outcomes_.size();
        outcomes_.emplace_back().id = q.id;
        if (!active_.emplace(q.id, std::move(a)).second)
            throw ContractError("duplicate query id");
    }
}

DistributedRsq::Active& DistributedRsq::active(QueryId q) { return active_.at(q); }

bool DistributedRsq::live(const Active& a, double) const { return a.issued && !a.finished; }

std::size_t DistributedRsq::buffered(NodeId n) const {
    std::size_t c = 0;
    for (const auto& [id, a] : active_) c += a.holders.count(n);
    return c;
}

void DistributedRsq::on_start(Simulator& sim) {
    for (auto& [id, a] : active_) {
        if (a.plan.issuer >= sim.world().size()) throw ContractError("unknown issuer");
        a.timeout = collect_timeout(sim.link(), a.plan.ttl, sim.world().size());
        const double issue_at =
            a.plan.snapshot() ? a.plan.window_begin : std::max(0.0, a.plan.window_begin - a.timeout);
        sim.schedule(issue_at, TimerEvent{EventKind::query_issue, a.plan.issuer, id, 0});
        if (!a.plan.snapshot())
            sim.schedule(a.plan.window_end,
                         TimerEvent{EventKind::query_expire, a.plan.issuer, id, 0});
    }
}

void DistributedRsq::issue(Simulator& sim, Active& a) {
    const NodeId q = a.plan.issuer;
    QueryDescriptor d;
    d.id = a.plan.id;
    d.issuer = q;
    d.issuer_motion = sim.world().motion(q, sim.now());
    d.range = a.plan.range;
    d.window_begin = a.plan.window_begin;
    d.window_end = a.plan.window_end;
    d.ttl = a.plan.ttl;
    d.issued_at = sim.now();
    a.desc = d;
    a.issued = true;
    a.deadline = sim.now() + a.timeout;
    a.committed_until = a.plan.window_begin;

    Holder& h = a.holders[q];
    h.desc = d;
    h.depth = 0;

    Message m;
    m.type = MsgType::rsq;
    m.ttl = d.ttl;
    m.query = d.id;
    m.payload = d;
    router_.originate(sim, q, flood_key(d.id, 0), std::move(m));

    sim.schedule(a.deadline, TimerEvent{EventKind::collect_timeout, q, d.id, 0});
    if (!a.plan.snapshot() && sim.now() + opts_.refresh <= a.plan.window_end)
        sim.schedule(sim.now() + opts_.refresh,
                     TimerEvent{EventKind::safe_time_trigger, q, d.id, tick});
}

void DistributedRsq::finish(Simulator&, Active& a) {
    if (a.finished) return;
    QueryOutcome& out = outcomes_[a.outcome];
    if (!a.plan.snapshot()) {
        append_clipped(a.committed, a.prediction, a.committed_until, a.plan.window_end);
        a.committed_until = a.plan.window_end;
        out.result = a.committed;
    }
    a.finished = true;
    a.holders.clear();
}

void DistributedRsq::on_timer(Simulator& sim, const TimerEvent& ev) {
    auto it = active_.find(ev.query);
    if (it == active_.end()) return;
    Active& a = it->second;
    switch (ev.kind) {
        case EventKind::query_issue: issue(sim, a); return;
        case EventKind::query_expire: finish(sim, a); return;
        case EventKind::collect_timeout: {
            QueryOutcome& out = outcomes_[a.outcome];
            out.low_confidence = a.last_arrival < 0.0;
            out.response_time = out.low_confidence ? a.timeout : a.last_arrival - a.desc.issued_at;
            if (a.plan.snapshot()) {
                recompute_global(sim, a);
                finish(sim, a);
            }
            return;
        }
        case EventKind::safe_time_trigger: break;
        default: return;
    }
    if (!live(a, sim.now())) return;
    switch (ev.tag) {
        case recompute: {
            auto h = a.holders.find(ev.node);
            if (h == a.holders.end()) return;
            h->second.pending = false;
            recompute_node(sim, a, ev.node);
            return;
        }
        case global: recompute_global(sim, a); return;
        case tick: {
            for (auto& [n, h] : a.holders) {
                if (n == a.plan.issuer) request_global(sim, a);
                else request(sim, a, n, opts_.coalesce);
            }
            for (NodeId x = 0; x < sim.world().size(); ++x) try_adopt(sim, a, x);
            if (sim.now() + opts_.refresh <= a.plan.window_end)
                sim.schedule(sim.now() + opts_.refresh,
                             TimerEvent{EventKind::safe_time_trigger, a.plan.issuer, a.plan.id, tick});
            return;
        }
        default: return;
    }
}

void DistributedRsq::on_message(Simulator& sim, NodeId at, const Message& m) {
    auto it = active_.find(m.query);
    if (it == active_.end()) return;
    Active& a = it->second;
    if (!live(a, sim.now())) return;

    if (m.type == MsgType::rsq_reply || m.type == MsgType::update) {
        on_report(sim, a, at, m);
        return;
    }
    if (m.type != MsgType::rsq) return;
    if (!router_.on_flood(sim, at, flood_key(m.query, m.version), m)) return;
    const QueryDescriptor* d = m.descriptor();
    if (!d || at == a.plan.issuer) return;

    auto h = a.holders.find(at);
    if (h == a.holders.end()) {
        if (buffered(at) >= opts_.buffer_limit) return;
        Holder fresh;
        fresh.desc = *d;
        fresh.parent = m.source;
        fresh.depth = m.hops + 1;
        fresh.ready_at = sim.now() + subtree_wait(sim.link(), m.ttl);
        a.holders.emplace(at, std::move(fresh));
        request(sim, a, at, 0.0);
        return;
    }
    Holder& cur = h->second;
    if (d->version > cur.desc.version) cur.desc = *d;
    if (cur.parent == kBroadcast) {
        cur.parent = m.source;
        cur.depth = m.hops + 1;
        cur.last_sent.clear();
    }
    request(sim, a, at, opts_.coalesce);
}

void DistributedRsq::on_report(Simulator& sim, Active& a, NodeId at, const Message& m) {
    auto h = a.holders.find(at);
    if (h == a.holders.end()) return;
    ChildReport& cr = h->second.children[m.source];
    if (m.frame.seq < cr.seq) return;
    if (m.frame.seq > cr.seq) {
        cr.seq = m.frame.seq;
        cr.entries.clear();
    }
    const DataObject* o = m.object();
    if (o) cr.entries[o->id] = LocalEntry{*o, m.frame.valid};

    if (at != a.plan.issuer) {
        request(sim, a, at, opts_.coalesce);
        return;
    }
    if (o) ++outcomes_[a.outcome].accessed_objects;
    if (sim.now() <= a.deadline) a.last_arrival = sim.now();
    request_global(sim, a);
}

void DistributedRsq::request(Simulator& sim, Active& a, NodeId n, double delay) {
    if (n == a.plan.issuer) {
        request_global(sim, a);
        return;
    }
    auto it = a.holders.find(n);
    if (it == a.holders.end() || it->second.pending) return;
    it->second.pending = true;
    const double at = std::max(sim.now() + delay, it->second.ready_at);
    sim.schedule(at, TimerEvent{EventKind::safe_time_trigger, n, a.plan.id, recompute});
}

void DistributedRsq::request_global(Simulator& sim, Active& a) {
    if (a.plan.snapshot() || a.global_pending) return;
    a.global_pending = true;
    const double at = std::max(sim.now() + opts_.coalesce, a.last_global + opts_.global_throttle);
    sim.schedule(at, TimerEvent{EventKind::safe_time_trigger, a.plan.issuer, a.plan.id, global});
}

std::vector<TrackedObject> DistributedRsq::knowledge(const Simulator& sim, const Active& a,
                                                     NodeId n, const Holder& h, double lo,
                                                     double hi) const {
    const World& w = sim.world();
    const double now = sim.now();
    std::vector<TrackedObject> out;
    if (w.has_object(n)) out.push_back({w.object(n, now), {{lo, hi}}});
    const MotionState mine = w.motion(n, now);
    for (NodeId nb : sim.neighbors(n)) {
        if (!w.has_object(nb)) continue;
        double end = hi;
        if (!a.plan.snapshot()) {
            const auto roots = disk_crossings(mine, w.motion(nb, now), sim.link().range, 0.0);
            if (roots) end = std::min(hi, roots->second);
        }
        if (end >= lo) out.push_back({w.object(nb, now), {{lo, end}}});
    }
    for (const auto& [child, report] : h.children)
        for (const auto& [id, e] : report.entries) out.push_back({e.object, e.valid});
    return out;
}

void DistributedRsq::recompute_node(Simulator& sim, Active& a, NodeId n) {
    Holder& h = a.holders.at(n);
    const auto nbrs = sim.neighbors(n);
    for (NodeId nb : nbrs) {
        auto o = a.holders.find(nb);
        if (o != a.holders.end() && o->second.desc.version > h.desc.version) h.desc = o->second.desc;
    }
    if (h.parent == kBroadcast || !sim.linked(n, h.parent)) reparent(sim, a, n);

    const bool snap = a.plan.snapshot();
    const double lo = snap ? a.plan.window_begin : std::max(sim.now(), a.plan.window_begin);
    const double hi = a.plan.window_end;
    if (lo > hi) return;

    const LocalResult r = local_range_skyline(h.desc.issuer_motion, h.desc.range,
                                              knowledge(sim, a, n, h, lo, hi), lo, hi);
    if (h.parent != kBroadcast && !same_result(clipped(h.last_sent, lo, hi), r))
        send_report(sim, a, n, h, r);

    if (!snap)
        for (NodeId nb : nbrs) try_adopt(sim, a, nb);
}

void DistributedRsq::send_report(Simulator& sim, Active& a, NodeId n, Holder& h,
                                 const LocalResult& r) {
    ++h.seq;
    const MsgType type = (!a.plan.snapshot() && h.sent_any) ? MsgType::update : MsgType::rsq_reply;
    Message m;
    m.type = type;
    m.query = a.plan.id;
    m.version = h.desc.version;
    m.path.assign(1, n);
    m.frame.seq = h.seq;
    m.frame.count = static_cast<std::uint32_t>(r.size());
    if (r.empty()) {
        m.payload = h.desc;
        sim.unicast(n, h.parent, std::move(m));
    } else {
        std::uint32_t idx = 0;
        for (const auto& [id, e] : r) {
            Message f = m;
            f.payload = e.object;
            f.frame.index = idx++;
            f.frame.valid = e.valid;
            sim.unicast(n, h.parent, std::move(f));
        }
    }
    h.last_sent = r;
    h.sent_any = true;
}

bool DistributedRsq::reparent(Simulator& sim, Active& a, NodeId n) {
    Holder& h = a.holders.at(n);
    NodeId best = kBroadcast;
    int best_depth = 0;
    for (NodeId nb : sim.neighbors(n)) {
        auto o = a.holders.find(nb);
        if (o == a.holders.end() || o->second.parent == n) continue;
        // Parents are strictly shallower, so the tree never closes a cycle.
        if (o->second.depth >= h.depth) continue;
        if (best == kBroadcast || o->second.depth < best_depth) {
            best = nb;
            best_depth = o->second.depth;
        }
    }
    h.last_sent.clear();
    if (best == kBroadcast) {
        h.parent = kBroadcast;
        return false;
    }
    h.parent = best;
    h.depth = best_depth + 1;
    return true;
}

void DistributedRsq::try_adopt(Simulator& sim, Active& a, NodeId x) {
    const World& w = sim.world();
    if (a.plan.snapshot() || !live(a, sim.now()) || sim.now() >= a.plan.window_end) return;
    if (x == a.plan.issuer || !w.has_object(x) || a.holders.count(x)) return;
    if (buffered(x) >= opts_.buffer_limit) return;

    const Holder* src = nullptr;
    NodeId src_id = kBroadcast;
    for (NodeId nb : sim.neighbors(x)) {
        auto o = a.holders.find(nb);
        if (o == a.holders.end()) continue;
        if (!src || o->second.depth < src->depth) {
            src = &o->second;
            src_id = nb;
        }
    }
    if (!src) return;
    const SafeInterval si =
        safe_interval(src->desc.issuer_motion, w.motion(x, sim.now()), src->desc.range, sim.now());
    if (si.empty || si.enter > a.plan.window_end) return;

    Holder h;
    h.desc = src->desc;
    h.parent = src_id;
    h.depth = src->depth + 1;
    h.ready_at = sim.now();
    a.holders.emplace(x, std::move(h));
    request(sim, a, x, opts_.coalesce);
}

void DistributedRsq::recompute_global(Simulator& sim, Active& a) {
    a.global_pending = false;
    a.last_global = sim.now();
    if (a.finished) return;
    const Holder& h = a.holders.at(a.plan.issuer);
    std::vector<TrackedObject> known;
    for (const auto& [child, report] : h.children)
        for (const auto& [id, e] : report.entries) known.push_back({e.object, e.valid});

    QueryOutcome& out = outcomes_[a.outcome];
    out.update_times.push_back(sim.now());
    const double t0 = a.plan.window_begin;
    if (a.plan.snapshot()) {
        const auto tracked = dedup_tracked(std::move(known), t0, t0);
        out.result = skyline_timeline(a.desc.issuer_motion, a.plan.range, tracked, t0, t0);
        return;
    }
    const double t = sim.now();
    if (t > a.committed_until) {
        append_clipped(a.committed, a.prediction, a.committed_until,
                       std::min(t, a.plan.window_end));
        a.committed_until = std::min(t, a.plan.window_end);
    }
    const double lo = std::max(t, t0);
    if (lo > a.plan.window_end) return;
    const auto tracked = dedup_tracked(std::move(known), lo, a.plan.window_end);
    a.prediction = skyline_timeline(sim.world().motion(a.plan.issuer, t), a.plan.range, tracked,
                                    lo, a.plan.window_end);
}

void DistributedRsq::on_waypoint(Simulator& sim, NodeId n) {
    for (auto& [id, a] : active_) {
        if (!live(a, sim.now()) || a.plan.snapshot() || sim.now() > a.plan.window_end) continue;
        if (n == a.plan.issuer) {
            a.desc.issuer_motion = sim.world().motion(n, sim.now());
            ++a.desc.version;
            a.holders.at(n).desc = a.desc;
            Message m;
            m.type = MsgType::rsq;
            m.ttl = a.desc.ttl;
            m.query = id;
            m.version = a.desc.version;
            m.payload = a.desc;
            router_.originate(sim, n, flood_key(id, a.desc.version), std::move(m));
            request_global(sim, a);
            continue;
        }
        if (a.holders.count(n)) request(sim, a, n, opts_.coalesce);
        for (NodeId nb : sim.neighbors(n))
            if (a.holders.count(nb)) request(sim, a, nb, opts_.coalesce);
        try_adopt(sim, a, n);
    }
}

void DistributedRsq::on_link_change(Simulator& sim, NodeId x0, NodeId y0, bool up) {
    for (auto& [id, a] : active_) {
        if (!live(a, sim.now())) continue;
        if (!a.plan.snapshot() && sim.now() > a.plan.window_end) continue;
        for (auto [x, y] : {std::pair{x0, y0}, std::pair{y0, x0}}) {
            auto hx = a.holders.find(x);
            if (hx == a.holders.end()) continue;
            Holder& h = hx->second;
            if (!up) {
                if (h.parent == y) reparent(sim, a, x);
                h.children.erase(y);
            } else if (h.parent == kBroadcast && x != a.plan.issuer) {
                reparent(sim, a, x);
            }
            request(sim, a, x, opts_.coalesce);
        }
        if (up) {
            try_adopt(sim, a, x0);
            try_adopt(sim, a, y0);
        }
    }
}

// ---------------------------------------------------------------------------

CentralizedRsq::CentralizedRsq(std::vector<QueryPlan> queries, CentralizedOptions opts)
    : opts_(opts) {
    if (opts_.ttl < 0) throw ContractError("ttl must be non-negative");
    if (!(opts_.report_interval > 0.0)) throw ContractError("report interval must be positive");
    for (auto& q : queries) {
        validate_plan(q);
        Active a;
        a.plan = q;
        a.outcome = outcomes_.size();
        outcomes_.emplace_back().id = q.id;
        if (!active_.emplace(q.id, std::move(a)).second)
            throw ContractError("duplicate query id");
    }
}

int CentralizedRsq::rounds(const QueryPlan& q, double report_interval) {
    if (q.snapshot()) return 1;
    const double n = std::ceil((q.window_end - q.window_begin) / report_interval - 1e-9);
    return std::max(1, static_cast<int>(n));
}

void CentralizedRsq::on_start(Simulator& sim) {
    for (auto& [id, a] : active_) {
        if (a.plan.issuer >= sim.world().size()) throw ContractError("unknown issuer");
        a.timeout = collect_timeout(sim.link(), opts_.ttl, sim.world().size());
        const int n = rounds(a.plan, opts_.report_interval);
        a.rounds.resize(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
            const double start = a.plan.window_begin + k * opts_.report_interval;
            const auto tag = static_cast<std::uint64_t>(k);
            sim.schedule(start, TimerEvent{EventKind::periodic_report, a.plan.issuer, id, tag});
            sim.schedule(start + a.timeout,
                         TimerEvent{EventKind::collect_timeout, a.plan.issuer, id, tag});
        }
    }
}

void CentralizedRsq::on_timer(Simulator& sim, const TimerEvent& ev) {
    auto it = active_.find(ev.query);
    if (it == active_.end()) return;
    Active& a = it->second;
    const auto k = static_cast<std::uint32_t>(ev.tag);
    Round& r = a.rounds.at(k);

    if (ev.kind == EventKind::periodic_report) {
        r.start = sim.now();
        r.center = sim.world().position(a.plan.issuer, sim.now());
        QueryDescriptor d;
        d.id = a.plan.id;
        d.issuer = a.plan.issuer;
        d.issuer_motion = sim.world().motion(a.plan.issuer, sim.now());
        d.range = a.plan.range;
        d.window_begin = a.plan.window_begin;
        d.window_end = a.plan.window_end;
        d.ttl = opts_.ttl;
        d.version = k;
        d.issued_at = sim.now();
        Message m;
        m.type = MsgType::rsq;
        m.ttl = opts_.ttl;
        m.query = a.plan.id;
        m.version = k;
        m.payload = d;
        router_.originate(sim, a.plan.issuer, key(a.plan.id, k), std::move(m));
        return;
    }
    if (ev.kind != EventKind::collect_timeout) return;

    std::vector<DataObject> objs;
    for (const auto& [id, o] : r.records) objs.push_back(o);
    std::vector<NodeId> ids;
    for (const auto& o : range_skyline(QuerySnapshot{r.center, a.plan.range}, objs))
        ids.push_back(o.id);

    QueryOutcome& out = outcomes_[a.outcome];
    out.update_times.push_back(sim.now());
    if (a.plan.snapshot()) {
        out.result.append(a.plan.window_begin, a.plan.window_end, std::move(ids));
    } else {
        const double b = a.plan.window_begin + k * opts_.report_interval;
        const double e = k + 1 == a.rounds.size()
                             ? a.plan.window_end
                             : std::min(a.plan.window_end, b + opts_.report_interval);
        out.result.append(b, e, std::move(ids));
    }
    if (k == 0) {
        out.low_confidence = a.last_arrival < 0.0;
        out.response_time = out.low_confidence ? a.timeout : a.last_arrival - r.start;
    }
}

void CentralizedRsq::on_message(Simulator& sim, NodeId at, const Message& m) {
    auto it = active_.find(m.query);
    if (it == active_.end()) return;
    Active& a = it->second;
    const std::uint64_t fk = key(m.query, m.version);

    if (m.type == MsgType::rsq) {
        if (!router_.on_flood(sim, at, fk, m) || !sim.world().has_object(at)) return;
        Message reply;
        reply.type = MsgType::rsq_reply;
        reply.query = m.query;
        reply.version = m.version;
        reply.payload = sim.world().object_now(at, sim.now());
        reply.frame.count = 1;
        router_.reverse_forward(sim, at, fk, std::move(reply));
        return;
    }
    if (m.type != MsgType::rsq_reply) return;
    if (at != a.plan.issuer) {
        router_.reverse_forward(sim, at, fk, m);
        return;
    }
    const DataObject* o = m.object();
    if (!o || m.version >= a.rounds.size()) return;
    ++outcomes_[a.outcome].accessed_objects;
    Round& r = a.rounds[m.version];
    if (sim.now() > r.start + a.timeout) return;
    if (m.version == 0) a.last_arrival = sim.now();
    auto [pos, inserted] = r.records.try_emplace(o->id, *o);
    if (!inserted && o->observed_at > pos->second.observed_at) pos->second = *o;
}

}  // namespace rsq
