#ifndef RSQ_NETSIM_HPP
#define RSQ_NETSIM_HPP

/**
 * @file netsim.hpp
 * @brief Deterministic discrete-event simulation of a mobile multi-hop network.
 *
 * Events fire in (time, sequence) order. Neighbour knowledge is maintained by
 * the simulator itself and costs no messages. Each transmission is one packet
 * carrying one data object or one query descriptor.
 */

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <variant>
#include <vector>

#include "rsq/kinematics.hpp"
#include "rsq/query.hpp"
#include "rsq/skyline.hpp"
#include "rsq/timeline.hpp"

namespace rsq {

inline constexpr NodeId kBroadcast = std::numeric_limits<NodeId>::max();

struct LinkModel {
    double range = 75.0;            ///< transmission range r, closed disk
    double delivery_prob = 1.0;     ///< per-hop success probability p
    double bandwidth = 2e6;         ///< bits/s
    double packet_bits = 1024.0;
    double per_hop_latency = 1e-3;  ///< s

    double tx_time() const { return packet_bits / bandwidth; }
    double hop_delay() const { return tx_time() + per_hop_latency; }

    /// Throws ContractError on r <= 0, p outside (0, 1] or non-positive sizes.
    void validate() const;
};

enum class MsgType : std::uint8_t { rsq, rsq_reply, update };
const char* to_string(MsgType t);

/// Framing of one object packet within a multi-packet report.
struct ReportFrame {
    std::uint32_t seq = 0;
    std::uint32_t index = 0;
    std::uint32_t count = 0;  ///< 0 for an empty report
    IntervalSet valid;        ///< validity of the carried object within the window
};

struct Message {
    MsgType type = MsgType::rsq;
    NodeId source = 0;
    NodeId destination = kBroadcast;
    int ttl = 0;
    int hops = 0;  ///< hops travelled from the originator
    QueryId query = 0;
    std::uint32_t version = 0;
    std::variant<QueryDescriptor, DataObject> payload;
    ReportFrame frame;
    std::vector<NodeId> path;  ///< nodes traversed, originator first

    const DataObject* object() const { return std::get_if<DataObject>(&payload); }
    const QueryDescriptor* descriptor() const { return std::get_if<QueryDescriptor>(&payload); }
};

enum class EventKind : std::uint8_t {
    message_delivery,
    waypoint_arrival,
    periodic_report,
    safe_time_trigger,
    query_issue,
    query_expire,
    collect_timeout,
};
const char* to_string(EventKind k);

/// Trajectories and sensed data of every node. Query nodes carry no object.
struct World {
    Area area;
    std::vector<WaypointPlan> plans;
    std::vector<std::optional<AttributeVector>> attrs;

    std::size_t size() const { return plans.size(); }
    bool has_object(NodeId n) const { return attrs.at(n).has_value(); }

    /// Motion of the leg active at t, anchored at the leg start.
    MotionState motion(NodeId n, double t) const;
    Vec2 position(NodeId n, double t) const;

    /// Record of n for the leg active at t; observed_at is the leg start, so
    /// records taken anywhere on one leg compare equal.
    DataObject object(NodeId n, double t) const;

    /// Record of n observed exactly at t.
    DataObject object_now(NodeId n, double t) const;

    /// Hop count from `from` over the unit-disk graph of radius r at time t; -1 if unreachable.
    std::vector<int> hop_counts(NodeId from, double r, double t) const;
};

struct Counters {
    std::uint64_t sent_flood = 0;   ///< query transmissions (broadcast counts once)
    std::uint64_t sent_reply = 0;
    std::uint64_t sent_update = 0;
    std::uint64_t attempts = 0;     ///< per-receiver link attempts
    std::uint64_t delivered = 0;
    std::uint64_t lost = 0;

    std::uint64_t sent_total() const { return sent_flood + sent_reply + sent_update; }
};

struct TimerEvent {
    EventKind kind = EventKind::periodic_report;
    NodeId node = 0;
    QueryId query = 0;
    std::uint64_t tag = 0;
};

class Simulator;

/// Handlers invoked by the event loop. All default to no-ops.
class Protocol {
public:
    virtual ~Protocol() = default;
    virtual void on_start(Simulator&) {}
    virtual void on_message(Simulator&, NodeId /*at*/, const Message&) {}
    virtual void on_timer(Simulator&, const TimerEvent&) {}
    virtual void on_waypoint(Simulator&, NodeId) {}
    virtual void on_link_change(Simulator&, NodeId /*a*/, NodeId /*b*/, bool /*up*/) {}
};

class Simulator {
public:
    Simulator(const World& world, LinkModel link, std::uint64_t seed, double horizon);

    void set_trace(std::ostream* out) { trace_ = out; }

    /// Processes events until the queue drains or the horizon passes.
    void run(Protocol& protocol);

    double now() const { return now_; }
    double horizon() const { return horizon_; }
    const World& world() const { return world_; }
    const LinkModel& link() const { return link_; }
    const Counters& counters() const { return counters_; }

    /// Nodes within r of n at the current instant, ascending.
    std::vector<NodeId> neighbors(NodeId n) const;
    bool linked(NodeId a, NodeId b) const;

    void broadcast(NodeId src, Message m);
    void unicast(NodeId src, NodeId dst, Message m);

    /// Counts a packet that had no route as a lost attempt.
    void drop_unroutable(const Message& m);

    void schedule(double at, const TimerEvent& ev);

private:
    struct Event {
        double at;
        std::uint64_t seq;
        EventKind kind;
        NodeId node;
        NodeId peer;
        QueryId query;
        std::uint64_t tag;
        std::size_t message;  ///< index into in_flight_, or npos
    };
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            return a.at != b.at ? a.at > b.at : a.seq > b.seq;
        }
    };

    void push(Event e);
    void transmit(NodeId src, const std::vector<NodeId>& receivers, Message m);
    bool draw_delivery(NodeId src, NodeId dst);
    void count_sent(MsgType t);
    void schedule_waypoint(NodeId n);
    void schedule_link(NodeId a, NodeId b);
    std::size_t pair_index(NodeId a, NodeId b) const { return std::size_t{a} * world_.size() + b; }
    void trace_line(const Event& e, const Message* m);

    const World& world_;
    LinkModel link_;
    std::uint64_t seed_;
    double horizon_;
    double now_ = 0.0;
    std::uint64_t seq_ = 0;
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    std::vector<Message> in_flight_;
    std::vector<std::size_t> free_slots_;
    std::vector<double> tx_free_;
    std::vector<std::uint64_t> link_gen_;
    std::vector<std::uint8_t> link_up_;
    std::map<std::uint64_t, std::uint64_t> link_draws_;
    Counters counters_;
    std::ostream* trace_ = nullptr;
};

/**
 * TTL-limited flooding with reverse-path parents. A node accepts the first
 * copy of each flood key, records the sender as its parent and, when the
 * remaining TTL is positive, rebroadcasts with TTL - 1.
 */
class FloodRouter {
public:
    struct Route {
        NodeId parent = kBroadcast;
        int depth = 0;
    };

    /// Marks the origin and broadcasts m.
    void originate(Simulator& sim, NodeId origin, std::uint64_t key, Message m);

    /// Returns true on the first copy at `node`.
    bool on_flood(Simulator& sim, NodeId node, std::uint64_t key, const Message& m);

    const Route* route(NodeId node, std::uint64_t key) const;
    void set_route(NodeId node, std::uint64_t key, Route r);

    /// Unicasts m one hop toward the originator; drops it when there is no parent.
    bool reverse_forward(Simulator& sim, NodeId node, std::uint64_t key, Message m) const;

private:
    std::map<std::pair<std::uint64_t, NodeId>, Route> routes_;
};

struct FloodOutcome {
    std::vector<NodeId> delivered;  ///< nodes other than the origin that received the flood
    std::map<NodeId, NodeId> parent;
    Counters counters;
};

/// Runs a single flood from `origin` at time `at`.
FloodOutcome flood(const World& world, const LinkModel& link, std::uint64_t seed, NodeId origin,
                   int ttl, double at = 0.0);

}  // namespace rsq

#endif  // RSQ_NETSIM_HPP
