#ifndef RSQ_PROTOCOLS_HPP
#define RSQ_PROTOCOLS_HPP

/**
 * @file protocols.hpp
 * @brief Distributed range-skyline processing and the centralized baseline.
 *
 * DistributedRsq runs the sensor-side local computation and the query-side
 * merge for both snapshot and continuous queries; a snapshot query is a
 * window with t0 == t_end. Every holder of a query keeps a local result
 * whose entries carry validity intervals inside the window and reports it to
 * its parent only when it changes.
 *
 * CentralizedRsq floods the query each round and has every reached node send
 * its own record back hop by hop; the query node computes the skyline itself.
 */

#include <map>
#include <set>
#include <vector>

#include "rsq/netsim.hpp"
#include "rsq/timeline.hpp"

namespace rsq {

/// A query as scheduled by the experiment.
struct QueryPlan {
    QueryId id = 0;
    NodeId issuer = 0;
    double range = 0.0;
    double window_begin = 0.0;
    double window_end = 0.0;
    int ttl = 0;

    bool snapshot() const { return window_begin == window_end; }
};

struct QueryOutcome {
    QueryId id = 0;
    SetTimeline result;           ///< over [t0, t_end]; one segment for a snapshot
    double response_time = 0.0;   ///< s
    bool low_confidence = false;  ///< nothing arrived before the collection deadline
    std::uint64_t accessed_objects = 0;
    std::vector<double> update_times;  ///< instants the query node recomputed the result
};

/// One validity-tagged entry of a local result.
struct LocalEntry {
    DataObject object;
    IntervalSet valid;
    bool operator==(const LocalEntry&) const = default;
};
using LocalResult = std::map<NodeId, LocalEntry>;

/// Same ids, same records, interval endpoints within tol.
bool same_result(const LocalResult& a, const LocalResult& b, double tol = 1e-9);

/**
 * Local range-skyline over [lo, hi] from tracked objects. Duplicate ids keep
 * the latest observation; equal observations have their availability united.
 */
LocalResult local_range_skyline(const MotionState& query, double range,
                                std::vector<TrackedObject> known, double lo, double hi);

/// Collection deadline after issuing a query with the given TTL. Always longer
/// than the time a first-hop relay holds its report.
double collect_timeout(const LinkModel& link, int ttl, std::size_t node_count);

/// Time a forwarding node waits for its subtree before its first report.
double subtree_wait(const LinkModel& link, int ttl_received);

struct DistributedOptions {
    double coalesce = 2e-3;      ///< delay before a triggered recomputation
    double refresh = 1.0;        ///< periodic recomputation tick, s
    double global_throttle = 0.1;
    std::size_t buffer_limit = 16;  ///< queries a node keeps at once
};

class DistributedRsq : public Protocol {
public:
    DistributedRsq(std::vector<QueryPlan> queries, DistributedOptions opts = {});

    void on_start(Simulator& sim) override;
    void on_message(Simulator& sim, NodeId at, const Message& m) override;
    void on_timer(Simulator& sim, const TimerEvent& ev) override;
    void on_waypoint(Simulator& sim, NodeId n) override;
    void on_link_change(Simulator& sim, NodeId a, NodeId b, bool up) override;

    const std::vector<QueryOutcome>& outcomes() const { return outcomes_; }

private:
    struct ChildReport {
        std::uint32_t seq = 0;
        LocalResult entries;
    };
    struct Holder {
        QueryDescriptor desc;
        NodeId parent = kBroadcast;
        int depth = 0;
        double ready_at = 0.0;
        bool pending = false;
        std::uint32_t seq = 0;
        bool sent_any = false;
        LocalResult last_sent;
        std::map<NodeId, ChildReport> children;
    };
    struct Active {
        QueryPlan plan;
        QueryDescriptor desc;
        bool issued = false;
        bool finished = false;
        double deadline = 0.0;
        double timeout = 0.0;
        double last_arrival = -1.0;
        double last_global = -kInf;
        bool global_pending = false;
        double committed_until = 0.0;
        SetTimeline committed;
        SetTimeline prediction;
        std::map<NodeId, Holder> holders;
        std::size_t outcome = 0;
    };

    enum Tag : std::uint64_t { recompute = 1, global = 2, tick = 3 };

    Active& active(QueryId q);
    bool live(const Active& a, double now) const;
    void issue(Simulator& sim, Active& a);
    void finish(Simulator& sim, Active& a);
    void on_report(Simulator& sim, Active& a, NodeId at, const Message& m);
    void request(Simulator& sim, Active& a, NodeId n, double delay);
    void request_global(Simulator& sim, Active& a);
    void recompute_node(Simulator& sim, Active& a, NodeId n);
    void recompute_global(Simulator& sim, Active& a);
    void send_report(Simulator& sim, Active& a, NodeId n, Holder& h, const LocalResult& r);
    bool reparent(Simulator& sim, Active& a, NodeId n);
    void try_adopt(Simulator& sim, Active& a, NodeId x);
    std::vector<TrackedObject> knowledge(const Simulator& sim, const Active& a, NodeId n,
                                         const Holder& h, double lo, double hi) const;
    std::size_t buffered(NodeId n) const;

    std::map<QueryId, Active> active_;
    std::vector<QueryOutcome> outcomes_;
    DistributedOptions opts_;
    FloodRouter router_;
};

struct CentralizedOptions {
    int ttl = 5;
    double report_interval = 1.0;  ///< T
};

class CentralizedRsq : public Protocol {
public:
    CentralizedRsq(std::vector<QueryPlan> queries, CentralizedOptions opts = {});

    void on_start(Simulator& sim) override;
    void on_message(Simulator& sim, NodeId at, const Message& m) override;
    void on_timer(Simulator& sim, const TimerEvent& ev) override;

    const std::vector<QueryOutcome>& outcomes() const { return outcomes_; }

    /// Collection rounds over the window: |dt| / T, at least one.
    static int rounds(const QueryPlan& q, double report_interval);

private:
    struct Round {
        double start = 0.0;
        Vec2 center;
        std::map<NodeId, DataObject> records;
    };
    struct Active {
        QueryPlan plan;
        std::vector<Round> rounds;
        double timeout = 0.0;
        double last_arrival = -1.0;
        std::size_t outcome = 0;
    };

    static std::uint64_t key(QueryId q, std::uint32_t round) {
        return (std::uint64_t{q} << 32) | round;
    }

    std::map<QueryId, Active> active_;
    std::vector<QueryOutcome> outcomes_;
    CentralizedOptions opts_;
    FloodRouter router_;
};

/// Segments of src restricted to [from, to), appended to dst.
void append_clipped(SetTimeline& dst, const SetTimeline& src, double from, double to);

}  // namespace rsq

#endif  // RSQ_PROTOCOLS_HPP
