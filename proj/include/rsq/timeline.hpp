#ifndef RSQ_TIMELINE_HPP
#define RSQ_TIMELINE_HPP

#include <map>
#include <span>
#include <vector>

#include "rsq/kinematics.hpp"
#include "rsq/skyline.hpp"

namespace rsq {

/// Closed time interval.
struct Interval {
    double begin = 0.0;
    double end = 0.0;
    bool operator==(const Interval&) const = default;
};

/// Sorted, disjoint closed intervals.
using IntervalSet = std::vector<Interval>;

IntervalSet normalize(IntervalSet s);
IntervalSet clip(const IntervalSet& s, double lo, double hi);
IntervalSet unite(const IntervalSet& a, const IntervalSet& b);
bool covers(const IntervalSet& s, double t);

/// An object record plus the times its holder vouches for it.
struct TrackedObject {
    DataObject object;
    IntervalSet availability;
};

struct TimelineSegment {
    double begin = 0.0;
    double end = 0.0;
    std::vector<NodeId> members;  ///< sorted ids
    bool operator==(const TimelineSegment&) const = default;
};

/// Piecewise-constant set-valued function of time. Segments are contiguous
/// and half-open except the last, which is closed.
class SetTimeline {
public:
    std::vector<TimelineSegment> segments;

    bool empty() const { return segments.empty(); }
    double begin() const { return segments.front().begin; }
    double end() const { return segments.back().end; }

    /// Members at t, or nullptr when t lies outside the timeline.
    const std::vector<NodeId>* at(double t) const;

    /// Appends [begin, end) and merges with the previous segment when equal.
    void append(double begin, double end, std::vector<NodeId> members);

    /// Segment starts after the first one.
    std::vector<double> change_points() const;

    bool operator==(const SetTimeline&) const = default;
};

/**
 * Range-skyline of `objs` as a function of time over [from, to], assuming
 * every object and the query move linearly. An object is a candidate at t
 * when it is available at t and within `range` of the query at t.
 *
 * The set can only change at availability endpoints, range crossings, or
 * instants where two comparable objects are equidistant from the query, so
 * the set is evaluated once between consecutive such instants.
 * A degenerate window (from == to) yields one snapshot segment.
 */
SetTimeline skyline_timeline(const MotionState& query, double range,
                             std::span<const TrackedObject> objs, double from, double to);

/// Per-object membership intervals of a timeline.
std::map<NodeId, IntervalSet> membership(const SetTimeline& tl);

}  // namespace rsq

#endif  // RSQ_TIMELINE_HPP
