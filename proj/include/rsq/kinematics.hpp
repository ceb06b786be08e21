#ifndef RSQ_KINEMATICS_HPP
#define RSQ_KINEMATICS_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "rsq/geometry.hpp"

namespace rsq {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Linear motion starting at valid_from.
struct MotionState {
    Vec2 position;
    Vec2 velocity;
    double valid_from = 0.0;

    bool operator==(const MotionState&) const = default;
};

Vec2 position_at(const MotionState& m, double t);

/// Time window during which an object lies inside a query disk.
struct SafeInterval {
    double enter = 0.0;
    double leave = 0.0;
    bool empty = false;
    bool inside_at_start = false;  ///< already inside at the reference instant

    bool unbounded() const { return leave == kInf; }
    bool contains(double t) const { return !empty && t >= enter && t <= leave; }

    static SafeInterval none() { return {0.0, 0.0, true, false}; }
};

/**
 * Absolute times at which |p_s(t) - p_q(t)| == radius under the two linear
 * motions, both roots, unclamped. Returns nullopt when the relative distance
 * never equals the radius. A zero relative velocity inside the disk yields
 * (-inf, +inf).
 */
std::optional<std::pair<double, double>> disk_crossings(const MotionState& q, const MotionState& s,
                                                        double radius, double ref);

/// In-range window of s w.r.t. q starting from `now`. Only relative motion enters.
SafeInterval safe_interval(const MotionState& q, const MotionState& s, double R, double now);

/// Intersection of a safe interval with the monitoring window [t0, t_end].
SafeInterval monitoring_interval(const SafeInterval& si, double t0, double t_end);

struct SpeedRange {
    double min = 0.0;  ///< 0 means the open lower bound of (0, max]
    double max = 0.0;
};

struct Leg {
    Vec2 from;
    Vec2 to;
    double speed = 0.0;
    double depart = 0.0;
    double arrive = kInf;

    Vec2 velocity() const;
};

/**
 * Random Way Point with zero pause: travel to a waypoint at a constant leg
 * speed, then draw the next waypoint uniformly in the area and the next speed
 * uniformly in the speed range. A zero maximum speed keeps the node still.
 *
 * The plan advances only through extend_to(); lookups never mutate it.
 */
class WaypointPlan {
public:
    WaypointPlan(Area area, SpeedRange speeds, Vec2 start, std::uint64_t seed);

    static WaypointPlan with_first_leg(Area area, SpeedRange speeds, Vec2 start, Vec2 target,
                                       double speed, std::uint64_t seed);

    void extend_to(double t);
    bool covers(double t) const { return legs_.back().arrive > t || legs_.back().speed == 0.0; }

    std::span<const Leg> legs() const { return legs_; }
    const Area& area() const { return area_; }

    /// Index of the leg active at t (a leg owns [depart, arrive)).
    std::size_t leg_index_at(double t) const;
    MotionState state_at(double t) const;

private:
    void push_next_leg();
    double draw_speed();

    Area area_;
    SpeedRange speeds_;
    std::mt19937_64 rng_;
    std::vector<Leg> legs_;
};

/// Motion at t. Works on a copy when the plan does not yet cover t.
MotionState rwp_step(const WaypointPlan& plan, double t);

/// Uniform double in [0, 1) from the top 53 bits; stable across standard libraries.
inline double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index);

}  // namespace rsq

#endif  // RSQ_KINEMATICS_HPP
