#include "rsq/kinematics.hpp"

#include <algorithm>
#include <cmath>

namespace rsq {

Vec2 position_at(const MotionState& m, double t) {
    if (t < m.valid_from) throw ContractError("position_at: t precedes valid_from");
    return m.position + m.velocity * (t - m.valid_from);
}

std::optional<std::pair<double, double>> disk_crossings(const MotionState& q, const MotionState& s,
                                                        double radius, double ref) {
    const Vec2 pq = q.position + q.velocity * (ref - q.valid_from);
    const Vec2 ps = s.position + s.velocity * (ref - s.valid_from);
    const Vec2 dp = ps - pq;
    const Vec2 dv = s.velocity - q.velocity;

    const double a = dv.norm2();
    const double b = 2.0 * dp.dot(dv);
    const double c = dp.norm2() - radius * radius;

    if (a == 0.0) {
        if (c <= 0.0) return std::pair{-kInf, kInf};
        return std::nullopt;
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return std::nullopt;

    // Numerically stable pair of roots.
    const double root = std::sqrt(disc);
    const double k = -0.5 * (b + std::copysign(root, b));
    double t1 = 0.0;
    double t2 = 0.0;
    if (k != 0.0) {
        t1 = k / a;
        t2 = c / k;
    }
    if (t1 > t2) std::swap(t1, t2);
    return std::pair{ref + t1, ref + t2};
}

SafeInterval safe_interval(const MotionState& q, const MotionState& s, double R, double now) {
    if (!(R > 0.0)) throw ContractError("safe_interval: range must be positive");
    if (now < q.valid_from || now < s.valid_from)
        throw ContractError("safe_interval: motion state not valid at now");

    const auto roots = disk_crossings(q, s, R, now);
    if (!roots) return SafeInterval::none();
    const auto [t1, t2] = *roots;
    if (t2 < now) return SafeInterval::none();

    SafeInterval si;
    si.inside_at_start = t1 <= now;
    si.enter = std::max(t1, now);
    si.leave = t2;
    return si;
}

SafeInterval monitoring_interval(const SafeInterval& si, double t0, double t_end) {
    if (t0 > t_end) throw ContractError("monitoring_interval: window start after end");
    if (si.empty) return SafeInterval::none();
    const double lo = std::max(si.enter, t0);
    const double hi = std::min(si.leave, t_end);
    if (lo > hi) return SafeInterval::none();
    SafeInterval out;
    out.enter = lo;
    out.leave = hi;
    out.inside_at_start = si.enter <= t0;
    return out;
}

Vec2 Leg::velocity() const {
    const Vec2 d = to - from;
    const double len = d.norm();
    if (len == 0.0 || speed == 0.0) return {};
    return d * (speed / len);
}

WaypointPlan::WaypointPlan(Area area, SpeedRange speeds, Vec2 start, std::uint64_t seed)
    : area_(area), speeds_(speeds), rng_(seed) {
    if (!(area.width > 0.0 && area.height > 0.0)) throw ContractError("area must be positive");
    if (speeds.min < 0.0 || speeds.max < speeds.min)
        throw ContractError("invalid speed range");
    if (!area.contains(start)) throw ContractError("start point outside the area");

    if (speeds_.max == 0.0) {
        legs_.push_back(Leg{start, start, 0.0, 0.0, kInf});
        return;
    }
    legs_.push_back(Leg{start, start, 0.0, 0.0, 0.0});
    push_next_leg();
    legs_.erase(legs_.begin());
}

WaypointPlan WaypointPlan::with_first_leg(Area area, SpeedRange speeds, Vec2 start, Vec2 target,
                                          double speed, std::uint64_t seed) {
    WaypointPlan plan(area, speeds, start, seed);
    if (!(speed > 0.0)) throw ContractError("leg speed must be positive");
    if (!area.contains(target)) throw ContractError("waypoint outside the area");
    Leg first{start, target, speed, 0.0, distance(start, target) / speed};
    plan.legs_.assign(1, first);
    return plan;
}

double WaypointPlan::draw_speed() {
    const double u = 1.0 - unit_uniform(rng_);  // (0, 1]
    if (speeds_.min == speeds_.max) return speeds_.max;
    return speeds_.min + (speeds_.max - speeds_.min) * u;
}

void WaypointPlan::push_next_leg() {
    const Leg& last = legs_.back();
    Leg next;
    next.from = last.to;
    next.depart = last.arrive;
    do {
        next.to = {unit_uniform(rng_) * area_.width, unit_uniform(rng_) * area_.height};
    } while (next.to == next.from);
    next.speed = draw_speed();
    next.arrive = next.depart + distance(next.from, next.to) / next.speed;
    legs_.push_back(next);
}

void WaypointPlan::extend_to(double t) {
    while (!covers(t)) push_next_leg();
}

std::size_t WaypointPlan::leg_index_at(double t) const {
    if (t < 0.0) throw ContractError("negative time");
    if (!covers(t)) throw ContractError("plan does not cover the requested time");
    auto it = std::upper_bound(legs_.begin(), legs_.end(), t,
                               [](double v, const Leg& l) { return v < l.depart; });
    return static_cast<std::size_t>(std::distance(legs_.begin(), it)) - 1;
}

MotionState WaypointPlan::state_at(double t) const {
    const Leg& leg = legs_[leg_index_at(t)];
    const Vec2 v = leg.velocity();
    return MotionState{leg.from + v * (t - leg.depart), v, t};
}

MotionState rwp_step(const WaypointPlan& plan, double t) {
    if (plan.covers(t)) return plan.state_at(t);
    WaypointPlan copy = plan;
    copy.extend_to(t);
    return copy.state_at(t);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
    return splitmix64(splitmix64(splitmix64(master) ^ stream) ^ index);
}

}  // namespace rsq
