#ifndef RSQ_TESTS_SUPPORT_HPP
#define RSQ_TESTS_SUPPORT_HPP

// Shared helpers and brute-force oracles for the unit tests. The oracles here
// restate the definitions directly and do not call library skyline code.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "rsq/kinematics.hpp"
#include "rsq/skyline.hpp"

namespace rsq::test {

inline DataObject obj(NodeId id, double x, double y, std::vector<double> attrs,
                      Vec2 velocity = {}, double observed_at = 0.0) {
    DataObject o;
    o.id = id;
    o.position = {x, y};
    o.velocity = velocity;
    o.attrs = AttributeVector::minimizing(std::move(attrs));
    o.observed_at = observed_at;
    return o;
}

inline std::vector<NodeId> ids(const std::vector<DataObject>& v) {
    std::vector<NodeId> out;
    for (const auto& o : v) out.push_back(o.id);
    std::sort(out.begin(), out.end());
    return out;
}

/// a dominates b on (dist, attrs...) all minimized, strictly in at least one.
inline bool brute_dominates(double da, const std::vector<double>& a, double db,
                            const std::vector<double>& b) {
    if (da > db) return false;
    bool strict = da < db;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strict = true;
    }
    return strict;
}

/// Ids of the range-skyline at point c with radius R, by all-pairs checks.
inline std::vector<NodeId> brute_range_skyline(Vec2 c, double R, const std::vector<DataObject>& objs,
                                               double t) {
    std::vector<NodeId> out;
    for (const auto& o : objs) {
        const double d_o = std::hypot(o.position_at(t).x - c.x, o.position_at(t).y - c.y);
        if (d_o > R) continue;
        bool dominated = false;
        for (const auto& p : objs) {
            const double d_p = std::hypot(p.position_at(t).x - c.x, p.position_at(t).y - c.y);
            if (d_p > R) continue;
            if (brute_dominates(d_p, p.attrs.values, d_o, o.attrs.values)) {
                dominated = true;
                break;
            }
        }
        if (!dominated) out.push_back(o.id);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<DataObject> random_objects(std::mt19937_64& rng, std::size_t n, std::size_t dims,
                                              double extent, bool integer_attrs = false) {
    std::uniform_real_distribution<double> pos(0.0, extent);
    std::uniform_real_distribution<double> val(0.0, 1.0);
    std::uniform_int_distribution<int> small(0, 3);
    std::vector<DataObject> out;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> a(dims);
        for (auto& v : a) v = integer_attrs ? small(rng) : val(rng);
        out.push_back(obj(static_cast<NodeId>(i), pos(rng), pos(rng), std::move(a)));
    }
    return out;
}

/// In-range window found by stepping the relative motion at dt over [now, now + span].
struct SampledWindow {
    bool empty = true;
    double enter = 0.0;
    double leave = 0.0;
};

inline SampledWindow sample_window(const MotionState& q, const MotionState& s, double R, double now,
                                   double span, double dt = 1e-3) {
    const double dx = (s.position.x + s.velocity.x * (now - s.valid_from)) -
                      (q.position.x + q.velocity.x * (now - q.valid_from));
    const double dy = (s.position.y + s.velocity.y * (now - s.valid_from)) -
                      (q.position.y + q.velocity.y * (now - q.valid_from));
    const double vx = s.velocity.x - q.velocity.x;
    const double vy = s.velocity.y - q.velocity.y;
    SampledWindow w;
    const long steps = static_cast<long>(span / dt);
    for (long i = 0; i <= steps; ++i) {
        const double t = i * dt;
        const double x = dx + vx * t;
        const double y = dy + vy * t;
        if (x * x + y * y <= R * R) {
            if (w.empty) w.enter = now + t;
            w.empty = false;
            w.leave = now + t;
        } else if (!w.empty) {
            break;
        }
    }
    return w;
}

/// Whether a computed interval agrees with the sampled window to within tol.
inline bool agrees(const SafeInterval& si, const SampledWindow& w, double now, double span,
                   double tol) {
    const double horizon = now + span;
    if (si.empty || si.enter > horizon) return w.empty;
    const double leave = std::min(si.leave, horizon);
    if (w.empty) return leave - si.enter <= tol;
    return std::abs(w.enter - si.enter) <= tol && std::abs(w.leave - leave) <= tol;
}

}  // namespace rsq::test

#endif  // RSQ_TESTS_SUPPORT_HPP
