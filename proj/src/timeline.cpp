#include "rsq/timeline.hpp"

#include <algorithm>
#include <cmath>

namespace rsq {

IntervalSet normalize(IntervalSet s) {
    std::erase_if(s, [](const Interval& i) { return i.end < i.begin; });
    std::sort(s.begin(), s.end(),
              [](const Interval& a, const Interval& b) { return a.begin < b.begin; });
    IntervalSet out;
    for (const auto& i : s) {
        if (!out.empty() && i.begin <= out.back().end)
            out.back().end = std::max(out.back().end, i.end);
        else
            out.push_back(i);
    }
    return out;
}

IntervalSet clip(const IntervalSet& s, double lo, double hi) {
    IntervalSet out;
    for (const auto& i : s) {
        const double b = std::max(i.begin, lo);
        const double e = std::min(i.end, hi);
        if (b <= e) out.push_back({b, e});
    }
    return out;
}

IntervalSet unite(const IntervalSet& a, const IntervalSet& b) {
    IntervalSet all = a;
    all.insert(all.end(), b.begin(), b.end());
    return normalize(std::move(all));
}

bool covers(const IntervalSet& s, double t) {
    for (const auto& i : s)
        if (t >= i.begin && t <= i.end) return true;
    return false;
}

const std::vector<NodeId>* SetTimeline::at(double t) const {
    if (segments.empty() || t < segments.front().begin || t > segments.back().end) return nullptr;
    auto it = std::upper_bound(segments.begin(), segments.end(), t,
                               [](double v, const TimelineSegment& s) { return v < s.begin; });
    if (it == segments.begin()) return nullptr;
    return &std::prev(it)->members;
}

void SetTimeline::append(double begin, double end, std::vector<NodeId> members) {
    if (!segments.empty() && segments.back().members == members &&
        segments.back().end == begin) {
        segments.back().end = end;
        return;
    }
    segments.push_back({begin, end, std::move(members)});
}

std::vector<double> SetTimeline::change_points() const {
    std::vector<double> out;
    for (std::size_t i = 1; i < segments.size(); ++i) out.push_back(segments[i].begin);
    return out;
}

namespace {

constexpr double kCanonicalRef = 0.0;

struct Prepared {
    const DataObject* obj;
    IntervalSet candidate;  // available and in range, within the window
    Vec2 rel0;              // position relative to the query at the canonical ref
    Vec2 rel_v;
};

std::vector<NodeId> skyline_at(const std::vector<Prepared>& objs, double t) {
    std::vector<const Prepared*> cand;
    std::vector<double> dist;
    for (const auto& p : objs) {
        if (!covers(p.candidate, t)) continue;
        cand.push_back(&p);
        dist.push_back((p.rel0 + p.rel_v * (t - kCanonicalRef)).norm());
    }
    std::vector<NodeId> ids;
    for (std::size_t i = 0; i < cand.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < cand.size() && !dominated; ++j)
            dominated = j != i && detail::dominates_unchecked(dist[j], cand[j]->obj->attrs, dist[i],
                                                              cand[i]->obj->attrs);
        if (!dominated) ids.push_back(cand[i]->obj->id);
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

void add_root_if_inside(std::vector<double>& out, double t, double from, double to) {
    if (std::isfinite(t) && t > from && t < to) out.push_back(t);
}

}  // namespace

SetTimeline skyline_timeline(const MotionState& query, double range,
                             std::span<const TrackedObject> objs, double from, double to) {
    if (from > to) throw ContractError("skyline_timeline: from after to");
    if (!(range > 0.0)) throw ContractError("skyline_timeline: range must be positive");

    const Vec2 q0 = query.position + query.velocity * (kCanonicalRef - query.valid_from);

    std::vector<Prepared> prepared;
    std::vector<double> breaks{from, to};
    for (const auto& tracked : objs) {
        const DataObject& o = tracked.object;
        o.attrs.validate();
        if (&tracked != &objs.front() &&
            (o.attrs.size() != objs.front().object.attrs.size() ||
             o.attrs.directions != objs.front().object.attrs.directions))
            throw ContractError("skyline_timeline: attribute mismatch");
        const MotionState m{o.position, o.velocity, o.observed_at};
        const auto roots = disk_crossings(query, m, range, kCanonicalRef);
        if (!roots) continue;
        IntervalSet in_range = clip({{roots->first, roots->second}}, from, to);
        IntervalSet candidate;
        for (const auto& a : clip(tracked.availability, from, to))
            for (const auto& r : in_range) {
                const double b = std::max(a.begin, r.begin);
                const double e = std::min(a.end, r.end);
                if (b <= e) candidate.push_back({b, e});
            }
        candidate = normalize(std::move(candidate));
        if (candidate.empty()) continue;
        for (const auto& c : candidate) {
            add_root_if_inside(breaks, c.begin, from, to);
            add_root_if_inside(breaks, c.end, from, to);
        }
        const Vec2 p0 = o.position + o.velocity * (kCanonicalRef - o.observed_at);
        prepared.push_back({&o, std::move(candidate), p0 - q0, o.velocity - query.velocity});
    }

    // Equidistance instants of comparable pairs that are candidates together.
    for (std::size_t i = 0; i < prepared.size(); ++i) {
        for (std::size_t j = i + 1; j < prepared.size(); ++j) {
            const auto& a = prepared[i];
            const auto& b = prepared[j];
            if (!non_spatial_dominates(a.obj->attrs, b.obj->attrs) &&
                !non_spatial_dominates(b.obj->attrs, a.obj->attrs))
                continue;
            // |A + B s|^2 - |C + D s|^2 = 0 with s = t - ref
            const double qa = a.rel_v.norm2() - b.rel_v.norm2();
            const double qb = 2.0 * (a.rel0.dot(a.rel_v) - b.rel0.dot(b.rel_v));
            const double qc = a.rel0.norm2() - b.rel0.norm2();
            std::vector<double> roots;
            if (qa == 0.0) {
                if (qb != 0.0) roots.push_back(-qc / qb);
            } else {
                const double disc = qb * qb - 4.0 * qa * qc;
                if (disc >= 0.0) {
                    const double k = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
                    if (k != 0.0) {
                        roots.push_back(k / qa);
                        roots.push_back(qc / k);
                    } else {
                        roots.push_back(0.0);
                    }
                }
            }
            for (double s : roots) {
                const double t = kCanonicalRef + s;
                if (covers(a.candidate, t) && covers(b.candidate, t))
                    add_root_if_inside(breaks, t, from, to);
            }
        }
    }

    SetTimeline tl;
    if (from == to) {
        tl.append(from, to, skyline_at(prepared, from));
        return tl;
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double b = breaks[k];
        const double e = breaks[k + 1];
        tl.append(b, e, skyline_at(prepared, 0.5 * (b + e)));
    }
    return tl;
}

std::map<NodeId, IntervalSet> membership(const SetTimeline& tl) {
    std::map<NodeId, IntervalSet> out;
    for (const auto& seg : tl.segments) {
        for (NodeId id : seg.members) {
            auto& set = out[id];
            if (!set.empty() && set.back().end == seg.begin)
                set.back().end = seg.end;
            else
                set.push_back({seg.begin, seg.end});
        }
    }
    return out;
}

}  // namespace rsq
