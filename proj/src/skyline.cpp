#include "rsq/skyline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace rsq {

AttributeVector AttributeVector::minimizing(std::vector<double> values) {
    AttributeVector v;
    v.directions.assign(values.size(), Preference::minimize);
    v.values = std::move(values);
    return v;
}

void AttributeVector::validate() const {
    if (values.empty()) throw ContractError("attribute vector is empty");
    if (directions.size() != values.size())
        throw ContractError("attribute directions do not match values");
    for (double v : values)
        if (!std::isfinite(v)) throw ContractError("attribute value is not finite");
}

namespace {

void check_comparable(const AttributeVector& a, const AttributeVector& b) {
    if (a.values.size() != b.values.size())
        throw ContractError("attribute dimension mismatch");
    if (a.directions != b.directions) throw ContractError("attribute direction mismatch");
}

// Lower is better after normalization.
inline double normalized(const AttributeVector& a, std::size_t i) {
    return a.directions[i] == Preference::maximize ? -a.values[i] : a.values[i];
}

void validate_all(std::span<const DataObject> objs) {
    if (objs.empty()) return;
    objs.front().attrs.validate();
    for (const auto& o : objs) {
        o.attrs.validate();
        check_comparable(objs.front().attrs, o.attrs);
    }
}

std::vector<DataObject> sorted_by_id(std::vector<DataObject> v) {
    std::sort(v.begin(), v.end(),
              [](const DataObject& a, const DataObject& b) { return a.id < b.id; });
    return v;
}

}  // namespace

namespace detail {

bool dominates_unchecked(double dist_a, const AttributeVector& a, double dist_b,
                         const AttributeVector& b) {
    if (dist_a > dist_b) return false;
    bool strict = dist_a < dist_b;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double x = normalized(a, i);
        const double y = normalized(b, i);
        if (x > y) return false;
        if (x < y) strict = true;
    }
    return strict;
}

}  // namespace detail

bool non_spatial_dominates(const AttributeVector& a, const AttributeVector& b) {
    check_comparable(a, b);
    for (std::size_t i = 0; i < a.values.size(); ++i)
        if (normalized(a, i) > normalized(b, i)) return false;
    return true;
}

bool dominates_wrt(const QuerySnapshot& q, const DataObject& a, const DataObject& b) {
    check_comparable(a.attrs, b.attrs);
    return detail::dominates_unchecked(distance(q.q_position, a.position), a.attrs,
                                       distance(q.q_position, b.position), b.attrs);
}

std::vector<DataObject> point_skyline(const QuerySnapshot& q, std::span<const DataObject> objs) {
    validate_all(objs);
    const std::size_t n = objs.size();
    std::vector<double> dist(n);
    for (std::size_t i = 0; i < n; ++i) dist[i] = distance(q.q_position, objs[i].position);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        if (dist[i] != dist[j]) return dist[i] < dist[j];
        const auto& a = objs[i].attrs;
        const auto& b = objs[j].attrs;
        for (std::size_t k = 0; k < a.values.size(); ++k) {
            const double x = normalized(a, k);
            const double y = normalized(b, k);
            if (x != y) return x < y;
        }
        return objs[i].id < objs[j].id;
    });

    std::vector<std::size_t> window;
    for (std::size_t i : order) {
        bool dominated = false;
        for (std::size_t w : window) {
            if (detail::dominates_unchecked(dist[w], objs[w].attrs, dist[i], objs[i].attrs)) {
                dominated = true;
                break;
            }
        }
        if (!dominated) window.push_back(i);
    }

    std::vector<DataObject> out;
    out.reserve(window.size());
    for (std::size_t i : window) out.push_back(objs[i]);
    return sorted_by_id(std::move(out));
}

std::vector<DataObject> point_skyline_parallel(const QuerySnapshot& q,
                                               std::span<const DataObject> objs) {
    validate_all(objs);
    const auto n = static_cast<std::ptrdiff_t>(objs.size());
    std::vector<double> dist(objs.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) dist[i] = distance(q.q_position, objs[i].position);

    std::vector<unsigned char> keep(objs.size(), 1);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        for (std::ptrdiff_t j = 0; j < n; ++j) {
            if (j != i &&
                detail::dominates_unchecked(dist[j], objs[j].attrs, dist[i], objs[i].attrs)) {
                keep[i] = 0;
                break;
            }
        }
    }

    std::vector<DataObject> out;
    for (std::ptrdiff_t i = 0; i < n; ++i)
        if (keep[i]) out.push_back(objs[i]);
    return sorted_by_id(std::move(out));
}

std::vector<DataObject> range_skyline(const QuerySnapshot& q, std::span<const DataObject> objs) {
    std::vector<DataObject> in_range;
    for (const auto& o : objs)
        if (distance(q.q_position, o.position) <= q.range_R) in_range.push_back(o);
    return point_skyline(q, in_range);
}

std::vector<DataObject> dedup_latest(std::span<const DataObject> objs) {
    std::map<NodeId, const DataObject*> latest;
    for (const auto& o : objs) {
        auto [it, inserted] = latest.try_emplace(o.id, &o);
        if (!inserted && o.observed_at > it->second->observed_at) it->second = &o;
    }
    std::vector<DataObject> out;
    out.reserve(latest.size());
    for (const auto& [id, p] : latest) out.push_back(*p);
    return out;
}

std::vector<DataObject> merge_prune(const QuerySnapshot& q,
                                    std::span<const std::vector<DataObject>> partials) {
    std::vector<DataObject> all;
    for (const auto& p : partials) all.insert(all.end(), p.begin(), p.end());
    const auto unique = dedup_latest(all);
    return range_skyline(q, unique);
}

namespace reference {

std::vector<DataObject> point_skyline_all_pairs(const QuerySnapshot& q,
                                                std::span<const DataObject> objs) {
    std::vector<DataObject> out;
    for (std::size_t i = 0; i < objs.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < objs.size() && !dominated; ++j)
            dominated = j != i && dominates_wrt(q, objs[j], objs[i]);
        if (!dominated) out.push_back(objs[i]);
    }
    return sorted_by_id(std::move(out));
}

std::vector<DataObject> range_skyline_all_pairs(const QuerySnapshot& q,
                                                std::span<const DataObject> objs) {
    std::vector<DataObject> in_range;
    for (const auto& o : objs)
        if (distance(q.q_position, o.position) <= q.range_R) in_range.push_back(o);
    return point_skyline_all_pairs(q, in_range);
}

}  // namespace reference

}  // namespace rsq
