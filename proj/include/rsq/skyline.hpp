#ifndef RSQ_SKYLINE_HPP
#define RSQ_SKYLINE_HPP

/**
 * @file skyline.hpp
 * @brief Dominance and range-skyline computation over object snapshots.
 *
 * Dominance w.r.t. a query point combines the Euclidean distance to the
 * query with the non-spatial attributes. It is strict Pareto dominance on
 * the combined (distance, attributes) vector: objects that are equal in
 * every component do not dominate each other and are both kept.
 *
 * All result sets are returned sorted by object id.
 */

#include <cstdint>
#include <span>
#include <vector>

#include "rsq/geometry.hpp"

namespace rsq {

enum class Preference : std::uint8_t { minimize, maximize };

struct AttributeVector {
    std::vector<double> values;
    std::vector<Preference> directions;

    /// All dimensions minimized ("smaller is better").
    static AttributeVector minimizing(std::vector<double> values);

    std::size_t size() const { return values.size(); }
    bool operator==(const AttributeVector&) const = default;

    /// Throws ContractError if empty, non-finite, or directions mismatch.
    void validate() const;
};

struct DataObject {
    NodeId id = 0;
    Vec2 position;      ///< at observed_at
    Vec2 velocity;
    AttributeVector attrs;
    double observed_at = 0.0;

    Vec2 position_at(double t) const { return position + velocity * (t - observed_at); }
    bool operator==(const DataObject&) const = default;
};

struct QuerySnapshot {
    Vec2 q_position;
    double range_R = 0.0;
};

/// Weak non-spatial dominance: a is no worse than b in every attribute.
/// Equal vectors dominate each other.
bool non_spatial_dominates(const AttributeVector& a, const AttributeVector& b);

bool dominates_wrt(const QuerySnapshot& q, const DataObject& a, const DataObject& b);

/// Sort-filter skyline: objects are visited in (distance, attributes) order,
/// so a dominator always precedes what it dominates.
std::vector<DataObject> point_skyline(const QuerySnapshot& q, std::span<const DataObject> objs);

/// All-pairs dominance flags computed with OpenMP. Same output as point_skyline.
std::vector<DataObject> point_skyline_parallel(const QuerySnapshot& q,
                                               std::span<const DataObject> objs);

std::vector<DataObject> range_skyline(const QuerySnapshot& q, std::span<const DataObject> objs);

/// Union of partial results, deduplicated by id (latest observed_at wins),
/// then range-filtered and dominance-filtered.
std::vector<DataObject> merge_prune(const QuerySnapshot& q,
                                    std::span<const std::vector<DataObject>> partials);

/// Keeps one record per id, preferring the latest observed_at. Sorted by id.
std::vector<DataObject> dedup_latest(std::span<const DataObject> objs);

namespace reference {

/// Serial all-pairs skyline, literal to the definition. Used as the
/// ground-truth oracle in tests of the other modules.
std::vector<DataObject> point_skyline_all_pairs(const QuerySnapshot& q,
                                                std::span<const DataObject> objs);

std::vector<DataObject> range_skyline_all_pairs(const QuerySnapshot& q,
                                                std::span<const DataObject> objs);

}  // namespace reference

namespace detail {

/// Unchecked strict dominance on precomputed distances.
bool dominates_unchecked(double dist_a, const AttributeVector& a, double dist_b,
                         const AttributeVector& b);

}  // namespace detail

}  // namespace rsq

#endif  // RSQ_SKYLINE_HPP
