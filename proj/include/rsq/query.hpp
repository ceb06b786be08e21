#ifndef RSQ_QUERY_HPP
#define RSQ_QUERY_HPP

#include <cstdint>

#include "rsq/kinematics.hpp"

namespace rsq {

/// A range-skyline query as disseminated through the network.
struct QueryDescriptor {
    QueryId id = 0;
    NodeId issuer = 0;
    MotionState issuer_motion;  ///< center trajectory
    double range = 0.0;
    double window_begin = 0.0;
    double window_end = 0.0;
    int ttl = 0;
    std::uint32_t version = 0;  ///< bumped when the issuer changes course
    double issued_at = 0.0;

    bool snapshot() const { return window_begin == window_end; }
    bool operator==(const QueryDescriptor&) const = default;

    /// Throws ContractError on a non-positive range, reversed window or negative TTL.
    void validate() const;
};

}  // namespace rsq

#endif  // RSQ_QUERY_HPP
