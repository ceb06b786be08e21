#ifndef RSQ_HARNESS_HPP
#define RSQ_HARNESS_HPP

/**
 * @file harness.hpp
 * @brief Scenarios, the global-knowledge oracle, metrics and parameter sweeps.
 */

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rsq/analysis.hpp"
#include "rsq/netsim.hpp"
#include "rsq/protocols.hpp"

namespace rsq {

struct Scenario {
    std::string name = "custom";
    double area_width = 400.0;
    double area_height = 400.0;
    int node_count = 100;
    int query_count = 1;
    double query_range = 80.0;
    double transmission_range = 75.0;
    double speed_min = 2.0;  ///< 0 draws speeds from (0, speed_max]
    double speed_max = 2.0;
    double window = 0.0;     ///< |dt|; 0 is a snapshot query
    double report_interval = 1.0;
    int ttl = 5;             ///< TTL of the centralized flood
    int ttl_cap = 5;         ///< cap for the derived distributed TTL
    double bandwidth = 2e6;
    double delivery_prob = 0.95;
    double packet_bits = 1024.0;
    double per_hop_latency = 1e-3;
    double horizon = 60.0;
    std::uint64_t seed = 1;
    int replications = 20;
    int attribute_dims = 1;
    double window_start_min = 1.0;
    double window_start_max = 50.0;
    double t_safe_mean = 5.0;

    /// Throws ConfigError on any out-of-range field.
    void validate() const;
    LinkModel link() const;
    CostParams cost_params() const;
};

/// "scenario1" or "scenario2"; throws ConfigError otherwise.
Scenario preset(std::string_view name);

/// Sets one field from its textual value; throws ConfigError on unknown keys or bad values.
void set_field(Scenario& s, std::string_view key, std::string_view value);

/// Flat `key = value` lines; '#' starts a comment. Applied on top of `base`.
Scenario parse_scenario(std::istream& in, Scenario base = {});
Scenario load_scenario(const std::string& path, Scenario base = {});

/// Distributed TTL: derived from the cost model, or the cap when the model has no answer.
int distributed_ttl(const Scenario& s);

struct Instance {
    World world;
    std::vector<QueryPlan> queries;
    double horizon = 0.0;
};

/// Sensors are nodes [0, node_count); query nodes follow.
Instance make_instance(const Scenario& s, std::uint64_t seed);

/// Range-skyline over the query window from complete trajectory knowledge.
SetTimeline oracle_timeline(const World& world, const QueryPlan& q);
/// Same, over the objects of nodes with visible[n] set.
SetTimeline oracle_timeline(const World& world, const QueryPlan& q,
                            const std::vector<bool>& visible);

/// Time-weighted set precision and recall over [t0, t_end]; a point window
/// compares the sets at t0.
std::pair<double, double> precision_recall(const SetTimeline& result, const SetTimeline& oracle,
                                           double t0, double t_end);

enum class Approach { centralized, drsq, dcrsq };
const char* to_string(Approach a);

struct ApproachRun {
    Approach approach = Approach::centralized;
    std::vector<QueryOutcome> outcomes;
    Counters counters;
    std::string trace;
};

struct ScenarioRun {
    Instance instance;
    std::vector<SetTimeline> oracles;
    ApproachRun centralized;
    ApproachRun distributed;
};

ApproachRun run_approach(const Scenario& s, const Instance& inst, Approach a, std::uint64_t seed,
                         bool with_trace = false);
ScenarioRun run_scenario(const Scenario& s, std::uint64_t seed, bool with_trace = false);

struct MetricRecord {
    std::string scenario;
    std::string approach;
    std::string param = "-";
    std::string value = "-";
    int rep = 0;
    double response_time_s = 0.0;
    std::uint64_t msgs_total = 0;
    std::uint64_t msgs_flood = 0;
    std::uint64_t msgs_reply = 0;
    std::uint64_t msgs_update = 0;
    std::uint64_t accessed_objects = 0;
    double precision = 0.0;
    double recall = 0.0;
    bool failed = false;
};

MetricRecord metrics(const Scenario& s, const ApproachRun& run,
                     const std::vector<SetTimeline>& oracles, const Instance& inst);
std::vector<MetricRecord> metrics(const Scenario& s, const ScenarioRun& run);

extern const char* const kCsvHeader;
std::string to_csv(const std::vector<MetricRecord>& rows);

struct SummaryRow {
    std::string scenario, approach, param, value;
    int n = 0;
    int failed = 0;
    std::vector<std::pair<double, double>> stats;  ///< (mean, 95% CI half-width) per metric
};
extern const char* const kSummaryHeader;
std::vector<SummaryRow> summarize(const std::vector<MetricRecord>& rows);
std::string to_csv(const std::vector<SummaryRow>& rows);

/// Seed of replication `rep`; the same for every approach and swept value.
std::uint64_t rep_seed(std::uint64_t master, int rep);

struct SweepSpec {
    Scenario base;
    std::string param;  ///< empty for a plain replicated run
    std::vector<std::string> values;
    int reps = 20;
    std::uint64_t master_seed = 1;
};

/// Cells run in parallel with OpenMP; rows come back in (value, rep, approach) order.
std::vector<MetricRecord> sweep(const SweepSpec& spec);

namespace reference {
std::vector<MetricRecord> sweep_serial(const SweepSpec& spec);
}

}  // namespace rsq

#endif  // RSQ_HARNESS_HPP
