#include "rsq/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace rsq {

namespace {

double parse_double(std::string_view key, std::string_view text) {
    const std::string s(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ConfigError("invalid number for '" + std::string(key) + "': " + s);
    }
    if (used != s.size() || !std::isfinite(v))
        throw ConfigError("invalid number for '" + std::string(key) + "': " + s);
    return v;
}

long long parse_int(std::string_view key, std::string_view text) {
    const double v = parse_double(key, text);
    if (v != std::floor(v) || std::abs(v) > 9e15)
        throw ConfigError("expected an integer for '" + std::string(key) + "'");
    return static_cast<long long>(v);
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

using Setter = std::function<void(Scenario&, std::string_view, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = [] {
        std::map<std::string, Setter, std::less<>> t;
        auto real = [&t](const char* k, double Scenario::*f) {
            t[k] = [f](Scenario& s, std::string_view key, std::string_view v) {
                s.*f = parse_double(key, v);
            };
        };
        auto integer = [&t](const char* k, int Scenario::*f) {
            t[k] = [f](Scenario& s, std::string_view key, std::string_view v) {
                const long long x = parse_int(key, v);
                if (x < -1000000000LL || x > 1000000000LL)
                    throw ConfigError("value out of range for '" + std::string(key) + "'");
                s.*f = static_cast<int>(x);
            };
        };
        t["name"] = [](Scenario& s, std::string_view, std::string_view v) { s.name = std::string(v); };
        t["seed"] = [](Scenario& s, std::string_view key, std::string_view v) {
            const long long x = parse_int(key, v);
            if (x < 0) throw ConfigError("seed must be non-negative");
            s.seed = static_cast<std::uint64_t>(x);
        };
        real("area_width", &Scenario::area_width);
        real("area_height", &Scenario::area_height);
        integer("node_count", &Scenario::node_count);
        integer("query_count", &Scenario::query_count);
        real("query_range", &Scenario::query_range);
        real("transmission_range", &Scenario::transmission_range);
        real("speed_min", &Scenario::speed_min);
        real("speed_max", &Scenario::speed_max);
        real("window", &Scenario::window);
        real("report_interval", &Scenario::report_interval);
        integer("ttl", &Scenario::ttl);
        integer("ttl_cap", &Scenario::ttl_cap);
        real("bandwidth", &Scenario::bandwidth);
        real("delivery_prob", &Scenario::delivery_prob);
        real("packet_bits", &Scenario::packet_bits);
        real("per_hop_latency", &Scenario::per_hop_latency);
        real("horizon", &Scenario::horizon);
        integer("replications", &Scenario::replications);
        integer("attribute_dims", &Scenario::attribute_dims);
        real("window_start_min", &Scenario::window_start_min);
        real("window_start_max", &Scenario::window_start_max);
        real("t_safe_mean", &Scenario::t_safe_mean);
        return t;
    }();
    return table;
}

std::string fmt_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

}  // namespace

void Scenario::validate() const {
    auto fail = [](const std::string& m) { throw ConfigError("scenario: " + m); };
    if (!(area_width > 0.0 && area_height > 0.0)) fail("area must be positive");
    if (node_count < 0 || query_count < 0) fail("node and query counts must be non-negative");
    if (!(query_range > 0.0)) fail("query_range must be positive");
    if (!(transmission_range > 0.0)) fail("transmission_range must be positive");
    if (speed_min < 0.0 || speed_max < speed_min) fail("invalid speed range");
    if (window < 0.0) fail("window must be non-negative");
    if (!(report_interval > 0.0)) fail("report_interval must be positive");
    if (ttl < 0 || ttl_cap < 1) fail("ttl must be >= 0 and ttl_cap >= 1");
    if (!(bandwidth > 0.0) || !(packet_bits > 0.0)) fail("bandwidth and packet_bits must be positive");
    if (!(delivery_prob > 0.0 && delivery_prob <= 1.0)) fail("delivery_prob must lie in (0, 1]");
    if (per_hop_latency < 0.0) fail("per_hop_latency must be non-negative");
    if (!(horizon > 0.0)) fail("horizon must be positive");
    if (replications < 1) fail("replications must be at least 1");
    if (attribute_dims < 1) fail("attribute_dims must be at least 1");
    if (window_start_min < 0.0 || window_start_max < window_start_min)
        fail("invalid window start range");
    if (!(t_safe_mean > 0.0)) fail("t_safe_mean must be positive");
}

LinkModel Scenario::link() const {
    return LinkModel{transmission_range, delivery_prob, bandwidth, packet_bits, per_hop_latency};
}

CostParams Scenario::cost_params() const {
    CostParams p;
    p.N = node_count;
    p.area = area_width * area_height;
    p.R = query_range;
    p.r = transmission_range;
    p.d = attribute_dims + 1;
    p.P = CostParams::constant(delivery_prob, std::max(ttl_cap, ttl));
    p.window = window;
    p.T = report_interval;
    p.T_safe_mean = t_safe_mean;
    return p;
}

Scenario preset(std::string_view name) {
    Scenario s;
    if (name == "scenario1") {
        s.name = "scenario1";
        return s;
    }
    if (name == "scenario2") {
        s.name = "scenario2";
        s.area_width = 500.0;
        s.area_height = 500.0;
        s.node_count = 60;
        s.query_range = 100.0;
        s.speed_min = 0.0;
        s.speed_max = 10.0;
        s.window = 10.0;
        return s;
    }
    throw ConfigError("unknown preset '" + std::string(name) + "'");
}

void set_field(Scenario& s, std::string_view key, std::string_view value) {
    const auto& t = setters();
    auto it = t.find(key);
    if (it == t.end()) throw ConfigError("unknown scenario key '" + std::string(key) + "'");
    it->second(s, key, value);
}

Scenario parse_scenario(std::istream& in, Scenario base) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        set_field(base, trim(std::string_view(body).substr(0, eq)),
                  trim(std::string_view(body).substr(eq + 1)));
    }
    base.validate();
    return base;
}

Scenario load_scenario(const std::string& path, Scenario base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read scenario file '" + path + "'");
    return parse_scenario(in, std::move(base));
}

int distributed_ttl(const Scenario& s) {
    try {
        return derive_ttl(s.cost_params(), s.ttl_cap);
    } catch (const RegimeError&) {
        return s.ttl_cap;
    }
}

Instance make_instance(const Scenario& s, std::uint64_t seed) {
    s.validate();
    Instance inst;
    const Area area{s.area_width, s.area_height};
    inst.world.area = area;

    std::vector<double> starts(static_cast<std::size_t>(s.query_count));
    double last_end = 0.0;
    for (int j = 0; j < s.query_count; ++j) {
        std::mt19937_64 rng(derive_seed(seed, 4, static_cast<std::uint64_t>(j)));
        starts[j] = s.window_start_min + (s.window_start_max - s.window_start_min) * unit_uniform(rng);
        last_end = std::max(last_end, starts[j] + s.window);
    }
    inst.horizon = std::max(s.horizon, last_end + 2.0);

    const SpeedRange speeds{s.speed_min, s.speed_max};
    auto add_node = [&](std::uint64_t stream, std::uint64_t index) {
        std::mt19937_64 rng(derive_seed(seed, stream, index));
        const Vec2 start{unit_uniform(rng) * area.width, unit_uniform(rng) * area.height};
        WaypointPlan plan(area, speeds, start, derive_seed(seed, stream + 1, index));
        plan.extend_to(inst.horizon + 5.0);
        inst.world.plans.push_back(std::move(plan));
    };
    for (int i = 0; i < s.node_count; ++i) {
        add_node(1, static_cast<std::uint64_t>(i));
        std::mt19937_64 rng(derive_seed(seed, 3, static_cast<std::uint64_t>(i)));
        std::vector<double> v(static_cast<std::size_t>(s.attribute_dims));
        for (double& x : v) x = unit_uniform(rng);
        inst.world.attrs.emplace_back(AttributeVector::minimizing(std::move(v)));
    }
    const int ttl = distributed_ttl(s);
    for (int j = 0; j < s.query_count; ++j) {
        add_node(6, static_cast<std::uint64_t>(j));
        inst.world.attrs.emplace_back(std::nullopt);
        QueryPlan q;
        q.id = static_cast<QueryId>(j);
        q.issuer = static_cast<NodeId>(s.node_count + j);
        q.range = s.query_range;
        q.window_begin = starts[j];
        q.window_end = starts[j] + s.window;
        q.ttl = ttl;
        inst.queries.push_back(q);
    }
    return inst;
}

SetTimeline oracle_timeline(const World& world, const QueryPlan& q) {
    return oracle_timeline(world, q, std::vector<bool>(world.size(), true));
}

SetTimeline oracle_timeline(const World& world, const QueryPlan& q,
                            const std::vector<bool>& visible) {
    if (visible.size() != world.size()) throw ContractError("oracle_timeline: visibility size");
    const double t0 = q.window_begin;
    const double t1 = q.window_end;
    std::vector<double> cuts{t0, t1};
    for (NodeId n = 0; n < world.size(); ++n) {
        if (!world.has_object(n) && n != q.issuer) continue;
        for (const Leg& leg : world.plans[n].legs())
            if (leg.depart > t0 && leg.depart < t1) cuts.push_back(leg.depart);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto piece = [&](double a, double b) {
        std::vector<TrackedObject> objs;
        for (NodeId n = 0; n < world.size(); ++n)
            if (visible[n] && world.has_object(n)) objs.push_back({world.object(n, a), {{a, b}}});
        return skyline_timeline(world.motion(q.issuer, a), q.range, objs, a, b);
    };
    if (t0 == t1) return piece(t0, t1);

    SetTimeline out;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
        for (const auto& seg : piece(cuts[k], cuts[k + 1]).segments)
            out.append(seg.begin, seg.end, seg.members);
    return out;
}

std::pair<double, double> precision_recall(const SetTimeline& result, const SetTimeline& oracle,
                                           double t0, double t_end) {
    if (t0 > t_end) throw ContractError("precision_recall: window start after end");
    static const std::vector<NodeId> kEmpty;
    auto score = [&](double t) {
        const auto* r = result.at(t);
        const auto* o = oracle.at(t);
        const auto& rs = r ? *r : kEmpty;
        const auto& os = o ? *o : kEmpty;
        std::size_t inter = 0;
        for (NodeId id : rs) inter += std::binary_search(os.begin(), os.end(), id) ? 1 : 0;
        const double p = rs.empty() ? (os.empty() ? 1.0 : 0.0) : double(inter) / rs.size();
        const double c = os.empty() ? 1.0 : double(inter) / os.size();
        return std::pair{p, c};
    };
    if (t0 == t_end) return score(t0);

    std::vector<double> cuts{t0, t_end};
    for (const auto* tl : {&result, &oracle})
        for (const auto& seg : tl->segments)
            for (double t : {seg.begin, seg.end})
                if (t > t0 && t < t_end) cuts.push_back(t);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double p = 0.0;
    double c = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double w = cuts[k + 1] - cuts[k];
        const auto [pk, ck] = score(0.5 * (cuts[k] + cuts[k + 1]));
        p += w * pk;
        c += w * ck;
    }
    const double span = t_end - t0;
    return {p / span, c / span};
}

const char* to_string(Approach a) {
    switch (a) {
        case Approach::centralized: return "centralized";
        case Approach::drsq: return "drsq";
        case Approach::dcrsq: return "dcrsq";
    }
    return "?";
}

ApproachRun run_approach(const Scenario& s, const Instance& inst, Approach a, std::uint64_t seed,
                         bool with_trace) {
    ApproachRun out;
    out.approach = a;
    Simulator sim(inst.world, s.link(), derive_seed(seed, 5, 0), inst.horizon);
    std::ostringstream trace;
    if (with_trace) sim.set_trace(&trace);
    if (a == Approach::centralized) {
        CentralizedRsq p(inst.queries, CentralizedOptions{s.ttl, s.report_interval});
        sim.run(p);
        out.outcomes = p.outcomes();
    } else {
        DistributedRsq p(inst.queries);
        sim.run(p);
        out.outcomes = p.outcomes();
    }
    out.counters = sim.counters();
    out.trace = trace.str();
    return out;
}

ScenarioRun run_scenario(const Scenario& s, std::uint64_t seed, bool with_trace) {
    ScenarioRun run;
    run.instance = make_instance(s, seed);
    for (const auto& q : run.instance.queries) run.oracles.push_back(oracle_timeline(run.instance.world, q));
    run.centralized = run_approach(s, run.instance, Approach::centralized, seed, with_trace);
    run.distributed = run_approach(s, run.instance,
                                   s.window == 0.0 ? Approach::drsq : Approach::dcrsq, seed,
                                   with_trace);
    return run;
}

MetricRecord metrics(const Scenario& s, const ApproachRun& run,
                     const std::vector<SetTimeline>& oracles, const Instance& inst) {
    MetricRecord m;
    m.scenario = s.name;
    m.approach = to_string(run.approach);
    m.msgs_flood = run.counters.sent_flood;
    m.msgs_reply = run.counters.sent_reply;
    m.msgs_update = run.counters.sent_update;
    m.msgs_total = run.counters.sent_total();
    const std::size_t nq = run.outcomes.size();
    if (nq == 0) {
        m.precision = m.recall = 1.0;
        return m;
    }
    for (std::size_t i = 0; i < nq; ++i) {
        const auto& o = run.outcomes[i];
        const auto& q = inst.queries[i];
        m.response_time_s += o.response_time / nq;
        m.accessed_objects += o.accessed_objects;
        const auto [p, r] = precision_recall(o.result, oracles[i], q.window_begin, q.window_end);
        m.precision += p / nq;
        m.recall += r / nq;
    }
    return m;
}

std::vector<MetricRecord> metrics(const Scenario& s, const ScenarioRun& run) {
    return {metrics(s, run.centralized, run.oracles, run.instance),
            metrics(s, run.distributed, run.oracles, run.instance)};
}

const char* const kCsvHeader =
    "scenario,approach,param,value,rep,response_time_s,msgs_total,msgs_flood,msgs_reply,"
    "msgs_update,accessed_objects,precision,recall";

std::string to_csv(const std::vector<MetricRecord>& rows) {
    std::string out = std::string(kCsvHeader) + "\n";
    for (const auto& r : rows) {
        out += r.scenario + "," + r.approach + "," + r.param + "," + r.value + "," +
               std::to_string(r.rep) + ",";
        if (r.failed) {
            out += "nan,nan,nan,nan,nan,nan,nan,nan\n";
            continue;
        }
        out += fmt_double(r.response_time_s) + "," + std::to_string(r.msgs_total) + "," +
               std::to_string(r.msgs_flood) + "," + std::to_string(r.msgs_reply) + "," +
               std::to_string(r.msgs_update) + "," + std::to_string(r.accessed_objects) + "," +
               fmt_double(r.precision) + "," + fmt_double(r.recall) + "\n";
    }
    return out;
}

const char* const kSummaryHeader =
    "scenario,approach,param,value,n,failed,response_time_s_mean,response_time_s_ci95,"
    "msgs_total_mean,msgs_total_ci95,msgs_flood_mean,msgs_flood_ci95,msgs_reply_mean,"
    "msgs_reply_ci95,msgs_update_mean,msgs_update_ci95,accessed_objects_mean,"
    "accessed_objects_ci95,precision_mean,precision_ci95,recall_mean,recall_ci95";

std::vector<SummaryRow> summarize(const std::vector<MetricRecord>& rows) {
    std::vector<SummaryRow> out;
    std::map<std::tuple<std::string, std::string, std::string, std::string>, std::size_t> index;
    std::vector<std::vector<std::vector<double>>> samples;
    for (const auto& r : rows) {
        auto key = std::tuple{r.scenario, r.approach, r.param, r.value};
        auto [it, inserted] = index.try_emplace(key, out.size());
        if (inserted) {
            SummaryRow fresh;
            fresh.scenario = r.scenario;
            fresh.approach = r.approach;
            fresh.param = r.param;
            fresh.value = r.value;
            out.push_back(std::move(fresh));
            samples.emplace_back(8);
        }
        SummaryRow& row = out[it->second];
        if (r.failed) {
            ++row.failed;
            continue;
        }
        ++row.n;
        const double v[8] = {r.response_time_s,
                             double(r.msgs_total),
                             double(r.msgs_flood),
                             double(r.msgs_reply),
                             double(r.msgs_update),
                             double(r.accessed_objects),
                             r.precision,
                             r.recall};
        for (int k = 0; k < 8; ++k) samples[it->second][k].push_back(v[k]);
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (const auto& xs : samples[i]) {
            const double n = static_cast<double>(xs.size());
            double mean = std::numeric_limits<double>::quiet_NaN();
            double half = std::numeric_limits<double>::quiet_NaN();
            if (!xs.empty()) {
                mean = 0.0;
                for (double x : xs) mean += x;
                mean /= n;
            }
            if (xs.size() >= 2) {
                double ss = 0.0;
                for (double x : xs) ss += (x - mean) * (x - mean);
                half = 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
            }
            out[i].stats.emplace_back(mean, half);
        }
    }
    return out;
}

std::string to_csv(const std::vector<SummaryRow>& rows) {
    std::string out = std::string(kSummaryHeader) + "\n";
    for (const auto& r : rows) {
        out += r.scenario + "," + r.approach + "," + r.param + "," + r.value + "," +
               std::to_string(r.n) + "," + std::to_string(r.failed);
        for (const auto& [mean, half] : r.stats)
            out += "," + fmt_double(mean) + "," + (std::isnan(half) ? "n/a" : fmt_double(half));
        out += "\n";
    }
    return out;
}

std::uint64_t rep_seed(std::uint64_t master, int rep) {
    return derive_seed(master, 0x726570ULL, static_cast<std::uint64_t>(rep));
}

namespace {

struct Cell {
    std::string value;
    int rep = 0;
};

std::vector<Cell> cells(const SweepSpec& spec) {
    if (spec.reps < 1) throw ConfigError("sweep: reps must be at least 1");
    std::vector<std::string> values = spec.values;
    if (spec.param.empty()) values.assign(1, "-");
    if (values.empty()) throw ConfigError("sweep: no values given");
    std::vector<Cell> out;
    for (const auto& v : values)
        for (int r = 0; r < spec.reps; ++r) out.push_back(Cell{v, r});
    return out;
}

// Validates every value up front so a typo fails before any run starts.
void check_values(const SweepSpec& spec) {
    if (spec.param.empty()) return;
    for (const auto& v : spec.values) {
        Scenario s = spec.base;
        set_field(s, spec.param, v);
        s.validate();
    }
}

std::vector<MetricRecord> run_cell(const SweepSpec& spec, const Cell& c) {
    Scenario s = spec.base;
    if (!spec.param.empty()) set_field(s, spec.param, c.value);
    std::vector<MetricRecord> rows;
    try {
        rows = metrics(s, run_scenario(s, rep_seed(spec.master_seed, c.rep)));
    } catch (const std::exception&) {
        const Approach dist = s.window == 0.0 ? Approach::drsq : Approach::dcrsq;
        rows.assign(2, MetricRecord{});
        rows[0].approach = to_string(Approach::centralized);
        rows[1].approach = to_string(dist);
        for (auto& r : rows) {
            r.scenario = s.name;
            r.failed = true;
        }
    }
    for (auto& r : rows) {
        r.param = spec.param.empty() ? "-" : spec.param;
        r.value = c.value;
        r.rep = c.rep;
    }
    return rows;
}

std::vector<MetricRecord> flatten(std::vector<std::vector<MetricRecord>>& parts) {
    std::vector<MetricRecord> out;
    for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

}  // namespace

std::vector<MetricRecord> sweep(const SweepSpec& spec) {
    check_values(spec);
    const auto cs = cells(spec);
    std::vector<std::vector<MetricRecord>> parts(cs.size());
    const auto n = static_cast<std::ptrdiff_t>(cs.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) parts[i] = run_cell(spec, cs[i]);
    return flatten(parts);
}

namespace reference {

std::vector<MetricRecord> sweep_serial(const SweepSpec& spec) {
    check_values(spec);
    const auto cs = cells(spec);
    std::vector<std::vector<MetricRecord>> parts;
    for (const auto& c : cs) parts.push_back(run_cell(spec, c));
    return flatten(parts);
}

}  // namespace reference

}  // namespace rsq
