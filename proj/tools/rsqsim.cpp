// Command-line front end: run, sweep, cost, oracle-check.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rsq/analysis.hpp"
#include "rsq/harness.hpp"

namespace {

struct Common {
    std::string scenario_file;
    std::string preset_name;
    std::vector<std::string> overrides;
    std::uint64_t seed = 1;
    bool seed_given = false;
};

void add_common(CLI::App* cmd, Common& c) {
    auto* file = cmd->add_option("--scenario", c.scenario_file, "scenario config file")
                     ->check(CLI::ExistingFile);
    cmd->add_option("--preset", c.preset_name, "named preset")
        ->check(CLI::IsMember({"scenario1", "scenario2"}))
        ->excludes(file);
    cmd->add_option("--set", c.overrides, "override a field, key=value");
    cmd->add_option_function<std::uint64_t>(
        "--seed", [&c](std::uint64_t s) { c.seed = s; c.seed_given = true; }, "master seed");
}

rsq::Scenario resolve(const Common& c) {
    rsq::Scenario s;
    if (!c.preset_name.empty()) s = rsq::preset(c.preset_name);
    if (!c.scenario_file.empty()) s = rsq::load_scenario(c.scenario_file, s);
    for (const auto& kv : c.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw rsq::ConfigError("--set expects key=value: " + kv);
        rsq::set_field(s, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (c.seed_given) s.seed = c.seed;
    s.validate();
    return s;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw rsq::ConfigError("cannot write '" + path + "'");
    out << text;
}

void emit(const std::vector<rsq::MetricRecord>& rows, const std::string& out_path) {
    const std::string csv = rsq::to_csv(rows);
    const std::string summary = rsq::to_csv(rsq::summarize(rows));
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        write_file(out_path, csv);
        write_file(out_path + ".summary.csv", summary);
    }
    std::cout << summary;
}

std::vector<std::string> split_values(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

int cost_table(const rsq::Scenario& s) {
    const rsq::CostParams p = s.cost_params();
    std::printf("N_r\t%d\nN_R\t%d\n", p.n_r(), p.n_R());
    int k = 0;
    try {
        k = rsq::derive_ttl(p, s.ttl_cap);
        std::printf("TTL_q\t%d\n", k);
    } catch (const rsq::RegimeError& e) {
        k = s.ttl_cap;
        std::printf("TTL_q\t%d (cap; %s)\n", k, e.what());
    }
    std::printf("expected_skyline_size\t%.6g\n",
                rsq::expected_skyline_size(std::max(2, p.n_R()), p.d));
    std::printf("E[q_spread]\t%.6g\n", rsq::query_spread_cost(p, k));
    std::printf("E_centralized[q_response]\t%.6g\n", rsq::response_cost_centralized(p, k));
    std::printf("E_DRSQ[q_response]\t%.6g\n", rsq::response_cost_drsq(p, k));
    std::printf("E_DRSQ[q_response] (product indexing)\t%.6g\n",
                rsq::response_cost_drsq(p, k, rsq::DrsqIndexing::product));
    for (auto mode : {rsq::CostMode::snapshot_centralized, rsq::CostMode::snapshot_drsq,
                      rsq::CostMode::continuous_centralized, rsq::CostMode::continuous_dcrsq})
        std::printf("total %s\t%.6g\n", rsq::to_string(mode), rsq::total_cost(p, mode, k));
    return 0;
}

void print_timeline(const char* label, const rsq::SetTimeline& tl) {
    for (const auto& seg : tl.segments) {
        std::printf("  %s [%.6f, %.6f) {", label, seg.begin, seg.end);
        for (std::size_t k = 0; k < seg.members.size(); ++k)
            std::printf(k ? ",%u" : "%u", seg.members[k]);
        std::printf("}\n");
    }
}

int oracle_check(rsq::Scenario s, bool moving) {
    s.delivery_prob = 1.0;
    if (!moving) s.speed_min = s.speed_max = 0.0;
    const auto run = rsq::run_scenario(s, rsq::rep_seed(s.seed, 0));
    const auto& world = run.instance.world;
    bool ok = true;
    bool explained = !moving;
    for (std::size_t i = 0; i < run.oracles.size(); ++i) {
        const auto& got = run.distributed.outcomes[i].result;
        if (got == run.oracles[i]) continue;
        ok = false;
        std::printf("query %zu: result differs from the oracle\n", i);
        print_timeline("oracle", run.oracles[i]);
        print_timeline("result", got);
        if (moving) continue;
        // Static nodes: the protocol can only see the issuer's component within TTL+1 hops.
        const auto& q = run.instance.queries[i];
        const auto hops = world.hop_counts(q.issuer, s.transmission_range, q.window_begin);
        std::vector<bool> visible(world.size());
        for (std::size_t n = 0; n < world.size(); ++n)
            visible[n] = hops[n] >= 0 && hops[n] <= q.ttl + 1;
        const bool reachable_match = got == rsq::oracle_timeline(world, q, visible);
        std::printf("query %zu: %s\n", i,
                    reachable_match ? "matches the oracle over objects reachable from the issuer"
                                    : "differs from the oracle over reachable objects too");
        explained = explained && reachable_match;
    }
    if (ok) {
        std::printf("EXACT MATCH\n");
        return 0;
    }
    std::printf(explained ? "MISMATCH (unreachable objects only)\n" : "MISMATCH\n");
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Range-skyline query simulator"};
    app.require_subcommand(1);

    Common run_c, sweep_c, cost_c, check_c;
    int reps = 0;
    std::string out_path, trace_path, param, values;
    bool moving = false;

    auto* run = app.add_subcommand("run", "run one scenario");
    add_common(run, run_c);
    run->add_option("--reps", reps, "replications (default 1)")->check(CLI::PositiveNumber);
    run->add_option("--out", out_path, "CSV output path");
    run->add_option("--trace", trace_path, "event trace output path (first replication)");

    auto* sw = app.add_subcommand("sweep", "parameter sweep");
    add_common(sw, sweep_c);
    sw->add_option("--param", param, "scenario field to sweep")->required();
    sw->add_option("--values", values, "comma-separated values")->required();
    sw->add_option("--reps", reps, "replications per value")->check(CLI::PositiveNumber);
    sw->add_option("--out", out_path, "CSV output path");

    auto* cost = app.add_subcommand("cost", "analytical network cost table");
    add_common(cost, cost_c);

    auto* check = app.add_subcommand("oracle-check", "compare the distributed result to the oracle");
    add_common(check, check_c);
    check->add_flag("--moving", moving, "keep node motion (default: static nodes)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            const rsq::Scenario s = resolve(run_c);
            rsq::SweepSpec spec{s, "", {}, reps > 0 ? reps : 1, s.seed};
            emit(rsq::sweep(spec), out_path);
            if (!trace_path.empty()) {
                const auto r = rsq::run_scenario(s, rsq::rep_seed(s.seed, 0), true);
                write_file(trace_path, "# " + std::string(rsq::to_string(r.centralized.approach)) +
                                           "\n" + r.centralized.trace + "# " +
                                           rsq::to_string(r.distributed.approach) + "\n" +
                                           r.distributed.trace);
            }
            return 0;
        }
        if (*sw) {
            const rsq::Scenario s = resolve(sweep_c);
            rsq::SweepSpec spec{s, param, split_values(values), reps > 0 ? reps : s.replications,
                                s.seed};
            emit(rsq::sweep(spec), out_path);
            return 0;
        }
        if (*cost) return cost_table(resolve(cost_c));
        if (*check) return oracle_check(resolve(check_c), moving);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
