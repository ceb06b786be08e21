#include "rsq/analysis.hpp"

#include <cmath>
#include <numbers>

#include "rsq/geometry.hpp"

namespace rsq {

namespace {

double hop(std::span<const double> P, int j) {
    if (j == 0) return 1.0;
    if (j < 0 || static_cast<std::size_t>(j) > P.size())
        throw ContractError("hop probability undefined for hop " + std::to_string(j));
    return P[static_cast<std::size_t>(j - 1)];
}

void check_k(std::span<const double> P, int k) {
    if (k < 1) throw ContractError("hop count k must be at least 1");
    if (static_cast<std::size_t>(k) > P.size())
        throw ContractError("hop probabilities must be defined up to k");
}

}  // namespace

int density(int N, double area, double radius) {
    if (N < 0 || !(area > 0.0) || radius < 0.0)
        throw ContractError("density: invalid arguments");
    return static_cast<int>(std::floor(std::numbers::pi * radius * radius * N / area));
}

double expected_skyline_size(double N, int d) {
    if (N < 2.0 || d < 1) throw ContractError("expected_skyline_size: need N >= 2, d >= 1");
    return std::pow(std::log(N), d - 1);
}

int CostParams::n_r() const { return density(N, area, r); }
int CostParams::n_R() const { return density(N, area, R); }
double CostParams::hop_prob(int j) const { return hop(P, j); }

std::vector<double> CostParams::constant(double p, int k) {
    return std::vector<double>(static_cast<std::size_t>(std::max(k, 0)), p);
}

double query_spread_cost(int n_r, std::span<const double> P, int k) {
    check_k(P, k);
    double total = 0.0;
    double reach = 1.0;
    for (int i = 1; i <= k; ++i) {
        reach *= hop(P, i);
        total += std::pow(n_r, i) * reach;
    }
    return total;
}

double response_cost_centralized(int n_r, std::span<const double> P, int k) {
    check_k(P, k);
    double total = 0.0;
    double reach = 1.0;
    for (int i = 1; i <= k; ++i) {
        reach *= hop(P, i);
        total += std::pow(n_r, i) * i * reach;
    }
    return total;
}

double response_cost_drsq(int n_r, int d, std::span<const double> P, int k,
                          DrsqIndexing indexing) {
    check_k(P, k);
    if (d < 1) throw ContractError("dimensionality must be at least 1");
    double total = 0.0;
    double reach = 1.0;
    for (int i = 1; i <= k; ++i) {
        reach *= hop(P, i);
        const double nodes = std::pow(n_r, i);
        if (nodes < 1.0) continue;  // empty neighbourhood, nothing to report
        const double sky = d == 1 ? 1.0 : std::pow(std::log(nodes), d - 1);
        const double weight = indexing == DrsqIndexing::as_printed ? hop(P, k - i) : reach;
        total += nodes * sky * weight;
    }
    return total;
}

double query_spread_cost(const CostParams& p, int k) { return query_spread_cost(p.n_r(), p.P, k); }

double response_cost_centralized(const CostParams& p, int k) {
    return response_cost_centralized(p.n_r(), p.P, k);
}

double response_cost_drsq(const CostParams& p, int k, DrsqIndexing indexing) {
    return response_cost_drsq(p.n_r(), p.d, p.P, k, indexing);
}

int derive_ttl(const CostParams& p, int cap) {
    const int n_r = p.n_r();
    const int n_R = p.n_R();
    if (n_r <= 1) throw RegimeError("N_r <= 1: the network is too sparse to route");
    if (n_R < 1) throw RegimeError("N_R < 1: no node can serve the query");
    for (int k = 1; k <= cap; ++k) {
        if (static_cast<std::size_t>(k) > p.P.size()) break;
        if (query_spread_cost(n_r, p.P, k) >= n_R) return k;
    }
    throw RegimeError("no TTL within the cap reaches N_R nodes");
}

double total_cost(const CostParams& p, CostMode mode, int k, DrsqIndexing indexing) {
    const double spread = query_spread_cost(p, k);
    switch (mode) {
        case CostMode::snapshot_centralized: return spread + response_cost_centralized(p, k);
        case CostMode::snapshot_drsq: return spread + response_cost_drsq(p, k, indexing);
        case CostMode::continuous_centralized:
            if (!(p.T > 0.0)) throw ContractError("report interval T must be positive");
            return p.window / p.T * (spread + response_cost_centralized(p, k));
        case CostMode::continuous_dcrsq:
            if (!(p.T_safe_mean > 0.0)) throw ContractError("mean safe time must be positive");
            return spread + p.window / p.T_safe_mean * response_cost_drsq(p, k, indexing);
    }
    throw ContractError("unknown cost mode");
}

double total_cost(const CostParams& p, CostMode mode) {
    return total_cost(p, mode, derive_ttl(p));
}

const char* to_string(CostMode m) {
    switch (m) {
        case CostMode::snapshot_centralized: return "snapshot-centralized";
        case CostMode::snapshot_drsq: return "snapshot-drsq";
        case CostMode::continuous_centralized: return "continuous-centralized";
        case CostMode::continuous_dcrsq: return "continuous-dcrsq";
    }
    return "?";
}

}  // namespace rsq
