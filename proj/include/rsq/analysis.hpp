#ifndef RSQ_ANALYSIS_HPP
#define RSQ_ANALYSIS_HPP

/**
 * @file analysis.hpp
 * @brief Expected network cost of snapshot and continuous range-skyline queries.
 *
 * Node counts come from uniform placement: the expected number of nodes
 * within a radius is floor(pi * radius^2 * N / area). P[j-1] is the success
 * probability of the j-th hop; P_0 is taken as 1.
 */

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsq {

/// The parameters fall outside the regime the model covers.
class RegimeError : public std::runtime_error {
public:
    explicit RegimeError(const std::string& what) : std::runtime_error(what) {}
};

struct CostParams {
    int N = 100;
    double area = 160000.0;  ///< m^2
    double R = 80.0;
    double r = 75.0;
    int d = 2;                    ///< distance plus non-spatial attributes
    std::vector<double> P;        ///< per-hop probabilities P_1..P_k
    double window = 10.0;         ///< |dt|, s
    double T = 1.0;               ///< report interval, s
    double T_safe_mean = 5.0;     ///< mean spacing of result changes, s

    int n_r() const;
    int n_R() const;

    /// P_j for j >= 0, with P_0 = 1. Throws ContractError past the sequence.
    double hop_prob(int j) const;

    /// A constant per-hop probability p for hops 1..k.
    static std::vector<double> constant(double p, int k);
};

enum class CostMode { snapshot_centralized, snapshot_drsq, continuous_centralized, continuous_dcrsq };

/// Reply-cost weighting of the distributed approach.
enum class DrsqIndexing {
    as_printed,  ///< P_{k-i}
    product,     ///< prod_{j<=i} P_j, the centralized form
};

int density(int N, double area, double radius);
double expected_skyline_size(double N, int d);

double query_spread_cost(int n_r, std::span<const double> P, int k);
double response_cost_centralized(int n_r, std::span<const double> P, int k);
double response_cost_drsq(int n_r, int d, std::span<const double> P, int k,
                          DrsqIndexing indexing = DrsqIndexing::as_printed);

double query_spread_cost(const CostParams& p, int k);
double response_cost_centralized(const CostParams& p, int k);
double response_cost_drsq(const CostParams& p, int k,
                          DrsqIndexing indexing = DrsqIndexing::as_printed);

/// Smallest k in [1, cap] whose expected spread reaches N_R.
/// Throws RegimeError when N_r <= 1, N_R < 1, or no k within the cap suffices.
int derive_ttl(const CostParams& p, int cap = 5);

double total_cost(const CostParams& p, CostMode mode, int k,
                  DrsqIndexing indexing = DrsqIndexing::as_printed);
/// Uses k = derive_ttl(p).
double total_cost(const CostParams& p, CostMode mode);

const char* to_string(CostMode m);

}  // namespace rsq

#endif  // RSQ_ANALYSIS_HPP
