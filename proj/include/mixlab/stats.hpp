#ifndef MIXLAB_STATS_HPP
#define MIXLAB_STATS_HPP

#include <cstdint>
#include <functional>
#include <vector>

namespace mixlab {

// Upper-tail p-value of a chi-square statistic with dof degrees of freedom.
double chi_square_pvalue(double stat, double dof);

// Goodness of fit of observed counts against expected probabilities; cells
// with tiny expectation are pooled. Returns the p-value.
struct GofResult {
    double statistic;
    double dof;
    double p_value;
};
GofResult chi_square_gof(const std::vector<std::uint64_t>& counts,
                         const std::vector<double>& probs);

// Wilson score interval for a binomial proportion.
struct BinomialCi {
    double p_hat;
    double lo;
    double hi;
};
BinomialCi wilson_ci(std::uint64_t successes, std::uint64_t trials, double z = 1.959964);

double harmonic_number(std::uint64_t m);

// Deterministic replica fan-out: calls fn(replica_index) for each replica,
// partitioned across `workers` threads. Results must be written to
// per-replica slots so output is identical for any worker count.
void parallel_replicas(std::uint64_t replicas, unsigned workers,
                       const std::function<void(std::uint64_t)>& fn);

} // namespace mixlab

#endif
