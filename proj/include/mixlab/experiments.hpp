#ifndef MIXLAB_EXPERIMENTS_HPP
#define MIXLAB_EXPERIMENTS_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "mixlab/forms.hpp"
#include "mixlab/graph.hpp"
#include "mixlab/paths.hpp"
#include "mixlab/records.hpp"

namespace mixlab {

// Exact distribution at time t of the continuous-time chain with the given
// rate pairs, started from `start`, via uniformization with the Poisson tail
// truncated at relative mass `tail`.
std::vector<double> exact_distribution(const QuadraticForm& q, std::uint64_t start, double t,
                                       double tail = 1e-12);

// Total-variation distance to the uniform law at time t.
double exact_tv_to_uniform(const QuadraticForm& q, std::uint64_t start, double t,
                           double tail = 1e-12);

// min { t : TV(law of xi_t from id, uniform) <= eps } for the IP on g, by
// uniformization and bisection to 1e-4 absolute.
double exact_mixing_time(const Graph& g, double eps = 1.0 / M_E,
                         std::uint64_t cap = kPermutationCap);

// Wilson-style distinguishing statistic: W(sigma) = sum_x phi(x) phi(sigma(x))
// with phi a first RW eigenvector (of the first factor, lifted, when the
// graph is a product; of the graph itself otherwise).
std::vector<double> wilson_statistic_vector(const Graph& g);

struct TvLowerBoundResult {
    double bound = 0.0;        // corrected lower bound, clamped to [0, 1]
    double raw_binned_tv = 0.0;
    double correction = 0.0;
    std::uint64_t replicas = 0;
    std::uint32_t bins = 0;
};
TvLowerBoundResult tv_lower_bound(const Graph& g, double t, std::uint64_t replicas,
                                  std::uint64_t seed, unsigned workers = 1,
                                  std::uint32_t bins = 64);

struct TCycRow {
    double t;
    std::uint64_t successes;
    std::uint64_t replicas;
    double p_hat;
    double ci_lo;
    double ci_hi;
};
struct TCycResult {
    std::vector<TCycRow> rows;
    double estimate = INFINITY;      // earliest grid t with p_hat >= 1/4
    double estimate_hi = INFINITY;   // earliest grid t with ci_lo >= 1/4
    double estimate_lo = INFINITY;   // earliest grid t with ci_hi >= 1/4
    bool censored = true;
    Table table() const;
};
TCycResult t_cyc_estimate(const Graph& g, const std::vector<double>& grid,
                          std::uint64_t replicas, std::uint64_t seed, unsigned workers = 1);
std::vector<double> geometric_grid(double lo = 0.05, double hi = 8.0, std::uint32_t points = 30);

struct LsiReport {
    double lower_bound = 0.0;       // best Ent(f)/E(sqrt f) found
    double trel_rw_half = 0.0;      // paper sandwich lower rail
    double chi_ex = 0.0;            // comparison constant EX(K) vs EX(G)
    double rho_complete_est = 0.0;  // same ascent on the complete graph
    double lee_yau_order = 0.0;     // (1/m) log(m^2 / (k(m-k)))
    std::uint64_t trials = 0;
    std::string to_json() const;
};
LsiReport lsi_lower_bound(const Graph& g, std::uint32_t k, std::uint64_t trials,
                          std::uint64_t seed);

struct PipelineReport {
    std::string graph;
    double lower = 0.0;        // |V| trel^RW
    double chi_true = 0.0;     // pencil value (when within cap)
    bool has_chi = false;
    double chain_upper = 0.0;  // proof-chain bound (Hamming instances)
    bool has_chain = false;
    std::string to_json() const;
};
// Hamming instance (complete graph vs K_ell^n at the IP level).
PipelineReport comparison_pipeline(std::uint32_t n, std::uint32_t ell,
                                   std::uint64_t cap = kPermutationCap);
// General graph: lower bound and (when feasible) the true chi against the
// complete graph on the same vertices.
PipelineReport comparison_pipeline_graph(const Graph& g, std::uint64_t cap = kPermutationCap);

} // namespace mixlab

#endif
