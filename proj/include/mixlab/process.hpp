#ifndef MIXLAB_PROCESS_HPP
#define MIXLAB_PROCESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mixlab/graph.hpp"
#include "mixlab/rng.hpp"

namespace mixlab {

struct Permutation {
    std::vector<std::uint32_t> images; // bijection on {0..m-1}
    std::uint64_t event_count = 0;     // applied transpositions

    int sign() const { return event_count % 2 == 0 ? 1 : -1; }
};

struct Trajectory {
    std::uint64_t seed = 0;
    double final_time = 0.0;
    std::vector<std::pair<double, std::uint32_t>> events; // (time, edge index)

    // binary dump: one JSON header line, then little-endian (f64 time, u32
    // edge index) records
    void dump(const std::string& path, const Graph& g) const;
};

// Interchange process: unit-rate Poisson clock per edge, implemented as a
// race (global exponential clock of rate |E|, uniform edge choice).
Permutation simulate_ip(const Graph& g, double t_end, RngStream& rng,
                        Trajectory* log = nullptr);

enum class ExMode { Direct, Projected };

// k-particle exclusion process started from subset s0 (sorted vertex list).
// Direct mode runs the EX generator; Projected computes xi_t^{-1}(S0).
std::vector<std::uint32_t> simulate_ex(const Graph& g, const std::vector<std::uint32_t>& s0,
                                       double t_end, RngStream& rng, ExMode mode);

std::uint32_t simulate_rw(const Graph& g, std::uint32_t x0, double t_end, RngStream& rng);

// Cycle lengths sorted descending; index-following with a visited bitmap.
std::vector<std::uint32_t> cycle_lengths(const Permutation& p);
double max_cycle_fraction(const Permutation& p);

} // namespace mixlab

#endif
