#ifndef MIXLAB_NUMERIC_HPP
#define MIXLAB_NUMERIC_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mixlab {

// Error raised when a requested state space exceeds a configured cap.
class CapExceeded : public std::runtime_error {
public:
    explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr std::uint64_t kPermutationCap = 45000;   // |V|! cap, |V| <= 8
inline constexpr std::uint64_t kSubsetCap = 45000;        // C(|V|,k) cap
inline constexpr std::uint64_t kGraphVertexCap = 1u << 20; // ell^n cap for graphs
inline constexpr std::uint64_t kDenseCap = 2000;          // dense eigensolver cut-over

// ell^n with overflow/cap guard.
std::uint64_t checked_pow(std::uint64_t base, std::uint32_t exp, std::uint64_t cap);

// Exact binomial coefficient; throws on uint64 overflow.
std::uint64_t binom_u64(std::uint32_t n, std::uint32_t k);

// log C(n,k) via lgamma (valid for any 0 <= k <= n).
double log_binom(std::uint64_t n, std::uint64_t k);

// Binomial(n,p) mass at k, computed in the log domain for stability.
double binom_pmf(std::uint64_t n, double p, std::uint64_t k);

std::uint64_t factorial_u64(std::uint32_t m);

inline bool is_power_of_two(std::uint64_t t) { return t != 0 && (t & (t - 1)) == 0; }

} // namespace mixlab

#endif
