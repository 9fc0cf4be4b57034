#ifndef MIXLAB_GROUP_HPP
#define MIXLAB_GROUP_HPP

#include <cstdint>
#include <vector>

#include "mixlab/numeric.hpp"

namespace mixlab {

// A point of Z_ell^n with coordinate-wise addition mod ell.
// Indexing is mixed-radix (base ell), least-significant coordinate first:
// index = sum_i coords[i] * ell^i. All modules share this enumeration.
struct GroupPoint {
    std::uint32_t n = 0;
    std::uint32_t ell = 2;
    std::vector<std::uint32_t> coords;

    GroupPoint() = default;
    GroupPoint(std::uint32_t n_, std::uint32_t ell_, std::vector<std::uint32_t> c);

    std::uint32_t support_size() const;
    GroupPoint negated() const;
    bool is_identity() const { return support_size() == 0; }
    bool operator==(const GroupPoint& o) const { return n == o.n && ell == o.ell && coords == o.coords; }
};

std::uint64_t group_order(std::uint32_t n, std::uint32_t ell,
                          std::uint64_t cap = kGraphVertexCap);

std::uint64_t point_to_index(const GroupPoint& p);
GroupPoint index_to_point(std::uint64_t idx, std::uint32_t n, std::uint32_t ell);

std::uint64_t add_indices(std::uint64_t a, std::uint64_t b, std::uint32_t n, std::uint32_t ell);
std::uint64_t negate_index(std::uint64_t a, std::uint32_t n, std::uint32_t ell);
std::uint32_t support_of_index(std::uint64_t a, std::uint32_t n, std::uint32_t ell);

// |G_k| = C(n,k) (ell-1)^k
std::uint64_t sphere_size(std::uint32_t n, std::uint32_t ell, std::uint32_t k);

// All points of the support-size-k sphere, as indices (ascending).
std::vector<std::uint64_t> sphere_points(std::uint32_t n, std::uint32_t ell, std::uint32_t k,
                                         std::uint64_t cap = kGraphVertexCap);

} // namespace mixlab

#endif
