#include "mixlab/group.hpp"

#include <algorithm>
#include <stdexcept>

namespace mixlab {

std::uint64_t checked_pow(std::uint64_t base, std::uint32_t exp, std::uint64_t cap) {
    std::uint64_t r = 1;
    for (std::uint32_t i = 0; i < exp; ++i) {
        if (r > cap / base)
            throw CapExceeded("state space " + std::to_string(base) + "^" + std::to_string(exp) +
                              " exceeds cap " + std::to_string(cap));
        r *= base;
    }
    if (r > cap)
        throw CapExceeded("state space exceeds cap " + std::to_string(cap));
    return r;
}

std::uint64_t binom_u64(std::uint32_t n, std::uint32_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (std::uint32_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i; // partial binomial, always exact
        if (r > UINT64_MAX) throw std::overflow_error("binom_u64 overflow");
    }
    return static_cast<std::uint64_t>(r);
}

double log_binom(std::uint64_t n, std::uint64_t k) {
    if (k > n) return -INFINITY;
    return std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) -
           std::lgamma(double(n - k) + 1.0);
}

double binom_pmf(std::uint64_t n, double p, std::uint64_t k) {
    if (k > n) return 0.0;
    if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
    if (p >= 1.0) return k == n ? 1.0 : 0.0;
    double lg = log_binom(n, k) + double(k) * std::log(p) + double(n - k) * std::log1p(-p);
    return std::exp(lg);
}

std::uint64_t factorial_u64(std::uint32_t m) {
    std::uint64_t r = 1;
    for (std::uint32_t i = 2; i <= m; ++i) r *= i;
    return r;
}

GroupPoint::GroupPoint(std::uint32_t n_, std::uint32_t ell_, std::vector<std::uint32_t> c)
    : n(n_), ell(ell_), coords(std::move(c)) {
    if (ell < 2) throw std::invalid_argument("GroupPoint: ell must be >= 2");
    if (coords.size() != n) throw std::invalid_argument("GroupPoint: coords size != n");
    for (auto v : coords)
        if (v >= ell) throw std::invalid_argument("GroupPoint: coordinate out of range");
}

std::uint32_t GroupPoint::support_size() const {
    std::uint32_t s = 0;
    for (auto v : coords) s += (v != 0);
    return s;
}

GroupPoint GroupPoint::negated() const {
    GroupPoint q = *this;
    for (auto& v : q.coords) v = v == 0 ? 0 : ell - v;
    return q;
}

std::uint64_t group_order(std::uint32_t n, std::uint32_t ell, std::uint64_t cap) {
    if (n < 1 || ell < 2) throw std::invalid_argument("group_order: need n >= 1, ell >= 2");
    return checked_pow(ell, n, cap);
}

std::uint64_t point_to_index(const GroupPoint& p) {
    std::uint64_t idx = 0, w = 1;
    for (std::uint32_t i = 0; i < p.n; ++i) {
        idx += p.coords[i] * w;
        w *= p.ell;
    }
    return idx;
}

GroupPoint index_to_point(std::uint64_t idx, std::uint32_t n, std::uint32_t ell) {
    std::vector<std::uint32_t> c(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        c[i] = static_cast<std::uint32_t>(idx % ell);
        idx /= ell;
    }
    return GroupPoint(n, ell, std::move(c));
}

std::uint64_t add_indices(std::uint64_t a, std::uint64_t b, std::uint32_t n, std::uint32_t ell) {
    std::uint64_t r = 0, w = 1;
    for (std::uint32_t i = 0; i < n; ++i) {
        std::uint64_t da = a % ell, db = b % ell;
        r += ((da + db) % ell) * w;
        a /= ell;
        b /= ell;
        w *= ell;
    }
    return r;
}

std::uint64_t negate_index(std::uint64_t a, std::uint32_t n, std::uint32_t ell) {
    std::uint64_t r = 0, w = 1;
    for (std::uint32_t i = 0; i < n; ++i) {
        std::uint64_t d = a % ell;
        r += (d == 0 ? 0 : ell - d) * w;
        a /= ell;
        w *= ell;
    }
    return r;
}

std::uint32_t support_of_index(std::uint64_t a, std::uint32_t n, std::uint32_t ell) {
    std::uint32_t s = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
        s += (a % ell) != 0;
        a /= ell;
    }
    return s;
}

std::uint64_t sphere_size(std::uint32_t n, std::uint32_t ell, std::uint32_t k) {
    if (k > n) throw std::invalid_argument("sphere_size: k out of range");
    std::uint64_t b = binom_u64(n, k);
    std::uint64_t p = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
        if (p > UINT64_MAX / (ell - 1)) throw std::overflow_error("sphere_size overflow");
        p *= (ell - 1);
    }
    if (b != 0 && p > UINT64_MAX / b) throw std::overflow_error("sphere_size overflow");
    return b * p;
}

std::vector<std::uint64_t> sphere_points(std::uint32_t n, std::uint32_t ell, std::uint32_t k,
                                         std::uint64_t cap) {
    group_order(n, ell, cap); // cap guard
    if (k > n) throw std::invalid_argument("sphere_points: k out of range");
    std::vector<std::uint64_t> out;
    out.reserve(sphere_size(n, ell, k));
    // iterate over k-subsets of coordinates and nonzero values on them
    std::vector<std::uint32_t> subset(k);
    for (std::uint32_t i = 0; i < k; ++i) subset[i] = i;
    auto emit_values = [&](const std::vector<std::uint32_t>& sub) {
        std::vector<std::uint32_t> val(k, 1);
        while (true) {
            std::uint64_t idx = 0;
            for (std::uint32_t i = 0; i < k; ++i) {
                std::uint64_t w = 1;
                for (std::uint32_t j = 0; j < sub[i]; ++j) w *= ell;
                idx += val[i] * w;
            }
            out.push_back(idx);
            std::uint32_t pos = 0;
            while (pos < k) {
                if (++val[pos] < ell) break;
                val[pos] = 1;
                ++pos;
            }
            if (pos == k) break;
        }
    };
    if (k == 0) {
        out.push_back(0);
        return out;
    }
    while (true) {
        emit_values(subset);
        // next k-subset of {0..n-1}
        int i = int(k) - 1;
        while (i >= 0 && subset[i] == n - k + i) --i;
        if (i < 0) break;
        ++subset[i];
        for (std::uint32_t j = i + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace mixlab
