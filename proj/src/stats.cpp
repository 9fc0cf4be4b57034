#include "mixlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/chi_squared.hpp>

namespace mixlab {

double chi_square_pvalue(double stat, double dof) {
    if (dof <= 0) throw std::invalid_argument("chi_square_pvalue: dof > 0 required");
    boost::math::chi_squared dist(dof);
    return boost::math::cdf(boost::math::complement(dist, std::max(stat, 0.0)));
}

GofResult chi_square_gof(const std::vector<std::uint64_t>& counts,
                         const std::vector<double>& probs) {
    if (counts.size() != probs.size()) throw std::invalid_argument("chi_square_gof: size mismatch");
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    if (total == 0) throw std::invalid_argument("chi_square_gof: empty sample");
    // pool cells until every expected count is at least 5
    std::vector<double> obs, expd;
    double pool_obs = 0.0, pool_exp = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        pool_obs += double(counts[i]);
        pool_exp += probs[i] * double(total);
        if (pool_exp >= 5.0) {
            obs.push_back(pool_obs);
            expd.push_back(pool_exp);
            pool_obs = pool_exp = 0.0;
        }
    }
    if (pool_exp > 0.0) {
        if (obs.empty()) {
            obs.push_back(pool_obs);
            expd.push_back(pool_exp);
        } else { // merge the remainder into the last cell
            obs.back() += pool_obs;
            expd.back() += pool_exp;
        }
    }
    double stat = 0.0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        double d = obs[i] - expd[i];
        stat += d * d / std::max(expd[i], 1e-12);
    }
    GofResult r;
    r.statistic = stat;
    r.dof = double(obs.size() > 1 ? obs.size() - 1 : 1);
    r.p_value = chi_square_pvalue(stat, r.dof);
    return r;
}

BinomialCi wilson_ci(std::uint64_t successes, std::uint64_t trials, double z) {
    if (trials == 0) throw std::invalid_argument("wilson_ci: trials > 0 required");
    double n = double(trials), x = double(successes);
    double p = x / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (p + z2 / (2 * n)) / denom;
    double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
    return {p, std::max(0.0, center - half), std::min(1.0, center + half)};
}

double harmonic_number(std::uint64_t m) {
    double h = 0.0;
    for (std::uint64_t i = 1; i <= m; ++i) h += 1.0 / double(i);
    return h;
}

void parallel_replicas(std::uint64_t replicas, unsigned workers,
                       const std::function<void(std::uint64_t)>& fn) {
    if (workers <= 1 || replicas <= 1) {
        for (std::uint64_t r = 0; r < replicas; ++r) fn(r);
        return;
    }
    workers = std::min<std::uint64_t>(workers, replicas);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (std::uint64_t r = w; r < replicas; r += workers) fn(r);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace mixlab
