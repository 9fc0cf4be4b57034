#include "mixlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "mixlab/process.hpp"
#include "mixlab/stats.hpp"

namespace mixlab {

std::vector<double> exact_distribution(const QuadraticForm& q, std::uint64_t start, double t,
                                       double tail) {
    const std::uint64_t size = q.space.size();
    if (start >= size) throw std::invalid_argument("exact_distribution: start out of range");
    // uniformization: P = R/Lambda + diag(1 - rowsum/Lambda)
    std::vector<double> rowsum(size, 0.0);
    for (auto [u, v, w] : q.op.pairs) {
        rowsum[u] += w;
        rowsum[v] += w;
    }
    double lambda = *std::max_element(rowsum.begin(), rowsum.end());
    std::vector<double> result(size, 0.0), cur(size, 0.0), next(size, 0.0);
    cur[start] = 1.0;
    if (lambda <= 0.0 || t <= 0.0) {
        result = cur;
        return result;
    }
    const double mean = lambda * t;
    // Poisson weights accumulated until their mass covers 1 - tail
    double logw = -mean; // log pmf at 0
    double covered = 0.0;
    std::uint64_t kmax = std::uint64_t(mean + 12.0 * std::sqrt(mean + 1.0)) + 30;
    for (std::uint64_t k = 0;; ++k) {
        double w = std::exp(logw);
        covered += w;
        for (std::uint64_t s = 0; s < size; ++s) result[s] += w * cur[s];
        if (covered >= 1.0 - tail || k > kmax) break;
        // cur <- cur P
        for (std::uint64_t s = 0; s < size; ++s) next[s] = cur[s] * (1.0 - rowsum[s] / lambda);
        for (auto [u, v, w2] : q.op.pairs) {
            next[v] += cur[u] * (w2 / lambda);
            next[u] += cur[v] * (w2 / lambda);
        }
        std::swap(cur, next);
        logw += std::log(mean) - std::log(double(k + 1));
    }
    // renormalize the truncated mixture
    double total = std::accumulate(result.begin(), result.end(), 0.0);
    for (auto& x : result) x /= total;
    return result;
}

double exact_tv_to_uniform(const QuadraticForm& q, std::uint64_t start, double t, double tail) {
    auto dist = exact_distribution(q, start, t, tail);
    const double unif = 1.0 / double(dist.size());
    double s = 0.0;
    for (double x : dist) s += std::abs(x - unif);
    return s / 2.0;
}

double exact_mixing_time(const Graph& g, double eps, std::uint64_t cap) {
    auto q = ip_form(g, cap);
    const std::uint64_t id = q.space.rank_permutation([&] {
        std::vector<std::uint32_t> v(g.vertex_count);
        std::iota(v.begin(), v.end(), 0);
        return v;
    }());
    auto tv = [&](double t) { return exact_tv_to_uniform(q, id, t); };
    double lo = 0.0, hi = 0.25;
    while (tv(hi) > eps) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6) throw std::runtime_error("exact_mixing_time: no mixing before t = 1e6");
    }
    while (hi - lo > 1e-4) {
        double mid = 0.5 * (lo + hi);
        (tv(mid) <= eps ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> wilson_statistic_vector(const Graph& g) {
    // phi = eigenvector of the spectral gap of the factor Laplacian (first
    // coordinate) when labels are present, of the whole graph otherwise
    auto eigvec_for = [](const SparseLaplacian& L) {
        // dense second-eigenvector
        std::vector<double> phi(L.dim, 0.0);
        std::vector<std::vector<double>> dense(L.dim, std::vector<double>(L.dim, 0.0));
        for (auto [u, v, w] : L.pairs) {
            dense[u][u] += w;
            dense[v][v] += w;
            dense[u][v] -= w;
            dense[v][u] -= w;
        }
        // power iteration on (cI - L) deflated against constants
        double c = 0.0;
        for (std::uint32_t i = 0; i < L.dim; ++i) c = std::max(c, 2.0 * dense[i][i]);
        std::vector<double> x(L.dim), y(L.dim);
        for (std::uint32_t i = 0; i < L.dim; ++i) x[i] = std::cos(double(i) + 1.0);
        for (int it = 0; it < 4000; ++it) {
            double mean = std::accumulate(x.begin(), x.end(), 0.0) / L.dim;
            for (auto& v2 : x) v2 -= mean;
            double nrm = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
            for (auto& v2 : x) v2 /= nrm;
            for (std::uint32_t i = 0; i < L.dim; ++i) {
                y[i] = c * x[i];
                for (std::uint32_t j2 = 0; j2 < L.dim; ++j2) y[i] -= dense[i][j2] * x[j2];
            }
            std::swap(x, y);
        }
        double mean = std::accumulate(x.begin(), x.end(), 0.0) / L.dim;
        for (auto& v2 : x) v2 -= mean;
        double nrm = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
        for (auto& v2 : x) v2 /= nrm;
        return x;
    };
    std::vector<double> phi(g.vertex_count);
    if (!g.labels.empty()) {
        // factor 0: vertices with all other coordinates at 0 induce the factor
        // graph; find factor size from labels
        std::uint32_t fsize = 0;
        for (const auto& lab : g.labels) fsize = std::max(fsize, lab[0] + 1);
        // reconstruct factor adjacency from product edges along coordinate 0
        SparseLaplacian L;
        L.dim = fsize;
        std::set<std::pair<std::uint32_t, std::uint32_t>> fedges;
        for (auto [u, v] : g.edges) {
            const auto& lu = g.labels[u];
            const auto& lv = g.labels[v];
            bool only0 = lu[0] != lv[0];
            for (std::size_t i2 = 1; i2 < lu.size() && only0; ++i2)
                if (lu[i2] != lv[i2]) only0 = false;
            if (only0) fedges.insert({std::min(lu[0], lv[0]), std::max(lu[0], lv[0])});
        }
        for (auto [a, b] : fedges) L.pairs.emplace_back(a, b, 1.0);
        auto psi = eigvec_for(L);
        for (std::uint32_t x = 0; x < g.vertex_count; ++x) phi[x] = psi[g.labels[x][0]];
    } else {
        SparseLaplacian L;
        L.dim = g.vertex_count;
        for (auto [u, v] : g.edges) L.pairs.emplace_back(u, v, 1.0);
        phi = eigvec_for(L);
    }
    return phi;
}

TvLowerBoundResult tv_lower_bound(const Graph& g, double t, std::uint64_t replicas,
                                  std::uint64_t seed, unsigned workers, std::uint32_t bins) {
    if (replicas < 4 * bins)
        throw std::invalid_argument("tv_lower_bound: too few replicas for the requested bins");
    auto phi = wilson_statistic_vector(g);
    auto w_of = [&](const std::vector<std::uint32_t>& images) {
        double s = 0.0;
        for (std::uint32_t x = 0; x < images.size(); ++x) s += phi[x] * phi[images[x]];
        return s;
    };
    std::vector<double> w_chain(replicas), w_unif(replicas);
    parallel_replicas(replicas, workers, [&](std::uint64_t r) {
        RngStream rng(seed, 2 * r);
        auto p = simulate_ip(g, t, rng);
        w_chain[r] = w_of(p.images);
        // uniform permutation via Fisher-Yates on an independent stream
        RngStream rng2(seed, 2 * r + 1);
        std::vector<std::uint32_t> u(g.vertex_count);
        std::iota(u.begin(), u.end(), 0);
        for (std::uint32_t i = g.vertex_count - 1; i > 0; --i) {
            auto j = std::uint32_t(rng2.below(i + 1));
            std::swap(u[i], u[j]);
        }
        w_unif[r] = w_of(u);
    });
    // equal-probability bins calibrated on the uniform sample
    std::vector<double> sorted = w_unif;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> cuts(bins - 1);
    for (std::uint32_t b = 1; b < bins; ++b)
        cuts[b - 1] = sorted[std::size_t(double(replicas) * b / bins)];
    auto bin_of = [&](double w) {
        return std::uint32_t(std::upper_bound(cuts.begin(), cuts.end(), w) - cuts.begin());
    };
    std::vector<double> pc(bins, 0.0), pu(bins, 0.0);
    for (std::uint64_t r = 0; r < replicas; ++r) {
        pc[bin_of(w_chain[r])] += 1.0 / double(replicas);
        pu[bin_of(w_unif[r])] += 1.0 / double(replicas);
    }
    double raw = 0.0;
    for (std::uint32_t b = 0; b < bins; ++b) raw += std::abs(pc[b] - pu[b]);
    raw /= 2.0;
    TvLowerBoundResult res;
    res.raw_binned_tv = raw;
    // expected L1 noise of two empirical histograms is at most
    // sqrt(bins/replicas) each (Cauchy-Schwarz)
    res.correction = std::sqrt(double(bins) / double(replicas));
    res.bound = std::clamp(raw - res.correction, 0.0, 1.0);
    res.replicas = replicas;
    res.bins = bins;
    return res;
}

std::vector<double> geometric_grid(double lo, double hi, std::uint32_t points) {
    std::vector<double> grid(points);
    for (std::uint32_t i = 0; i < points; ++i)
        grid[i] = lo * std::pow(hi / lo, double(i) / double(points - 1));
    return grid;
}

Table TCycResult::table() const {
    Table t;
    t.columns = {"t", "success_count", "replicas", "p_hat", "ci_lo", "ci_hi"};
    for (const auto& r : rows)
        t.rows.push_back({r.t, double(r.successes), double(r.replicas), r.p_hat, r.ci_lo, r.ci_hi});
    return t;
}

TCycResult t_cyc_estimate(const Graph& g, const std::vector<double>& grid,
                          std::uint64_t replicas, std::uint64_t seed, unsigned workers) {
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1]) throw std::invalid_argument("t_cyc_estimate: grid not increasing");
    const double threshold = double(g.vertex_count) / 2.0;
    // one trajectory per replica, observed at every grid time
    std::vector<std::vector<char>> success(replicas, std::vector<char>(grid.size(), 0));
    parallel_replicas(replicas, workers, [&](std::uint64_t r) {
        RngStream rng(seed, r);
        Permutation p;
        p.images.resize(g.vertex_count);
        std::iota(p.images.begin(), p.images.end(), 0);
        double t = 0.0;
        const double rate = double(g.edge_count());
        std::size_t gi = 0;
        double t_next = rng.exponential(rate);
        while (gi < grid.size()) {
            if (t_next > grid[gi]) {
                auto lengths = cycle_lengths(p);
                success[r][gi] = lengths.front() >= threshold;
                ++gi;
                continue;
            }
            t = t_next;
            auto [u, v] = g.edges[rng.below(g.edge_count())];
            std::swap(p.images[u], p.images[v]);
            ++p.event_count;
            t_next = t + rng.exponential(rate);
        }
    });
    TCycResult res;
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        std::uint64_t succ = 0;
        for (std::uint64_t r = 0; r < replicas; ++r) succ += success[r][gi];
        auto ci = wilson_ci(succ, replicas);
        res.rows.push_back({grid[gi], succ, replicas, ci.p_hat, ci.lo, ci.hi});
        if (ci.p_hat >= 0.25 && res.estimate == INFINITY) res.estimate = grid[gi];
        if (ci.lo >= 0.25 && res.estimate_hi == INFINITY) res.estimate_hi = grid[gi];
        if (ci.hi >= 0.25 && res.estimate_lo == INFINITY) res.estimate_lo = grid[gi];
    }
    res.censored = res.estimate == INFINITY;
    return res;
}

std::string LsiReport::to_json() const {
    nlohmann::json j;
    j["lower_bound"] = lower_bound;
    j["trel_rw_half"] = trel_rw_half;
    j["chi_ex"] = chi_ex;
    j["rho_complete_est"] = rho_complete_est;
    j["lee_yau_order"] = lee_yau_order;
    j["trials"] = trials;
    return j.dump();
}

namespace {

// Ent(g^2)/E(g) ascent over positive test vectors g = sqrt(f); E uses the
// form's recorded normalization.
double lsi_ascent(const QuadraticForm& q, std::uint64_t trials, std::uint64_t seed) {
    const std::uint64_t size = q.space.size();
    auto ratio = [&](const std::vector<double>& gvec) {
        double ef = 0.0, elogf = 0.0;
        for (auto v : gvec) {
            double f = v * v;
            ef += f;
            elogf += f * 2.0 * std::log(std::abs(v) + 1e-300);
        }
        ef /= double(size);
        elogf /= double(size);
        double ent = elogf - ef * std::log(ef);
        double energy = q.value(gvec);
        if (energy < 1e-13 * ef) return 0.0; // near-constant, excluded
        return ent / energy;
    };
    // spectral seed: g = 1 + eps v2
    std::vector<double> best_g(size, 1.0);
    double best = 0.0;
    std::vector<double> v2(size, 0.0);
    {
        // second eigenvector by a short power iteration on (cI - L) deflated
        double c = q.op.gershgorin_upper() + 1.0;
        std::vector<double> x(size), y(size);
        for (std::uint64_t i = 0; i < size; ++i) x[i] = std::sin(double(i) * 1.7 + 0.3);
        for (int it = 0; it < 2000; ++it) {
            double mean = std::accumulate(x.begin(), x.end(), 0.0) / double(size);
            for (auto& v : x) v -= mean;
            double nrm = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
            for (auto& v : x) v /= nrm;
            q.op.apply(x.data(), y.data());
            for (std::uint64_t i = 0; i < size; ++i) y[i] = c * x[i] - y[i];
            std::swap(x, y);
        }
        double mean = std::accumulate(x.begin(), x.end(), 0.0) / double(size);
        for (auto& v : x) v -= mean;
        double nrm = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
        for (auto& v : x) v /= nrm;
        v2 = x;
    }
    RngStream rng(seed, 0x151);
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        std::vector<double> g(size);
        if (trial < 8) {
            double eps = 0.02 * std::pow(2.0, double(trial));
            for (std::uint64_t i = 0; i < size; ++i) g[i] = std::max(1.0 + eps * v2[i], 1e-6);
        } else {
            for (auto& v : g) v = std::exp(rng.next_double() * 2.0 - 1.0);
        }
        double cur = ratio(g);
        // coordinate ascent: multiplicative 1-D line search per coordinate
        for (int sweep = 0; sweep < 30; ++sweep) {
            bool improved = false;
            for (std::uint64_t i = 0; i < size; ++i) {
                double saved = g[i];
                double local_best = cur;
                double local_arg = saved;
                for (double f : {0.8, 0.9, 0.95, 1.05, 1.1, 1.25}) {
                    g[i] = saved * f;
                    double r2 = ratio(g);
                    if (r2 > local_best) {
                        local_best = r2;
                        local_arg = g[i];
                    }
                }
                g[i] = local_arg;
                if (local_best > cur + 1e-12) {
                    cur = local_best;
                    improved = true;
                }
            }
            if (!improved) break;
        }
        if (cur > best) {
            best = cur;
            best_g = g;
        }
    }
    return best;
}

} // namespace

LsiReport lsi_lower_bound(const Graph& g, std::uint32_t k, std::uint64_t trials,
                          std::uint64_t seed) {
    LsiReport rep;
    rep.trials = trials;
    auto q = ex_form(g, k);
    rep.lower_bound = lsi_ascent(q, trials, seed);
    rep.trel_rw_half = 0.5 * spectral_gap(rw_form(g)).trel;
    auto qk = ex_form(complete_graph(g.vertex_count), k);
    rep.chi_ex = comparison_constant(qk, q).chi;
    rep.rho_complete_est = lsi_ascent(qk, trials, seed + 1);
    double m = double(g.vertex_count), kk = double(k);
    rep.lee_yau_order = (1.0 / m) * std::log(m * m / (kk * (m - kk)));
    return rep;
}

std::string PipelineReport::to_json() const {
    nlohmann::json j;
    j["graph"] = graph;
    j["lower"] = lower;
    if (has_chi) j["chi_true"] = chi_true;
    if (has_chain) j["chain_upper"] = chain_upper;
    return j.dump();
}

PipelineReport comparison_pipeline(std::uint32_t n, std::uint32_t ell, std::uint64_t cap) {
    PipelineReport rep;
    rep.graph = "hamming:n=" + std::to_string(n) + ",l=" + std::to_string(ell);
    auto h = hamming_graph(n, ell);
    rep.lower = double(h.vertex_count) * spectral_gap(rw_form(h)).trel;
    auto chain = proof_chain(n, ell, cap);
    rep.chain_upper = chain.chain_graph;
    rep.has_chain = true;
    if (chain.has_truth) {
        rep.chi_true = chain.chi_graph_true;
        rep.has_chi = true;
    }
    return rep;
}

PipelineReport comparison_pipeline_graph(const Graph& g, std::uint64_t cap) {
    PipelineReport rep;
    rep.graph = "graph(" + std::to_string(g.vertex_count) + "v)";
    rep.lower = double(g.vertex_count) * spectral_gap(rw_form(g)).trel;
    std::uint64_t perms = 1;
    bool within = true;
    for (std::uint64_t s = 2; s <= g.vertex_count; ++s) {
        perms *= s;
        if (perms > cap) {
            within = false;
            break;
        }
    }
    if (within) {
        auto qk = ip_form(complete_graph(g.vertex_count), cap);
        auto qg = ip_form(g, cap);
        rep.chi_true = comparison_constant(qk, qg).chi;
        rep.has_chi = true;
    }
    return rep;
}

} // namespace mixlab
