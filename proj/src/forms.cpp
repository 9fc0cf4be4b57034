#include "mixlab/forms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "json.hpp"
#include "mixlab/rng.hpp"

namespace mixlab {

StateSpace StateSpace::vertices(std::uint32_t count) {
    StateSpace s;
    s.kind_ = StateKind::Vertices;
    s.count_ = count;
    s.size_ = count;
    return s;
}

StateSpace StateSpace::subsets(std::uint32_t count, std::uint32_t k, std::uint64_t cap) {
    if (k == 0 || k >= count) throw std::invalid_argument("subsets: need 0 < k < count");
    StateSpace s;
    s.kind_ = StateKind::Subsets;
    s.count_ = count;
    s.k_ = k;
    s.size_ = binom_u64(count, k);
    if (s.size_ > cap) throw CapExceeded("subset space C(" + std::to_string(count) + "," +
                                         std::to_string(k) + ") exceeds cap");
    return s;
}

StateSpace StateSpace::permutations(std::uint32_t m, std::uint64_t cap) {
    StateSpace s;
    s.kind_ = StateKind::Permutations;
    s.count_ = m;
    std::uint64_t f = 1;
    for (std::uint32_t i = 2; i <= m; ++i) {
        f *= i;
        if (f > cap) throw CapExceeded("permutation space " + std::to_string(m) + "! exceeds cap " +
                                       std::to_string(cap));
    }
    s.size_ = f;
    return s;
}

std::string StateSpace::label() const {
    switch (kind_) {
        case StateKind::Vertices: return "vertices(" + std::to_string(count_) + ")";
        case StateKind::Subsets:
            return "subsets(" + std::to_string(count_) + "," + std::to_string(k_) + ")";
        case StateKind::Permutations: return "permutations(" + std::to_string(count_) + ")";
    }
    return "?";
}

std::uint64_t StateSpace::rank_permutation(const std::vector<std::uint32_t>& images) const {
    const std::uint32_t m = count_;
    // Lehmer code
    std::uint64_t rank = 0;
    for (std::uint32_t i = 0; i < m; ++i) {
        std::uint32_t smaller = 0;
        for (std::uint32_t j = i + 1; j < m; ++j) smaller += images[j] < images[i];
        rank = rank * (m - i) + smaller;
    }
    return rank;
}

std::vector<std::uint32_t> StateSpace::unrank_permutation(std::uint64_t idx) const {
    const std::uint32_t m = count_;
    std::vector<std::uint32_t> code(m);
    for (std::uint32_t i = 0; i < m; ++i) {
        code[m - 1 - i] = std::uint32_t(idx % (i + 1));
        idx /= (i + 1);
    }
    std::vector<std::uint32_t> pool(m);
    for (std::uint32_t i = 0; i < m; ++i) pool[i] = i;
    std::vector<std::uint32_t> images(m);
    for (std::uint32_t i = 0; i < m; ++i) {
        images[i] = pool[code[i]];
        pool.erase(pool.begin() + code[i]);
    }
    return images;
}

std::uint64_t StateSpace::rank_subset(const std::vector<std::uint32_t>& elems) const {
    // combinadic rank of a sorted k-subset
    std::uint64_t rank = 0;
    std::uint32_t prev = 0;
    for (std::uint32_t i = 0; i < k_; ++i) {
        for (std::uint32_t c = prev; c < elems[i]; ++c) rank += binom_u64(count_ - 1 - c, k_ - 1 - i);
        prev = elems[i] + 1;
    }
    return rank;
}

std::vector<std::uint32_t> StateSpace::unrank_subset(std::uint64_t idx) const {
    std::vector<std::uint32_t> elems(k_);
    std::uint32_t c = 0;
    for (std::uint32_t i = 0; i < k_; ++i) {
        while (true) {
            std::uint64_t block = binom_u64(count_ - 1 - c, k_ - 1 - i);
            if (idx < block) break;
            idx -= block;
            ++c;
        }
        elems[i] = c++;
    }
    return elems;
}

double QuadraticForm::value(const std::vector<double>& f) const {
    double s = 0.0;
    for (const auto& [u, v, w] : op.pairs) {
        double d = f[u] - f[v];
        s += w * d * d;
    }
    return norm * s;
}

QuadraticForm rw_form(const Graph& g) {
    QuadraticForm q;
    q.space = StateSpace::vertices(g.vertex_count);
    q.op.dim = g.vertex_count;
    for (auto [u, v] : g.edges) q.op.pairs.emplace_back(u, v, 1.0);
    q.norm = 1.0 / (2.0 * double(g.vertex_count));
    q.label = "rw";
    return q;
}

QuadraticForm ip_form(const Graph& g, std::uint64_t cap) {
    QuadraticForm q;
    q.space = StateSpace::permutations(g.vertex_count, cap);
    const std::uint64_t size = q.space.size();
    q.op.dim = std::uint32_t(size);
    q.op.pairs.reserve(size * g.edge_count() / 2);
    std::vector<std::uint32_t> images;
    for (std::uint64_t s = 0; s < size; ++s) {
        images = q.space.unrank_permutation(s);
        for (auto [u, v] : g.edges) {
            std::swap(images[u], images[v]); // sigma tau_e
            std::uint64_t s2 = q.space.rank_permutation(images);
            std::swap(images[u], images[v]);
            if (s < s2) q.op.pairs.emplace_back(std::uint32_t(s), std::uint32_t(s2), 1.0);
        }
    }
    q.norm = 1.0 / (2.0 * double(size));
    q.label = "ip";
    return q;
}

QuadraticForm ex_form(const Graph& g, std::uint32_t k, std::uint64_t cap) {
    if (k == 0 || k >= g.vertex_count) throw std::invalid_argument("ex_form: need 0 < k < |V|");
    QuadraticForm q;
    q.space = StateSpace::subsets(g.vertex_count, k, cap);
    const std::uint64_t size = q.space.size();
    q.op.dim = std::uint32_t(size);
    std::vector<char> occupied(g.vertex_count);
    for (std::uint64_t s = 0; s < size; ++s) {
        auto elems = q.space.unrank_subset(s);
        std::fill(occupied.begin(), occupied.end(), 0);
        for (auto e : elems) occupied[e] = 1;
        for (auto [u, v] : g.edges) {
            if (occupied[u] == occupied[v]) continue; // not a boundary edge
            std::vector<std::uint32_t> next = elems;
            std::uint32_t out = occupied[u] ? u : v;
            std::uint32_t in = occupied[u] ? v : u;
            for (auto& e : next)
                if (e == out) e = in;
            std::sort(next.begin(), next.end());
            std::uint64_t s2 = q.space.rank_subset(next);
            if (s < s2) q.op.pairs.emplace_back(std::uint32_t(s), std::uint32_t(s2), 1.0);
        }
    }
    q.norm = 1.0 / (2.0 * double(size));
    q.label = "ex";
    return q;
}

QuadraticForm ip_form_from_measure(const RadialMeasure& mu, std::uint64_t cap) {
    const std::uint32_t n = mu.n(), ell = mu.ell();
    const std::uint64_t order = group_order(n, ell);
    StateSpace space = StateSpace::permutations(std::uint32_t(order), cap);

    // rate of the transposition pair {x, y}: mu(y-x) + mu(x-y) = 2 mu(y-x)
    std::vector<double> pair_rate; // indexed by unordered group pair
    std::vector<std::pair<std::uint32_t, std::uint32_t>> group_pairs;
    for (std::uint64_t x = 0; x < order; ++x)
        for (std::uint64_t y = x + 1; y < order; ++y) {
            std::uint64_t z = add_indices(y, negate_index(std::uint64_t(x), n, ell), n, ell);
            std::uint32_t kz = support_of_index(z, n, ell);
            double d = mu.weight(kz) == 0.0 ? 0.0 : 2.0 * mu.weight(kz) / double(sphere_size(n, ell, kz));
            if (d != 0.0) {
                group_pairs.emplace_back(std::uint32_t(x), std::uint32_t(y));
                pair_rate.push_back(d);
            }
        }

    QuadraticForm q;
    q.space = space;
    const std::uint64_t size = space.size();
    q.op.dim = std::uint32_t(size);
    std::vector<std::uint32_t> images;
    for (std::uint64_t s = 0; s < size; ++s) {
        images = space.unrank_permutation(s);
        for (std::size_t pi = 0; pi < group_pairs.size(); ++pi) {
            auto [u, v] = group_pairs[pi];
            std::swap(images[u], images[v]);
            std::uint64_t s2 = space.rank_permutation(images);
            std::swap(images[u], images[v]);
            if (s < s2) q.op.pairs.emplace_back(std::uint32_t(s), std::uint32_t(s2), pair_rate[pi]);
        }
    }
    q.norm = 1.0 / (2.0 * double(size));
    q.label = "ip_mu";
    return q;
}

QuadraticForm scale_form(const QuadraticForm& q, double c) {
    QuadraticForm out = q;
    for (auto& [u, v, w] : out.op.pairs) w *= c;
    return out;
}

std::string SpectralReport::to_json() const {
    nlohmann::json j;
    j["gap"] = gap;
    j["trel"] = trel;
    j["method"] = method;
    j["residual"] = residual;
    j["iterations"] = iterations;
    j["connected"] = connected;
    return j.dump();
}

SpectralReport spectral_gap(const QuadraticForm& q, std::uint64_t dense_cap) {
    SpectralReport rep;
    rep.connected = q.op.pair_graph_connected();
    if (!rep.connected) {
        rep.gap = 0.0;
        rep.trel = INFINITY;
        rep.method = "none";
        return rep;
    }
    auto e = second_eigenvalue(q.op, dense_cap);
    if (!e.converged)
        throw std::runtime_error("spectral_gap: eigensolver did not converge (residual " +
                                 std::to_string(e.residual) + ")");
    rep.gap = e.value;
    rep.trel = 1.0 / e.value;
    rep.method = e.iterations < 0 ? "dense" : "iterative";
    rep.residual = e.residual;
    rep.iterations = std::max(e.iterations, 0);
    return rep;
}

std::string ComparisonReport::to_json() const {
    nlohmann::json j;
    j["chi"] = chi;
    j["lambda_max"] = lambda_max;
    j["method"] = method;
    j["residual"] = residual;
    j["iterations"] = iterations;
    j["denominator_connected"] = denominator_connected;
    j["random_probe_max"] = random_probe_max;
    return j.dump();
}

ComparisonReport comparison_constant(const QuadraticForm& num, const QuadraticForm& den,
                                     std::uint64_t dense_cap) {
    if (num.space.size() != den.space.size())
        throw std::invalid_argument("comparison_constant: state spaces differ");
    ComparisonReport rep;
    auto res = pencil_lambda_max(num.op, den.op, dense_cap);
    rep.denominator_connected = res.denominator_connected;
    if (!res.denominator_connected) {
        rep.chi = INFINITY;
        rep.method = "none";
        return rep;
    }
    if (!res.converged)
        throw std::runtime_error("comparison_constant: pencil iteration did not converge (residual " +
                                 std::to_string(res.residual) + ")");
    rep.lambda_max = res.lambda_max;
    rep.chi = (num.norm / den.norm) * res.lambda_max;
    rep.method = res.iterations < 0 ? "dense" : "iterative";
    rep.residual = res.residual;
    rep.iterations = std::max(res.iterations, 0);

    // cross-check by random-function ratio maximization
    const std::uint64_t dim = num.space.size();
    RngStream rng(0xC0FFEE, dim);
    double best = 0.0;
    std::vector<double> f(dim);
    for (int trial = 0; trial < 24; ++trial) {
        for (auto& x : f) x = rng.next_double() - 0.5;
        double en = num.value(f), ed = den.value(f);
        if (ed > 1e-14) best = std::max(best, en / ed);
    }
    rep.random_probe_max = best;
    return rep;
}

std::string PsdCertificate::to_json() const {
    nlohmann::json j;
    j["lemma_id"] = lemma_id;
    j["state_space"] = state_space;
    j["sizes"] = {{"states", size}};
    j["constant_c"] = constant_c;
    j["min_eig"] = min_eig;
    j["tol"] = tol;
    j["method"] = method;
    j["passed"] = passed;
    return j.dump();
}

PsdCertificate psd_dominates(const QuadraticForm& q_a, const QuadraticForm& q_b, double c,
                             double slack_rel, std::uint64_t dense_cap) {
    if (q_a.space.size() != q_b.space.size())
        throw std::invalid_argument("psd_dominates: state spaces differ");
    SparseLaplacian diff;
    diff.dim = q_a.op.dim;
    diff.pairs.reserve(q_a.op.pairs.size() + q_b.op.pairs.size());
    for (auto [u, v, w] : q_b.op.pairs) diff.pairs.emplace_back(u, v, c * w);
    for (auto [u, v, w] : q_a.op.pairs) diff.pairs.emplace_back(u, v, -w);
    PsdCertificate cert;
    cert.state_space = q_a.space.label();
    cert.size = q_a.space.size();
    cert.constant_c = c;
    cert.scale = std::max(diff.max_diag(), 1.0);
    cert.tol = slack_rel * cert.scale;
    auto e = min_eig_on_complement(diff, dense_cap);
    if (!e.converged)
        throw std::runtime_error("psd_dominates: eigensolver did not converge");
    cert.min_eig = e.value;
    cert.method = e.iterations < 0 ? "dense" : "iterative";
    cert.passed = e.value >= -cert.tol;
    return cert;
}

AldousReport aldous_check(const Graph& g, std::uint64_t cap) {
    AldousReport rep;
    rep.gap_ip = spectral_gap(ip_form(g, cap)).gap;
    rep.gap_rw = spectral_gap(rw_form(g)).gap;
    rep.difference = std::abs(rep.gap_ip - rep.gap_rw);
    rep.passed = rep.difference <= 1e-8;
    return rep;
}

LumpingReport lumping_check(const Graph& g, std::uint32_t k, std::uint64_t cap) {
    auto perm_space = StateSpace::permutations(g.vertex_count, cap);
    auto ex = ex_form(g, k);
    const auto& subset_space = ex.space;

    // EX rates, exact: rate 1 between S and S+e over boundary edges
    std::map<std::uint64_t, std::map<std::uint64_t, double>> ex_neighbors;
    for (auto [a, b, w] : ex.op.pairs) {
        ex_neighbors[a][b] = w;
        ex_neighbors[b][a] = w;
    }

    // initial set S0 = {0, ..., k-1}
    std::vector<std::uint32_t> base(k);
    for (std::uint32_t i = 0; i < k; ++i) base[i] = i;

    LumpingReport rep;
    rep.exact = true;
    double worst = 0.0;
    for (std::uint64_t s = 0; s < perm_space.size(); ++s) {
        auto images = perm_space.unrank_permutation(s);
        // phi(sigma) = sigma^{-1}(S0) = {x : images[x] in S0}
        auto project = [&](const std::vector<std::uint32_t>& im) {
            std::vector<std::uint32_t> out;
            out.reserve(k);
            for (std::uint32_t x = 0; x < g.vertex_count; ++x)
                if (im[x] < k) out.push_back(x);
            return out;
        };
        std::uint64_t from = subset_space.rank_subset(project(images));
        std::map<std::uint64_t, double> agg;
        for (auto [u, v] : g.edges) {
            std::swap(images[u], images[v]);
            std::uint64_t to = subset_space.rank_subset(project(images));
            std::swap(images[u], images[v]);
            if (to != from) agg[to] += 1.0;
        }
        // aggregated IP rates must match EX rates in both directions
        const auto& expected = ex_neighbors[from];
        for (auto& [to, rate] : agg) {
            auto it = expected.find(to);
            double expect = it == expected.end() ? 0.0 : it->second;
            worst = std::max(worst, std::abs(rate - expect));
        }
        for (auto& [to, expect] : expected)
            if (!agg.count(to)) worst = std::max(worst, expect);
        ++rep.states_checked;
    }
    rep.max_discrepancy = worst;
    rep.exact = worst == 0.0;
    return rep;
}

} // namespace mixlab
