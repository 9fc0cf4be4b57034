#include "mixlab/paths.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "json.hpp"

namespace mixlab {

namespace {

std::string edge_label(const Graph& g, std::uint32_t e) {
    auto [u, v] = g.edges[e];
    return "(" + std::to_string(u) + "," + std::to_string(v) + ")";
}

std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> edge_index_map(const Graph& g) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> m;
    for (std::uint32_t e = 0; e < g.edge_count(); ++e) m[g.edges[e]] = e;
    return m;
}

void validate_path(const Graph& source, const Graph& target, std::uint32_t f,
                   const std::vector<std::uint32_t>& path) {
    auto [x, y] = target.edges[f];
    if (path.empty()) throw std::runtime_error("congestion: empty path for distinct endpoints");
    bool fwd = path.front() == x && path.back() == y;
    bool bwd = path.front() == y && path.back() == x;
    if (!fwd && !bwd) throw std::runtime_error("congestion: path endpoints do not match target edge");
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
        if (!source.has_edge(path[i], path[i + 1]))
            throw std::runtime_error("congestion: path step not an edge of the source graph");
}

} // namespace

CongestionReport congestion(const PathFamily& family, std::uint64_t pair_budget,
                            std::uint64_t samples_per_target, std::uint64_t seed) {
    CongestionReport rep;
    rep.family_id = family.id;
    auto eindex = edge_index_map(family.source);
    const std::uint32_t ecount = std::uint32_t(family.source.edge_count());
    std::vector<double> load(ecount, 0.0);

    // decide exact vs sampled from the enumerable support size
    std::uint64_t support_pairs = 0;
    bool enumerable = !family.dists.empty();
    if (enumerable)
        for (const auto& d : family.dists)
            for (const auto& [path, prob] : d) support_pairs += path.size();
    if (enumerable && support_pairs <= pair_budget) {
        for (std::uint32_t f = 0; f < family.dists.size(); ++f) {
            for (const auto& [path, prob] : family.dists[f]) {
                validate_path(family.source, family.target, f, path);
                double len = double(path.size()) - 1.0;
                for (std::size_t s = 0; s + 1 < path.size(); ++s) {
                    auto a = path[s], b = path[s + 1];
                    if (a > b) std::swap(a, b);
                    load[eindex.at({a, b})] += prob * len;
                }
            }
        }
        rep.exact = true;
    } else {
        if (!family.sampler && !enumerable)
            throw std::invalid_argument("congestion: family has neither distribution nor sampler");
        RngStream rng(seed, 0xBADC0DEull);
        const int batches = 10;
        std::vector<std::vector<double>> batch_load(batches, std::vector<double>(ecount, 0.0));
        std::uint64_t per_batch = std::max<std::uint64_t>(samples_per_target / batches, 1);
        for (std::uint32_t f = 0; f < family.target.edge_count(); ++f) {
            for (int b = 0; b < batches; ++b) {
                for (std::uint64_t s = 0; s < per_batch; ++s) {
                    std::vector<std::uint32_t> path;
                    if (family.sampler) {
                        path = family.sampler(f, rng);
                    } else { // sample from the explicit distribution
                        double u = rng.next_double(), acc = 0.0;
                        std::size_t pick = family.dists[f].size() - 1;
                        for (std::size_t d = 0; d < family.dists[f].size(); ++d) {
                            acc += family.dists[f][d].second;
                            if (u <= acc) {
                                pick = d;
                                break;
                            }
                        }
                        path = family.dists[f][pick].first;
                    }
                    validate_path(family.source, family.target, f, path);
                    double len = double(path.size()) - 1.0;
                    for (std::size_t s2 = 0; s2 + 1 < path.size(); ++s2) {
                        auto a = path[s2], b = path[s2 + 1];
                        if (a > b) std::swap(a, b);
                        batch_load[b][eindex.at({a, b})] += len / double(per_batch);
                    }
                }
            }
        }
        std::vector<double> kappas(batches);
        for (int b = 0; b < batches; ++b) {
            kappas[b] = *std::max_element(batch_load[b].begin(), batch_load[b].end());
            for (std::uint32_t e = 0; e < ecount; ++e) load[e] += batch_load[b][e] / batches;
        }
        double mean = std::accumulate(kappas.begin(), kappas.end(), 0.0) / batches;
        double var = 0.0;
        for (double k : kappas) var += (k - mean) * (k - mean);
        rep.std_err = std::sqrt(var / (batches - 1)) / std::sqrt(double(batches));
        rep.exact = false;
        rep.samples = per_batch * batches * family.target.edge_count();
    }
    std::uint32_t arg = 0;
    for (std::uint32_t e = 0; e < ecount; ++e)
        if (load[e] > load[arg]) arg = e;
    rep.kappa = ecount ? load[arg] : 0.0;
    rep.argmax = ecount ? edge_label(family.source, arg) : "";
    return rep;
}

CongestionReport congestion(const WordFamily& family, std::uint64_t pair_budget,
                            std::uint64_t samples_per_target, std::uint64_t seed) {
    CongestionReport rep;
    rep.family_id = family.id;
    std::vector<double> load(family.alphabet_size, 0.0);
    std::uint64_t support_pairs = 0;
    bool enumerable = !family.dists.empty();
    if (enumerable)
        for (const auto& d : family.dists)
            for (const auto& [word, prob] : d) support_pairs += word.size();
    if (enumerable && support_pairs <= pair_budget) {
        for (std::uint32_t b = 0; b < family.dists.size(); ++b) {
            for (const auto& [word, prob] : family.dists[b]) {
                if (family.validator && !family.validator(b, word))
                    throw std::runtime_error("congestion: word does not evaluate to its target");
                for (auto a : word) load[a] += prob * double(word.size());
            }
        }
        rep.exact = true;
    } else {
        if (!family.sampler && !enumerable)
            throw std::invalid_argument("congestion: family has neither distribution nor sampler");
        RngStream rng(seed, 0x0DDB175ull);
        const int batches = 10;
        std::vector<std::vector<double>> batch_load(batches,
                                                    std::vector<double>(family.alphabet_size, 0.0));
        std::uint64_t per_batch = std::max<std::uint64_t>(samples_per_target / batches, 1);
        for (std::uint32_t t = 0; t < family.target_count; ++t) {
            for (int b = 0; b < batches; ++b) {
                for (std::uint64_t s = 0; s < per_batch; ++s) {
                    std::vector<std::uint32_t> word;
                    if (family.sampler) {
                        word = family.sampler(t, rng);
                    } else {
                        double u = rng.next_double(), acc = 0.0;
                        std::size_t pick = family.dists[t].size() - 1;
                        for (std::size_t d = 0; d < family.dists[t].size(); ++d) {
                            acc += family.dists[t][d].second;
                            if (u <= acc) {
                                pick = d;
                                break;
                            }
                        }
                        word = family.dists[t][pick].first;
                    }
                    if (family.validator && !family.validator(t, word))
                        throw std::runtime_error("congestion: sampled word invalid");
                    for (auto a : word)
                        batch_load[b][a] += double(word.size()) / double(per_batch);
                }
            }
        }
        std::vector<double> kappas(batches);
        for (int b = 0; b < batches; ++b) {
            kappas[b] = *std::max_element(batch_load[b].begin(), batch_load[b].end());
            for (std::uint32_t a = 0; a < family.alphabet_size; ++a)
                load[a] += batch_load[b][a] / batches;
        }
        double mean = std::accumulate(kappas.begin(), kappas.end(), 0.0) / batches;
        double var = 0.0;
        for (double k : kappas) var += (k - mean) * (k - mean);
        rep.std_err = std::sqrt(var / (batches - 1)) / std::sqrt(double(batches));
        rep.exact = false;
        rep.samples = per_batch * batches * family.target_count;
    }
    std::uint32_t arg = 0;
    for (std::uint32_t a = 0; a < family.alphabet_size; ++a)
        if (load[a] > load[arg]) arg = a;
    rep.kappa = family.alphabet_size ? load[arg] : 0.0;
    rep.argmax = family.alphabet_size
                     ? (arg < family.letter_labels.size() ? family.letter_labels[arg]
                                                          : std::to_string(arg))
                     : "";
    return rep;
}

PathFamily spanning_tree_family(const Graph& source, const Graph& target) {
    if (!source.connected()) throw std::invalid_argument("spanning_tree_family: source disconnected");
    if (source.vertex_count != target.vertex_count)
        throw std::invalid_argument("spanning_tree_family: vertex sets differ");
    // BFS tree from vertex 0 under canonical ordering
    auto adj = source.adjacency();
    std::vector<std::int64_t> parent(source.vertex_count, -1);
    std::vector<std::uint32_t> depth(source.vertex_count, 0);
    std::queue<std::uint32_t> q;
    q.push(0);
    parent[0] = 0;
    while (!q.empty()) {
        auto v = q.front();
        q.pop();
        for (auto w : adj[v])
            if (parent[w] < 0) {
                parent[w] = v;
                depth[w] = depth[v] + 1;
                q.push(w);
            }
    }
    auto tree_path = [&](std::uint32_t x, std::uint32_t y) {
        std::vector<std::uint32_t> up_x{x}, up_y{y};
        std::uint32_t a = x, b = y;
        while (depth[a] > depth[b]) up_x.push_back(a = std::uint32_t(parent[a]));
        while (depth[b] > depth[a]) up_y.push_back(b = std::uint32_t(parent[b]));
        while (a != b) {
            up_x.push_back(a = std::uint32_t(parent[a]));
            up_y.push_back(b = std::uint32_t(parent[b]));
        }
        up_x.insert(up_x.end(), up_y.rbegin() + 1, up_y.rend());
        return up_x;
    };
    PathFamily fam;
    fam.source = source;
    fam.target = target;
    fam.id = "spanning_tree";
    fam.dists.resize(target.edge_count());
    for (std::uint32_t f = 0; f < target.edge_count(); ++f) {
        auto [x, y] = target.edges[f];
        fam.dists[f].emplace_back(tree_path(x, y), 1.0);
    }
    return fam;
}

PathFamily product_family(const std::vector<PathFamily>& factors) {
    if (factors.empty()) throw std::invalid_argument("product_family: no factors");
    std::vector<Graph> sources, targets;
    for (const auto& f : factors) {
        if (f.source.vertex_count != f.target.vertex_count)
            throw std::invalid_argument("product_family: factor vertex sets differ");
        sources.push_back(f.source);
        targets.push_back(f.target);
    }
    PathFamily fam;
    fam.source = cartesian_product(sources);
    fam.target = cartesian_product(targets);
    fam.id = "product";
    // coordinate weights (factor 0 least significant)
    std::vector<std::uint64_t> weight(factors.size());
    std::uint64_t w = 1;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        weight[i] = w;
        w *= factors[i].source.vertex_count;
    }
    std::vector<std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t>> tmaps;
    for (const auto& f : factors) tmaps.push_back(edge_index_map(f.target));
    fam.dists.resize(fam.target.edge_count());
    for (std::uint32_t f = 0; f < fam.target.edge_count(); ++f) {
        auto [xu, xv] = fam.target.edges[f];
        const auto& lu = fam.target.labels[xu];
        const auto& lv = fam.target.labels[xv];
        std::size_t coord = factors.size();
        for (std::size_t i = 0; i < factors.size(); ++i)
            if (lu[i] != lv[i]) {
                if (coord != factors.size())
                    throw std::logic_error("product_family: target edge differs in two coordinates");
                coord = i;
            }
        auto a = lu[coord], b = lv[coord];
        auto fa = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
        std::uint32_t fedge = tmaps[coord].at(fa);
        for (const auto& [fpath, prob] : factors[coord].dists[fedge]) {
            // orient the factor path from lu[coord] to lv[coord]
            std::vector<std::uint32_t> oriented = fpath;
            if (oriented.front() != a) std::reverse(oriented.begin(), oriented.end());
            std::vector<std::uint32_t> lifted;
            lifted.reserve(oriented.size());
            for (auto s : oriented) {
                std::uint64_t idx = xu + (std::int64_t(s) - std::int64_t(a)) * weight[coord];
                lifted.push_back(std::uint32_t(idx));
            }
            fam.dists[f].emplace_back(std::move(lifted), prob);
        }
    }
    return fam;
}

std::vector<std::uint32_t> lift_rw_word(const std::vector<std::uint32_t>& path, const Graph& g) {
    if (path.size() < 2)
        throw std::invalid_argument("lift_rw_word: empty path for distinct endpoints");
    auto eindex = edge_index_map(g);
    std::vector<std::uint32_t> word;
    const std::size_t k = path.size() - 1;
    word.reserve(2 * k - 1);
    for (std::size_t s = 0; s < k; ++s) {
        auto a = path[s], b = path[s + 1];
        if (a > b) std::swap(a, b);
        word.push_back(eindex.at({a, b}));
    }
    for (std::size_t s = k - 1; s-- > 0;) word.push_back(word[s]);
    return word;
}

std::vector<std::uint32_t> evaluate_transposition_word(const std::vector<std::uint32_t>& word,
                                                       const Graph& g) {
    std::vector<std::uint32_t> images(g.vertex_count);
    std::iota(images.begin(), images.end(), 0);
    for (auto e : word) {
        auto [u, v] = g.edges[e];
        std::swap(images[u], images[v]);
    }
    return images;
}

WordFamily lift_family(const PathFamily& family) {
    WordFamily wf;
    wf.alphabet_size = std::uint32_t(family.source.edge_count());
    for (std::uint32_t e = 0; e < wf.alphabet_size; ++e)
        wf.letter_labels.push_back("tau" + edge_label(family.source, e));
    wf.target_count = std::uint32_t(family.target.edge_count());
    for (std::uint32_t f = 0; f < wf.target_count; ++f)
        wf.target_labels.push_back("tau" + edge_label(family.target, f));
    wf.id = family.id + "_ip_lift";
    wf.dists.resize(wf.target_count);
    for (std::uint32_t f = 0; f < wf.target_count; ++f)
        for (const auto& [path, prob] : family.dists[f])
            wf.dists[f].emplace_back(lift_rw_word(path, family.source), prob);
    Graph src = family.source, tgt = family.target;
    wf.validator = [src, tgt](std::uint32_t f, const std::vector<std::uint32_t>& word) {
        auto images = evaluate_transposition_word(word, src);
        auto [x, y] = tgt.edges[f];
        for (std::uint32_t i = 0; i < src.vertex_count; ++i) {
            std::uint32_t expect = i == x ? y : (i == y ? x : i);
            if (images[i] != expect) return false;
        }
        return true;
    };
    return wf;
}

WordFamily two_letter_family(std::uint32_t n, std::uint32_t ell, std::uint32_t i, std::uint32_t j,
                             std::uint64_t enumeration_budget) {
    if (i + j > n) throw std::invalid_argument("two_letter_family: i + j > n");
    WordFamily wf;
    wf.id = "two_letter_i" + std::to_string(i) + "_j" + std::to_string(j);
    auto gi = sphere_points(n, ell, i);
    auto gj = sphere_points(n, ell, j);
    // alphabet = G_i u G_j (indices into the union list)
    std::vector<std::uint64_t> letters = gi;
    if (j != i) letters.insert(letters.end(), gj.begin(), gj.end());
    std::sort(letters.begin(), letters.end());
    letters.erase(std::unique(letters.begin(), letters.end()), letters.end());
    std::map<std::uint64_t, std::uint32_t> letter_of;
    for (std::uint32_t a = 0; a < letters.size(); ++a) letter_of[letters[a]] = a;
    wf.alphabet_size = std::uint32_t(letters.size());
    for (auto pt : letters) wf.letter_labels.push_back("g" + std::to_string(pt));

    auto targets = sphere_points(n, ell, i + j);
    wf.target_count = std::uint32_t(targets.size());
    for (auto pt : targets) wf.target_labels.push_back("g" + std::to_string(pt));

    // exact conditional law given the evaluation b: split supp(b) into an
    // i-part (giving X) and the complementary j-part (giving Y), uniformly
    // over the C(i+j, i) splits
    const std::uint64_t splits = binom_u64(i + j, i);
    const std::uint64_t support_size_total = splits * targets.size() * 2;
    std::vector<std::uint64_t> letters_copy = letters;
    if (support_size_total <= enumeration_budget) {
        wf.dists.resize(wf.target_count);
        for (std::uint32_t b = 0; b < targets.size(); ++b) {
            auto bp = index_to_point(targets[b], n, ell);
            std::vector<std::uint32_t> supp;
            for (std::uint32_t c = 0; c < n; ++c)
                if (bp.coords[c] != 0) supp.push_back(c);
            // iterate over i-subsets of supp
            std::vector<std::uint32_t> pick(i);
            for (std::uint32_t s = 0; s < i; ++s) pick[s] = s;
            const double prob = 1.0 / double(splits);
            while (true) {
                std::uint64_t x = 0, y = 0;
                std::vector<char> chosen(supp.size(), 0);
                for (auto s : pick) chosen[s] = 1;
                for (std::size_t s = 0; s < supp.size(); ++s) {
                    std::uint64_t digit_weight = 1;
                    for (std::uint32_t c = 0; c < supp[s]; ++c) digit_weight *= ell;
                    if (chosen[s]) x += bp.coords[supp[s]] * digit_weight;
                    else y += bp.coords[supp[s]] * digit_weight;
                }
                wf.dists[b].push_back({{letter_of.at(x), letter_of.at(y)}, prob});
                if (i == 0) break;
                int s = int(i) - 1;
                while (s >= 0 && pick[s] == supp.size() - i + s) --s;
                if (s < 0) break;
                ++pick[s];
                for (std::uint32_t s2 = s + 1; s2 < i; ++s2) pick[s2] = pick[s2 - 1] + 1;
            }
        }
    }
    std::vector<std::uint64_t> targets_copy = targets;
    wf.sampler = [n, ell, i, targets_copy, letter_of](std::uint32_t b, RngStream& rng) {
        auto bp = index_to_point(targets_copy[b], n, ell);
        std::vector<std::uint32_t> supp;
        for (std::uint32_t c = 0; c < n; ++c)
            if (bp.coords[c] != 0) supp.push_back(c);
        // uniform i-subset of supp via partial Fisher-Yates
        std::vector<std::uint32_t> pool = supp;
        for (std::uint32_t s = 0; s < i; ++s) {
            std::uint32_t r = s + std::uint32_t(rng.below(pool.size() - s));
            std::swap(pool[s], pool[r]);
        }
        std::vector<char> chosen(n, 0);
        for (std::uint32_t s = 0; s < i; ++s) chosen[pool[s]] = 1;
        std::uint64_t x = 0, y = 0;
        for (auto c : supp) {
            std::uint64_t dw = 1;
            for (std::uint32_t q = 0; q < c; ++q) dw *= ell;
            if (chosen[c]) x += bp.coords[c] * dw;
            else y += bp.coords[c] * dw;
        }
        return std::vector<std::uint32_t>{letter_of.at(x), letter_of.at(y)};
    };
    wf.validator = [n, ell, targets_copy, letters_copy](std::uint32_t b,
                                                        const std::vector<std::uint32_t>& word) {
        std::uint64_t acc = 0;
        for (auto a : word) acc = add_indices(acc, letters_copy[a], n, ell);
        return acc == targets_copy[b];
    };
    return wf;
}

double two_letter_congestion_formula(std::uint32_t n, std::uint32_t ell, std::uint32_t i,
                                     std::uint32_t j) {
    double gij = double(sphere_size(n, ell, i + j));
    double mn = double(std::min(sphere_size(n, ell, i), sphere_size(n, ell, j)));
    return 2.0 * gij * (i == j ? 2.0 : 1.0) / mn;
}

std::string HammingReductionCertificate::to_json() const {
    nlohmann::json j;
    j["lemma_id"] = "hamming_reduction";
    j["ell"] = ell;
    j["dimension"] = dimension;
    j["factor_kappas"] = factor_kappas;
    j["kappa_rw"] = kappa_rw;
    j["kappa_ip"] = kappa_ip;
    j["ell_cubed"] = ell_cubed;
    j["kappa_bound_ok"] = kappa_bound_ok;
    j["psd_checked"] = psd_checked;
    if (psd_checked) j["psd"] = nlohmann::json::parse(psd.to_json());
    j["passed"] = passed;
    return j.dump();
}

HammingReductionCertificate hamming_reduction_certificate(const std::vector<Graph>& factors,
                                                          std::uint64_t cap) {
    if (factors.empty()) throw std::invalid_argument("hamming_reduction: no factors");
    const std::uint32_t ell = factors.front().vertex_count;
    for (const auto& f : factors) {
        if (f.vertex_count != ell)
            throw std::invalid_argument("hamming_reduction: factors must share side length");
        if (!f.connected()) throw std::invalid_argument("hamming_reduction: factor disconnected");
    }
    HammingReductionCertificate cert;
    cert.ell = ell;
    cert.dimension = factors.size();
    cert.ell_cubed = double(ell) * ell * ell;

    std::vector<PathFamily> fams;
    for (const auto& f : factors) {
        auto fam = spanning_tree_family(f, complete_graph(ell));
        cert.factor_kappas.push_back(congestion(fam).kappa);
        fams.push_back(std::move(fam));
    }
    auto prod = product_family(fams);
    cert.kappa_rw = congestion(prod).kappa;
    auto lifted = lift_family(prod);
    cert.kappa_ip = congestion(lifted).kappa;
    cert.kappa_bound_ok = cert.kappa_ip <= cert.ell_cubed + 1e-9;

    std::uint64_t vertices = prod.source.vertex_count;
    std::uint64_t perms = 1;
    bool within = true;
    for (std::uint64_t s = 2; s <= vertices; ++s) {
        perms *= s;
        if (perms > cap) {
            within = false;
            break;
        }
    }
    if (within) {
        auto q_g = ip_form(prod.source, cap);
        auto q_h = ip_form(prod.target, cap);
        cert.psd = psd_dominates(q_h, q_g, cert.ell_cubed);
        cert.psd.lemma_id = "hamming_reduction";
        cert.psd_checked = true;
        cert.passed = cert.kappa_bound_ok && cert.psd.passed;
    } else {
        cert.passed = cert.kappa_bound_ok;
    }
    return cert;
}

std::string FinalComparisonCertificate::to_json() const {
    nlohmann::json j;
    j["lemma_id"] = "final_comparison";
    j["n"] = n;
    j["ell"] = ell;
    auto& arr = j["pairs"] = nlohmann::json::array();
    for (const auto& p : pairs)
        arr.push_back({{"i", p.i},
                       {"j", p.j},
                       {"coef_i", p.coef_i},
                       {"coef_j", p.coef_j},
                       {"min_eig", p.min_eig},
                       {"tol", p.tol},
                       {"passed", p.passed}});
    j["sphere_ratio_min"] = sphere_ratio_min;
    j["sphere_ratio_max"] = sphere_ratio_max;
    j["congestion_formula_ok"] = congestion_formula_ok;
    j["passed"] = passed;
    return j.dump();
}

FinalComparisonCertificate final_comparison_certificate(std::uint32_t n, std::uint32_t ell,
                                                        std::uint64_t cap) {
    FinalComparisonCertificate cert;
    cert.n = n;
    cert.ell = ell;
    // forms Q_rho_k for all needed k, built once
    std::map<std::uint32_t, QuadraticForm> forms;
    auto form_of = [&](std::uint32_t k) -> const QuadraticForm& {
        auto it = forms.find(k);
        if (it == forms.end())
            it = forms.emplace(k, ip_form_from_measure(RadialMeasure::rho(n, ell, k), cap)).first;
        return it->second;
    };
    bool all_passed = true;
    for (std::uint32_t i = 0; i <= n; ++i) {
        for (std::uint32_t j = i; i + j <= n; ++j) {
            FinalComparisonPair pr;
            pr.i = i;
            pr.j = j;
            double gi = double(sphere_size(n, ell, i));
            double gj = double(sphere_size(n, ell, j));
            double mn = std::min(gi, gj);
            pr.coef_i = 8.0 * gi / mn;
            pr.coef_j = 8.0 * gj / mn;
            // D = coef_i Q_i + coef_j Q_j - Q_{i+j}
            const auto& qi = form_of(i);
            const auto& qj = form_of(j);
            const auto& qij = form_of(i + j);
            SparseLaplacian diff;
            diff.dim = qi.op.dim;
            for (auto [u, v, w] : qi.op.pairs) diff.pairs.emplace_back(u, v, pr.coef_i * w);
            for (auto [u, v, w] : qj.op.pairs) diff.pairs.emplace_back(u, v, pr.coef_j * w);
            for (auto [u, v, w] : qij.op.pairs) diff.pairs.emplace_back(u, v, -w);
            double scale = std::max(diff.max_diag(), 1.0);
            pr.tol = 1e-8 * scale;
            if (diff.pairs.empty()) {
                pr.min_eig = 0.0;
                pr.passed = true;
            } else {
                auto e = min_eig_on_complement(diff, kDenseCap);
                if (!e.converged) throw std::runtime_error("final_comparison: eigensolver stalled");
                pr.min_eig = e.value;
                pr.passed = e.value >= -pr.tol;
            }
            all_passed = all_passed && pr.passed;
            cert.pairs.push_back(pr);
        }
    }
    // sphere-ratio boundedness over J: |G_{i+1}|/|G_i| = (ell-1)(n-i)/(i+1)
    auto J = interval_J(n, double(ell - 1) / double(ell));
    cert.sphere_ratio_min = INFINITY;
    cert.sphere_ratio_max = 0.0;
    for (auto i : J.grid) {
        if (i >= n) continue;
        double r = double(ell - 1) * double(n - i) / double(i + 1);
        cert.sphere_ratio_min = std::min(cert.sphere_ratio_min, r);
        cert.sphere_ratio_max = std::max(cert.sphere_ratio_max, r);
    }
    // exact two-letter congestion against the closed form
    cert.congestion_formula_ok = true;
    for (std::uint32_t i = 0; i <= n && cert.congestion_formula_ok; ++i)
        for (std::uint32_t j = i; i + j <= n; ++j) {
            if (i == 0 && j == 0) continue;
            auto rep = congestion(two_letter_family(n, ell, i, j));
            double want = two_letter_congestion_formula(n, ell, i, j);
            if (std::abs(rep.kappa - want) > 1e-9 * want) {
                cert.congestion_formula_ok = false;
                break;
            }
        }
    cert.passed = all_passed && cert.congestion_formula_ok;
    return cert;
}

std::string ProofChainReport::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["ell"] = ell;
    j["t"] = t;
    j["theta"] = theta;
    j["p"] = p;
    j["q"] = q;
    j["c1"] = c1;
    j["c1_valid"] = c1_valid;
    j["c2"] = c2;
    j["c2_valid"] = c2_valid;
    j["c3"] = c3;
    j["c4"] = c4;
    j["two_n_cap"] = two_n_cap;
    j["chain_measure"] = chain_measure;
    j["chain_graph"] = chain_graph;
    j["has_truth"] = has_truth;
    if (has_truth) {
        j["chi_measure_true"] = chi_measure_true;
        j["chi_graph_true"] = chi_graph_true;
    }
    return j.dump();
}

ProofChainReport proof_chain(std::uint32_t n, std::uint32_t ell, std::uint64_t cap) {
    ProofChainReport rep;
    rep.n = n;
    rep.ell = ell;
    auto cp = ConvolutionParams::for_dimension(n, ell);
    rep.t = cp.t;
    rep.theta = cp.theta;
    rep.p = cp.p;

    auto pi = RadialMeasure::uniform(n, ell);
    auto I = interval_I(n, cp.p);
    auto J = interval_J(n, cp.p);

    // link 1: E_pi <= 4 E_{nu*nu} <= 8 E_nu <= (8/q) |I| max_{k in I} b_k E_rhoI
    double q = 0.0, maxb = 0.0;
    for (auto k : I.grid) {
        q += pi.weight(k);
        maxb = std::max(maxb, pi.weight(k));
    }
    rep.q = q;
    rep.c1_valid = (1.0 - q) <= 0.25 + 1e-12;
    rep.c1 = (8.0 / q) * double(I.grid.size()) * maxb;

    // link 2: E_rhoI <= (|J|/|I|) max_j W_j E_rhoJ over valid pairs of P
    std::vector<char> in_J(n + 1, 0);
    for (auto k : J.grid) in_J[k] = 1;
    std::vector<char> covered(n + 1, 0);
    std::vector<double> W(n + 1, 0.0);
    for (auto i : J.grid)
        for (std::uint32_t j : {i, i + 1}) {
            if (j > n || !in_J[j] || i + j > n) continue;
            covered[i + j] = 1;
            double gi = double(sphere_size(n, ell, i));
            double gj = double(sphere_size(n, ell, j));
            double mn = std::min(gi, gj);
            W[i] += 8.0 * gi / mn;
            W[j] += 8.0 * gj / mn;
        }
    rep.c2_valid = true;
    for (auto k : I.grid)
        if (!covered[k]) rep.c2_valid = false;
    double maxW = 0.0;
    for (auto j : J.grid) maxW = std::max(maxW, W[j]);
    rep.c2 = maxW * double(J.grid.size()) / double(I.grid.size());

    // link 3: plateau, E_rhoJ <= (1/c) E_mu*t
    rep.c3 = 1.0 / plateau_constant(n, ell);

    // link 4: E_mu*t <= theta p t E_rho1 <= 2n E_rho1
    rep.c4 = cp.theta * cp.p * double(cp.t);
    rep.two_n_cap = 2.0 * double(n);

    rep.chain_measure = rep.c1 * rep.c2 * rep.c3 * rep.c4;
    double order = std::pow(double(ell), double(n));
    rep.chain_graph = rep.chain_measure * order / (double(n) * double(ell - 1));

    std::uint64_t ord = group_order(n, ell);
    if (ord <= 8) {
        auto q_pi = ip_form_from_measure(pi, cap);
        auto q_rho1 = ip_form_from_measure(RadialMeasure::rho(n, ell, 1), cap);
        rep.chi_measure_true = comparison_constant(q_pi, q_rho1).chi;
        auto q_k = ip_form(complete_graph(std::uint32_t(ord)), cap);
        auto q_h = ip_form(hamming_graph(n, ell), cap);
        rep.chi_graph_true = comparison_constant(q_k, q_h).chi;
        rep.has_truth = true;
    }
    return rep;
}

} // namespace mixlab
