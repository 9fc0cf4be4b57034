#include "mixlab/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mixlab {

std::vector<std::vector<std::uint32_t>> Graph::adjacency() const {
    std::vector<std::vector<std::uint32_t>> adj(vertex_count);
    for (auto [u, v] : edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    return adj;
}

std::uint32_t Graph::degree(std::uint32_t v) const {
    std::uint32_t d = 0;
    for (auto [a, b] : edges) d += (a == v) + (b == v);
    return d;
}

bool Graph::connected() const {
    if (vertex_count == 0) return false;
    auto adj = adjacency();
    std::vector<char> seen(vertex_count, 0);
    std::vector<std::uint32_t> stack{0};
    seen[0] = 1;
    std::uint32_t count = 1;
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        for (auto w : adj[v])
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                stack.push_back(w);
            }
    }
    return count == vertex_count;
}

bool Graph::has_edge(std::uint32_t u, std::uint32_t v) const {
    if (u > v) std::swap(u, v);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(u, v));
}

Graph Graph::make(std::uint32_t vertex_count,
                  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges,
                  std::vector<std::vector<std::uint32_t>> labels) {
    if (vertex_count == 0) throw std::invalid_argument("graph: vertex_count must be positive");
    for (auto& [u, v] : edges) {
        if (u == v) throw std::invalid_argument("graph: self-loop");
        if (u > v) std::swap(u, v);
        if (v >= vertex_count) throw std::invalid_argument("graph: edge endpoint out of range");
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw std::invalid_argument("graph: duplicate edge");
    if (!labels.empty()) {
        if (labels.size() != vertex_count) throw std::invalid_argument("graph: labels size mismatch");
        auto sorted = labels;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("graph: labels not distinct");
    }
    Graph g;
    g.vertex_count = vertex_count;
    g.edges = std::move(edges);
    g.labels = std::move(labels);
    return g;
}

std::string Graph::to_json() const {
    nlohmann::json j;
    j["vertex_count"] = vertex_count;
    auto& e = j["edges"] = nlohmann::json::array();
    for (auto [u, v] : edges) e.push_back({u, v});
    if (!labels.empty()) j["labels"] = labels;
    return j.dump();
}

Graph Graph::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (auto& e : j.at("edges")) edges.emplace_back(e.at(0).get<std::uint32_t>(), e.at(1).get<std::uint32_t>());
    std::vector<std::vector<std::uint32_t>> labels;
    if (j.contains("labels")) labels = j["labels"].get<std::vector<std::vector<std::uint32_t>>>();
    return make(j.at("vertex_count").get<std::uint32_t>(), std::move(edges), std::move(labels));
}

Graph complete_graph(std::uint32_t m) {
    if (m < 1) throw std::invalid_argument("complete_graph: m >= 1 required");
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t u = 0; u < m; ++u)
        for (std::uint32_t v = u + 1; v < m; ++v) edges.emplace_back(u, v);
    return Graph::make(m, std::move(edges));
}

Graph path_graph(std::uint32_t m) {
    if (m < 1) throw std::invalid_argument("path_graph: m >= 1 required");
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t u = 0; u + 1 < m; ++u) edges.emplace_back(u, u + 1);
    return Graph::make(m, std::move(edges));
}

Graph cycle_graph(std::uint32_t m) {
    if (m < 2) throw std::invalid_argument("cycle_graph: m >= 2 required");
    if (m == 2) return complete_graph(2);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t u = 0; u < m; ++u) edges.emplace_back(u, (u + 1) % m);
    return Graph::make(m, std::move(edges));
}

Graph star_graph(std::uint32_t m) {
    if (m < 2) throw std::invalid_argument("star_graph: m >= 2 required");
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t v = 1; v < m; ++v) edges.emplace_back(0u, v);
    return Graph::make(m, std::move(edges));
}

Graph cartesian_product(const std::vector<Graph>& factors) {
    if (factors.empty()) throw std::invalid_argument("cartesian_product: empty factor list");
    std::uint64_t total = 1;
    for (const auto& f : factors) {
        if (f.vertex_count == 0) throw std::invalid_argument("cartesian_product: empty factor");
        if (total > kGraphVertexCap / f.vertex_count)
            throw CapExceeded("cartesian_product: vertex count exceeds cap");
        total *= f.vertex_count;
    }
    const std::size_t n = factors.size();
    // mixed radix, factor 0 least significant
    std::vector<std::uint64_t> weight(n);
    std::uint64_t w = 1;
    for (std::size_t i = 0; i < n; ++i) {
        weight[i] = w;
        w *= factors[i].vertex_count;
    }
    std::vector<std::vector<std::uint32_t>> labels(total, std::vector<std::uint32_t>(n));
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t r = idx;
        for (std::size_t i = 0; i < n; ++i) {
            labels[idx][i] = static_cast<std::uint32_t>(r % factors[i].vertex_count);
            r /= factors[i].vertex_count;
        }
    }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        for (std::size_t i = 0; i < n; ++i) {
            std::uint32_t c = labels[idx][i];
            for (auto [a, b] : factors[i].edges) {
                std::uint32_t other;
                if (a == c) other = b;
                else if (b == c) other = a;
                else continue;
                std::uint64_t jdx = idx + (std::int64_t(other) - std::int64_t(c)) * weight[i];
                if (idx < jdx) edges.emplace_back(std::uint32_t(idx), std::uint32_t(jdx));
            }
        }
    }
    return Graph::make(std::uint32_t(total), std::move(edges), std::move(labels));
}

Graph hamming_graph(std::uint32_t n, std::uint32_t ell, std::uint64_t cap) {
    if (n < 1 || ell < 2) throw std::invalid_argument("hamming_graph: need n >= 1, ell >= 2");
    group_order(n, ell, cap); // overflow/cap guard before allocation
    std::vector<Graph> factors(n, complete_graph(ell));
    return cartesian_product(factors);
}

Graph cayley_graph(std::uint32_t n, std::uint32_t ell, const std::vector<GroupPoint>& generators,
                   std::uint64_t cap) {
    std::uint64_t order = group_order(n, ell, cap);
    std::set<std::uint64_t> gens;
    for (const auto& g : generators) {
        if (g.n != n || g.ell != ell) throw std::invalid_argument("cayley_graph: generator dims mismatch");
        if (g.is_identity()) throw std::invalid_argument("cayley_graph: generator set contains identity");
        gens.insert(point_to_index(g));
    }
    for (auto gi : gens)
        if (!gens.count(negate_index(gi, n, ell)))
            throw std::invalid_argument("cayley_graph: generator set not symmetric");
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint64_t x = 0; x < order; ++x)
        for (auto gi : gens) {
            std::uint64_t y = add_indices(x, gi, n, ell);
            if (x < y) edges.emplace_back(std::uint32_t(x), std::uint32_t(y));
        }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    std::vector<std::vector<std::uint32_t>> labels(order, std::vector<std::uint32_t>(n));
    for (std::uint64_t x = 0; x < order; ++x) {
        auto p = index_to_point(x, n, ell);
        labels[x] = p.coords;
    }
    return Graph::make(std::uint32_t(order), std::move(edges), std::move(labels));
}

namespace {

std::map<std::string, std::string> parse_kv(const std::string& s) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("graph spec: expected key=value in '" + item + "'");
        kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return kv;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

Graph parse_atom(const std::string& atom) {
    // atoms like path3, cycle4, k4, star5, used inside product specs
    auto digits = atom.find_first_of("0123456789");
    if (digits == std::string::npos) throw std::invalid_argument("graph spec: bad product atom '" + atom + "'");
    std::string name = atom.substr(0, digits);
    std::uint32_t m = std::stoul(atom.substr(digits));
    if (name == "path" || name == "p") return path_graph(m);
    if (name == "cycle" || name == "c") return cycle_graph(m);
    if (name == "k" || name == "complete") return complete_graph(m);
    if (name == "star") return star_graph(m);
    throw std::invalid_argument("graph spec: unknown product atom '" + atom + "'");
}

} // namespace

Graph parse_graph_spec(const std::string& spec_in) {
    std::string spec = trim(spec_in);
    if (spec.empty()) throw std::invalid_argument("graph spec: empty");
    if (spec.front() == '{') return Graph::from_json(spec);
    auto colon = spec.find(':');
    std::string head = colon == std::string::npos ? spec : spec.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (head == "complete" || head == "k") return complete_graph(std::stoul(rest));
    if (head == "path") return path_graph(std::stoul(rest));
    if (head == "cycle") return cycle_graph(std::stoul(rest));
    if (head == "star") return star_graph(std::stoul(rest));
    if (head == "hamming") {
        auto kv = parse_kv(rest);
        return hamming_graph(std::stoul(kv.at("n")), std::stoul(kv.at("l")));
    }
    if (head == "torus") {
        auto kv = parse_kv(rest);
        std::uint32_t n = std::stoul(kv.at("n")), ell = std::stoul(kv.at("l"));
        std::vector<Graph> factors(n, cycle_graph(ell));
        return cartesian_product(factors);
    }
    if (head == "cayley") {
        auto kv = parse_kv(rest);
        std::uint32_t n = std::stoul(kv.at("n")), ell = std::stoul(kv.at("l"));
        std::vector<GroupPoint> gens;
        std::stringstream ss(kv.at("spheres"));
        std::string tok;
        while (std::getline(ss, tok, '+')) {
            std::uint32_t k = std::stoul(tok);
            for (auto idx : sphere_points(n, ell, k)) gens.push_back(index_to_point(idx, n, ell));
        }
        return cayley_graph(n, ell, gens);
    }
    if (head == "product") {
        std::vector<Graph> factors;
        std::stringstream ss(rest);
        std::string tok;
        while (std::getline(ss, tok, 'x')) {
            tok = trim(tok);
            if (!tok.empty()) factors.push_back(parse_atom(tok));
        }
        return cartesian_product(factors);
    }
    throw std::invalid_argument("graph spec: unknown spec '" + spec + "'");
}

std::uint64_t canonical_form(const Graph& g) {
    const std::uint32_t m = g.vertex_count;
    if (m > 8) throw std::invalid_argument("canonical_form: only for <= 8 vertices");
    std::vector<std::uint32_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    auto edge_bit = [m](std::uint32_t u, std::uint32_t v) {
        if (u > v) std::swap(u, v);
        // position of pair (u,v) in lexicographic order over pairs
        std::uint32_t idx = 0;
        for (std::uint32_t i = 0; i < u; ++i) idx += m - 1 - i;
        idx += v - u - 1;
        return idx;
    };
    std::uint64_t best = UINT64_MAX;
    do {
        std::uint64_t mask = 0;
        for (auto [u, v] : g.edges) mask |= 1ull << edge_bit(perm[u], perm[v]);
        best = std::min(best, mask);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

std::vector<Graph> connected_graph_catalog(std::uint32_t m) {
    if (m < 1 || m > 6) throw std::invalid_argument("connected_graph_catalog: 1 <= m <= 6");
    const std::uint32_t pairs = m * (m - 1) / 2;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pair_list;
    for (std::uint32_t u = 0; u < m; ++u)
        for (std::uint32_t v = u + 1; v < m; ++v) pair_list.emplace_back(u, v);
    std::set<std::uint64_t> seen;
    std::vector<Graph> out;
    for (std::uint64_t mask = 0; mask < (1ull << pairs); ++mask) {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
        for (std::uint32_t b = 0; b < pairs; ++b)
            if (mask & (1ull << b)) edges.push_back(pair_list[b]);
        Graph g = Graph::make(m, std::move(edges));
        if (!g.connected()) continue;
        auto canon = canonical_form(g);
        if (seen.insert(canon).second) out.push_back(std::move(g));
    }
    return out;
}

} // namespace mixlab
