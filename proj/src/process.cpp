#include "mixlab/process.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace mixlab {

void Trajectory::dump(const std::string& path, const Graph& g) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("trajectory dump: cannot open " + path);
    nlohmann::json header;
    header["seed"] = seed;
    header["final_time"] = final_time;
    header["events"] = events.size();
    header["edge_count"] = g.edge_count();
    header["record"] = "f64 time, u32 edge, little-endian";
    out << header.dump() << "\n";
    for (const auto& [t, e] : events) {
        out.write(reinterpret_cast<const char*>(&t), sizeof(double));
        out.write(reinterpret_cast<const char*>(&e), sizeof(std::uint32_t));
    }
}

Permutation simulate_ip(const Graph& g, double t_end, RngStream& rng, Trajectory* log) {
    if (t_end < 0) throw std::invalid_argument("simulate_ip: t_end >= 0 required");
    Permutation p;
    p.images.resize(g.vertex_count);
    for (std::uint32_t i = 0; i < g.vertex_count; ++i) p.images[i] = i;
    const double rate = double(g.edge_count());
    if (rate == 0.0 || t_end == 0.0) return p;
    double t = 0.0;
    while (true) {
        t += rng.exponential(rate);
        if (t > t_end) break;
        std::uint32_t e = std::uint32_t(rng.below(g.edge_count()));
        auto [u, v] = g.edges[e];
        std::swap(p.images[u], p.images[v]);
        ++p.event_count;
        if (log) log->events.emplace_back(t, e);
    }
    if (log) log->final_time = t_end;
    return p;
}

std::vector<std::uint32_t> simulate_ex(const Graph& g, const std::vector<std::uint32_t>& s0,
                                       double t_end, RngStream& rng, ExMode mode) {
    std::vector<char> occupied(g.vertex_count, 0);
    for (auto v : s0) {
        if (v >= g.vertex_count) throw std::invalid_argument("simulate_ex: vertex out of range");
        if (occupied[v]) throw std::invalid_argument("simulate_ex: duplicate vertex in S0");
        occupied[v] = 1;
    }
    if (mode == ExMode::Projected) {
        auto xi = simulate_ip(g, t_end, rng);
        std::vector<std::uint32_t> out;
        for (std::uint32_t x = 0; x < g.vertex_count; ++x)
            if (occupied[xi.images[x]]) out.push_back(x); // xi^{-1}(S0)
        return out;
    }
    double t = 0.0;
    std::vector<std::uint32_t> boundary;
    while (true) {
        boundary.clear();
        for (std::uint32_t e = 0; e < g.edge_count(); ++e) {
            auto [u, v] = g.edges[e];
            if (occupied[u] != occupied[v]) boundary.push_back(e);
        }
        if (boundary.empty()) break; // frozen (k = 0 or k = |V|)
        t += rng.exponential(double(boundary.size()));
        if (t > t_end) break;
        auto [u, v] = g.edges[boundary[rng.below(boundary.size())]];
        std::swap(occupied[u], occupied[v]);
    }
    std::vector<std::uint32_t> out;
    for (std::uint32_t x = 0; x < g.vertex_count; ++x)
        if (occupied[x]) out.push_back(x);
    return out;
}

std::uint32_t simulate_rw(const Graph& g, std::uint32_t x0, double t_end, RngStream& rng) {
    if (x0 >= g.vertex_count) throw std::invalid_argument("simulate_rw: start out of range");
    auto adj = g.adjacency();
    std::uint32_t x = x0;
    double t = 0.0;
    while (!adj[x].empty()) {
        t += rng.exponential(double(adj[x].size()));
        if (t > t_end) break;
        x = adj[x][rng.below(adj[x].size())];
    }
    return x;
}

std::vector<std::uint32_t> cycle_lengths(const Permutation& p) {
    const std::uint32_t m = std::uint32_t(p.images.size());
    std::vector<char> visited(m, 0);
    std::vector<std::uint32_t> lengths;
    for (std::uint32_t start = 0; start < m; ++start) {
        if (visited[start]) continue;
        std::uint32_t len = 0, x = start;
        while (!visited[x]) {
            visited[x] = 1;
            x = p.images[x];
            ++len;
        }
        lengths.push_back(len);
    }
    std::sort(lengths.rbegin(), lengths.rend());
    return lengths;
}

double max_cycle_fraction(const Permutation& p) {
    if (p.images.empty()) return 0.0;
    auto lengths = cycle_lengths(p);
    return double(lengths.front()) / double(p.images.size());
}

} // namespace mixlab
