#include "mixlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "mixlab/group.hpp"

namespace mixlab {

RadialMeasure::RadialMeasure(std::uint32_t n, std::uint32_t ell, std::vector<double> class_weights)
    : n_(n), ell_(ell), w_(std::move(class_weights)) {
    if (n < 1 || ell < 2) throw std::invalid_argument("RadialMeasure: need n >= 1, ell >= 2");
    if (w_.size() != n + 1) throw std::invalid_argument("RadialMeasure: need n+1 class weights");
    double sum = 0;
    for (double a : w_) {
        if (a < -1e-12) throw std::invalid_argument("RadialMeasure: negative class weight");
        sum += a;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("RadialMeasure: class weights sum to " + std::to_string(sum));
    for (double& a : w_) a = std::max(a, 0.0);
}

double RadialMeasure::density_on_sphere(std::uint32_t k) const {
    return w_.at(k) / double(sphere_size(n_, ell_, k));
}

RadialMeasure RadialMeasure::rho(std::uint32_t n, std::uint32_t ell, std::uint32_t k) {
    if (k > n) throw std::invalid_argument("rho: k out of range");
    std::vector<double> w(n + 1, 0.0);
    w[k] = 1.0;
    return RadialMeasure(n, ell, std::move(w));
}

RadialMeasure RadialMeasure::uniform(std::uint32_t n, std::uint32_t ell) {
    std::vector<double> w(n + 1);
    double order = std::pow(double(ell), double(n));
    const double p = double(ell - 1) / double(ell);
    for (std::uint32_t k = 0; k <= n; ++k) {
        // b_k = |G_k| / ell^n = C(n,k) p^k (1-p)^{n-k}
        w[k] = n <= 50 ? double(sphere_size(n, ell, k)) / order : binom_pmf(n, p, k);
    }
    double s = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& a : w) a /= s;
    return RadialMeasure(n, ell, std::move(w));
}

std::string RadialMeasure::to_json() const {
    nlohmann::json j;
    j["n"] = n_;
    j["ell"] = ell_;
    j["class_weights"] = w_;
    return j.dump();
}

RadialMeasure RadialMeasure::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    return RadialMeasure(j.at("n").get<std::uint32_t>(), j.at("ell").get<std::uint32_t>(),
                         j.at("class_weights").get<std::vector<double>>());
}

RadialMeasure RadialMeasure::parse_spec(const std::string& spec) {
    if (!spec.empty() && spec.front() == '{') return from_json(spec);
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("measure spec: expected kind:params");
    std::string head = spec.substr(0, colon);
    std::map<std::string, std::string> kv;
    std::stringstream ss(spec.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("measure spec: expected key=value");
        kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
    std::uint32_t n = std::stoul(kv.at("n")), ell = std::stoul(kv.at("l"));
    if (head == "pi") return uniform(n, ell);
    if (head == "rho") return rho(n, ell, std::stoul(kv.at("k")));
    if (head == "mu") return mu_base(n, ell).first;
    throw std::invalid_argument("measure spec: unknown kind '" + head + "'");
}

ConvolutionParams ConvolutionParams::for_dimension(std::uint32_t n, std::uint32_t ell) {
    if (n < 1 || ell < 2) throw std::invalid_argument("ConvolutionParams: need n >= 1, ell >= 2");
    std::uint64_t t = 1;
    while (t < n) t <<= 1;
    ConvolutionParams cp;
    cp.t = t;
    cp.theta = double(n) * (1.0 - std::exp(-std::log(2.0) / double(t)));
    cp.p = double(ell - 1) / double(ell);
    return cp;
}

double krawtchouk(std::uint32_t n, std::uint32_t ell, std::uint32_t k, std::uint32_t w) {
    // K_k(w) = sum_j (-1)^j (ell-1)^{k-j} C(w,j) C(n-w,k-j)
    long double acc = 0.0L;
    for (std::uint32_t j = 0; j <= k; ++j) {
        if (j > w || k - j > n - w) continue;
        long double term;
        if (n <= 60) {
            term = (long double)binom_u64(w, j) * (long double)binom_u64(n - w, k - j) *
                   powl((long double)(ell - 1), (long double)(k - j));
        } else {
            term = expl((long double)(log_binom(w, j) + log_binom(n - w, k - j)) +
                        (long double)(k - j) * logl((long double)(ell - 1)));
        }
        acc += (j % 2 == 0) ? term : -term;
    }
    return double(acc);
}

std::vector<double> krawtchouk_eigenvalues(const RadialMeasure& mu) {
    const std::uint32_t n = mu.n(), ell = mu.ell();
    std::vector<double> lambda(n + 1, 0.0);
    for (std::uint32_t w = 0; w <= n; ++w) {
        long double acc = 0.0L;
        for (std::uint32_t k = 0; k <= n; ++k) {
            if (mu.weight(k) == 0.0) continue;
            acc += (long double)mu.weight(k) * (long double)krawtchouk(n, ell, k, w) /
                   (long double)sphere_size(n, ell, k);
        }
        lambda[w] = double(acc);
    }
    return lambda;
}

RadialMeasure measure_from_eigenvalues(std::uint32_t n, std::uint32_t ell,
                                       const std::vector<double>& lambda) {
    if (lambda.size() != n + 1) throw std::invalid_argument("measure_from_eigenvalues: size mismatch");
    const long double order = powl((long double)ell, (long double)n);
    std::vector<double> w(n + 1, 0.0);
    long double sum = 0.0L;
    for (std::uint32_t m = 0; m <= n; ++m) {
        long double acc = 0.0L;
        for (std::uint32_t v = 0; v <= n; ++v)
            acc += (long double)sphere_size(n, ell, v) * (long double)krawtchouk(n, ell, m, v) *
                   (long double)lambda[v];
        long double a = acc / order;
        if (a < 0 && a > -1e-11) a = 0; // fp dust from the alternating sums
        w[m] = double(a);
        sum += a;
    }
    for (auto& a : w) a /= double(sum);
    return RadialMeasure(n, ell, std::move(w));
}

RadialMeasure convolve(const RadialMeasure& a, const RadialMeasure& b) {
    if (a.n() != b.n() || a.ell() != b.ell())
        throw std::invalid_argument("convolve: mismatched (n, ell)");
    auto la = krawtchouk_eigenvalues(a);
    auto lb = krawtchouk_eigenvalues(b);
    for (std::size_t i = 0; i < la.size(); ++i) la[i] *= lb[i];
    return measure_from_eigenvalues(a.n(), a.ell(), la);
}

RadialMeasure power_convolve(const RadialMeasure& mu, std::uint64_t t) {
    if (t < 1) throw std::invalid_argument("power_convolve: t >= 1 required");
    // pointwise eigenvalue power equals the t-fold convolution for any t;
    // powers of two correspond to repeated squaring
    auto lambda = krawtchouk_eigenvalues(mu);
    for (auto& l : lambda) l = std::pow(l, double(t));
    return measure_from_eigenvalues(mu.n(), mu.ell(), lambda);
}

std::pair<RadialMeasure, ConvolutionParams> mu_base(std::uint32_t n, std::uint32_t ell) {
    auto cp = ConvolutionParams::for_dimension(n, ell);
    std::vector<double> w(n + 1, 0.0);
    w[0] = 1.0 - cp.theta * cp.p;
    if (n >= 1) w[1] = cp.theta * cp.p;
    return {RadialMeasure(n, ell, std::move(w)), cp};
}

std::vector<double> support_size_distribution(std::uint32_t n, std::uint32_t ell,
                                              std::uint64_t t, double theta) {
    if (n < 1 || ell < 2) throw std::invalid_argument("support_size_distribution: bad dims");
    if (theta < 0.0 || theta > 1.0) throw std::invalid_argument("support_size_distribution: theta in [0,1]");
    // distribution of R (distinct refreshed coordinates) after t steps;
    // each step refreshes a uniformly chosen coordinate with prob theta
    std::vector<double> r(n + 1, 0.0), next(n + 1, 0.0);
    r[0] = 1.0;
    for (std::uint64_t s = 0; s < t; ++s) {
        for (std::uint32_t k = 0; k <= n; ++k) next[k] = 0.0;
        for (std::uint32_t k = 0; k <= n; ++k) {
            if (r[k] == 0.0) continue;
            double p_new = theta * double(n - k) / double(n);
            next[k] += r[k] * (1.0 - p_new);
            if (k < n) next[k + 1] += r[k] * p_new;
        }
        std::swap(r, next);
    }
    // S | R ~ Binomial(R, p)
    const double p = double(ell - 1) / double(ell);
    std::vector<double> s_dist(n + 1, 0.0);
    for (std::uint32_t rv = 0; rv <= n; ++rv) {
        if (r[rv] == 0.0) continue;
        for (std::uint32_t k = 0; k <= rv; ++k) s_dist[k] += r[rv] * binom_pmf(rv, p, k);
    }
    return s_dist;
}

double expected_refreshed_coordinates(std::uint32_t n, std::uint64_t t, double theta) {
    return double(n) * (1.0 - std::pow(1.0 - theta / double(n), double(t)));
}

double dml_error_constant(std::uint32_t n, double p) {
    if (n < 1 || p <= 0.0 || p >= 1.0) throw std::invalid_argument("dml_error_constant: bad args");
    const double sigma = std::sqrt(double(n) * p * (1.0 - p));
    double worst = 0.0;
    for (std::uint32_t k = 0; k <= n; ++k) {
        double x = (double(k) - double(n) * p) / sigma;
        double gauss = std::exp(-0.5 * x * x) / (std::sqrt(2.0 * M_PI) * sigma);
        worst = std::max(worst, std::abs(binom_pmf(n, p, k) - gauss));
    }
    return std::pow(double(n), 1.5) * worst;
}

namespace {
IntervalSpec open_interval_grid(std::uint32_t n, double center, double halfwidth) {
    IntervalSpec spec;
    spec.center = center;
    spec.halfwidth = halfwidth;
    for (std::uint32_t k = 0; k <= n; ++k) {
        double kk = double(k);
        if (kk > center - halfwidth && kk < center + halfwidth) spec.grid.push_back(k);
    }
    return spec;
}
} // namespace

IntervalSpec interval_I(std::uint32_t n, double p) {
    double np = double(n) * p;
    double h = 2.0 * std::sqrt(double(n) * p * (1.0 - p));
    auto spec = open_interval_grid(n, np, h);
    if (spec.grid.empty()) throw std::invalid_argument("interval_I: empty grid at n=" + std::to_string(n));
    return spec;
}

IntervalSpec interval_J(std::uint32_t n, double p) {
    double np = double(n) * p;
    double h = 2.0 * std::sqrt(double(n) * p * (1.0 - p));
    auto spec = open_interval_grid(n, np / 2.0, h);
    if (spec.grid.empty()) throw std::invalid_argument("interval_J: empty grid at n=" + std::to_string(n));
    return spec;
}

RadialMeasure rho_interval(std::uint32_t n, std::uint32_t ell, const IntervalSpec& spec) {
    if (spec.grid.empty()) throw std::invalid_argument("rho_interval: empty grid");
    std::vector<double> w(n + 1, 0.0);
    for (auto k : spec.grid) w.at(k) = 1.0 / double(spec.grid.size());
    return RadialMeasure(n, ell, std::move(w));
}

PlateauReport plateau_report(std::uint32_t n, std::uint32_t ell) {
    auto cp = ConvolutionParams::for_dimension(n, ell);
    auto dist = support_size_distribution(n, ell, cp.t, cp.theta);
    auto J = interval_J(n, cp.p);
    PlateauReport rep;
    rep.t = cp.t;
    rep.theta = cp.theta;
    rep.grid_J = J.grid;
    rep.min_weight_on_J = INFINITY;
    for (auto k : J.grid) rep.min_weight_on_J = std::min(rep.min_weight_on_J, dist[k]);
    rep.c = rep.min_weight_on_J * double(J.grid.size());
    return rep;
}

double plateau_constant(std::uint32_t n, std::uint32_t ell) { return plateau_report(n, ell).c; }

double tv_distance(const RadialMeasure& a, const RadialMeasure& b) {
    if (a.n() != b.n() || a.ell() != b.ell()) throw std::invalid_argument("tv_distance: dims mismatch");
    double s = 0;
    for (std::uint32_t k = 0; k <= a.n(); ++k) s += std::abs(a.weight(k) - b.weight(k));
    return s / 2.0;
}

QuarterCheck pointwise_quarter_check(const RadialMeasure& nu) {
    auto pi = RadialMeasure::uniform(nu.n(), nu.ell());
    QuarterCheck qc;
    qc.tv_to_uniform = tv_distance(nu, pi);
    qc.applicable = qc.tv_to_uniform <= 0.25 + 1e-12;
    auto conv = convolve(nu, nu);
    qc.min_ratio = INFINITY;
    for (std::uint32_t k = 0; k <= nu.n(); ++k)
        qc.min_ratio = std::min(qc.min_ratio, conv.density_on_sphere(k) / pi.density_on_sphere(k));
    qc.passed = qc.applicable && qc.min_ratio >= 0.25 - 1e-9;
    return qc;
}

std::uint32_t sample_support_size(std::uint32_t n, std::uint32_t ell, std::uint64_t t,
                                  double theta, RngStream& rng) {
    std::vector<std::uint32_t> x(n, 0);
    for (std::uint64_t s = 0; s < t; ++s) {
        std::uint64_t i = rng.below(n);
        if (rng.next_double() < theta) x[i] = std::uint32_t(rng.below(ell));
    }
    std::uint32_t supp = 0;
    for (auto v : x) supp += (v != 0);
    return supp;
}

} // namespace mixlab
