#ifndef MIXLAB_MEASURE_HPP
#define MIXLAB_MEASURE_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mixlab/rng.hpp"

namespace mixlab {

// Probability measure on Z_ell^n constant on support-size spheres:
// measure = sum_k class_weights[k] * rho_k, rho_k uniform on the sphere G_k.
// Such measures are automatically symmetric (spheres are closed under
// negation) and are diagonalized by the Krawtchouk transform.
class RadialMeasure {
public:
    RadialMeasure(std::uint32_t n, std::uint32_t ell, std::vector<double> class_weights);

    std::uint32_t n() const { return n_; }
    std::uint32_t ell() const { return ell_; }
    const std::vector<double>& class_weights() const { return w_; }
    double weight(std::uint32_t k) const { return w_.at(k); }
    // pointwise density on the sphere G_k
    double density_on_sphere(std::uint32_t k) const;

    static RadialMeasure rho(std::uint32_t n, std::uint32_t ell, std::uint32_t k);
    static RadialMeasure uniform(std::uint32_t n, std::uint32_t ell); // pi

    std::string to_json() const;
    static RadialMeasure from_json(const std::string& text);
    static RadialMeasure parse_spec(const std::string& spec); // "pi:n=,l=", "rho:...,k=", "mu:n=,l="

private:
    std::uint32_t n_, ell_;
    std::vector<double> w_;
};

// t = 2^ceil(log2 n), theta = n(1 - e^{-ln2/t}), p = (ell-1)/ell.
struct ConvolutionParams {
    std::uint64_t t;
    double theta;
    double p;
    static ConvolutionParams for_dimension(std::uint32_t n, std::uint32_t ell);
};

// Generalized (ell-ary) Krawtchouk polynomial K_k(w).
double krawtchouk(std::uint32_t n, std::uint32_t ell, std::uint32_t k, std::uint32_t w);

// Transform class weights -> convolution-operator eigenvalues (by weight w),
// and back. convolve() multiplies eigenvalues pointwise.
std::vector<double> krawtchouk_eigenvalues(const RadialMeasure& mu);
RadialMeasure measure_from_eigenvalues(std::uint32_t n, std::uint32_t ell,
                                       const std::vector<double>& lambda);

RadialMeasure convolve(const RadialMeasure& a, const RadialMeasure& b);
RadialMeasure power_convolve(const RadialMeasure& mu, std::uint64_t t);

// mu = (1 - theta p) rho_0 + theta p rho_1 with the parameters above.
std::pair<RadialMeasure, ConvolutionParams> mu_base(std::uint32_t n, std::uint32_t ell);

// Exact law of S = |supp(X)| where X ~ mu^{*t}: t coordinate picks, each a
// refresh with probability theta; S | R ~ Binomial(R, p) with R the number of
// distinct refreshed coordinates. Stable stepwise DP, O(t n).
std::vector<double> support_size_distribution(std::uint32_t n, std::uint32_t ell,
                                              std::uint64_t t, double theta);

// E[R] = n (1 - (1 - theta/n)^t); equals n/2 at the canonical parameters.
double expected_refreshed_coordinates(std::uint32_t n, std::uint64_t t, double theta);

// n^{3/2} * max_k |Binomial(n,p)(k) - gaussian(x_k)| with
// x_k = (k - np)/sqrt(np(1-p)).
double dml_error_constant(std::uint32_t n, double p);

struct IntervalSpec {
    double center;
    double halfwidth;
    std::vector<std::uint32_t> grid; // open interval intersected with {0..n}
};

IntervalSpec interval_I(std::uint32_t n, double p);
IntervalSpec interval_J(std::uint32_t n, double p);

// (1/|grid|) sum_{k in grid} rho_k
RadialMeasure rho_interval(std::uint32_t n, std::uint32_t ell, const IntervalSpec& spec);

struct PlateauReport {
    std::uint64_t t;
    double theta;
    double min_weight_on_J;   // min_{k in J} P(S = k)
    double c;                 // best c with mu^{*t} >= c rho_J, = |J| * min_weight
    std::vector<std::uint32_t> grid_J;
};
PlateauReport plateau_report(std::uint32_t n, std::uint32_t ell);
double plateau_constant(std::uint32_t n, std::uint32_t ell);

// Classwise total-variation distance between radial measures.
double tv_distance(const RadialMeasure& a, const RadialMeasure& b);

struct QuarterCheck {
    double tv_to_uniform;
    bool applicable;      // tv <= 1/4
    double min_ratio;     // min_x (nu*nu)(x) / pi(x)
    bool passed;          // applicable && min_ratio >= 1/4 (up to fp slack)
};
QuarterCheck pointwise_quarter_check(const RadialMeasure& nu);

// Monte Carlo sampler of S under mu^{*t} (t refresh steps); used by tests.
std::uint32_t sample_support_size(std::uint32_t n, std::uint32_t ell, std::uint64_t t,
                                  double theta, RngStream& rng);

} // namespace mixlab

#endif
