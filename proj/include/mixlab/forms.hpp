#ifndef MIXLAB_FORMS_HPP
#define MIXLAB_FORMS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mixlab/graph.hpp"
#include "mixlab/measure.hpp"
#include "mixlab/spectra.hpp"

namespace mixlab {

enum class StateKind { Vertices, Subsets, Permutations };

// Enumerated state space with index<->state codecs: vertices as-is, k-subsets
// via combinadics, permutations via Lehmer ranking (m <= 8).
class StateSpace {
public:
    static StateSpace vertices(std::uint32_t count);
    static StateSpace subsets(std::uint32_t count, std::uint32_t k, std::uint64_t cap = kSubsetCap);
    static StateSpace permutations(std::uint32_t m, std::uint64_t cap = kPermutationCap);

    StateKind kind() const { return kind_; }
    std::uint64_t size() const { return size_; }
    std::uint32_t ground_count() const { return count_; } // |V| or m
    std::uint32_t subset_k() const { return k_; }
    std::string label() const;

    // permutation codecs (images array of length m)
    std::uint64_t rank_permutation(const std::vector<std::uint32_t>& images) const;
    std::vector<std::uint32_t> unrank_permutation(std::uint64_t idx) const;

    // subset codecs (sorted element list of length k)
    std::uint64_t rank_subset(const std::vector<std::uint32_t>& sorted_elems) const;
    std::vector<std::uint32_t> unrank_subset(std::uint64_t idx) const;

private:
    StateKind kind_ = StateKind::Vertices;
    std::uint64_t size_ = 0;
    std::uint32_t count_ = 0;
    std::uint32_t k_ = 0;
};

// Dirichlet form E(f) = norm * sum_{pairs} rate(s,s') (f(s') - f(s))^2 over an
// enumerated state space. The norm prefactor (1/(2 size) style constants) is
// metadata: spectral quantities use the rate operator, and comparison
// constants cancel it explicitly.
struct QuadraticForm {
    StateSpace space;
    SparseLaplacian op;   // op.dim == space.size(); weights = rates
    double norm = 1.0;    // recorded prefactor
    std::string label;

    double value(const std::vector<double>& f) const; // norm * f^T L f
};

QuadraticForm rw_form(const Graph& g);
QuadraticForm ip_form(const Graph& g, std::uint64_t cap = kPermutationCap);
QuadraticForm ex_form(const Graph& g, std::uint32_t k, std::uint64_t cap = kSubsetCap);

// IP on S(Z_ell^n) driven by a radial increment measure: the unordered pair
// {x, x+z} accumulates mu(z) from both ordered representations (rate
// 2 mu(z) for z != 0 by symmetry).
QuadraticForm ip_form_from_measure(const RadialMeasure& mu, std::uint64_t cap = kPermutationCap);

// c * Q (rates scaled, same space / norm metadata).
QuadraticForm scale_form(const QuadraticForm& q, double c);

struct SpectralReport {
    double gap = 0.0;
    double trel = 0.0;
    std::string method;
    double residual = 0.0;
    int iterations = 0;
    bool connected = true;
    std::string to_json() const;
};
SpectralReport spectral_gap(const QuadraticForm& q, std::uint64_t dense_cap = kDenseCap);

struct ComparisonReport {
    double chi = 0.0; // includes the norm ratio of the two forms
    double lambda_max = 0.0;
    std::string method;
    double residual = 0.0;
    int iterations = 0;
    bool denominator_connected = true;
    double random_probe_max = 0.0; // cross-check: max ratio over random functions
    std::string to_json() const;
};
ComparisonReport comparison_constant(const QuadraticForm& num, const QuadraticForm& den,
                                     std::uint64_t dense_cap = kDenseCap);

struct PsdCertificate {
    std::string lemma_id;
    std::string state_space;
    std::uint64_t size = 0;
    double constant_c = 1.0;
    double min_eig = 0.0;
    double tol = 0.0;
    double scale = 0.0;
    std::string method;
    bool passed = false;
    std::string to_json() const;
};

// Certifies c * Q_b - Q_a >= -slack_rel * scale on the complement of
// constants (both forms on the same space, rate-level comparison).
PsdCertificate psd_dominates(const QuadraticForm& q_a, const QuadraticForm& q_b, double c,
                             double slack_rel = 1e-8, std::uint64_t dense_cap = kDenseCap);

struct AldousReport {
    double gap_ip = 0.0;
    double gap_rw = 0.0;
    double difference = 0.0;
    bool passed = false;
};
AldousReport aldous_check(const Graph& g, std::uint64_t cap = kPermutationCap);

struct LumpingReport {
    bool exact = false;
    std::uint64_t states_checked = 0;
    double max_discrepancy = 0.0;
};
// Verifies that the IP generator lumps exactly to the EX generator under
// sigma -> sigma^{-1}(S).
LumpingReport lumping_check(const Graph& g, std::uint32_t k, std::uint64_t cap = kPermutationCap);

} // namespace mixlab

#endif
