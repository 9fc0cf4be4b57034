#ifndef MIXLAB_PATHS_HPP
#define MIXLAB_PATHS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mixlab/forms.hpp"
#include "mixlab/graph.hpp"
#include "mixlab/measure.hpp"
#include "mixlab/rng.hpp"

namespace mixlab {

// Per-target-edge distribution over paths in the source graph; every path
// must lie in the source and connect the endpoints of its target edge.
struct PathFamily {
    Graph source;
    Graph target;
    // dists[f] = list of (path vertex sequence, probability) for target edge f
    std::vector<std::vector<std::pair<std::vector<std::uint32_t>, double>>> dists;
    std::function<std::vector<std::uint32_t>(std::uint32_t, RngStream&)> sampler; // optional
    std::string id;
};

// Per-target-generator distribution over words; letters are indices into an
// alphabet whose meaning (graph edge / group element) the validator knows.
struct WordFamily {
    std::uint32_t alphabet_size = 0;
    std::vector<std::string> letter_labels;
    std::uint32_t target_count = 0;
    std::vector<std::string> target_labels;
    std::vector<std::vector<std::pair<std::vector<std::uint32_t>, double>>> dists;
    std::function<std::vector<std::uint32_t>(std::uint32_t, RngStream&)> sampler; // optional
    std::function<bool(std::uint32_t, const std::vector<std::uint32_t>&)> validator; // optional
    std::string id;
};

struct CongestionReport {
    double kappa = 0.0;
    bool exact = true;
    std::uint64_t samples = 0;
    double std_err = 0.0;
    std::string argmax;
    std::string family_id;
};

// kappa = max_e sum_f E[|path_f| 1(path_f traverses e)], or the word
// analogue max_a sum_b E[|w_b| N(a, w_b)]. Exact enumeration while the
// family support stays within pair_budget (path,edge) pairs, stratified
// sampling with a reported standard error beyond it.
CongestionReport congestion(const PathFamily& family, std::uint64_t pair_budget = 1000000,
                            std::uint64_t samples_per_target = 2000, std::uint64_t seed = 1);
CongestionReport congestion(const WordFamily& family, std::uint64_t pair_budget = 1000000,
                            std::uint64_t samples_per_target = 2000, std::uint64_t seed = 1);

// Deterministic family routing every target edge through the BFS tree of the
// source rooted at vertex 0; kappa <= |V|^3 / 4 against any target.
PathFamily spanning_tree_family(const Graph& source, const Graph& target);

// Product routing: each product-target edge differs in one coordinate and is
// routed by the corresponding factor family within that coordinate.
// kappa = max of the factor kappas.
PathFamily product_family(const std::vector<PathFamily>& factors);

// RW path -> palindromic transposition word (tau_e1 .. tau_ek .. tau_e1) of
// length 2k-1 evaluating to the transposition of the path endpoints.
std::vector<std::uint32_t> lift_rw_word(const std::vector<std::uint32_t>& path, const Graph& g);

// Lift a whole path family to the IP level: letters are source edges,
// targets are target edges; congestion grows by at most 4.
WordFamily lift_family(const PathFamily& family);

// Word evaluation helpers.
std::vector<std::uint32_t> evaluate_transposition_word(const std::vector<std::uint32_t>& word,
                                                       const Graph& g);

// Random two-letter words over G_i u G_j with disjoint supports; evaluation
// is uniform over G_{i+j}, marginals uniform on the spheres.
WordFamily two_letter_family(std::uint32_t n, std::uint32_t ell, std::uint32_t i, std::uint32_t j,
                             std::uint64_t enumeration_budget = 1000000);
// Closed form 2 |G_{i+j}| (1 + 1_{i=j}) / min(|G_i|, |G_j|).
double two_letter_congestion_formula(std::uint32_t n, std::uint32_t ell, std::uint32_t i,
                                     std::uint32_t j);

struct HammingReductionCertificate {
    std::uint32_t ell = 0;
    std::size_t dimension = 0;
    std::vector<double> factor_kappas;
    double kappa_rw = 0.0;     // product family congestion (max of factors)
    double kappa_ip = 0.0;     // lifted word congestion
    double ell_cubed = 0.0;
    bool kappa_bound_ok = false; // kappa_ip <= ell^3
    bool psd_checked = false;
    PsdCertificate psd;        // ell^3 Q^IP_G - Q^IP_Hamming, when within cap
    bool passed = false;
    std::string to_json() const;
};
HammingReductionCertificate hamming_reduction_certificate(const std::vector<Graph>& factors,
                                                          std::uint64_t cap = kPermutationCap);

struct FinalComparisonPair {
    std::uint32_t i = 0, j = 0;
    double coef_i = 0.0, coef_j = 0.0;
    double min_eig = 0.0;
    double tol = 0.0;
    bool passed = false;
};
struct FinalComparisonCertificate {
    std::uint32_t n = 0, ell = 0;
    std::vector<FinalComparisonPair> pairs;
    double sphere_ratio_min = 0.0, sphere_ratio_max = 0.0; // |G_{i+1}|/|G_i| over J
    bool congestion_formula_ok = false;
    bool passed = false;
    std::string to_json() const;
};
FinalComparisonCertificate final_comparison_certificate(std::uint32_t n, std::uint32_t ell,
                                                        std::uint64_t cap = kPermutationCap);

struct ProofChainReport {
    std::uint32_t n = 0, ell = 0;
    std::uint64_t t = 0;
    double theta = 0.0, p = 0.0;
    double q = 0.0;      // pi-mass of the window I
    double c1 = 0.0;     // E_pi <= c1 E_rhoI
    bool c1_valid = false;
    double c2 = 0.0;     // E_rhoI <= c2 E_rhoJ
    bool c2_valid = false;
    double c3 = 0.0;     // E_rhoJ <= c3 E_mu*t
    double c4 = 0.0;     // E_mu*t <= c4 E_rho1 (theta p t)
    double two_n_cap = 0.0;
    double chain_measure = 0.0; // c1 c2 c3 c4
    double chain_graph = 0.0;   // * ell^n / (n (ell-1))
    bool has_truth = false;     // tiny instances only
    double chi_measure_true = 0.0;
    double chi_graph_true = 0.0;
    std::string to_json() const;
};
ProofChainReport proof_chain(std::uint32_t n, std::uint32_t ell,
                             std::uint64_t cap = kPermutationCap);

} // namespace mixlab

#endif
