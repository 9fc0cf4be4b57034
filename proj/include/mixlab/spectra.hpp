#ifndef MIXLAB_SPECTRA_HPP
#define MIXLAB_SPECTRA_HPP

#include <cstdint>
#include <string_view>
#include <tuple>
#include <vector>

namespace mixlab {

// Symmetric operator of the form L = sum_p w_p (e_u - e_v)(e_u - e_v)^T.
// Every Dirichlet-form generator handled here is of this shape, as is any
// signed combination of them (certificate differences). Constants are
// annihilated structurally.
struct SparseLaplacian {
    std::uint32_t dim = 0;
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> pairs; // u < v, weight

    void apply(const double* x, double* y) const;
    double max_diag() const;
    double gershgorin_upper() const; // upper bound on the largest eigenvalue
    bool pair_graph_connected() const;
};

// All eigenvalues, ascending (dense path).
std::vector<double> dense_spectrum(const SparseLaplacian& L);

struct ExtremeEig {
    double value = 0.0;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Extreme eigenvalue of L restricted to the orthocomplement of constants.
// Restarted Lanczos with full reorthogonalization.
ExtremeEig lanczos_extreme(const SparseLaplacian& L, bool largest, double tol = 1e-9,
                           int block = 120, int max_restarts = 40);

// Smallest eigenvalue on the orthocomplement of constants; dense below the
// cut-over, Lanczos above.
ExtremeEig min_eig_on_complement(const SparseLaplacian& L, std::uint64_t dense_cap);

// Smallest nonzero eigenvalue of a connected PSD Laplacian (spectral gap).
ExtremeEig second_eigenvalue(const SparseLaplacian& L, std::uint64_t dense_cap);

struct PencilResult {
    double lambda_max = 0.0;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
    bool denominator_connected = true;
    std::string_view method() const { return iterations < 0 ? "dense" : "iterative"; }
};

// Largest generalized eigenvalue of (A, B) on the orthocomplement of
// constants; B must be connected (kernel exactly the constants). Dense
// reduction below the cap, B-inner-product Lanczos with CG solves above.
PencilResult pencil_lambda_max(const SparseLaplacian& A, const SparseLaplacian& B,
                               std::uint64_t dense_cap, double tol = 1e-8);

} // namespace mixlab

#endif
