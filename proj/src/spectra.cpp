#include "mixlab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace mixlab {

void SparseLaplacian::apply(const double* x, double* y) const {
    for (std::uint32_t i = 0; i < dim; ++i) y[i] = 0.0;
    for (const auto& [u, v, w] : pairs) {
        double d = w * (x[u] - x[v]);
        y[u] += d;
        y[v] -= d;
    }
}

double SparseLaplacian::max_diag() const {
    std::vector<double> diag(dim, 0.0);
    for (const auto& [u, v, w] : pairs) {
        diag[u] += w;
        diag[v] += w;
    }
    double m = 0.0;
    for (double d : diag) m = std::max(m, std::abs(d));
    return m;
}

double SparseLaplacian::gershgorin_upper() const {
    std::vector<double> diag(dim, 0.0), off(dim, 0.0);
    for (const auto& [u, v, w] : pairs) {
        diag[u] += w;
        diag[v] += w;
        off[u] += std::abs(w);
        off[v] += std::abs(w);
    }
    double m = 0.0;
    for (std::uint32_t i = 0; i < dim; ++i) m = std::max(m, diag[i] + off[i]);
    return m;
}

bool SparseLaplacian::pair_graph_connected() const {
    if (dim == 0) return false;
    std::vector<std::vector<std::uint32_t>> adj(dim);
    for (const auto& [u, v, w] : pairs) {
        if (w == 0.0) continue;
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::vector<char> seen(dim, 0);
    std::vector<std::uint32_t> stack{0};
    seen[0] = 1;
    std::uint32_t count = 1;
    while (!stack.empty()) {
        auto a = stack.back();
        stack.pop_back();
        for (auto b : adj[a])
            if (!seen[b]) {
                seen[b] = 1;
                ++count;
                stack.push_back(b);
            }
    }
    return count == dim;
}

namespace {

Eigen::MatrixXd dense_matrix(const SparseLaplacian& L) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(L.dim, L.dim);
    for (const auto& [u, v, w] : L.pairs) {
        M(u, u) += w;
        M(v, v) += w;
        M(u, v) -= w;
        M(v, u) -= w;
    }
    return M;
}

void project_out_constants(std::vector<double>& x) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= double(x.size());
    for (double& v : x) v -= mean;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

// Deterministic pseudo-random start vector, orthogonal to constants.
std::vector<double> start_vector(std::uint32_t dim) {
    std::vector<double> v(dim);
    std::uint64_t s = 0x243f6a8885a308d3ULL;
    for (auto& x : v) {
        s += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z ^= z >> 31;
        x = double(z >> 11) * 0x1.0p-53 - 0.5;
    }
    project_out_constants(v);
    double n = norm2(v);
    for (auto& x : v) x /= n;
    return v;
}

struct TridiagEig {
    double value;
    Eigen::VectorXd vec;
};

TridiagEig tridiag_extreme(const std::vector<double>& alpha, const std::vector<double>& beta,
                           bool largest) {
    const int m = int(alpha.size());
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        T(i, i) = alpha[i];
        if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    int idx = largest ? m - 1 : 0;
    return {es.eigenvalues()[idx], es.eigenvectors().col(idx)};
}

} // namespace

std::vector<double> dense_spectrum(const SparseLaplacian& L) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_matrix(L), Eigen::EigenvaluesOnly);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + L.dim);
    std::sort(ev.begin(), ev.end());
    return ev;
}

ExtremeEig lanczos_extreme(const SparseLaplacian& L, bool largest, double tol, int block,
                           int max_restarts) {
    const std::uint32_t dim = L.dim;
    ExtremeEig out;
    if (dim <= 1) {
        out.converged = true;
        return out;
    }
    const double scale = std::max(L.max_diag(), 1e-300);
    std::vector<double> v = start_vector(dim);
    int total_iters = 0;
    for (int restart = 0; restart < max_restarts; ++restart) {
        std::vector<std::vector<double>> V;
        std::vector<double> alpha, beta;
        std::vector<double> w(dim), z(dim);
        V.push_back(v);
        for (int j = 0; j < block; ++j) {
            ++total_iters;
            L.apply(V[j].data(), w.data());
            double a = dot(w, V[j]);
            alpha.push_back(a);
            for (std::uint32_t i = 0; i < dim; ++i)
                w[i] -= a * V[j][i] + (j > 0 ? beta[j - 1] * V[j - 1][i] : 0.0);
            project_out_constants(w);
            for (const auto& q : V) { // full reorthogonalization
                double c = dot(w, q);
                for (std::uint32_t i = 0; i < dim; ++i) w[i] -= c * q[i];
            }
            double b = norm2(w);
            if (b < 1e-13 * scale) { // invariant subspace found
                auto ritz = tridiag_extreme(alpha, beta, largest);
                out.value = ritz.value;
                out.residual = 0.0;
                out.iterations = total_iters;
                out.converged = true;
                return out;
            }
            beta.push_back(b);
            for (auto& x : w) x /= b;
            V.push_back(w);
        }
        auto ritz = tridiag_extreme(alpha, beta, largest);
        // residual estimate: |beta_m * last component of Ritz eigenvector|
        double resid = std::abs(beta.back() * ritz.vec[int(alpha.size()) - 1]);
        out.value = ritz.value;
        out.residual = resid;
        out.iterations = total_iters;
        if (resid <= tol * scale) {
            out.converged = true;
            return out;
        }
        // restart from the Ritz vector
        std::vector<double> next(dim, 0.0);
        for (std::size_t j = 0; j < alpha.size(); ++j)
            for (std::uint32_t i = 0; i < dim; ++i) next[i] += ritz.vec[int(j)] * V[j][i];
        project_out_constants(next);
        double n2 = norm2(next);
        if (n2 < 1e-300) next = start_vector(dim);
        else
            for (auto& x : next) x /= n2;
        v = std::move(next);
    }
    return out; // converged = false, best estimate reported
}

ExtremeEig min_eig_on_complement(const SparseLaplacian& L, std::uint64_t dense_cap) {
    ExtremeEig out;
    if (L.dim <= 1) {
        out.converged = true;
        return out;
    }
    if (L.dim <= dense_cap) {
        auto ev = dense_spectrum(L);
        // constants contribute one structural zero; anything smaller lives on
        // the orthocomplement
        double scale = std::max(L.max_diag(), 1.0);
        out.value = ev[0] < -1e-12 * scale ? ev[0] : ev[1];
        out.residual = 1e-14 * scale;
        out.iterations = -1;
        out.converged = true;
        return out;
    }
    return lanczos_extreme(L, /*largest=*/false, 1e-9);
}

ExtremeEig second_eigenvalue(const SparseLaplacian& L, std::uint64_t dense_cap) {
    return min_eig_on_complement(L, dense_cap);
}

namespace {

// CG for B u = rhs on the orthocomplement of constants (B PSD, connected).
int conjugate_gradient(const SparseLaplacian& B, const std::vector<double>& rhs,
                       std::vector<double>& u, double tol, int max_iter) {
    const std::uint32_t dim = B.dim;
    std::vector<double> r = rhs, p, Ap(dim);
    project_out_constants(r);
    std::fill(u.begin(), u.end(), 0.0);
    p = r;
    double rr = dot(r, r);
    const double rhs_norm = std::sqrt(std::max(rr, 1e-300));
    int it = 0;
    for (; it < max_iter; ++it) {
        if (std::sqrt(rr) <= tol * rhs_norm) break;
        B.apply(p.data(), Ap.data());
        project_out_constants(Ap);
        double alpha = rr / dot(p, Ap);
        for (std::uint32_t i = 0; i < dim; ++i) {
            u[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        double rr2 = dot(r, r);
        double beta = rr2 / rr;
        rr = rr2;
        for (std::uint32_t i = 0; i < dim; ++i) p[i] = r[i] + beta * p[i];
    }
    project_out_constants(u);
    return it;
}

PencilResult pencil_dense(const SparseLaplacian& A, const SparseLaplacian& B) {
    const int m = int(A.dim);
    Eigen::MatrixXd Ad = dense_matrix(A), Bd = dense_matrix(B);
    // orthonormal basis of the complement of constants
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(m);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(ones);
    Eigen::MatrixXd Q = qr.householderQ();
    Eigen::MatrixXd U = Q.rightCols(m - 1);
    Eigen::MatrixXd At = U.transpose() * Ad * U;
    Eigen::MatrixXd Bt = U.transpose() * Bd * U;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(At, Bt, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
    PencilResult out;
    out.lambda_max = es.eigenvalues().maxCoeff();
    out.residual = 1e-14;
    out.iterations = -1;
    out.converged = true;
    return out;
}

} // namespace

PencilResult pencil_lambda_max(const SparseLaplacian& A, const SparseLaplacian& B,
                               std::uint64_t dense_cap, double tol) {
    if (A.dim != B.dim) throw std::invalid_argument("pencil: dimension mismatch");
    PencilResult out;
    if (!B.pair_graph_connected()) {
        out.denominator_connected = false;
        out.lambda_max = INFINITY;
        return out;
    }
    if (A.dim <= 2) {
        // one-dimensional complement: ratio of the two quadratic forms
        std::vector<double> x(A.dim, 0.0), ya(A.dim), yb(A.dim);
        x[0] = 0.5;
        if (A.dim == 2) x[1] = -0.5;
        A.apply(x.data(), ya.data());
        B.apply(x.data(), yb.data());
        out.lambda_max = dot(ya, x) / dot(yb, x);
        out.converged = true;
        out.iterations = -1;
        return out;
    }
    if (A.dim <= dense_cap) return pencil_dense(A, B);

    // B-inner-product Lanczos on B^{-1} A restricted to the complement of
    // constants; CG inner solves.
    const std::uint32_t dim = A.dim;
    const double bscale = std::max(B.max_diag(), 1e-300);
    const int block = 110, max_restarts = 30, cg_max = 4000;
    std::vector<double> v = start_vector(dim);
    {
        std::vector<double> bv(dim);
        B.apply(v.data(), bv.data());
        double bn = std::sqrt(std::max(dot(v, bv), 1e-300));
        for (auto& x : v) x /= bn;
    }
    int total = 0;
    for (int restart = 0; restart < max_restarts; ++restart) {
        std::vector<std::vector<double>> V;
        std::vector<double> alpha, beta;
        V.push_back(v);
        std::vector<double> av(dim), w(dim), bw(dim);
        for (int j = 0; j < block; ++j) {
            ++total;
            A.apply(V[j].data(), av.data());
            conjugate_gradient(B, av, w, 1e-12, cg_max);
            double a = dot(av, V[j]); // alpha = v^T A v
            alpha.push_back(a);
            for (std::uint32_t i = 0; i < dim; ++i)
                w[i] -= a * V[j][i] + (j > 0 ? beta[j - 1] * V[j - 1][i] : 0.0);
            project_out_constants(w);
            // full B-reorthogonalization
            B.apply(w.data(), bw.data());
            for (const auto& q : V) {
                double c = dot(bw, q);
                for (std::uint32_t i = 0; i < dim; ++i) w[i] -= c * q[i];
            }
            B.apply(w.data(), bw.data());
            double b = std::sqrt(std::max(dot(w, bw), 0.0));
            if (b < 1e-13 * bscale) {
                auto ritz = tridiag_extreme(alpha, beta, true);
                out.lambda_max = ritz.value;
                out.residual = 0.0;
                out.iterations = total;
                out.converged = true;
                return out;
            }
            beta.push_back(b);
            for (auto& x : w) x /= b;
            V.push_back(w);
        }
        auto ritz = tridiag_extreme(alpha, beta, true);
        // explicit residual ||A y - lambda B y|| / ||A y|| on the Ritz vector
        std::vector<double> y(dim, 0.0);
        for (std::size_t j = 0; j < alpha.size(); ++j)
            for (std::uint32_t i = 0; i < dim; ++i) y[i] += ritz.vec[int(j)] * V[j][i];
        std::vector<double> ay(dim), by(dim);
        A.apply(y.data(), ay.data());
        B.apply(y.data(), by.data());
        double num = 0.0, den = 0.0;
        for (std::uint32_t i = 0; i < dim; ++i) {
            double r = ay[i] - ritz.value * by[i];
            num += r * r;
            den += ay[i] * ay[i];
        }
        out.lambda_max = ritz.value;
        out.residual = std::sqrt(num / std::max(den, 1e-300));
        out.iterations = total;
        if (out.residual <= tol) {
            out.converged = true;
            return out;
        }
        project_out_constants(y);
        std::vector<double> byy(dim);
        B.apply(y.data(), byy.data());
        double bn = std::sqrt(std::max(dot(y, byy), 1e-300));
        for (auto& x : y) x /= bn;
        v = std::move(y);
    }
    return out;
}

} // namespace mixlab
