#pragma once

// Small dense numerics used by the torus fitter and the Gram certification:
// a cyclic Jacobi eigensolver for real symmetric matrices, the Euclidean
// projection onto the probability simplex, and a projected-gradient least
// squares solver over the simplex.

#include "slnz/common.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace slnz {

/// Eigenvalues of a real symmetric matrix (row-major, dim x dim) by cyclic
/// Jacobi rotations. Returns them sorted ascending.
inline std::vector<double> jacobi_eigenvalues(std::vector<double> a, std::size_t dim,
                                              int max_sweeps = 64, double tol = 1e-14) {
    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * dim + j]; };
    double scale = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) scale = std::max(scale, std::abs(at(i, j)));
    if (scale == 0.0) return std::vector<double>(dim, 0.0);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = i + 1; j < dim; ++j) off += at(i, j) * at(i, j);
        if (std::sqrt(off) <= tol * scale * dim) break;
        for (std::size_t p = 0; p < dim; ++p) {
            for (std::size_t q = p + 1; q < dim; ++q) {
                double apq = at(p, q);
                if (std::abs(apq) <= tol * scale) continue;
                double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (std::size_t k = 0; k < dim; ++k) {
                    double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < dim; ++k) {
                    double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(dim);
    for (std::size_t i = 0; i < dim; ++i) ev[i] = at(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

/// Eigenvalues of a Hermitian matrix via the real symmetric embedding
/// [[Re, -Im], [Im, Re]]; each eigenvalue of the complex matrix appears
/// twice, so the sorted half-spectrum is returned.
inline std::vector<double> hermitian_eigenvalues(const std::vector<Complex>& h, std::size_t dim) {
    std::size_t d2 = 2 * dim;
    std::vector<double> a(d2 * d2, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            double re = h[i * dim + j].real(), im = h[i * dim + j].imag();
            a[i * d2 + j] = re;
            a[(i + dim) * d2 + (j + dim)] = re;
            a[i * d2 + (j + dim)] = -im;
            a[(i + dim) * d2 + j] = im;
        }
    }
    std::vector<double> ev = jacobi_eigenvalues(std::move(a), d2);
    std::vector<double> half(dim);
    for (std::size_t i = 0; i < dim; ++i) half[i] = ev[2 * i];
    return half;
}

/// Euclidean projection onto { x >= 0, sum x = 1 }.
inline void project_to_simplex(std::vector<double>& x) {
    std::vector<double> u = x;
    std::sort(u.begin(), u.end(), std::greater<>());
    double css = 0.0, theta = 0.0;
    std::size_t rho = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        css += u[i];
        double t = (css - 1.0) / static_cast<double>(i + 1);
        if (u[i] - t > 0) {
            rho = i + 1;
            theta = t;
        }
    }
    (void)rho;
    for (auto& v : x) v = std::max(0.0, v - theta);
}

struct SimplexLsqResult {
    std::vector<double> x;
    double residual = 0.0;  // ||A x - b||_2
    std::size_t iterations = 0;
    bool converged = false;
};

/// min ||A x - b||_2 over the probability simplex, by projected gradient
/// with a Lipschitz step. A is rows x cols row-major.
inline SimplexLsqResult simplex_least_squares(const std::vector<double>& a, std::size_t rows,
                                              std::size_t cols, const std::vector<double>& b,
                                              double tol = 1e-12, std::size_t max_iter = 100'000) {
    auto mat_vec = [&](const std::vector<double>& x, std::vector<double>& out) {
        out.assign(rows, 0.0);
        for (std::size_t i = 0; i < rows; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < cols; ++j) acc += a[i * cols + j] * x[j];
            out[i] = acc;
        }
    };
    auto mat_tvec = [&](const std::vector<double>& y, std::vector<double>& out) {
        out.assign(cols, 0.0);
        for (std::size_t i = 0; i < rows; ++i) {
            double yi = y[i];
            if (yi == 0.0) continue;
            for (std::size_t j = 0; j < cols; ++j) out[j] += a[i * cols + j] * yi;
        }
    };
    // Lipschitz constant of the gradient: largest eigenvalue of A^T A,
    // estimated by power iteration from a deterministic start.
    double lip = 0.0;
    {
        std::vector<double> v(cols, 1.0 / std::sqrt(static_cast<double>(cols))), av, atav;
        for (int it = 0; it < 80; ++it) {
            mat_vec(v, av);
            mat_tvec(av, atav);
            double norm = 0.0;
            for (double t : atav) norm += t * t;
            norm = std::sqrt(norm);
            if (norm == 0.0) break;
            lip = norm;
            for (std::size_t j = 0; j < cols; ++j) v[j] = atav[j] / norm;
        }
        if (lip == 0.0) lip = 1.0;
        lip *= 1.01;
    }
    SimplexLsqResult res;
    res.x.assign(cols, 1.0 / static_cast<double>(cols));
    std::vector<double> ax, grad, next;
    for (std::size_t it = 0; it < max_iter; ++it) {
        mat_vec(res.x, ax);
        for (std::size_t i = 0; i < rows; ++i) ax[i] -= b[i];
        mat_tvec(ax, grad);
        next = res.x;
        for (std::size_t j = 0; j < cols; ++j) next[j] -= grad[j] / lip;
        project_to_simplex(next);
        double delta = 0.0;
        for (std::size_t j = 0; j < cols; ++j) delta = std::max(delta, std::abs(next[j] - res.x[j]));
        res.x = next;
        res.iterations = it + 1;
        if (delta < tol) {
            res.converged = true;
            break;
        }
    }
    mat_vec(res.x, ax);
    double rr = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
        double d = ax[i] - b[i];
        rr += d * d;
    }
    res.residual = std::sqrt(rr);
    return res;
}

}  // namespace slnz
