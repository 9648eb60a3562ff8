#pragma once

// Finite SL_m(Z)-orbits of rational points on the torus (Q/Z)^m, the
// Fourier transforms of their uniform measures, and the convex fit of a
// sampled positive-definite restriction against (Lebesgue) + (orbit
// transforms). The SL_m(Z)-action factors through SL_m(Z/N) on points of
// denominator dividing N, so orbits are computed by finite BFS.

#include "slnz/common.hpp"
#include "slnz/exactmat.hpp"
#include "slnz/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <vector>

namespace slnz {

/// A point of (Q/Z)^m in lowest terms: numerators in [0, denom), with
/// gcd(gcd(numerators), denom) = 1. The origin is denom = 1, all zeros.
struct TorusPoint {
    int m = 0;
    long long denom = 1;
    std::vector<long long> num;

    static TorusPoint canonical(int m, long long denom, std::vector<long long> raw) {
        TorusPoint p;
        p.m = m;
        long long g = denom;
        for (auto& x : raw) {
            x = ((x % denom) + denom) % denom;
            g = std::gcd(g, x);
        }
        p.denom = denom / g;
        p.num.resize(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) p.num[i] = raw[i] / g;
        return p;
    }

    bool operator==(const TorusPoint& o) const {
        return m == o.m && denom == o.denom && num == o.num;
    }
    bool operator<(const TorusPoint& o) const {
        if (denom != o.denom) return denom < o.denom;
        return num < o.num;
    }
};

/// A finite orbit; every point shares the same exact denominator.
struct TorusOrbit {
    int m = 0;
    long long denom = 1;
    std::vector<TorusPoint> points;  // sorted

    std::size_t size() const { return points.size(); }
    const TorusPoint& min_point() const { return points.front(); }
};

constexpr std::size_t kDefaultTorusCap = 10'000'000;

namespace detail {

// Index <-> numerator vector over (Z/N)^m, mixed radix base N.
inline std::vector<long long> torus_unrank(uint64_t idx, int m, long long N) {
    std::vector<long long> v(m);
    for (int i = 0; i < m; ++i) {
        v[i] = static_cast<long long>(idx % static_cast<uint64_t>(N));
        idx /= static_cast<uint64_t>(N);
    }
    return v;
}

inline uint64_t torus_rank(const std::vector<long long>& v, long long N) {
    uint64_t idx = 0;
    for (auto it = v.rbegin(); it != v.rend(); ++it)
        idx = idx * static_cast<uint64_t>(N) + static_cast<uint64_t>(*it);
    return idx;
}

}  // namespace detail

/// Orbit partition of all points with denominator dividing N under the
/// SL_m(Z)-action (through SL_m(Z/N)). Orbits come back sorted by
/// (denominator, size, lexicographic minimal point).
inline std::vector<TorusOrbit> finite_orbits(int m, long long N,
                                             std::size_t cap = kDefaultTorusCap) {
    if (m < 1) throw std::invalid_argument("finite_orbits: dimension must be >= 1");
    if (N < 1) throw std::invalid_argument("finite_orbits: denominator must be >= 1");
    double total = std::pow(static_cast<double>(N), static_cast<double>(m));
    if (total > static_cast<double>(cap))
        throw cap_exceeded("finite_orbits: N^m exceeds cap");
    const uint64_t count = static_cast<uint64_t>(total + 0.5);
    // Generator actions x_i += s * x_j for the elementary images; m = 1 has
    // a trivial acting group.
    struct Action { int i, j; long long s; };
    std::vector<Action> actions;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            actions.push_back({i, j, 1});
            actions.push_back({i, j, -1});
        }
    std::vector<char> seen(count, 0);
    std::vector<TorusOrbit> orbits;
    for (uint64_t seed = 0; seed < count; ++seed) {
        if (seen[seed]) continue;
        std::vector<uint64_t> stack{seed};
        std::vector<uint64_t> members{seed};
        seen[seed] = 1;
        while (!stack.empty()) {
            uint64_t cur = stack.back();
            stack.pop_back();
            auto v = detail::torus_unrank(cur, m, N);
            for (const auto& act : actions) {
                auto w = v;
                w[act.i] = ((w[act.i] + act.s * w[act.j]) % N + N) % N;
                uint64_t r = detail::torus_rank(w, N);
                if (!seen[r]) {
                    seen[r] = 1;
                    members.push_back(r);
                    stack.push_back(r);
                }
            }
        }
        TorusOrbit orbit;
        orbit.m = m;
        orbit.points.reserve(members.size());
        for (uint64_t r : members)
            orbit.points.push_back(TorusPoint::canonical(m, N, detail::torus_unrank(r, m, N)));
        std::sort(orbit.points.begin(), orbit.points.end());
        orbit.denom = orbit.points.front().denom;
        orbits.push_back(std::move(orbit));
    }
    std::sort(orbits.begin(), orbits.end(), [](const TorusOrbit& a, const TorusOrbit& b) {
        if (a.denom != b.denom) return a.denom < b.denom;
        if (a.size() != b.size()) return a.size() < b.size();
        return a.min_point().num < b.min_point().num;
    });
    return orbits;
}

/// All orbits with exact denominator <= n_max, each listed once, in the
/// same deterministic order.
inline std::vector<TorusOrbit> orbits_up_to_denominator(int m, long long n_max,
                                                        std::size_t cap = kDefaultTorusCap) {
    std::vector<TorusOrbit> all;
    for (long long d = 1; d <= n_max; ++d) {
        for (auto& o : finite_orbits(m, d, cap))
            if (o.denom == d) all.push_back(std::move(o));
    }
    return all;
}

/// Fourier transform of the uniform orbit measure at the lattice vector v:
/// (1/|O|) * sum over orbit points of exp(2*pi*i*<point, v>).
inline Complex orbit_fourier(const TorusOrbit& o, const std::vector<long long>& v) {
    if (static_cast<int>(v.size()) != o.m)
        throw std::invalid_argument("orbit_fourier: dimension mismatch");
    const double two_pi = 2.0 * 3.14159265358979323846;
    Complex acc = 0.0;
    for (const auto& pt : o.points) {
        long long s = 0;
        for (int i = 0; i < o.m; ++i) s = (s + pt.num[i] * (v[i] % pt.denom)) % pt.denom;
        s = ((s % pt.denom) + pt.denom) % pt.denom;
        double phase = two_pi * static_cast<double>(s) / static_cast<double>(pt.denom);
        acc += Complex(std::cos(phase), std::sin(phase));
    }
    return acc / static_cast<double>(o.points.size());
}

/// Convex decomposition of sampled restriction data: coefficient of the
/// Lebesgue part (delta at v = 0 on the Fourier side) plus one coefficient
/// per finite orbit of denominator <= n_max.
struct MeasureFit {
    int m = 0;
    double t_inf = 0.0;
    std::vector<double> t;  // aligned with `orbits`
    std::vector<TorusOrbit> orbits;
    double residual = 0.0;
    long long n_max = 0;
    std::size_t iterations = 0;
    bool converged = false;
};

using SampleMap = std::map<std::vector<long long>, Complex>;

namespace detail {

/// Equality-constrained least squares refinement on the support found by
/// the projected gradient: solve the KKT system on the active columns and
/// accept only a feasible improvement.
inline bool polish_on_support(const std::vector<double>& a, std::size_t rows, std::size_t cols,
                              const std::vector<double>& b, std::vector<double>& x) {
    std::vector<std::size_t> active;
    for (std::size_t j = 0; j < cols; ++j)
        if (x[j] > 1e-10) active.push_back(j);
    if (active.empty()) return false;
    const std::size_t k = active.size();
    // KKT: [A_S^T A_S, 1; 1^T, 0] [x_S; lambda] = [A_S^T b; 1]
    std::vector<double> sys((k + 1) * (k + 2), 0.0);
    auto cell = [&](std::size_t i, std::size_t j) -> double& { return sys[i * (k + 2) + j]; };
    for (std::size_t p = 0; p < k; ++p) {
        for (std::size_t q = 0; q < k; ++q) {
            double acc = 0.0;
            for (std::size_t i = 0; i < rows; ++i)
                acc += a[i * cols + active[p]] * a[i * cols + active[q]];
            cell(p, q) = acc;
        }
        double rhs = 0.0;
        for (std::size_t i = 0; i < rows; ++i) rhs += a[i * cols + active[p]] * b[i];
        cell(p, k) = 1.0;
        cell(p, k + 1) = rhs;
        cell(k, p) = 1.0;
    }
    cell(k, k + 1) = 1.0;
    // Gaussian elimination with partial pivoting.
    const std::size_t nsys = k + 1;
    for (std::size_t col = 0; col < nsys; ++col) {
        std::size_t piv = col;
        for (std::size_t i = col + 1; i < nsys; ++i)
            if (std::abs(cell(i, col)) > std::abs(cell(piv, col))) piv = i;
        if (std::abs(cell(piv, col)) < 1e-13) return false;
        if (piv != col)
            for (std::size_t j = 0; j <= nsys; ++j) std::swap(cell(piv, j), cell(col, j));
        for (std::size_t i = 0; i < nsys; ++i) {
            if (i == col) continue;
            double f = cell(i, col) / cell(col, col);
            if (f == 0.0) continue;
            for (std::size_t j = col; j <= nsys; ++j) cell(i, j) -= f * cell(col, j);
        }
    }
    std::vector<double> xs(k);
    double sum = 0.0;
    for (std::size_t p = 0; p < k; ++p) {
        xs[p] = cell(p, k + 1) / cell(p, p);
        if (xs[p] < -1e-12) return false;
        sum += std::max(0.0, xs[p]);
    }
    if (std::abs(sum - 1.0) > 1e-9) return false;
    std::fill(x.begin(), x.end(), 0.0);
    for (std::size_t p = 0; p < k; ++p) x[active[p]] = std::max(0.0, xs[p]);
    return true;
}

}  // namespace detail

inline MeasureFit fit_restriction(const SampleMap& samples, int m, long long n_max,
                                  std::size_t cap = kDefaultTorusCap) {
    if (samples.empty()) throw std::invalid_argument("fit_restriction: empty sample set");
    std::vector<long long> zero(m, 0);
    auto it0 = samples.find(zero);
    if (it0 == samples.end())
        throw std::invalid_argument("fit_restriction: samples must include v = 0");
    if (std::abs(it0->second - Complex(1.0, 0.0)) > 1e-6)
        throw std::invalid_argument("fit_restriction: sample at v = 0 must equal 1");

    MeasureFit fit;
    fit.m = m;
    fit.n_max = n_max;
    fit.orbits = orbits_up_to_denominator(m, n_max, cap);
    const std::size_t cols = 1 + fit.orbits.size();
    const std::size_t rows = 2 * samples.size();
    std::vector<double> a(rows * cols, 0.0), b(rows, 0.0);
    std::size_t si = 0;
    for (const auto& [v, val] : samples) {
        bool is_zero = v == zero;
        a[(2 * si) * cols + 0] = is_zero ? 1.0 : 0.0;  // Lebesgue column
        for (std::size_t oi = 0; oi < fit.orbits.size(); ++oi) {
            Complex psi = orbit_fourier(fit.orbits[oi], v);
            a[(2 * si) * cols + 1 + oi] = psi.real();
            a[(2 * si + 1) * cols + 1 + oi] = psi.imag();
        }
        b[2 * si] = val.real();
        b[2 * si + 1] = val.imag();
        ++si;
    }
    SimplexLsqResult ls = simplex_least_squares(a, rows, cols, b);
    if (detail::polish_on_support(a, rows, cols, b, ls.x)) {
        double rr = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
            double acc = -b[i];
            for (std::size_t j = 0; j < cols; ++j) acc += a[i * cols + j] * ls.x[j];
            rr += acc * acc;
        }
        ls.residual = std::sqrt(rr);
    }
    fit.t_inf = ls.x[0];
    fit.t.assign(ls.x.begin() + 1, ls.x.end());
    fit.residual = ls.residual;
    fit.iterations = ls.iterations;
    fit.converged = ls.converged;
    return fit;
}

/// Spot-check of the SL-invariance of an orbit transform: psi(A v) = psi(v)
/// for random short-word A in SL_m(Z) and random lattice v.
struct InvarianceReport {
    std::size_t trials = 0;
    double max_deviation = 0.0;
};

inline InvarianceReport sl_invariance_check(const TorusOrbit& o, std::size_t trials,
                                            std::mt19937_64& rng) {
    InvarianceReport rep;
    rep.trials = trials;
    const int m = o.m;
    std::uniform_int_distribution<int> pick_len(0, 6);
    std::uniform_int_distribution<int> pick_idx(0, m - 1);
    std::uniform_int_distribution<int> pick_sign(0, 1);
    std::uniform_int_distribution<long long> pick_coord(-2 * o.denom, 2 * o.denom);
    for (std::size_t t = 0; t < trials; ++t) {
        // A = product of random e_ij^{±1} as row operations on an int matrix.
        std::vector<std::vector<long long>> mat(m, std::vector<long long>(m, 0));
        for (int i = 0; i < m; ++i) mat[i][i] = 1;
        int len = pick_len(rng);
        for (int s = 0; s < len && m >= 2; ++s) {
            int i = pick_idx(rng), j = pick_idx(rng);
            if (i == j) { --s; continue; }
            long long sign = pick_sign(rng) ? 1 : -1;
            for (int c = 0; c < m; ++c) mat[i][c] += sign * mat[j][c];
        }
        std::vector<long long> v(m), av(m, 0);
        for (int i = 0; i < m; ++i) v[i] = pick_coord(rng);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) av[i] += mat[i][j] * v[j];
        double dev = std::abs(orbit_fourier(o, av) - orbit_fourier(o, v));
        rep.max_deviation = std::max(rep.max_deviation, dev);
    }
    return rep;
}

}  // namespace slnz
