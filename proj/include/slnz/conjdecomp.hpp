#pragma once

// Constructive conjugation decomposition: every gamma in SL_n(Z), n >= 3,
// is conjugate to a product g1*g2*g3 with g1 in G_1^t (first column ±e_1),
// g2 in G_n (last row ±e_n) and g3 in V_1; for n >= 4 a two-factor form
// g1*g2 in G_1^t * G_n exists. Witnesses carry the conjugator and all
// intermediate data and are verified exactly before they are returned.

#include "slnz/exactmat.hpp"
#include "slnz/subgroups.hpp"

#include <utility>

namespace slnz {

struct BrennerReduction {
    SLMatrix conjugator;  // product of s-matrices and e_ij, 2 <= i != j <= n
    SLMatrix reduced;     // first column (k, 0, l, 0, ..., 0)^t
};

/// Conjugates gamma so that its first column becomes (k, 0, l, 0, ..., 0)^t.
/// Conjugation by matrices of block shape 1 ⊕ A acts on rows 2..n of the
/// first column as SL_{n-1}(Z) row operations; a Euclidean gcd reduction
/// clears every entry except row 3.
inline BrennerReduction brenner_reduce(const SLMatrix& gamma) {
    int n = gamma.dim();
    if (n < 3) throw std::invalid_argument("brenner_reduce: requires n >= 3");
    SLMatrix c = SLMatrix::identity(n);
    SLMatrix cur = gamma;
    auto conjugate_by = [&](const SLMatrix& t) {
        cur = t * cur * t.inverse();
        c = t * c;
    };
    auto nonzero_rows = [&]() {
        std::vector<int> rows;  // 1-based rows in 2..n with cur(row, 1) != 0
        for (int r = 2; r <= n; ++r)
            if (cur(r - 1, 0) != 0) rows.push_back(r);
        return rows;
    };
    // Euclid on the subcolumn: repeatedly reduce every other entry by the
    // minimal one until at most one survives.
    for (;;) {
        auto rows = nonzero_rows();
        if (rows.size() <= 1) break;
        int pivot = rows[0];
        for (int r : rows)
            if (abs(cur(r - 1, 0)) < abs(cur(pivot - 1, 0))) pivot = r;
        const BigInt pv = cur(pivot - 1, 0);
        for (int r : rows) {
            if (r == pivot) continue;
            BigInt mult = -(cur(r - 1, 0) / pv);  // truncated: |remainder| < |pv|
            if (mult != 0) conjugate_by(elementary(n, r, pivot, mult));
        }
    }
    auto rows = nonzero_rows();
    if (rows.size() == 1 && rows[0] != 3) conjugate_by(s_matrix(n, 3, rows[0]));
    return {std::move(c), std::move(cur)};
}

struct DecompositionWitness {
    SLMatrix conjugator;           // c with c*gamma*c^{-1} = g1*g2*g3
    SLMatrix g1, g2, g3;
    BigInt k, l, p, q;             // pk + ql = 1
    SLMatrix step1, step2, step3;  // the three column-clearing matrices
};

struct TwoFactorWitness {
    SLMatrix conjugator;  // c with c*gamma*c^{-1} = g1*g2
    SLMatrix g1, g2;
    BigInt k, l, p, q;
};

namespace detail {

/// Coefficients p, q with p*k + q*l = 1, |p| minimal (ties -> p > 0).
/// Requires gcd(k, l) = 1.
inline std::pair<BigInt, BigInt> bezout_min_p(const BigInt& k, const BigInt& l) {
    if (l == 0) {
        if (k != 1 && k != -1) throw std::invalid_argument("bezout_min_p: gcd != 1");
        return {k, 0};
    }
    // Extended Euclid.
    BigInt r0 = k, r1 = l, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (r1 != 0) {
        BigInt qq = r0 / r1;
        BigInt r2 = r0 - qq * r1;
        BigInt s2 = s0 - qq * s1;
        BigInt t2 = t0 - qq * t1;
        r0 = r1; r1 = r2;
        s0 = s1; s1 = s2;
        t0 = t1; t1 = t2;
    }
    BigInt g = r0, p = s0, q = t0;
    if (g == -1) { g = 1; p = -p; q = -q; }
    if (g != 1) throw std::invalid_argument("bezout_min_p: gcd != 1");
    // General solution (p + t*l, q - t*k); slide |p| to its minimum.
    BigInt t_near = -p / l;  // truncated; test neighbours for the true min
    BigInt best_p = p + t_near * l, best_q = q - t_near * k;
    for (int dt = -1; dt <= 1; ++dt) {
        BigInt tt = t_near + dt;
        BigInt cp = p + tt * l, cq = q - tt * k;
        if (abs(cp) < abs(best_p) || (abs(cp) == abs(best_p) && cp > best_p)) {
            best_p = cp;
            best_q = cq;
        }
    }
    return {best_p, best_q};
}

struct Steps {
    SLMatrix reduced, brenner_c, step1, step2, step3, g1;
    BigInt k, l, p, q;
};

inline Steps column_clearing_steps(const SLMatrix& gamma) {
    int n = gamma.dim();
    if (n < 3) throw std::invalid_argument("decompose: requires n >= 3");
    BrennerReduction br = brenner_reduce(gamma);
    const SLMatrix& red = br.reduced;
    BigInt k = red(0, 0);
    BigInt l = red(2, 0);
    auto [p, q] = bezout_min_p(k, l);
    // step1 (in G_n): row 2 = (p, 1, q, 0, ...); makes the (2,1) entry 1.
    IntMatrix s1 = IntMatrix::identity(n);
    s1(1, 0) = p;
    s1(1, 2) = q;
    // step2 (in G_1^t ∩ G_n): clears the (1,1) entry down to 1.
    IntMatrix s2 = IntMatrix::identity(n);
    s2(0, 1) = 1 - k;
    // step3 (in V_1): clears rows 2 and 3 of the first column.
    IntMatrix s3 = IntMatrix::identity(n);
    s3(1, 0) = -1;
    s3(2, 0) = -l;
    SLMatrix step1{std::move(s1)}, step2{std::move(s2)}, step3{std::move(s3)};
    SLMatrix g1 = step3 * step2 * step1 * red;
    // g1's first column must now be exactly e_1.
    for (int r = 0; r < n; ++r)
        if (g1(r, 0) != (r == 0 ? 1 : 0))
            throw std::logic_error("decompose: column clearing failed");
    return {red, br.conjugator, std::move(step1), std::move(step2), std::move(step3),
            std::move(g1), std::move(k), std::move(l), std::move(p), std::move(q)};
}

}  // namespace detail

/// Three-factor witness; throws std::logic_error if the exact identity or
/// any pattern membership fails to verify (an internal bug, never silent).
inline DecompositionWitness decompose(const SLMatrix& gamma) {
    auto st = detail::column_clearing_steps(gamma);
    SLMatrix g2 = st.step1.inverse() * st.step2.inverse();
    SLMatrix g3 = st.step3.inverse();
    SLMatrix c = st.g1 * st.brenner_c;
    int n = gamma.dim();
    if (c * gamma * c.inverse() != st.g1 * g2 * g3)
        throw std::logic_error("decompose: witness identity failed");
    if (!is_in_normalizer(st.g1, CopySpec::row(1)) ||
        !is_in_normalizer(g2, CopySpec::column(n)) ||
        !is_in_copy(g3, CopySpec::column(1)))
        throw std::logic_error("decompose: factor pattern failed");
    return {std::move(c), std::move(st.g1), std::move(g2), std::move(g3),
            std::move(st.k), std::move(st.l), std::move(st.p), std::move(st.q),
            std::move(st.step1), std::move(st.step2), std::move(st.step3)};
}

/// Two-factor witness, valid for n >= 4 where the fourth-step matrix also
/// has ±e_n as last row.
inline TwoFactorWitness decompose_two_factor(const SLMatrix& gamma) {
    if (gamma.dim() <= 3)
        throw std::invalid_argument("decompose_two_factor: requires n >= 4");
    auto st = detail::column_clearing_steps(gamma);
    SLMatrix g2 = st.step1.inverse() * st.step2.inverse() * st.step3.inverse();
    SLMatrix c = st.g1 * st.brenner_c;
    int n = gamma.dim();
    if (c * gamma * c.inverse() != st.g1 * g2)
        throw std::logic_error("decompose_two_factor: witness identity failed");
    if (!is_in_normalizer(st.g1, CopySpec::row(1)) ||
        !is_in_normalizer(g2, CopySpec::column(n)))
        throw std::logic_error("decompose_two_factor: factor pattern failed");
    return {std::move(c), std::move(st.g1), std::move(g2),
            std::move(st.k), std::move(st.l), std::move(st.p), std::move(st.q)};
}

struct AlphaBetaSplit {
    SLMatrix alpha;  // in V_1 ∩ G_n, single entry k*a_n at (2,1)
    SLMatrix beta;   // the original V_1 element
};

/// Splits the conjugate of a V_1 element by the k-th power of e_{2,n} as
/// alpha_k * beta: alpha_k carries the shifted (2,1) entry k*a_n, beta the
/// original column. Verifies alpha_k * beta = x^k * g3 * x^{-k} exactly,
/// x = e_{2,n}.
inline AlphaBetaSplit alpha_beta_split(const SLMatrix& g3, const BigInt& k) {
    int n = g3.dim();
    if (!is_in_copy(g3, CopySpec::column(1)))
        throw std::invalid_argument("alpha_beta_split: input must lie in V_1");
    const BigInt& a_n = g3(n - 1, 0);
    IntMatrix am = IntMatrix::identity(n);
    am(1, 0) = k * a_n;
    SLMatrix alpha{std::move(am)};
    SLMatrix lhs = elementary(n, 2, n, k) * g3 * elementary(n, 2, n, -k);
    if (alpha * g3 != lhs)
        throw std::logic_error("alpha_beta_split: identity failed");
    return {std::move(alpha), g3};
}

}  // namespace slnz
