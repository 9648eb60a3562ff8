#pragma once

// Distinguished subgroups of SL_n(Z): the copies of Z^{n-1} sitting in a
// fixed column (V_j) or row (V_i^t), their normalizers G_j / G_i^t, the
// centralizer pattern of elementary powers, word-length balls over the
// elementary generators, and the block-diagonal SL_2 x SL_2 embedding.

#include "slnz/exactmat.hpp"

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

namespace slnz {

/// A copy of Z^{n-1}: column-type V_j (generated by e_ij, i != j) or
/// row-type V_i^t (generated by e_ij, j != i). Index is 1-based.
struct CopySpec {
    enum class Kind { Column, Row };
    Kind kind;
    int index;

    static CopySpec column(int j) { return {Kind::Column, j}; }
    static CopySpec row(int i) { return {Kind::Row, i}; }

    bool operator==(const CopySpec& o) const { return kind == o.kind && index == o.index; }

    std::string name() const {
        return (kind == Kind::Column ? "V_" + std::to_string(index)
                                     : "V_" + std::to_string(index) + "^t");
    }

    /// The n-1 elementary generators of the copy, as 1-based (i, j) pairs.
    std::vector<std::pair<int, int>> generators(int n) const {
        if (index < 1 || index > n) throw std::invalid_argument("CopySpec: index out of range");
        std::vector<std::pair<int, int>> g;
        for (int k = 1; k <= n; ++k) {
            if (k == index) continue;
            if (kind == Kind::Column)
                g.emplace_back(k, index);
            else
                g.emplace_back(index, k);
        }
        return g;
    }
};

/// True iff m has unit diagonal and its off-diagonal support lies in
/// column j (column copies) resp. row i (row copies).
inline bool is_in_copy(const SLMatrix& m, const CopySpec& c) {
    int n = m.dim();
    if (c.index < 1 || c.index > n) throw std::invalid_argument("is_in_copy: index out of range");
    int fixed = c.index - 1;
    for (int r = 0; r < n; ++r) {
        for (int col = 0; col < n; ++col) {
            const BigInt& v = m(r, col);
            if (r == col) {
                if (v != 1) return false;
            } else if (c.kind == CopySpec::Kind::Column) {
                if (col != fixed && v != 0) return false;
            } else {
                if (r != fixed && v != 0) return false;
            }
        }
    }
    // Diagonal entry in the free column/row is on the diagonal, already 1.
    return true;
}

/// V_j meets V_i^t (i != j) in the infinite cyclic group <e_ij>; any other
/// pair of distinct copies meets trivially.
struct CopyIntersection {
    bool cyclic = false;             // true: <e_ij>, false: trivial
    int i = 0, j = 0;                // generator indices when cyclic
};

inline CopyIntersection copy_intersection(const CopySpec& c1, const CopySpec& c2) {
    if (c1 == c2) throw std::invalid_argument("copy_intersection: copies must differ");
    if (c1.kind != c2.kind && c1.index != c2.index) {
        const CopySpec& col = c1.kind == CopySpec::Kind::Column ? c1 : c2;
        const CopySpec& row = c1.kind == CopySpec::Kind::Column ? c2 : c1;
        return {true, row.index, col.index};
    }
    return {};
}

/// Normalizer pattern: for a column copy V_j the j-th row must be
/// (0 .. eps .. 0) with eps = ±1; for a row copy V_i^t the i-th column.
inline bool is_in_normalizer(const SLMatrix& m, const CopySpec& c) {
    int n = m.dim();
    if (c.index < 1 || c.index > n) throw std::invalid_argument("is_in_normalizer: index out of range");
    int f = c.index - 1;
    const BigInt& diag = m(f, f);
    if (diag != 1 && diag != -1) return false;
    for (int k = 0; k < n; ++k) {
        if (k == f) continue;
        const BigInt& v = c.kind == CopySpec::Kind::Column ? m(f, k) : m(k, f);
        if (v != 0) return false;
    }
    return true;
}

/// Centralizer pattern of e_ij^k: eps*e_i as i-th column and eps*e_j^t as
/// j-th row, one sign for both. Equivalent to commuting with e_ij^k for
/// every k != 0; the k argument is kept to pin that contract.
inline bool centralizes_elementary(const SLMatrix& m, int i, int j, const BigInt& k) {
    int n = m.dim();
    if (i == j || i < 1 || j < 1 || i > n || j > n)
        throw std::invalid_argument("centralizes_elementary: bad indices");
    if (k == 0) throw std::invalid_argument("centralizes_elementary: k must be nonzero");
    const BigInt& eps = m(i - 1, i - 1);
    if (eps != 1 && eps != -1) return false;
    if (m(j - 1, j - 1) != eps) return false;
    for (int r = 0; r < n; ++r) {
        if (r != i - 1 && m(r, i - 1) != 0) return false;  // i-th column
    }
    for (int c = 0; c < n; ++c) {
        if (c != j - 1 && m(j - 1, c) != 0) return false;  // j-th row
    }
    return true;
}

/// Word-length ball over the symmetric generator set {e_ij^{±1}},
/// deduplicated by the canonical entry key. Elements appear in BFS order,
/// identity first; the set is closed under inverses.
class GroupBall {
public:
    int n = 0;
    int radius = 0;
    bool center_adjoined = false;
    std::vector<SLMatrix> elements;
    std::vector<int> word_length;

    std::size_t size() const { return elements.size(); }

    std::optional<std::size_t> index_of(const SLMatrix& m) const {
        auto it = index_.find(m.key());
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    bool contains(const SLMatrix& m) const { return index_.count(m.key()) > 0; }

    void insert(const SLMatrix& m, int wl) {
        auto [it, inserted] = index_.emplace(m.key(), elements.size());
        if (inserted) {
            elements.push_back(m);
            word_length.push_back(wl);
        }
    }

private:
    std::unordered_map<std::string, std::size_t> index_;
};

/// The symmetric elementary generators e_ij^{±1} in a fixed scan order.
inline std::vector<SLMatrix> elementary_generators(int n, bool with_inverses = true) {
    std::vector<SLMatrix> gens;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            if (i == j) continue;
            gens.push_back(elementary(n, i, j, 1));
            if (with_inverses) gens.push_back(elementary(n, i, j, -1));
        }
    return gens;
}

constexpr std::size_t kDefaultBallCap = 10'000'000;

/// Breadth-first closure out to word length `radius`. Throws cap_exceeded
/// when the ball outgrows `cap`. With adjoin_center, -I (for even n) and
/// its translates are added to the finished ball so central elements are
/// available as sample points; their word-length annotation is the BFS
/// depth of the un-negated element.
inline GroupBall ball_enumerate(int n, int radius, std::size_t cap = kDefaultBallCap,
                                bool adjoin_center = false) {
    if (radius < 0) throw std::invalid_argument("ball_enumerate: radius must be >= 0");
    GroupBall ball;
    ball.n = n;
    ball.radius = radius;
    ball.insert(SLMatrix::identity(n), 0);
    auto gens = elementary_generators(n);
    std::size_t frontier_begin = 0;
    for (int depth = 1; depth <= radius; ++depth) {
        std::size_t frontier_end = ball.size();
        for (std::size_t idx = frontier_begin; idx < frontier_end; ++idx) {
            SLMatrix cur = ball.elements[idx];
            for (const auto& g : gens) {
                SLMatrix next = cur * g;
                if (ball.size() >= cap && !ball.contains(next))
                    throw cap_exceeded("ball_enumerate: element cap exceeded");
                ball.insert(next, depth);
            }
        }
        frontier_begin = frontier_end;
    }
    if (adjoin_center && n % 2 == 0) {
        ball.center_adjoined = true;
        IntMatrix neg = IntMatrix::identity(n);
        for (int i = 0; i < n; ++i) neg(i, i) = -1;
        SLMatrix minus_i{neg};
        std::size_t base = ball.size();
        for (std::size_t idx = 0; idx < base; ++idx) {
            SLMatrix m = minus_i * ball.elements[idx];
            if (ball.size() >= cap && !ball.contains(m))
                throw cap_exceeded("ball_enumerate: element cap exceeded");
            ball.insert(m, ball.word_length[idx]);
        }
    }
    return ball;
}

/// Checks, for every ball element m, that "m conjugates each generator of
/// the copy back into the copy" agrees with the normalizer pattern test.
struct NormalizerCheckReport {
    std::size_t checked = 0;
    std::vector<std::size_t> counterexamples;  // ball indices
};

inline NormalizerCheckReport normalizer_brute_check(const GroupBall& ball, const CopySpec& c) {
    NormalizerCheckReport rep;
    rep.checked = ball.size();
    auto gen_pairs = c.generators(ball.n);
    std::vector<SLMatrix> gens;
    gens.reserve(gen_pairs.size());
    for (auto [i, j] : gen_pairs) gens.push_back(elementary(ball.n, i, j, 1));
    std::vector<char> bad(ball.size(), 0);
    parallel_for(ball.size(), default_threads(), [&](std::size_t idx) {
        const SLMatrix& m = ball.elements[idx];
        SLMatrix minv = m.inverse();
        bool conj_in_copy = true;
        for (const auto& g : gens) {
            if (!is_in_copy(m * g * minv, c)) { conj_in_copy = false; break; }
        }
        if (conj_in_copy != is_in_normalizer(m, c)) bad[idx] = 1;
    });
    for (std::size_t i = 0; i < bad.size(); ++i)
        if (bad[i]) rep.counterexamples.push_back(i);
    return rep;
}

/// True iff m reduces to the identity mod N, i.e. m lies in the principal
/// congruence subgroup of level N.
inline bool congruence_membership(const SLMatrix& m, long long N) {
    if (N < 2) throw std::invalid_argument("congruence_membership: modulus must be >= 2");
    return m.mod_reduce(N).is_identity();
}

/// Block-diagonal embedding SL_2(Z) x SL_2(Z) -> SL_4(Z).
inline SLMatrix embed_sl2_pair(const SLMatrix& a, const SLMatrix& b) {
    if (a.dim() != 2 || b.dim() != 2)
        throw std::invalid_argument("embed_sl2_pair: inputs must be 2x2");
    IntMatrix m(4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            m(i, j) = a(i, j);
            m(i + 2, j + 2) = b(i, j);
        }
    return SLMatrix(std::move(m));
}

/// A conjugator c with c * e_kl * c^{-1} = e_pq, built from s-matrices and,
/// when the sign comes out wrong, one diagonal matrix with two -1 entries
/// (the lexicographically first valid pair). Requires n >= 3.
inline SLMatrix elementary_conjugator(int n, int k, int l, int p, int q) {
    if (n < 3) throw std::invalid_argument("elementary_conjugator: requires n >= 3");
    if (k == l || p == q) throw std::invalid_argument("elementary_conjugator: bad index pair");
    // Build a permutation sigma with sigma(k) = p, sigma(l) = q as a product
    // of transpositions realized by s-matrices.
    std::vector<int> sigma(n + 1);
    for (int i = 1; i <= n; ++i) sigma[i] = i;
    SLMatrix c = SLMatrix::identity(n);
    auto apply_transposition = [&](int a, int b) {
        if (a == b) return;
        c = s_matrix(n, a, b) * c;
        for (int i = 1; i <= n; ++i) {
            if (sigma[i] == a) sigma[i] = b;
            else if (sigma[i] == b) sigma[i] = a;
        }
    };
    if (sigma[k] != p) apply_transposition(p, sigma[k]);
    // sigma(k) == p now, and sigma(l) != p since sigma is injective.
    if (sigma[l] != q) apply_transposition(q, sigma[l]);
    SLMatrix target = elementary(n, p, q, 1);
    SLMatrix conj = c * elementary(n, k, l, 1) * c.inverse();
    if (conj == target) return c;
    // Sign fix: diag with -1 at r and s, exactly one of {r, s} in {p, q}.
    for (int r = 1; r <= n; ++r) {
        for (int s = r + 1; s <= n; ++s) {
            int hits = (r == p || r == q) + (s == p || s == q);
            if (hits != 1) continue;
            IntMatrix d = IntMatrix::identity(n);
            d(r - 1, r - 1) = -1;
            d(s - 1, s - 1) = -1;
            SLMatrix ds{d};
            SLMatrix cand = ds * c;
            if (cand * elementary(n, k, l, 1) * cand.inverse() == target) return cand;
        }
    }
    throw std::logic_error("elementary_conjugator: no sign fix found");
}

}  // namespace slnz
