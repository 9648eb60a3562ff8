#pragma once

// Congruence quotients SL_n(Z/N): full enumeration, conjugacy classes,
// character tables by the Burnside-Dixon method (class-multiplication
// matrices, simultaneous eigenvectors over a splitting prime, lift of the
// eigenvalue data to complex character values), pull-back of normalized
// irreducible characters to SL_n(Z), and the containment check for the
// subgroup generated by N-th powers of the elementary matrices.

#include "slnz/exactmat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace slnz {

constexpr std::size_t kDefaultGroupCap = 10'000'000;

/// SL_n(Z/N) as a fully enumerated group. Elements are stored as packed
/// entry tuples; index 0 is the identity.
class FiniteGroup {
public:
    int n = 0;
    long long N = 0;
    std::vector<uint64_t> keys;
    std::vector<uint32_t> generator_idx;  // images of e_ij^{±1}, scan order
    std::vector<uint32_t> inverse_idx;

    std::size_t size() const { return keys.size(); }

    ResidueMatrix element(uint32_t idx) const {
        return ResidueMatrix::unpack(n, N, keys[idx]);
    }

    uint32_t index_of_key(uint64_t key) const {
        auto it = index_.find(key);
        if (it == index_.end())
            throw std::invalid_argument("FiniteGroup: element not in group");
        return it->second;
    }

    uint32_t index_of(const ResidueMatrix& m) const { return index_of_key(m.pack()); }

    uint32_t product(uint32_t a, uint32_t b) const {
        return index_of_key((element(a) * element(b)).pack());
    }

    /// Multiplicative order of an element.
    long long order_of(uint32_t idx) const {
        long long ord = 1;
        uint32_t cur = idx;
        while (cur != 0) {
            cur = product(cur, idx);
            ++ord;
        }
        return ord;
    }

    void insert(uint64_t key) {
        auto [it, ok] = index_.emplace(key, static_cast<uint32_t>(keys.size()));
        if (ok) keys.push_back(key);
    }

    bool contains_key(uint64_t key) const { return index_.count(key) > 0; }

private:
    std::unordered_map<uint64_t, uint32_t> index_;
};

/// BFS closure of the generator images e_ij^{±1} mod N.
inline FiniteGroup enumerate_group(int n, long long N, std::size_t cap = kDefaultGroupCap) {
    if (N < 2) throw std::invalid_argument("enumerate_group: modulus must be >= 2");
    if (!ResidueMatrix::packable(n, N))
        throw std::invalid_argument("enumerate_group: n^2*log2(N) exceeds 64-bit packing");
    FiniteGroup g;
    g.n = n;
    g.N = N;
    std::vector<ResidueMatrix> gens;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            if (i == j) continue;
            gens.push_back(elementary(n, i, j, 1).mod_reduce(N));
            gens.push_back(elementary(n, i, j, -1).mod_reduce(N));
        }
    g.insert(ResidueMatrix::identity(n, N).pack());
    for (const auto& gen : gens) g.insert(gen.pack());
    for (const auto& gen : gens) g.generator_idx.push_back(g.index_of(gen));
    // generator_idx may contain duplicates when e.g. N = 2; harmless.
    for (std::size_t head = 0; head < g.size(); ++head) {
        ResidueMatrix cur = g.element(static_cast<uint32_t>(head));
        for (const auto& gen : gens) {
            uint64_t key = (cur * gen).pack();
            if (!g.contains_key(key) && g.size() >= cap)
                throw cap_exceeded("enumerate_group: element cap exceeded");
            g.insert(key);
        }
    }
    g.inverse_idx.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        g.inverse_idx[i] = g.index_of(g.element(static_cast<uint32_t>(i)).inverse());
    return g;
}

/// Orbit partition under conjugation. Classes are ordered by size, then by
/// the lexicographic entry tuple of their minimal representative, which
/// places the identity class first.
struct ConjugacyClasses {
    std::vector<uint32_t> class_of;               // element index -> class id
    std::vector<std::vector<uint32_t>> members;   // class id -> element indices
    std::vector<uint32_t> rep;                    // class id -> representative element
    std::vector<uint32_t> inverse_class;          // class id -> class of inverses

    std::size_t count() const { return members.size(); }
    std::size_t size_of(std::size_t c) const { return members[c].size(); }
};

inline ConjugacyClasses conjugacy_classes(const FiniteGroup& g) {
    const uint32_t none = 0xffffffffu;
    std::vector<uint32_t> class_of(g.size(), none);
    std::vector<std::vector<uint32_t>> members;
    // Unpacked generator matrices and their inverses for fast conjugation.
    std::vector<ResidueMatrix> gens, gens_inv;
    for (uint32_t gi : g.generator_idx) {
        gens.push_back(g.element(gi));
        gens_inv.push_back(g.element(g.inverse_idx[gi]));
    }
    for (uint32_t seed = 0; seed < g.size(); ++seed) {
        if (class_of[seed] != none) continue;
        uint32_t cid = static_cast<uint32_t>(members.size());
        members.emplace_back();
        std::vector<uint32_t> stack{seed};
        class_of[seed] = cid;
        members[cid].push_back(seed);
        while (!stack.empty()) {
            uint32_t cur = stack.back();
            stack.pop_back();
            ResidueMatrix x = g.element(cur);
            for (std::size_t t = 0; t < gens.size(); ++t) {
                uint32_t y = g.index_of_key((gens[t] * x * gens_inv[t]).pack());
                if (class_of[y] == none) {
                    class_of[y] = cid;
                    members[cid].push_back(y);
                    stack.push_back(y);
                }
            }
        }
    }
    // Canonical representative: lexicographically minimal entry tuple.
    std::vector<uint32_t> rep(members.size());
    for (std::size_t c = 0; c < members.size(); ++c) {
        uint32_t best = members[c][0];
        std::vector<int64_t> best_e = g.element(best).entries();
        for (uint32_t m : members[c]) {
            std::vector<int64_t> e = g.element(m).entries();
            if (e < best_e) {
                best = m;
                best_e = std::move(e);
            }
        }
        rep[c] = best;
    }
    std::vector<uint32_t> order(members.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
        if (members[a].size() != members[b].size()) return members[a].size() < members[b].size();
        return g.element(rep[a]).entries() < g.element(rep[b]).entries();
    });
    ConjugacyClasses out;
    out.members.resize(members.size());
    out.rep.resize(members.size());
    std::vector<uint32_t> new_id(members.size());
    for (std::size_t c = 0; c < order.size(); ++c) {
        new_id[order[c]] = static_cast<uint32_t>(c);
        out.members[c] = std::move(members[order[c]]);
        out.rep[c] = rep[order[c]];
        std::sort(out.members[c].begin(), out.members[c].end());
    }
    out.class_of.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out.class_of[i] = new_id[class_of[i]];
    out.inverse_class.resize(out.count());
    for (std::size_t c = 0; c < out.count(); ++c)
        out.inverse_class[c] = out.class_of[g.inverse_idx[out.rep[c]]];
    if (out.rep[0] != 0)
        throw std::logic_error("conjugacy_classes: identity class not first");
    return out;
}

namespace modp {

inline int64_t mul(int64_t a, int64_t b, int64_t p) { return (a * b) % p; }
inline int64_t add(int64_t a, int64_t b, int64_t p) { return (a + b) % p; }
inline int64_t sub(int64_t a, int64_t b, int64_t p) { return ((a - b) % p + p) % p; }

inline int64_t pow(int64_t b, int64_t e, int64_t p) {
    int64_t r = 1 % p;
    b %= p;
    while (e > 0) {
        if (e & 1) r = mul(r, b, p);
        b = mul(b, b, p);
        e >>= 1;
    }
    return r;
}

inline int64_t inv(int64_t a, int64_t p) { return pow(((a % p) + p) % p, p - 2, p); }

using Mat = std::vector<std::vector<int64_t>>;  // dense, row major

/// Basis of the kernel of a square matrix, as columns.
inline std::vector<std::vector<int64_t>> kernel_basis(Mat a, int64_t p) {
    std::size_t nrows = a.size();
    std::size_t ncols = nrows == 0 ? 0 : a[0].size();
    std::vector<int> pivot_col;
    std::size_t row = 0;
    for (std::size_t col = 0; col < ncols && row < nrows; ++col) {
        std::size_t piv = row;
        while (piv < nrows && a[piv][col] == 0) ++piv;
        if (piv == nrows) continue;
        std::swap(a[piv], a[row]);
        int64_t s = inv(a[row][col], p);
        for (std::size_t j = col; j < ncols; ++j) a[row][j] = mul(a[row][j], s, p);
        for (std::size_t i = 0; i < nrows; ++i) {
            if (i == row || a[i][col] == 0) continue;
            int64_t f = a[i][col];
            for (std::size_t j = col; j < ncols; ++j)
                a[i][j] = sub(a[i][j], mul(f, a[row][j], p), p);
        }
        pivot_col.push_back(static_cast<int>(col));
        ++row;
    }
    std::vector<char> is_pivot(ncols, 0);
    for (int c : pivot_col) is_pivot[c] = 1;
    std::vector<std::vector<int64_t>> basis;
    for (std::size_t free_col = 0; free_col < ncols; ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<int64_t> v(ncols, 0);
        v[free_col] = 1;
        for (std::size_t r = 0; r < pivot_col.size(); ++r)
            v[pivot_col[r]] = sub(0, a[r][free_col], p);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Solves B*X = Y column-wise, where the r x d matrix B has full column
/// rank. Returns the d x m coordinate matrix X.
inline Mat solve_in_basis(const Mat& b_cols, const Mat& y_cols, int64_t p) {
    std::size_t r = b_cols.size();
    std::size_t d = r == 0 ? 0 : b_cols[0].size();
    std::size_t m = r == 0 ? 0 : y_cols[0].size();
    Mat aug(r, std::vector<int64_t>(d + m));
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < d; ++j) aug[i][j] = b_cols[i][j];
        for (std::size_t j = 0; j < m; ++j) aug[i][d + j] = y_cols[i][j];
    }
    std::size_t row = 0;
    std::vector<std::size_t> pivot_of_col(d);
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t piv = row;
        while (piv < r && aug[piv][col] == 0) ++piv;
        if (piv == r) throw std::logic_error("solve_in_basis: basis not full rank");
        std::swap(aug[piv], aug[row]);
        int64_t s = inv(aug[row][col], p);
        for (std::size_t j = col; j < d + m; ++j) aug[row][j] = mul(aug[row][j], s, p);
        for (std::size_t i = 0; i < r; ++i) {
            if (i == row || aug[i][col] == 0) continue;
            int64_t f = aug[i][col];
            for (std::size_t j = col; j < d + m; ++j)
                aug[i][j] = sub(aug[i][j], mul(f, aug[row][j], p), p);
        }
        pivot_of_col[col] = row;
        ++row;
    }
    for (std::size_t i = row; i < r; ++i)
        for (std::size_t j = d; j < d + m; ++j)
            if (aug[i][j] != 0) throw std::logic_error("solve_in_basis: inconsistent system");
    Mat x(d, std::vector<int64_t>(m));
    for (std::size_t col = 0; col < d; ++col)
        for (std::size_t j = 0; j < m; ++j) x[col][j] = aug[pivot_of_col[col]][d + j];
    return x;
}

}  // namespace modp

struct CharacterTable {
    int n = 0;
    long long N = 0;
    uint64_t order = 0;
    long long exponent = 0;
    long long splitting_prime = 0;
    std::shared_ptr<const FiniteGroup> group;
    ConjugacyClasses classes;
    std::vector<long long> degrees;               // chi(1), exact integers
    std::vector<std::vector<Complex>> values;     // row = irreducible, col = class

    std::size_t class_count() const { return classes.count(); }
};

namespace detail {

inline bool is_prime_ll(long long x) {
    if (x < 2) return false;
    for (long long d = 2; d * d <= x; ++d)
        if (x % d == 0) return false;
    return true;
}

/// Smallest prime p with p ≡ 1 (mod e) and p > 2*sqrt(|G|). Such a prime
/// splits the class algebra and makes degrees and eigenvalue
/// multiplicities recoverable from their residues.
inline long long splitting_prime(long long e, uint64_t order, long long bound = 100'000'000) {
    long long lower = static_cast<long long>(2.0 * std::sqrt(static_cast<double>(order))) + 1;
    for (long long p = e + 1;; p += e) {
        if (p > bound) throw cap_exceeded("splitting_prime: bound exceeded");
        if (p > lower && is_prime_ll(p)) return p;
    }
}

inline long long primitive_root(long long p) {
    std::vector<long long> fac;
    long long m = p - 1;
    for (long long d = 2; d * d <= m; ++d) {
        if (m % d == 0) {
            fac.push_back(d);
            while (m % d == 0) m /= d;
        }
    }
    if (m > 1) fac.push_back(m);
    for (long long g = 2; g < p; ++g) {
        bool ok = true;
        for (long long f : fac)
            if (modp::pow(g, (p - 1) / f, p) == 1) { ok = false; break; }
        if (ok) return g;
    }
    throw std::logic_error("primitive_root: none found");
}

}  // namespace detail

/// Burnside-Dixon character table. All table invariants (row orthogonality,
/// degree sum, value at the identity) are verified before returning.
inline CharacterTable character_table(std::shared_ptr<const FiniteGroup> group,
                                      const ConjugacyClasses& classes) {
    const FiniteGroup& g = *group;
    const std::size_t r = classes.count();
    const uint64_t order = g.size();

    // Exponent = lcm of representative orders (order is a class function).
    long long e = 1;
    for (std::size_t c = 0; c < r; ++c)
        e = std::lcm(e, g.order_of(classes.rep[c]));
    const long long p = detail::splitting_prime(e, order);

    // Class multiplication coefficients a[i][j][k]: the number of ways a
    // fixed element of class k factors as (class i) * (class j).
    std::vector<modp::Mat> mmat(r, modp::Mat(r, std::vector<int64_t>(r, 0)));
    for (std::size_t k = 0; k < r; ++k) {
        uint32_t zk = classes.rep[k];
        for (std::size_t i = 0; i < r; ++i) {
            for (uint32_t x : classes.members[i]) {
                uint32_t y = g.product(g.inverse_idx[x], zk);
                std::size_t j = classes.class_of[y];
                // (M_i)_{jk} = a_{ijk}
                mmat[i][j][k] = (mmat[i][j][k] + 1) % p;
            }
        }
    }

    // Simultaneous eigenvectors over F_p by sequential eigenspace
    // refinement; subspaces are kept as column bases (r x d matrices).
    std::vector<modp::Mat> subspaces;
    {
        modp::Mat full(r, std::vector<int64_t>(r, 0));
        for (std::size_t i = 0; i < r; ++i) full[i][i] = 1;
        subspaces.push_back(std::move(full));
    }
    for (std::size_t i = 1; i < r; ++i) {
        bool all_split = true;
        for (const auto& s : subspaces)
            if (s[0].size() > 1) { all_split = false; break; }
        if (all_split) break;
        std::vector<modp::Mat> next;
        for (auto& basis : subspaces) {
            std::size_t d = basis[0].size();
            if (d == 1) {
                next.push_back(std::move(basis));
                continue;
            }
            // Image of the basis under M_i, then its coordinate matrix.
            modp::Mat img(r, std::vector<int64_t>(d, 0));
            for (std::size_t row = 0; row < r; ++row)
                for (std::size_t kk = 0; kk < r; ++kk) {
                    if (mmat[i][row][kk] == 0) continue;
                    for (std::size_t col = 0; col < d; ++col)
                        img[row][col] =
                            modp::add(img[row][col], modp::mul(mmat[i][row][kk], basis[kk][col], p), p);
                }
            modp::Mat a = modp::solve_in_basis(basis, img, p);
            std::size_t found = 0;
            for (int64_t lambda = 0; lambda < p && found < d; ++lambda) {
                modp::Mat shifted = a;
                for (std::size_t t = 0; t < d; ++t)
                    shifted[t][t] = modp::sub(shifted[t][t], lambda, p);
                auto ker = modp::kernel_basis(shifted, p);
                if (ker.empty()) continue;
                found += ker.size();
                modp::Mat sub(r, std::vector<int64_t>(ker.size(), 0));
                for (std::size_t row = 0; row < r; ++row)
                    for (std::size_t kv = 0; kv < ker.size(); ++kv) {
                        int64_t acc = 0;
                        for (std::size_t t = 0; t < d; ++t)
                            acc = modp::add(acc, modp::mul(basis[row][t], ker[kv][t], p), p);
                        sub[row][kv] = acc;
                    }
                next.push_back(std::move(sub));
            }
            if (found != d) throw std::logic_error("character_table: eigenspace split lost dimensions");
        }
        subspaces = std::move(next);
    }
    for (const auto& s : subspaces)
        if (s[0].size() != 1) throw std::logic_error("character_table: class algebra did not split");

    // Normalize each eigenvector so its identity-class coordinate is 1;
    // the coordinates are then the central character values omega_j.
    std::vector<std::vector<int64_t>> omega;
    for (const auto& s : subspaces) {
        std::vector<int64_t> w(r);
        for (std::size_t j = 0; j < r; ++j) w[j] = s[j][0];
        if (w[0] == 0) throw std::logic_error("character_table: eigenvector vanishes at identity");
        int64_t scale = modp::inv(w[0], p);
        for (auto& x : w) x = modp::mul(x, scale, p);
        omega.push_back(std::move(w));
    }

    // Degrees from the self-orthogonality relation; d is pinned as the
    // square root of d^2 mod p lying in (0, p/2), which exists uniquely
    // because p > 2*sqrt(|G|) >= 2d.
    const int64_t order_mod = static_cast<int64_t>(order % static_cast<uint64_t>(p));
    std::vector<long long> degrees(r);
    for (std::size_t row = 0; row < r; ++row) {
        int64_t csum = 0;
        for (std::size_t j = 0; j < r; ++j) {
            int64_t hj = static_cast<int64_t>(classes.size_of(j) % static_cast<uint64_t>(p));
            int64_t term = modp::mul(omega[row][j], omega[row][classes.inverse_class[j]], p);
            csum = modp::add(csum, modp::mul(term, modp::inv(hj, p), p), p);
        }
        int64_t d2 = modp::mul(order_mod, modp::inv(csum, p), p);
        long long deg = -1;
        for (int64_t t = 1; 2 * t < p; ++t)
            if (modp::mul(t, t, p) == d2) { deg = t; break; }
        if (deg < 0) throw std::logic_error("character_table: degree lift failed");
        degrees[row] = deg;
    }
    {
        uint64_t sum = 0;
        for (long long d : degrees) sum += static_cast<uint64_t>(d) * static_cast<uint64_t>(d);
        if (sum != order) throw std::logic_error("character_table: degree squares do not sum to |G|");
    }

    // chi mod p on each class, then eigenvalue multiplicities m_{jt} via
    // the discrete Fourier inversion over the e-th roots of unity mod p.
    std::vector<std::vector<std::size_t>> power_class(r, std::vector<std::size_t>(e));
    for (std::size_t j = 0; j < r; ++j) {
        uint32_t cur = 0;  // identity
        for (long long s = 0; s < e; ++s) {
            power_class[j][s] = classes.class_of[cur];
            cur = g.product(cur, classes.rep[j]);
        }
    }
    const int64_t z = modp::pow(detail::primitive_root(p), (p - 1) / e, p);
    const int64_t zinv = modp::inv(z, p);
    std::vector<int64_t> zinv_pow(e);
    zinv_pow[0] = 1;
    for (long long t = 1; t < e; ++t) zinv_pow[t] = modp::mul(zinv_pow[t - 1], zinv, p);
    const int64_t e_inv = modp::inv(e % p, p);

    std::vector<std::vector<Complex>> values(r, std::vector<Complex>(r));
    const double two_pi = 2.0 * 3.14159265358979323846;
    for (std::size_t row = 0; row < r; ++row) {
        std::vector<int64_t> theta(r);
        for (std::size_t j = 0; j < r; ++j) {
            int64_t hj_inv = modp::inv(static_cast<int64_t>(classes.size_of(j) % static_cast<uint64_t>(p)), p);
            theta[j] = modp::mul(modp::mul(degrees[row] % p, omega[row][j], p), hj_inv, p);
        }
        for (std::size_t j = 0; j < r; ++j) {
            Complex chi = 0.0;
            for (long long t = 0; t < e; ++t) {
                int64_t acc = 0;
                for (long long s = 0; s < e; ++s)
                    acc = modp::add(acc, modp::mul(theta[power_class[j][s]],
                                                   zinv_pow[(s * t) % e], p), p);
                int64_t mult = modp::mul(acc, e_inv, p);
                if (2 * mult >= p)
                    throw std::logic_error("character_table: multiplicity lift out of range");
                if (mult != 0)
                    chi += static_cast<double>(mult) *
                           Complex(std::cos(two_pi * t / e), std::sin(two_pi * t / e));
            }
            values[row][j] = chi;
        }
        double herm = std::abs(values[row][0] - Complex(static_cast<double>(degrees[row]), 0.0));
        if (herm > 1e-6) throw std::logic_error("character_table: chi(1) != degree");
    }

    // Deterministic row order: by degree, then by value vector.
    std::vector<std::size_t> row_order(r);
    std::iota(row_order.begin(), row_order.end(), 0);
    auto value_less = [&](std::size_t a, std::size_t b) {
        if (degrees[a] != degrees[b]) return degrees[a] < degrees[b];
        for (std::size_t j = 0; j < r; ++j) {
            double dre = values[a][j].real() - values[b][j].real();
            if (std::abs(dre) > 1e-6) return dre < 0;
            double dim = values[a][j].imag() - values[b][j].imag();
            if (std::abs(dim) > 1e-6) return dim < 0;
        }
        return false;
    };
    std::sort(row_order.begin(), row_order.end(), value_less);

    CharacterTable table;
    table.n = g.n;
    table.N = g.N;
    table.order = order;
    table.exponent = e;
    table.splitting_prime = p;
    table.group = std::move(group);
    table.classes = classes;
    table.degrees.resize(r);
    table.values.resize(r);
    for (std::size_t row = 0; row < r; ++row) {
        table.degrees[row] = degrees[row_order[row]];
        table.values[row] = std::move(values[row_order[row]]);
    }

    // Row orthogonality, verified before the table escapes.
    for (std::size_t a = 0; a < r; ++a) {
        for (std::size_t b = a; b < r; ++b) {
            Complex acc = 0.0;
            for (std::size_t j = 0; j < r; ++j)
                acc += static_cast<double>(classes.size_of(j)) * table.values[a][j] *
                       std::conj(table.values[b][j]);
            acc /= static_cast<double>(order);
            double want = a == b ? 1.0 : 0.0;
            if (std::abs(acc - want) > 1e-9)
                throw std::logic_error("character_table: row orthogonality failed");
        }
    }
    return table;
}

/// A normalized irreducible character of SL_n(Z/N) pulled back to SL_n(Z):
/// gamma evaluates to chi(gamma mod N)/chi(1).
struct LiftedCharacter {
    int n = 0;
    long long N = 0;
    long long degree = 1;
    std::size_t row = 0;
    std::shared_ptr<const FiniteGroup> group;
    std::vector<uint32_t> class_of;
    std::vector<Complex> class_values;  // raw chi values per class

    Complex evaluate(const SLMatrix& gamma) const {
        uint32_t idx = group->index_of(gamma.mod_reduce(N));
        return class_values[class_of[idx]] / static_cast<double>(degree);
    }
};

inline LiftedCharacter lift_character(const CharacterTable& t, std::size_t row) {
    if (row >= t.values.size()) throw std::invalid_argument("lift_character: row out of range");
    LiftedCharacter lc;
    lc.n = t.n;
    lc.N = t.N;
    lc.degree = t.degrees[row];
    lc.row = row;
    lc.group = t.group;
    lc.class_of = t.classes.class_of;
    lc.class_values = t.values[row];
    return lc;
}

/// Containment report for the subgroup H generated by the N-th powers of
/// the elementary matrices in SL_n(Z/M), against the kernel K of the
/// reduction to SL_n(Z/N^2). Requires N^2 | M.
struct TitsReport {
    int n = 0;
    long long base = 0;     // N
    long long modulus = 0;  // M
    uint64_t h_size = 0;
    uint64_t k_size = 0;
    uint64_t missing = 0;   // kernel elements outside H
    bool contained = false;
    bool vacuous = false;   // kernel is trivial
    std::vector<std::vector<int64_t>> missing_examples;  // entry tuples, at most 3
};

inline TitsReport tits_containment_check(int n, long long N, long long M,
                                         std::size_t cap = kDefaultGroupCap) {
    if (N < 2) throw std::invalid_argument("tits_containment_check: base must be >= 2");
    if (M < 2 || M % (N * N) != 0)
        throw std::invalid_argument("tits_containment_check: modulus must be a multiple of N^2");
    if (!ResidueMatrix::packable(n, M))
        throw std::invalid_argument("tits_containment_check: modulus too large to pack");

    // H: BFS closure of {e_ij^{±N} mod M}.
    std::vector<ResidueMatrix> gens;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            if (i == j) continue;
            gens.push_back(elementary(n, i, j, N).mod_reduce(M));
            gens.push_back(elementary(n, i, j, -N).mod_reduce(M));
        }
    std::unordered_set<uint64_t> h;
    std::vector<uint64_t> frontier;
    uint64_t id_key = ResidueMatrix::identity(n, M).pack();
    h.insert(id_key);
    frontier.push_back(id_key);
    while (!frontier.empty()) {
        uint64_t cur_key = frontier.back();
        frontier.pop_back();
        ResidueMatrix cur = ResidueMatrix::unpack(n, M, cur_key);
        for (const auto& gen : gens) {
            uint64_t key = (cur * gen).pack();
            if (h.count(key)) continue;
            if (h.size() >= cap) throw cap_exceeded("tits_containment_check: cap exceeded");
            h.insert(key);
            frontier.push_back(key);
        }
    }

    // K: all I + N^2*A with det = 1 (mod M), A over Z/(M/N^2).
    TitsReport rep;
    rep.n = n;
    rep.base = N;
    rep.modulus = M;
    rep.h_size = h.size();
    const long long q = M / (N * N);
    const std::size_t cells = static_cast<std::size_t>(n) * n;
    double total = std::pow(static_cast<double>(q), static_cast<double>(cells));
    if (total > 1e8) throw cap_exceeded("tits_containment_check: kernel enumeration too large");
    std::vector<int64_t> a(cells, 0);
    rep.contained = true;
    for (;;) {
        IntMatrix m = IntMatrix::identity(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) += N * N * a[static_cast<std::size_t>(i) * n + j];
        BigInt det = m.det() % M;
        if (det < 0) det += M;
        if (det == 1 % M) {
            ++rep.k_size;
            std::vector<int64_t> entries(cells);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    entries[static_cast<std::size_t>(i) * n + j] = to_ll(m(i, j) % M);
            ResidueMatrix rm(n, M, entries);
            if (!h.count(rm.pack())) {
                rep.contained = false;
                ++rep.missing;
                if (rep.missing_examples.size() < 3) rep.missing_examples.push_back(entries);
            }
        }
        // Odometer step over A.
        std::size_t pos = 0;
        while (pos < cells && ++a[pos] == q) {
            a[pos] = 0;
            ++pos;
        }
        if (pos == cells) break;
    }
    rep.vacuous = rep.k_size == 1;
    return rep;
}

}  // namespace slnz
