#pragma once

// Exact integer and residue matrix algebra for SL_n(Z) and its congruence
// quotients. Everything here is computed in exact arithmetic; there is no
// floating point in this header.

#include "slnz/common.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace slnz {

class IntMatrix {
public:
    explicit IntMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n) {
        if (n < 2) throw std::invalid_argument("IntMatrix: dimension must be >= 2");
    }

    static IntMatrix identity(int n) {
        IntMatrix m(n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    int dim() const { return n_; }

    // 0-based storage access.
    BigInt& operator()(int r, int c) { return a_[static_cast<std::size_t>(r) * n_ + c]; }
    const BigInt& operator()(int r, int c) const { return a_[static_cast<std::size_t>(r) * n_ + c]; }

    const std::vector<BigInt>& entries() const { return a_; }
    std::vector<BigInt>& entries() { return a_; }

    bool operator==(const IntMatrix& o) const { return n_ == o.n_ && a_ == o.a_; }
    bool operator!=(const IntMatrix& o) const { return !(*this == o); }

    IntMatrix mul(const IntMatrix& o) const {
        if (n_ != o.n_) throw std::invalid_argument("IntMatrix::mul: dimension mismatch");
        IntMatrix r(n_);
        for (int i = 0; i < n_; ++i) {
            for (int k = 0; k < n_; ++k) {
                const BigInt& aik = (*this)(i, k);
                if (aik == 0) continue;
                for (int j = 0; j < n_; ++j) {
                    const BigInt& okj = o(k, j);
                    if (okj != 0) r(i, j) += aik * okj;
                }
            }
        }
        return r;
    }

    IntMatrix transpose() const {
        IntMatrix r(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    // Fraction-free (Bareiss) elimination; every division below is exact,
    // so no rational intermediates appear.
    BigInt det() const {
        IntMatrix m = *this;
        BigInt prev = 1;
        int sign = 1;
        for (int k = 0; k < n_ - 1; ++k) {
            if (m(k, k) == 0) {
                int p = -1;
                for (int i = k + 1; i < n_; ++i)
                    if (m(i, k) != 0) { p = i; break; }
                if (p < 0) return 0;
                for (int j = 0; j < n_; ++j) std::swap(m(k, j), m(p, j));
                sign = -sign;
            }
            for (int i = k + 1; i < n_; ++i) {
                for (int j = k + 1; j < n_; ++j) {
                    m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
                }
                m(i, k) = 0;
            }
            prev = m(k, k);
        }
        return sign > 0 ? m(n_ - 1, n_ - 1) : -m(n_ - 1, n_ - 1);
    }

    // Determinant of the minor obtained by deleting row r and column c.
    BigInt minor_det(int r, int c) const {
        IntMatrix m(n_ > 2 ? n_ - 1 : 2);
        if (n_ == 2) {
            // 1x1 minor; IntMatrix cannot hold it, read the entry directly.
            return (*this)(1 - r, 1 - c);
        }
        int ri = 0;
        for (int i = 0; i < n_; ++i) {
            if (i == r) continue;
            int cj = 0;
            for (int j = 0; j < n_; ++j) {
                if (j == c) continue;
                m(ri, cj) = (*this)(i, j);
                ++cj;
            }
            ++ri;
        }
        return m.det();
    }

    // adj(A) with A * adj(A) = det(A) * I.
    IntMatrix adjugate() const {
        IntMatrix r(n_);
        for (int i = 0; i < n_; ++i) {
            for (int j = 0; j < n_; ++j) {
                BigInt cof = minor_det(j, i);
                if ((i + j) % 2 != 0) cof = -cof;
                r(i, j) = cof;
            }
        }
        return r;
    }

    // Canonical dedup key: the row-major entry tuple, rendered in decimal.
    // Stable across sessions; used by ball enumeration and group closure.
    std::string key() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < a_.size(); ++i) {
            if (i) os << ',';
            os << a_[i];
        }
        return os.str();
    }

    BigInt max_abs_entry() const {
        BigInt m = 0;
        for (const auto& x : a_) {
            BigInt ax = x < 0 ? BigInt(-x) : x;
            if (ax > m) m = ax;
        }
        return m;
    }

private:
    int n_;
    std::vector<BigInt> a_;
};

class ResidueMatrix;

/// An integer matrix together with a validated det = 1 certificate.
/// Products and inverses of certified matrices skip re-validation.
class SLMatrix {
public:
    explicit SLMatrix(IntMatrix m) : m_(std::move(m)) {
        if (m_.det() != 1) throw std::invalid_argument("SLMatrix: determinant is not 1");
    }

    static SLMatrix identity(int n) { return SLMatrix(IntMatrix::identity(n), certified_tag{}); }

    int dim() const { return m_.dim(); }
    const IntMatrix& mat() const { return m_; }
    const BigInt& operator()(int r, int c) const { return m_(r, c); }

    bool operator==(const SLMatrix& o) const { return m_ == o.m_; }
    bool operator!=(const SLMatrix& o) const { return m_ != o.m_; }

    SLMatrix operator*(const SLMatrix& o) const {
        return SLMatrix(m_.mul(o.m_), certified_tag{});
    }

    // Exact integer inverse via the adjugate; det = 1 makes adj(A) = A^{-1}.
    SLMatrix inverse() const {
        return SLMatrix(m_.adjugate(), certified_tag{});
    }

    SLMatrix pow(long long e) const {
        SLMatrix base = e < 0 ? inverse() : *this;
        unsigned long long k = e < 0 ? static_cast<unsigned long long>(-e)
                                     : static_cast<unsigned long long>(e);
        SLMatrix acc = identity(dim());
        while (k) {
            if (k & 1ULL) acc = acc * base;
            base = base * base;
            k >>= 1ULL;
        }
        return acc;
    }

    std::string key() const { return m_.key(); }

    ResidueMatrix mod_reduce(long long N) const;

private:
    struct certified_tag {};
    SLMatrix(IntMatrix m, certified_tag) : m_(std::move(m)) {}
    IntMatrix m_;
};

/// e_ij^k: unit diagonal, entry k at (i, j). Indices are 1-based as in the
/// usual e_{ij} notation.
inline SLMatrix elementary(int n, int i, int j, const BigInt& k) {
    if (i < 1 || j < 1 || i > n || j > n) throw std::invalid_argument("elementary: index out of range");
    if (i == j) throw std::invalid_argument("elementary: i == j");
    IntMatrix m = IntMatrix::identity(n);
    m(i - 1, j - 1) = k;
    return SLMatrix(std::move(m));
}

/// s_ij = e_ij * e_ji^{-1} * e_ij; swaps the i-th and j-th standard unit
/// vectors up to a sign and fixes the rest.
inline SLMatrix s_matrix(int n, int i, int j) {
    return elementary(n, i, j, 1) * elementary(n, j, i, -1) * elementary(n, i, j, 1);
}

/// Entries reduced into [0, N); the det = 1 certificate survives as
/// det = 1 (mod N).
class ResidueMatrix {
public:
    ResidueMatrix(int n, long long N, std::vector<int64_t> entries)
        : n_(n), N_(N), a_(std::move(entries)) {
        if (N < 2) throw std::invalid_argument("ResidueMatrix: modulus must be >= 2");
        if (a_.size() != static_cast<std::size_t>(n) * n)
            throw std::invalid_argument("ResidueMatrix: wrong entry count");
        for (auto& x : a_) x = ((x % N) + N) % N;
        if (det_mod() != 1 % N)
            throw std::invalid_argument("ResidueMatrix: det != 1 (mod N)");
    }

    static ResidueMatrix identity(int n, long long N) {
        std::vector<int64_t> e(static_cast<std::size_t>(n) * n, 0);
        for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i) * n + i] = 1;
        return ResidueMatrix(n, N, std::move(e), certified_tag{});
    }

    int dim() const { return n_; }
    long long modulus() const { return N_; }
    int64_t operator()(int r, int c) const { return a_[static_cast<std::size_t>(r) * n_ + c]; }
    const std::vector<int64_t>& entries() const { return a_; }

    bool operator==(const ResidueMatrix& o) const {
        return n_ == o.n_ && N_ == o.N_ && a_ == o.a_;
    }
    bool operator!=(const ResidueMatrix& o) const { return !(*this == o); }

    bool is_identity() const {
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                if ((*this)(i, j) != (i == j ? 1 % N_ : 0)) return false;
        return true;
    }

    ResidueMatrix operator*(const ResidueMatrix& o) const {
        if (n_ != o.n_ || N_ != o.N_)
            throw std::invalid_argument("ResidueMatrix::mul: shape/modulus mismatch");
        std::vector<int64_t> r(a_.size(), 0);
        for (int i = 0; i < n_; ++i) {
            for (int k = 0; k < n_; ++k) {
                int64_t aik = (*this)(i, k);
                if (aik == 0) continue;
                for (int j = 0; j < n_; ++j) {
                    std::size_t idx = static_cast<std::size_t>(i) * n_ + j;
                    r[idx] = (r[idx] + aik * o(k, j)) % N_;
                }
            }
        }
        return ResidueMatrix(n_, N_, std::move(r), certified_tag{});
    }

    // adj(A) mod N is the inverse, since det = 1 (mod N).
    ResidueMatrix inverse() const {
        IntMatrix m(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) m(i, j) = (*this)(i, j);
        IntMatrix adj = m.adjugate();
        std::vector<int64_t> r(a_.size());
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) {
                BigInt v = adj(i, j) % N_;
                if (v < 0) v += N_;
                r[static_cast<std::size_t>(i) * n_ + j] = to_ll(v);
            }
        return ResidueMatrix(n_, N_, std::move(r), certified_tag{});
    }

    /// Further reduction mod M for M | N.
    ResidueMatrix reduce(long long M) const {
        if (M < 2 || N_ % M != 0)
            throw std::invalid_argument("ResidueMatrix::reduce: M must divide N");
        std::vector<int64_t> r(a_.size());
        for (std::size_t i = 0; i < a_.size(); ++i) r[i] = a_[i] % M;
        return ResidueMatrix(n_, M, std::move(r), certified_tag{});
    }

    /// Mixed-radix packing of the entry tuple; usable as a dense dedup key
    /// whenever n^2 * ceil(log2 N) fits in 64 bits.
    static bool packable(int n, long long N) {
        int bits = 1;
        while ((1LL << bits) < N) ++bits;
        return static_cast<long long>(n) * n * bits <= 64;
    }

    uint64_t pack() const {
        uint64_t key = 0;
        for (auto it = a_.rbegin(); it != a_.rend(); ++it)
            key = key * static_cast<uint64_t>(N_) + static_cast<uint64_t>(*it);
        return key;
    }

    static ResidueMatrix unpack(int n, long long N, uint64_t key) {
        std::vector<int64_t> e(static_cast<std::size_t>(n) * n);
        for (auto& x : e) {
            x = static_cast<int64_t>(key % static_cast<uint64_t>(N));
            key /= static_cast<uint64_t>(N);
        }
        return ResidueMatrix(n, N, std::move(e), certified_tag{});
    }

private:
    struct certified_tag {};
    ResidueMatrix(int n, long long N, std::vector<int64_t> entries, certified_tag)
        : n_(n), N_(N), a_(std::move(entries)) {}

    int64_t det_mod() const {
        IntMatrix m(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) m(i, j) = (*this)(i, j);
        BigInt d = m.det() % N_;
        if (d < 0) d += N_;
        return to_ll(d);
    }

    int n_;
    long long N_;
    std::vector<int64_t> a_;
};

inline ResidueMatrix SLMatrix::mod_reduce(long long N) const {
    if (N < 2) throw std::invalid_argument("mod_reduce: modulus must be >= 2");
    int n = dim();
    std::vector<int64_t> e(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            BigInt v = m_(i, j) % N;
            if (v < 0) v += N;
            e[static_cast<std::size_t>(i) * n + j] = to_ll(v);
        }
    return ResidueMatrix(n, N, std::move(e));
}

}  // namespace slnz
