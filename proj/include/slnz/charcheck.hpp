#pragma once

// Candidate-character verification and the classification driver. A
// candidate is a complex-valued function sampled on a word-length ball;
// the driver certifies centrality and positive-definiteness, restricts to
// every copy of Z^{n-1}, fits each restriction against torus measures, and
// reports one of three verdicts: congruence(level), center, or undecided.
// A finite ball can never certify more, so undecided is a first-class
// outcome rather than an error.

#include "slnz/common.hpp"
#include "slnz/exactmat.hpp"
#include "slnz/finquot.hpp"
#include "slnz/numeric.hpp"
#include "slnz/subgroups.hpp"
#include "slnz/torus.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace slnz {

class CandidateCharacter {
public:
    CandidateCharacter(std::shared_ptr<const GroupBall> domain, std::vector<Complex> values,
                       std::string provenance)
        : domain_(std::move(domain)), values_(std::move(values)),
          provenance_(std::move(provenance)) {
        if (!domain_) throw std::invalid_argument("CandidateCharacter: null domain");
        if (values_.size() != domain_->size())
            throw std::invalid_argument("CandidateCharacter: value map must be total on the ball");
        if (std::abs(values_[0] - Complex(1.0, 0.0)) > 1e-12)
            throw std::invalid_argument("CandidateCharacter: value at identity must be 1");
    }

    int n() const { return domain_->n; }
    const GroupBall& domain() const { return *domain_; }
    std::shared_ptr<const GroupBall> domain_ptr() const { return domain_; }
    const std::vector<Complex>& values() const { return values_; }
    Complex value_at(std::size_t idx) const { return values_[idx]; }
    const std::string& provenance() const { return provenance_; }

private:
    std::shared_ptr<const GroupBall> domain_;
    std::vector<Complex> values_;
    std::string provenance_;
};

struct CentralityReport {
    double max_deviation = 0.0;
    std::size_t pairs_checked = 0;
    std::optional<std::pair<std::size_t, std::size_t>> worst;  // (x, gxg^{-1}) ball indices
    double tol = 0.0;
    bool pass = true;
};

/// For every generator g and every ball element x with g*x*g^{-1} still in
/// the ball, compares the two values.
inline CentralityReport check_central(const CandidateCharacter& c, double tol = 1e-9) {
    CentralityReport rep;
    rep.tol = tol;
    const GroupBall& ball = c.domain();
    auto gens = elementary_generators(ball.n);
    std::vector<std::pair<SLMatrix, SLMatrix>> gen_inv;
    gen_inv.reserve(gens.size());
    for (const auto& g : gens) gen_inv.emplace_back(g, g.inverse());
    struct Local { double dev = -1.0; std::size_t x = 0, y = 0; std::size_t pairs = 0; };
    std::vector<Local> locals(ball.size());
    parallel_for(ball.size(), default_threads(), [&](std::size_t xi) {
        Local& loc = locals[xi];
        for (const auto& [g, ginv] : gen_inv) {
            SLMatrix conj = g * ball.elements[xi] * ginv;
            auto yi = ball.index_of(conj);
            if (!yi) continue;
            ++loc.pairs;
            double dev = std::abs(c.value_at(*yi) - c.value_at(xi));
            if (dev > loc.dev) {
                loc.dev = dev;
                loc.x = xi;
                loc.y = *yi;
            }
        }
    });
    for (const auto& loc : locals) {
        rep.pairs_checked += loc.pairs;
        if (loc.dev > rep.max_deviation) {
            rep.max_deviation = loc.dev;
            rep.worst = {loc.x, loc.y};
        }
    }
    rep.pass = rep.max_deviation <= tol;
    return rep;
}

/// Greedy subset (in ball order) in which every pairwise quotient stays
/// inside the ball, so the full Gram matrix is well defined.
inline std::vector<std::size_t> select_gram_subset(const CandidateCharacter& c,
                                                   std::size_t max_size) {
    const GroupBall& ball = c.domain();
    std::vector<std::size_t> subset;
    std::vector<SLMatrix> inverses;
    for (std::size_t i = 0; i < ball.size() && subset.size() < max_size; ++i) {
        const SLMatrix& cand = ball.elements[i];
        bool ok = true;
        for (const auto& inv : inverses) {
            if (!ball.contains(inv * cand)) { ok = false; break; }
        }
        if (ok) {
            subset.push_back(i);
            inverses.push_back(cand.inverse());
        }
    }
    return subset;
}

struct PsdReport {
    std::size_t subset_size = 0;
    double hermitian_deviation = 0.0;
    double min_eigenvalue = 0.0;
    double tol = 0.0;
    bool hermitian_ok = true;
    bool pass = true;
};

/// Gram matrix G_{ij} = phi(g_j^{-1} g_i) over the subset; checks
/// Hermitian symmetry, then certifies the minimum eigenvalue.
inline PsdReport check_positive_definite(const CandidateCharacter& c,
                                         const std::vector<std::size_t>& subset,
                                         double tol = 1e-8) {
    PsdReport rep;
    rep.tol = tol;
    rep.subset_size = subset.size();
    if (subset.empty()) throw std::invalid_argument("check_positive_definite: empty subset");
    const GroupBall& ball = c.domain();
    const std::size_t k = subset.size();
    std::vector<SLMatrix> inv;
    inv.reserve(k);
    for (std::size_t j = 0; j < k; ++j) inv.push_back(ball.elements[subset[j]].inverse());
    std::vector<Complex> gram(k * k);
    std::vector<char> outside(k, 0);
    parallel_for(k, default_threads(), [&](std::size_t j) {
        for (std::size_t i = 0; i < k; ++i) {
            auto q = ball.index_of(inv[j] * ball.elements[subset[i]]);
            if (!q) { outside[j] = 1; return; }
            gram[j * k + i] = c.value_at(*q);
        }
    });
    for (char o : outside)
        if (o)
            throw std::invalid_argument(
                "check_positive_definite: quotient outside ball (domain too small for subset)");
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            rep.hermitian_deviation = std::max(
                rep.hermitian_deviation, std::abs(gram[i * k + j] - std::conj(gram[j * k + i])));
    rep.hermitian_ok = rep.hermitian_deviation <= tol;
    if (!rep.hermitian_ok) {
        rep.pass = false;
        rep.min_eigenvalue = std::numeric_limits<double>::quiet_NaN();
        return rep;
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i; j < k; ++j) {
            Complex avg = 0.5 * (gram[i * k + j] + std::conj(gram[j * k + i]));
            gram[i * k + j] = avg;
            gram[j * k + i] = std::conj(avg);
        }
    rep.min_eigenvalue = hermitian_eigenvalues(gram, k).front();
    rep.pass = rep.min_eigenvalue >= -tol;
    return rep;
}

/// Values of the candidate on ball ∩ copy, reindexed by the copy's Z^{n-1}
/// coordinates (the free column resp. row entries in index order).
inline SampleMap restrict_to_copy(const CandidateCharacter& c, const CopySpec& copy) {
    const GroupBall& ball = c.domain();
    const int n = ball.n;
    SampleMap samples;
    for (std::size_t idx = 0; idx < ball.size(); ++idx) {
        const SLMatrix& m = ball.elements[idx];
        if (!is_in_copy(m, copy)) continue;
        std::vector<long long> v;
        v.reserve(n - 1);
        int f = copy.index - 1;
        for (int k = 0; k < n; ++k) {
            if (k == f) continue;
            v.push_back(copy.kind == CopySpec::Kind::Column ? to_ll(m(k, f)) : to_ll(m(f, k)));
        }
        samples[std::move(v)] = c.value_at(idx);
    }
    return samples;
}

struct ClassifyOptions {
    long long n_max = 6;        // denominator cap for torus fits
    long long level_cap = 64;   // congruence level search bound
    std::size_t gram_subset = 200;
    double psd_tol = 1e-8;
    double central_tol = 1e-9;
    double fit_tol = 1e-7;
    double atom_tol = 1e-6;
    double vanish_tol = 1e-8;
    double level_tol = 1e-9;
};

struct CopyFitSummary {
    CopySpec copy;
    std::size_t sample_count = 0;
    double t_inf = 0.0;
    double residual = 0.0;
    long long n_max_used = 0;
    bool stabilized = false;  // residual dropped below fit_tol before the cap
};

struct ClassificationReport {
    enum class Verdict { Congruence, Center, Undecided };
    Verdict verdict = Verdict::Undecided;
    long long level = 0;                                    // congruence branch
    std::vector<std::pair<int, Complex>> center_values;     // (+1 -> I, -1 -> -I)
    CentralityReport centrality;
    PsdReport psd;
    std::vector<CopyFitSummary> fits;
    std::string diagnostics;

    static const char* verdict_name(Verdict v) {
        switch (v) {
            case Verdict::Congruence: return "congruence";
            case Verdict::Center: return "center";
            default: return "undecided";
        }
    }
};

namespace detail {

/// Indices of central elements present in the ball, with their sign.
inline std::vector<std::pair<int, std::size_t>> central_elements(const GroupBall& ball) {
    std::vector<std::pair<int, std::size_t>> out;
    out.emplace_back(1, 0);  // identity
    if (ball.n % 2 == 0) {
        IntMatrix neg = IntMatrix::identity(ball.n);
        for (int i = 0; i < ball.n; ++i) neg(i, i) = -1;
        if (auto idx = ball.index_of(SLMatrix(std::move(neg)))) out.emplace_back(-1, *idx);
    }
    return out;
}

/// Smallest level L <= cap such that the candidate is constant on residue
/// classes mod L across the ball, or 0 if none.
inline long long smallest_constancy_level(const CandidateCharacter& c, long long cap,
                                          double tol) {
    const GroupBall& ball = c.domain();
    for (long long level = 1; level <= cap; ++level) {
        bool ok = true;
        if (level == 1) {
            for (std::size_t i = 1; i < ball.size() && ok; ++i)
                if (std::abs(c.value_at(i) - c.value_at(0)) > tol) ok = false;
        } else {
            std::map<std::vector<int64_t>, Complex> first;
            for (std::size_t i = 0; i < ball.size() && ok; ++i) {
                auto key = ball.elements[i].mod_reduce(level).entries();
                auto [it, inserted] = first.emplace(std::move(key), c.value_at(i));
                if (!inserted && std::abs(it->second - c.value_at(i)) > tol) ok = false;
            }
        }
        if (ok) return level;
    }
    return 0;
}

}  // namespace detail

/// The classification driver. Centrality and positive-definiteness are
/// gating preconditions; then every copy V_j and V_j^t is restricted and
/// fitted, escalating the orbit denominator until the residual stabilizes
/// or the cap is reached. The verdict requires all 2n copies to agree;
/// disagreement is surfaced as undecided, never averaged away.
inline ClassificationReport classify(const CandidateCharacter& c,
                                     const ClassifyOptions& opt = {}) {
    ClassificationReport rep;
    const int n = c.n();
    rep.centrality = check_central(c, opt.central_tol);
    rep.psd = check_positive_definite(c, select_gram_subset(c, opt.gram_subset), opt.psd_tol);
    if (!rep.centrality.pass || !rep.psd.pass) {
        rep.diagnostics = !rep.centrality.pass
                              ? "centrality check failed"
                              : (rep.psd.hermitian_ok ? "positive-definiteness check failed"
                                                      : "Gram matrix is not Hermitian");
        return rep;
    }

    std::vector<CopySpec> copies;
    for (int j = 1; j <= n; ++j) {
        copies.push_back(CopySpec::column(j));
        copies.push_back(CopySpec::row(j));
    }
    rep.fits.resize(copies.size(),
                    CopyFitSummary{CopySpec::column(1), 0, 0.0, 0.0, 0, false});
    parallel_for(copies.size(), default_threads(), [&](std::size_t ci) {
        SampleMap samples = restrict_to_copy(c, copies[ci]);
        CopyFitSummary sum;
        sum.copy = copies[ci];
        sum.sample_count = samples.size();
        for (long long cap = 1; cap <= opt.n_max; ++cap) {
            MeasureFit fit = fit_restriction(samples, n - 1, cap);
            sum.t_inf = fit.t_inf;
            sum.residual = fit.residual;
            sum.n_max_used = cap;
            if (fit.residual < opt.fit_tol) {
                sum.stabilized = true;
                break;
            }
        }
        rep.fits[ci] = std::move(sum);
    });

    bool all_atomic = true, all_lebesgue = true;
    std::string offending;
    for (const auto& f : rep.fits) {
        bool atomic = f.stabilized && f.t_inf < opt.atom_tol && f.residual < opt.fit_tol;
        bool lebesgue = f.stabilized && f.t_inf > 1.0 - opt.atom_tol && f.residual < opt.fit_tol;
        if (!atomic && all_atomic) { all_atomic = false; offending = f.copy.name(); }
        if (!lebesgue && all_lebesgue) { all_lebesgue = false; if (offending.empty()) offending = f.copy.name(); }
    }

    if (all_atomic) {
        long long level = detail::smallest_constancy_level(c, opt.level_cap, opt.level_tol);
        if (level == 0) {
            rep.diagnostics = "all restrictions atomic but no congruence level <= cap";
            return rep;
        }
        rep.verdict = ClassificationReport::Verdict::Congruence;
        rep.level = level;
        return rep;
    }
    if (all_lebesgue) {
        auto centrals = detail::central_elements(c.domain());
        std::vector<char> is_central(c.domain().size(), 0);
        for (auto [sign, idx] : centrals) is_central[idx] = 1;
        for (std::size_t i = 0; i < c.domain().size(); ++i) {
            if (is_central[i]) continue;
            if (std::abs(c.value_at(i)) > opt.vanish_tol) {
                rep.diagnostics = "Lebesgue restrictions but candidate does not vanish off the centre";
                return rep;
            }
        }
        rep.verdict = ClassificationReport::Verdict::Center;
        for (auto [sign, idx] : centrals) rep.center_values.emplace_back(sign, c.value_at(idx));
        return rep;
    }
    rep.diagnostics = "copies disagree or fits did not stabilize; first offender: " + offending;
    return rep;
}

/// The trivial extension of a character of the centre: chi on central
/// elements, zero elsewhere on the ball. For odd n the centre is trivial
/// and this is the Dirac function at the identity.
inline CandidateCharacter trivial_extension(std::shared_ptr<const GroupBall> ball,
                                            int chi_minus_one = 1) {
    const int n = ball->n;
    if (n % 2 == 0 && chi_minus_one != 1 && chi_minus_one != -1)
        throw std::invalid_argument("trivial_extension: chi(-I) must be ±1");
    std::vector<Complex> values(ball->size(), 0.0);
    for (auto [sign, idx] : detail::central_elements(*ball))
        values[idx] = sign > 0 ? Complex(1.0, 0.0)
                               : Complex(static_cast<double>(chi_minus_one), 0.0);
    return CandidateCharacter(std::move(ball), std::move(values), "trivial-extension");
}

/// Samples a lifted congruence character on a ball.
inline CandidateCharacter sample_lifted(const LiftedCharacter& lift,
                                        std::shared_ptr<const GroupBall> ball) {
    std::vector<Complex> values(ball->size());
    for (std::size_t i = 0; i < ball->size(); ++i)
        values[i] = lift.evaluate(ball->elements[i]);
    return CandidateCharacter(std::move(ball), std::move(values), "lifted");
}

}  // namespace slnz
