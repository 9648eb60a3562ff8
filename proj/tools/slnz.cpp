// Command-line front end. Every subcommand emits JSON (or JSON-lines) with
// the run configuration embedded, so artifacts are reproducible from their
// own metadata. Exit codes: 0 success, 2 verification failure, 3 resource
// cap exceeded, 4 input error.

#include "slnz/json_io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>

using namespace slnz;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerification = 2;
constexpr int kExitResourceCap = 3;
constexpr int kExitInput = 4;

struct GlobalConfig {
    uint64_t seed = 0;
    unsigned threads = 0;            // 0 = hardware default
    std::size_t cap = 10'000'000;    // element cap for enumerations
    std::string out;                 // empty = stdout
};

Json config_json(const GlobalConfig& g, const std::string& subcommand, Json extra) {
    Json j;
    j["subcommand"] = subcommand;
    j["seed"] = g.seed;
    j["threads"] = g.threads == 0 ? default_threads() : g.threads;
    j["cap"] = g.cap;
    j["args"] = std::move(extra);
    return j;
}

void emit_text(const GlobalConfig& g, const std::string& text) {
    if (g.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(g.out);
    if (!os) throw std::invalid_argument("cannot open output file: " + g.out);
    os << text;
}

void emit_json(const GlobalConfig& g, const Json& j) { emit_text(g, j.dump(2) + "\n"); }

SLMatrix random_word(int n, int len, std::mt19937_64& rng) {
    auto gens = elementary_generators(n);
    std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
    SLMatrix m = SLMatrix::identity(n);
    for (int i = 0; i < len; ++i) m = m * gens[pick(rng)];
    return m;
}

CandidateCharacter load_candidate(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open candidate file: " + path);
    return read_candidate_jsonl(is);
}

int run_ball(const GlobalConfig& g, int n, int radius, bool adjoin_center) {
    auto ball = ball_enumerate(n, radius, g.cap, adjoin_center);
    Json cfg = config_json(g, "ball",
                           Json{{"n", n}, {"radius", radius}, {"adjoin_center", adjoin_center}});
    std::ostringstream os;
    write_ball_jsonl(os, ball, cfg);
    emit_text(g, os.str());
    return kExitOk;
}

int run_decompose(const GlobalConfig& g, int n, const std::string& matrix_json,
                  long long random_count, int wordlen, bool two_factor) {
    Json cfg = config_json(g, "decompose",
                           Json{{"n", n},
                                {"random", random_count},
                                {"wordlen", wordlen},
                                {"two_factor", two_factor}});
    if (random_count > 0) {
        std::mt19937_64 rng(g.seed);
        long long verified = 0;
        std::size_t max_digits = 0;
        for (long long i = 0; i < random_count; ++i) {
            auto gamma = random_word(n, wordlen, rng);
            BigInt max_entry = 0;
            if (two_factor) {
                auto w = decompose_two_factor(gamma);
                max_entry = std::max({w.conjugator.mat().max_abs_entry(),
                                      w.g1.mat().max_abs_entry(), w.g2.mat().max_abs_entry()});
            } else {
                auto w = decompose(gamma);
                max_entry = std::max({w.conjugator.mat().max_abs_entry(),
                                      w.g1.mat().max_abs_entry(), w.g2.mat().max_abs_entry(),
                                      w.g3.mat().max_abs_entry()});
            }
            ++verified;  // decompose throws on any failed self-check
            max_digits = std::max(max_digits, max_entry.str().size());
        }
        Json j;
        j["count"] = random_count;
        j["verified"] = verified;
        j["max_entry_digits"] = max_digits;
        j["config"] = cfg;
        emit_json(g, j);
        return kExitOk;
    }
    if (matrix_json.empty())
        throw std::invalid_argument("decompose: provide --matrix or --random");
    SLMatrix gamma = sl_matrix_from_json(Json::parse(matrix_json));
    if (n != 0 && gamma.dim() != n)
        throw std::invalid_argument("decompose: --n disagrees with the matrix dimension");
    if (two_factor)
        emit_json(g, witness_to_json(decompose_two_factor(gamma), cfg));
    else
        emit_json(g, witness_to_json(decompose(gamma), cfg));
    return kExitOk;
}

int run_chartab(const GlobalConfig& g, int n, long long mod, const std::string& csv_path) {
    auto grp = std::make_shared<FiniteGroup>(enumerate_group(n, mod, g.cap));
    auto table = character_table(grp, conjugacy_classes(*grp));
    Json cfg = config_json(g, "chartab", Json{{"n", n}, {"mod", mod}});
    emit_json(g, character_table_to_json(table, cfg));
    if (!csv_path.empty()) {
        std::ofstream os(csv_path);
        if (!os) throw std::invalid_argument("cannot open csv file: " + csv_path);
        write_character_table_csv(os, table);
    }
    return kExitOk;
}

int run_lift(const GlobalConfig& g, int n, long long mod, std::size_t row, int radius,
             bool adjoin_center) {
    auto grp = std::make_shared<FiniteGroup>(enumerate_group(n, mod, g.cap));
    auto table = character_table(grp, conjugacy_classes(*grp));
    auto ball = std::make_shared<GroupBall>(ball_enumerate(n, radius, g.cap, adjoin_center));
    auto cand = sample_lifted(lift_character(table, row), ball);
    Json cfg = config_json(g, "lift",
                           Json{{"n", n}, {"mod", mod}, {"row", row}, {"radius", radius}});
    std::ostringstream os;
    write_candidate_jsonl(os, cand, cfg);
    emit_text(g, os.str());
    return kExitOk;
}

int run_tits(const GlobalConfig& g, int n, long long base, long long mod) {
    auto rep = tits_containment_check(n, base, mod, g.cap);
    Json cfg = config_json(g, "tits-check", Json{{"n", n}, {"base", base}, {"mod", mod}});
    emit_json(g, tits_report_to_json(rep, cfg));
    return rep.contained || rep.vacuous ? kExitOk : kExitVerification;
}

int run_torus_orbits(const GlobalConfig& g, int m, long long denominator) {
    auto orbits = finite_orbits(m, denominator, g.cap);
    Json cfg = config_json(g, "torus-orbits", Json{{"m", m}, {"denominator", denominator}});
    emit_json(g, orbits_to_json(m, denominator, orbits, cfg));
    return kExitOk;
}

int run_fit(const GlobalConfig& g, const std::string& samples_path, long long n_max) {
    std::ifstream is(samples_path);
    if (!is) throw std::invalid_argument("cannot open samples file: " + samples_path);
    Json j = Json::parse(is);
    int m = 0;
    SampleMap samples = samples_from_json(j, m);
    auto fit = fit_restriction(samples, m, n_max, g.cap);
    Json cfg = config_json(g, "fit", Json{{"samples", samples_path}, {"nmax", n_max}});
    emit_json(g, fit_to_json(fit, cfg));
    return kExitOk;
}

int run_classify(const GlobalConfig& g, const std::string& candidate_path,
                 const ClassifyOptions& opt, bool strict) {
    auto cand = load_candidate(candidate_path);
    auto rep = classify(cand, opt);
    Json cfg = config_json(g, "classify",
                           Json{{"candidate", candidate_path},
                                {"nmax", opt.n_max},
                                {"level_cap", opt.level_cap},
                                {"strict", strict}});
    emit_json(g, classification_to_json(rep, cfg));
    if (strict && rep.verdict == ClassificationReport::Verdict::Undecided)
        return kExitVerification;
    return kExitOk;
}

int run_verify(const GlobalConfig& g, const std::string& candidate_path,
               const std::string& checks, std::size_t gram_subset, double central_tol,
               double psd_tol) {
    auto cand = load_candidate(candidate_path);
    bool want_central = checks.find("central") != std::string::npos;
    bool want_psd = checks.find("psd") != std::string::npos;
    if (!want_central && !want_psd)
        throw std::invalid_argument("verify: --check must name central and/or psd");
    Json j;
    bool ok = true;
    if (want_central) {
        auto rep = check_central(cand, central_tol);
        j["central"] = centrality_report_to_json(rep);
        ok = ok && rep.pass;
    }
    if (want_psd) {
        auto rep = check_positive_definite(cand, select_gram_subset(cand, gram_subset), psd_tol);
        j["psd"] = psd_report_to_json(rep);
        ok = ok && rep.pass;
    }
    j["pass"] = ok;
    j["config"] = config_json(g, "verify",
                              Json{{"candidate", candidate_path}, {"check", checks}});
    emit_json(g, j);
    return ok ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
    GlobalConfig g;
    if (const char* env = std::getenv("SLNZ_CAP_ELEMENTS")) g.cap = std::strtoull(env, nullptr, 10);
    if (const char* env = std::getenv("SLNZ_THREADS"))
        g.threads = static_cast<unsigned>(std::strtoul(env, nullptr, 10));

    CLI::App app{"slnz: exact computations around SL_n(Z) — subgroup patterns, conjugation "
                 "decompositions, congruence character tables, torus orbit measures, and "
                 "candidate-character classification"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may trail the subcommand
    app.add_option("--seed", g.seed, "seed for all randomized subcommands");
    app.add_option("--threads", g.threads, "worker threads (0 = hardware default)");
    app.add_option("--cap-elements", g.cap, "cap for group/ball/torus enumerations");
    app.add_option("--out", g.out, "output path (default: stdout)");

    // ball
    auto* ball = app.add_subcommand("ball", "enumerate a word-length ball over the elementary generators");
    int ball_n = 3, ball_radius = 2;
    bool ball_center = false;
    ball->add_option("--n", ball_n, "matrix dimension")->required();
    ball->add_option("--radius", ball_radius, "word-length radius")->required();
    ball->add_flag("--adjoin-center", ball_center, "also include -1 times the ball (even n)");

    // decompose
    auto* dec = app.add_subcommand("decompose", "conjugation decomposition into normalizer factors");
    int dec_n = 3, dec_wordlen = 20;
    long long dec_random = 0;
    std::string dec_matrix;
    bool dec_two = false;
    dec->add_option("--n", dec_n, "matrix dimension");
    dec->add_option("--matrix", dec_matrix, "matrix as JSON {n, entries}");
    dec->add_option("--random", dec_random, "decompose this many random words instead");
    dec->add_option("--wordlen", dec_wordlen, "length of random words");
    dec->add_flag("--two-factor", dec_two, "two-factor form (requires n >= 4)");

    // chartab
    auto* ct = app.add_subcommand("chartab", "character table of SL_n(Z/N)");
    int ct_n = 2;
    long long ct_mod = 2;
    std::string ct_csv;
    ct->add_option("--n", ct_n, "matrix dimension")->required();
    ct->add_option("--mod", ct_mod, "modulus N")->required();
    ct->add_option("--csv", ct_csv, "also write a CSV view to this path");

    // lift
    auto* lf = app.add_subcommand("lift", "sample a lifted irreducible character on a ball");
    int lf_n = 3, lf_radius = 3;
    long long lf_mod = 2;
    std::size_t lf_row = 0;
    bool lf_center = false;
    lf->add_option("--n", lf_n, "matrix dimension")->required();
    lf->add_option("--mod", lf_mod, "modulus N")->required();
    lf->add_option("--row", lf_row, "table row of the character")->required();
    lf->add_option("--radius", lf_radius, "ball radius to sample on");
    lf->add_flag("--adjoin-center", lf_center, "sample on the center-adjoined ball (even n)");

    // tits-check
    auto* tc = app.add_subcommand("tits-check", "containment of the reduction kernel in the "
                                                "subgroup generated by N-th generator powers");
    int tc_n = 3;
    long long tc_base = 2, tc_mod = 8;
    tc->add_option("--n", tc_n, "matrix dimension")->required();
    tc->add_option("--base", tc_base, "power N of the generators")->required();
    tc->add_option("--mod", tc_mod, "working modulus M (multiple of N^2)")->required();

    // torus-orbits
    auto* to = app.add_subcommand("torus-orbits", "finite orbits on (Q/Z)^m at a denominator");
    int to_m = 2;
    long long to_denom = 2;
    to->add_option("--m", to_m, "torus dimension")->required();
    to->add_option("--denominator", to_denom, "denominator N")->required();

    // fit
    auto* ft = app.add_subcommand("fit", "convex fit of samples against orbit transforms");
    std::string ft_samples;
    long long ft_nmax = 6;
    ft->add_option("--samples", ft_samples, "samples JSON file")->required();
    ft->add_option("--nmax", ft_nmax, "orbit denominator bound");

    // classify
    auto* cl = app.add_subcommand("classify", "classification driver for a candidate character");
    std::string cl_candidate;
    ClassifyOptions cl_opt;
    bool cl_strict = false;
    cl->add_option("--candidate", cl_candidate, "candidate JSONL file")->required();
    cl->add_option("--nmax", cl_opt.n_max, "orbit denominator cap for the fits");
    cl->add_option("--level-cap", cl_opt.level_cap, "congruence level search bound");
    cl->add_option("--gram-subset", cl_opt.gram_subset, "Gram subset size");
    cl->add_option("--fit-tol", cl_opt.fit_tol, "fit residual tolerance");
    cl->add_option("--atom-tol", cl_opt.atom_tol, "atomic/Lebesgue split tolerance");
    cl->add_flag("--strict", cl_strict, "exit 2 when the verdict is undecided");

    // verify
    auto* vf = app.add_subcommand("verify", "run selected checks on a candidate character");
    std::string vf_candidate, vf_checks = "central,psd";
    std::size_t vf_gram = 200;
    double vf_central_tol = 1e-9, vf_psd_tol = 1e-8;
    vf->add_option("--candidate", vf_candidate, "candidate JSONL file")->required();
    vf->add_option("--check", vf_checks, "comma list: central,psd");
    vf->add_option("--gram-subset", vf_gram, "Gram subset size");
    vf->add_option("--central-tol", vf_central_tol, "centrality tolerance");
    vf->add_option("--psd-tol", vf_psd_tol, "eigenvalue tolerance");

    CLI11_PARSE(app, argc, argv);
    configured_threads() = g.threads;

    try {
        if (*ball) return run_ball(g, ball_n, ball_radius, ball_center);
        if (*dec) return run_decompose(g, dec_n, dec_matrix, dec_random, dec_wordlen, dec_two);
        if (*ct) return run_chartab(g, ct_n, ct_mod, ct_csv);
        if (*lf) return run_lift(g, lf_n, lf_mod, lf_row, lf_radius, lf_center);
        if (*tc) return run_tits(g, tc_n, tc_base, tc_mod);
        if (*to) return run_torus_orbits(g, to_m, to_denom);
        if (*ft) return run_fit(g, ft_samples, ft_nmax);
        if (*cl) return run_classify(g, cl_candidate, cl_opt, cl_strict);
        if (*vf) return run_verify(g, vf_candidate, vf_checks, vf_gram, vf_central_tol, vf_psd_tol);
    } catch (const cap_exceeded& e) {
        std::cout << Json{{"error", {{"code", kExitResourceCap}, {"message", e.what()}}}}.dump()
                  << "\n";
        return kExitResourceCap;
    } catch (const Json::exception& e) {
        std::cout << Json{{"error", {{"code", kExitInput}, {"message", e.what()}}}}.dump() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cout << Json{{"error", {{"code", kExitInput}, {"message", e.what()}}}}.dump() << "\n";
        return kExitInput;
    } catch (const std::logic_error& e) {
        // failed witness/table self-verification: a bug surfaced, never silent
        std::cout << Json{{"error", {{"code", kExitVerification}, {"message", e.what()}}}}.dump()
                  << "\n";
        return kExitVerification;
    } catch (const std::exception& e) {
        std::cout << Json{{"error", {{"code", kExitInput}, {"message", e.what()}}}}.dump() << "\n";
        return kExitInput;
    }
    return kExitOk;
}
