#pragma once

// JSON import/export for every artifact the toolkit produces. Matrix
// entries travel as decimal strings so arbitrary-precision values survive
// the round trip bit-exactly. Every exporter has a matching loader.

#include "slnz/charcheck.hpp"
#include "slnz/conjdecomp.hpp"
#include "slnz/exactmat.hpp"
#include "slnz/finquot.hpp"
#include "slnz/subgroups.hpp"
#include "slnz/torus.hpp"

#include <json.hpp>

#include <fstream>
#include <memory>
#include <sstream>
#include <string>

namespace slnz {

using Json = nlohmann::ordered_json;

inline Json matrix_to_json(const IntMatrix& m) {
    Json j;
    j["n"] = m.dim();
    Json entries = Json::array();
    for (const auto& e : m.entries()) entries.push_back(e.str());
    j["entries"] = std::move(entries);
    return j;
}

inline Json matrix_to_json(const SLMatrix& m) { return matrix_to_json(m.mat()); }

inline IntMatrix int_matrix_from_json(const Json& j) {
    int n = j.at("n").get<int>();
    IntMatrix m(n);
    const auto& entries = j.at("entries");
    if (entries.size() != static_cast<std::size_t>(n) * n)
        throw std::invalid_argument("matrix JSON: wrong entry count");
    std::size_t idx = 0;
    for (const auto& e : entries) {
        m.entries()[idx++] = BigInt(e.get<std::string>());
    }
    return m;
}

inline SLMatrix sl_matrix_from_json(const Json& j) {
    return SLMatrix(int_matrix_from_json(j));  // validates det = 1
}

inline Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j) {
    return Complex(j.at(0).get<double>(), j.at(1).get<double>());
}

// --- Ball: JSON-lines, one matrix per line with its word length. ---

inline void write_ball_jsonl(std::ostream& os, const GroupBall& ball, const Json& config) {
    Json header;
    header["n"] = ball.n;
    header["radius"] = ball.radius;
    header["size"] = ball.size();
    header["center_adjoined"] = ball.center_adjoined;
    if (!config.is_null()) header["config"] = config;
    os << header.dump() << '\n';
    for (std::size_t i = 0; i < ball.size(); ++i) {
        Json line = matrix_to_json(ball.elements[i]);
        line["word_length"] = ball.word_length[i];
        os << line.dump() << '\n';
    }
}

inline GroupBall read_ball_jsonl(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("ball JSONL: missing header");
    Json header = Json::parse(line);
    GroupBall ball;
    ball.n = header.at("n").get<int>();
    ball.radius = header.at("radius").get<int>();
    ball.center_adjoined = header.value("center_adjoined", false);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        Json j = Json::parse(line);
        ball.insert(sl_matrix_from_json(j), j.at("word_length").get<int>());
    }
    return ball;
}

// --- Candidate characters: header line { n, radius, provenance }, then
// one { matrix, value } line per ball element. ---

inline void write_candidate_jsonl(std::ostream& os, const CandidateCharacter& c,
                                  const Json& config) {
    const GroupBall& ball = c.domain();
    Json header;
    header["n"] = ball.n;
    header["radius"] = ball.radius;
    header["provenance"] = c.provenance();
    header["center_adjoined"] = ball.center_adjoined;
    if (!config.is_null()) header["config"] = config;
    os << header.dump() << '\n';
    for (std::size_t i = 0; i < ball.size(); ++i) {
        Json line;
        line["matrix"] = matrix_to_json(ball.elements[i]);
        line["word_length"] = ball.word_length[i];
        line["value"] = complex_to_json(c.value_at(i));
        os << line.dump() << '\n';
    }
}

inline CandidateCharacter read_candidate_jsonl(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("candidate JSONL: missing header");
    Json header = Json::parse(line);
    auto ball = std::make_shared<GroupBall>();
    ball->n = header.at("n").get<int>();
    ball->radius = header.at("radius").get<int>();
    ball->center_adjoined = header.value("center_adjoined", false);
    std::vector<Complex> values;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        Json j = Json::parse(line);
        ball->insert(sl_matrix_from_json(j.at("matrix")), j.at("word_length").get<int>());
        values.push_back(complex_from_json(j.at("value")));
    }
    if (values.size() != ball->size())
        throw std::invalid_argument("candidate JSONL: duplicate or missing ball elements");
    return CandidateCharacter(std::move(ball), std::move(values),
                              header.value("provenance", std::string("external")));
}

// --- Character tables. The loader returns a detached view: everything the
// JSON carries, without the enumerated group behind it. ---

struct CharacterTableView {
    int n = 0;
    long long N = 0;
    uint64_t order = 0;
    long long exponent = 0;
    long long splitting_prime = 0;
    std::vector<uint64_t> class_sizes;
    std::vector<std::vector<int64_t>> class_reps;  // entry tuples
    std::vector<long long> degrees;
    std::vector<std::vector<Complex>> values;

    bool operator==(const CharacterTableView&) const = default;
};

inline CharacterTableView table_view(const CharacterTable& t) {
    CharacterTableView v;
    v.n = t.n;
    v.N = t.N;
    v.order = t.order;
    v.exponent = t.exponent;
    v.splitting_prime = t.splitting_prime;
    for (std::size_t c = 0; c < t.class_count(); ++c) {
        v.class_sizes.push_back(t.classes.size_of(c));
        v.class_reps.push_back(t.group->element(t.classes.rep[c]).entries());
    }
    v.degrees = t.degrees;
    v.values = t.values;
    return v;
}

inline Json character_table_to_json(const CharacterTableView& v, const Json& config) {
    Json j;
    j["group"] = {{"n", v.n}, {"N", v.N}, {"order", v.order}};
    j["exponent"] = v.exponent;
    j["splitting_prime"] = v.splitting_prime;
    Json classes = Json::array();
    for (std::size_t c = 0; c < v.class_sizes.size(); ++c) {
        Json cls;
        cls["rep"] = Json(v.class_reps[c]);
        cls["size"] = v.class_sizes[c];
        classes.push_back(std::move(cls));
    }
    j["classes"] = std::move(classes);
    j["degrees"] = v.degrees;
    Json chars = Json::array();
    for (const auto& row : v.values) {
        Json r = Json::array();
        for (const auto& z : row) r.push_back(complex_to_json(z));
        chars.push_back(std::move(r));
    }
    j["characters"] = std::move(chars);
    if (!config.is_null()) j["config"] = config;
    return j;
}

inline Json character_table_to_json(const CharacterTable& t, const Json& config) {
    return character_table_to_json(table_view(t), config);
}

inline CharacterTableView character_table_from_json(const Json& j) {
    CharacterTableView v;
    v.n = j.at("group").at("n").get<int>();
    v.N = j.at("group").at("N").get<long long>();
    v.order = j.at("group").at("order").get<uint64_t>();
    v.exponent = j.at("exponent").get<long long>();
    v.splitting_prime = j.at("splitting_prime").get<long long>();
    for (const auto& cls : j.at("classes")) {
        v.class_sizes.push_back(cls.at("size").get<uint64_t>());
        v.class_reps.push_back(cls.at("rep").get<std::vector<int64_t>>());
    }
    v.degrees = j.at("degrees").get<std::vector<long long>>();
    for (const auto& row : j.at("characters")) {
        std::vector<Complex> r;
        for (const auto& z : row) r.push_back(complex_from_json(z));
        v.values.push_back(std::move(r));
    }
    return v;
}

inline void write_character_table_csv(std::ostream& os, const CharacterTable& t) {
    os << "degree";
    for (std::size_t c = 0; c < t.class_count(); ++c)
        os << ",class" << c << "(size " << t.classes.size_of(c) << ")";
    os << '\n';
    os.precision(12);
    for (std::size_t r = 0; r < t.values.size(); ++r) {
        os << t.degrees[r];
        for (const auto& z : t.values[r]) {
            os << ',' << z.real();
            if (z.imag() >= 0) os << '+';
            os << z.imag() << 'i';
        }
        os << '\n';
    }
}

// --- Torus orbits and measure fits. ---

inline Json orbits_to_json(int m, long long N, const std::vector<TorusOrbit>& orbits,
                           const Json& config) {
    Json j;
    j["m"] = m;
    j["N"] = N;
    Json arr = Json::array();
    for (const auto& o : orbits) {
        Json jo;
        jo["size"] = o.size();
        jo["denominator"] = o.denom;
        Json pts = Json::array();
        for (const auto& p : o.points) pts.push_back(Json(p.num));
        jo["points"] = std::move(pts);
        arr.push_back(std::move(jo));
    }
    j["orbits"] = std::move(arr);
    if (!config.is_null()) j["config"] = config;
    return j;
}

inline Json fit_to_json(const MeasureFit& fit, const Json& config) {
    Json j;
    j["m"] = fit.m;
    j["t_inf"] = fit.t_inf;
    Json t = Json::array();
    for (std::size_t i = 0; i < fit.t.size(); ++i) {
        Json e;
        e["orbit_id"] = i;
        e["denominator"] = fit.orbits[i].denom;
        e["size"] = fit.orbits[i].size();
        e["min_point"] = Json(fit.orbits[i].min_point().num);
        e["coeff"] = fit.t[i];
        t.push_back(std::move(e));
    }
    j["t"] = std::move(t);
    j["residual"] = fit.residual;
    j["n_max"] = fit.n_max;
    j["iterations"] = fit.iterations;
    j["converged"] = fit.converged;
    if (!config.is_null()) j["config"] = config;
    return j;
}

/// Rebuilds the fit, recomputing the orbit list and checking it against the
/// stored descriptors.
inline MeasureFit fit_from_json(const Json& j) {
    MeasureFit fit;
    fit.m = j.at("m").get<int>();
    fit.t_inf = j.at("t_inf").get<double>();
    fit.n_max = j.at("n_max").get<long long>();
    fit.residual = j.at("residual").get<double>();
    fit.iterations = j.at("iterations").get<std::size_t>();
    fit.converged = j.at("converged").get<bool>();
    fit.orbits = orbits_up_to_denominator(fit.m, fit.n_max);
    const auto& t = j.at("t");
    if (t.size() != fit.orbits.size())
        throw std::invalid_argument("fit JSON: orbit count mismatch");
    for (std::size_t i = 0; i < fit.orbits.size(); ++i) {
        const auto& e = t.at(i);
        if (e.at("denominator").get<long long>() != fit.orbits[i].denom ||
            e.at("size").get<std::size_t>() != fit.orbits[i].size() ||
            e.at("min_point").get<std::vector<long long>>() != fit.orbits[i].min_point().num)
            throw std::invalid_argument("fit JSON: orbit descriptor mismatch");
        fit.t.push_back(e.at("coeff").get<double>());
    }
    return fit;
}

inline std::vector<TorusOrbit> orbits_from_json(const Json& j, int& m_out, long long& n_out) {
    m_out = j.at("m").get<int>();
    n_out = j.at("N").get<long long>();
    std::vector<TorusOrbit> orbits;
    for (const auto& jo : j.at("orbits")) {
        TorusOrbit o;
        o.m = m_out;
        o.denom = jo.at("denominator").get<long long>();
        for (const auto& pt : jo.at("points")) {
            TorusPoint p;
            p.m = m_out;
            p.denom = o.denom;
            p.num = pt.get<std::vector<long long>>();
            o.points.push_back(std::move(p));
        }
        if (o.points.size() != jo.at("size").get<std::size_t>())
            throw std::invalid_argument("orbit JSON: size mismatch");
        orbits.push_back(std::move(o));
    }
    return orbits;
}

inline SampleMap samples_from_json(const Json& j, int& m_out) {
    m_out = j.at("m").get<int>();
    SampleMap samples;
    for (const auto& s : j.at("samples")) {
        std::vector<long long> v = s.at("v").get<std::vector<long long>>();
        if (static_cast<int>(v.size()) != m_out)
            throw std::invalid_argument("samples JSON: vector dimension mismatch");
        samples[std::move(v)] = complex_from_json(s.at("value"));
    }
    return samples;
}

inline Json samples_to_json(const SampleMap& samples, int m) {
    Json j;
    j["m"] = m;
    Json arr = Json::array();
    for (const auto& [v, val] : samples) {
        Json s;
        s["v"] = Json(v);
        s["value"] = complex_to_json(val);
        arr.push_back(std::move(s));
    }
    j["samples"] = std::move(arr);
    return j;
}

// --- Witnesses and reports. ---

inline Json witness_to_json(const DecompositionWitness& w, const Json& config) {
    Json j;
    j["conjugator"] = matrix_to_json(w.conjugator);
    j["g1"] = matrix_to_json(w.g1);
    j["g2"] = matrix_to_json(w.g2);
    j["g3"] = matrix_to_json(w.g3);
    j["k"] = w.k.str();
    j["l"] = w.l.str();
    j["p"] = w.p.str();
    j["q"] = w.q.str();
    j["step1"] = matrix_to_json(w.step1);
    j["step2"] = matrix_to_json(w.step2);
    j["step3"] = matrix_to_json(w.step3);
    if (!config.is_null()) j["config"] = config;
    return j;
}

inline Json witness_to_json(const TwoFactorWitness& w, const Json& config) {
    Json j;
    j["conjugator"] = matrix_to_json(w.conjugator);
    j["g1"] = matrix_to_json(w.g1);
    j["g2"] = matrix_to_json(w.g2);
    j["k"] = w.k.str();
    j["l"] = w.l.str();
    j["p"] = w.p.str();
    j["q"] = w.q.str();
    if (!config.is_null()) j["config"] = config;
    return j;
}

inline DecompositionWitness witness_from_json(const Json& j) {
    return {sl_matrix_from_json(j.at("conjugator")), sl_matrix_from_json(j.at("g1")),
            sl_matrix_from_json(j.at("g2")),         sl_matrix_from_json(j.at("g3")),
            BigInt(j.at("k").get<std::string>()),    BigInt(j.at("l").get<std::string>()),
            BigInt(j.at("p").get<std::string>()),    BigInt(j.at("q").get<std::string>()),
            sl_matrix_from_json(j.at("step1")),      sl_matrix_from_json(j.at("step2")),
            sl_matrix_from_json(j.at("step3"))};
}

inline TwoFactorWitness two_factor_witness_from_json(const Json& j) {
    return {sl_matrix_from_json(j.at("conjugator")), sl_matrix_from_json(j.at("g1")),
            sl_matrix_from_json(j.at("g2")),         BigInt(j.at("k").get<std::string>()),
            BigInt(j.at("l").get<std::string>()),    BigInt(j.at("p").get<std::string>()),
            BigInt(j.at("q").get<std::string>())};
}

inline Json tits_report_to_json(const TitsReport& r, const Json& config) {
    Json j;
    j["n"] = r.n;
    j["base"] = r.base;
    j["modulus"] = r.modulus;
    j["h_size"] = r.h_size;
    j["kernel_size"] = r.k_size;
    j["contained"] = r.contained;
    j["vacuous"] = r.vacuous;
    j["missing"] = r.missing;
    Json ex = Json::array();
    for (const auto& e : r.missing_examples) ex.push_back(Json(e));
    j["missing_examples"] = std::move(ex);
    if (!config.is_null()) j["config"] = config;
    return j;
}

inline TitsReport tits_report_from_json(const Json& j) {
    TitsReport r;
    r.n = j.at("n").get<int>();
    r.base = j.at("base").get<long long>();
    r.modulus = j.at("modulus").get<long long>();
    r.h_size = j.at("h_size").get<uint64_t>();
    r.k_size = j.at("kernel_size").get<uint64_t>();
    r.contained = j.at("contained").get<bool>();
    r.vacuous = j.at("vacuous").get<bool>();
    r.missing = j.at("missing").get<uint64_t>();
    for (const auto& e : j.at("missing_examples"))
        r.missing_examples.push_back(e.get<std::vector<int64_t>>());
    return r;
}

inline Json centrality_report_to_json(const CentralityReport& r) {
    Json j;
    j["max_deviation"] = r.max_deviation;
    j["pairs_checked"] = r.pairs_checked;
    j["tol"] = r.tol;
    j["pass"] = r.pass;
    if (r.worst) j["worst_pair"] = Json::array({r.worst->first, r.worst->second});
    return j;
}

inline Json psd_report_to_json(const PsdReport& r) {
    Json j;
    j["subset_size"] = r.subset_size;
    j["hermitian_deviation"] = r.hermitian_deviation;
    j["hermitian_ok"] = r.hermitian_ok;
    j["min_eigenvalue"] = r.min_eigenvalue;
    j["tol"] = r.tol;
    j["pass"] = r.pass;
    return j;
}

inline Json classification_to_json(const ClassificationReport& r, const Json& config) {
    Json j;
    j["verdict"] = ClassificationReport::verdict_name(r.verdict);
    if (r.verdict == ClassificationReport::Verdict::Congruence) j["level"] = r.level;
    if (r.verdict == ClassificationReport::Verdict::Center) {
        Json cv = Json::array();
        for (const auto& [sign, val] : r.center_values) {
            Json e;
            e["central_element"] = sign > 0 ? "I" : "-I";
            e["value"] = complex_to_json(val);
            cv.push_back(std::move(e));
        }
        j["center_values"] = std::move(cv);
    }
    j["centrality"] = centrality_report_to_json(r.centrality);
    j["psd"] = psd_report_to_json(r.psd);
    Json fits = Json::array();
    for (const auto& f : r.fits) {
        Json e;
        e["copy"] = f.copy.name();
        e["samples"] = f.sample_count;
        e["t_inf"] = f.t_inf;
        e["residual"] = f.residual;
        e["n_max_used"] = f.n_max_used;
        e["stabilized"] = f.stabilized;
        fits.push_back(std::move(e));
    }
    j["fits"] = std::move(fits);
    if (!r.diagnostics.empty()) j["diagnostics"] = r.diagnostics;
    if (!config.is_null()) j["config"] = config;
    return j;
}

inline CentralityReport centrality_report_from_json(const Json& j) {
    CentralityReport r;
    r.max_deviation = j.at("max_deviation").get<double>();
    r.pairs_checked = j.at("pairs_checked").get<std::size_t>();
    r.tol = j.at("tol").get<double>();
    r.pass = j.at("pass").get<bool>();
    if (j.contains("worst_pair"))
        r.worst = {j["worst_pair"].at(0).get<std::size_t>(),
                   j["worst_pair"].at(1).get<std::size_t>()};
    return r;
}

inline PsdReport psd_report_from_json(const Json& j) {
    PsdReport r;
    r.subset_size = j.at("subset_size").get<std::size_t>();
    r.hermitian_deviation = j.at("hermitian_deviation").get<double>();
    r.hermitian_ok = j.at("hermitian_ok").get<bool>();
    // a failed-fast Gram stores NaN, which JSON renders as null
    r.min_eigenvalue = j.at("min_eigenvalue").is_null()
                           ? std::numeric_limits<double>::quiet_NaN()
                           : j.at("min_eigenvalue").get<double>();
    r.tol = j.at("tol").get<double>();
    r.pass = j.at("pass").get<bool>();
    return r;
}

inline ClassificationReport classification_from_json(const Json& j) {
    ClassificationReport r;
    std::string verdict = j.at("verdict").get<std::string>();
    if (verdict == "congruence") {
        r.verdict = ClassificationReport::Verdict::Congruence;
        r.level = j.at("level").get<long long>();
    } else if (verdict == "center") {
        r.verdict = ClassificationReport::Verdict::Center;
        for (const auto& e : j.at("center_values"))
            r.center_values.emplace_back(
                e.at("central_element").get<std::string>() == "I" ? 1 : -1,
                complex_from_json(e.at("value")));
    }
    r.centrality = centrality_report_from_json(j.at("centrality"));
    r.psd = psd_report_from_json(j.at("psd"));
    for (const auto& e : j.at("fits")) {
        CopyFitSummary f{CopySpec::column(1), 0, 0.0, 0.0, 0, false};
        std::string name = e.at("copy").get<std::string>();
        bool row_kind = name.size() >= 2 && name.substr(name.size() - 2) == "^t";
        int index = std::stoi(name.substr(2, name.size() - (row_kind ? 4 : 2)));
        f.copy = row_kind ? CopySpec::row(index) : CopySpec::column(index);
        f.sample_count = e.at("samples").get<std::size_t>();
        f.t_inf = e.at("t_inf").get<double>();
        f.residual = e.at("residual").get<double>();
        f.n_max_used = e.at("n_max_used").get<long long>();
        f.stabilized = e.at("stabilized").get<bool>();
        r.fits.push_back(std::move(f));
    }
    if (j.contains("diagnostics")) r.diagnostics = j["diagnostics"].get<std::string>();
    return r;
}

}  // namespace slnz
