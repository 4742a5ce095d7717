#pragma once

// Verification campaigns: instance generation, the per-mode drivers behind the
// command-line tool, and JSON / CSV report emission.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "charsum/character_sum.hpp"
#include "charsum/characters.hpp"
#include "charsum/error.hpp"
#include "charsum/ff_core.hpp"
#include "charsum/json_io.hpp"
#include "charsum/lfunc.hpp"
#include "charsum/subspace.hpp"

namespace charsum::campaign {

/// SplitMix64. next() adds 0x9E3779B97F4A7C15 to the state and returns
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   z ^ (z >> 31)
/// and uniform(k) is next() % k. Any implementation following these lines
/// reproduces the same instance stream for a given seed.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    std::uint64_t uniform(std::uint64_t k) { return next() % k; }

private:
    std::uint64_t state_;
};

struct Instance {
    AffineSubspace subspace;
    std::vector<MultChar> chars;
};

inline json instance_to_json(const Instance& inst) {
    json j = subspace_to_json(inst.subspace);
    json e = json::array();
    for (const auto& chi : inst.chars) e.push_back(chi.e);
    j["chars"] = e;
    return j;
}

inline Instance instance_from_json(const json& j) {
    Instance inst{subspace_from_json(j), {}};
    for (const auto& e : j.at("chars")) inst.chars.emplace_back(inst.subspace.field(), e.get<std::int64_t>());
    if (inst.chars.size() != inst.subspace.n())
        throw Error(ErrorKind::ConfigInvalid, "instance needs one character exponent per coordinate");
    return inst;
}

/// Uniform (A, b) with A of rank n - d; redraws A until the rank is maximal.
inline AffineSubspace random_subspace(SplitMix64& rng, const Field& f, std::size_t n, std::size_t d) {
    const std::size_t m = n - d;
    while (true) {
        std::vector<FieldElem> a(m * n);
        for (auto& x : a) x = FieldElem{static_cast<std::uint32_t>(rng.uniform(f.q()))};
        std::vector<FieldElem> b(m);
        for (auto& x : b) x = FieldElem{static_cast<std::uint32_t>(rng.uniform(f.q()))};
        Matrix A(m, n, std::move(a));
        if (rank(f, A) == m) return AffineSubspace(f, std::move(A), std::move(b));
    }
}

inline std::vector<MultChar> random_chars(SplitMix64& rng, const Field& f, std::size_t n) {
    if (f.q() < 3) throw Error(ErrorKind::ConfigInvalid, "F_2 has no nontrivial multiplicative characters");
    std::vector<MultChar> out;
    for (std::size_t i = 0; i < n; ++i) out.emplace_back(f, 1 + static_cast<std::int64_t>(rng.uniform(f.units() - 1)));
    return out;
}

/// Random nontrivial characters; on a coin flip the last one is replaced so
/// that the product is trivial, when that keeps it nontrivial.
inline std::vector<MultChar> random_chars_mixed(SplitMix64& rng, const Field& f, std::size_t n) {
    auto chars = random_chars(rng, f, n);
    if (rng.uniform(2) == 0 && n >= 2) {
        std::int64_t rest = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) rest += chars[i].e;
        MultChar last(f, -rest);
        if (!last.trivial()) chars.back() = last;
    }
    return chars;
}

/// Every nontrivial exponent tuple of length n, in lexicographic order.
inline std::vector<std::vector<MultChar>> all_nontrivial_tuples(const Field& f, std::size_t n) {
    std::vector<std::vector<MultChar>> out;
    if (f.q() < 3) return out;
    std::vector<std::uint32_t> e(n, 1);
    while (true) {
        std::vector<MultChar> t;
        for (auto x : e) t.emplace_back(f, x);
        out.push_back(std::move(t));
        std::size_t k = n;
        while (k > 0) {
            if (++e[k - 1] < f.units()) break;
            e[k - 1] = 1;
            --k;
        }
        if (k == 0) break;
    }
    return out;
}

/// Calls fn(L) for every (A, b) with A an m x n matrix of rank m, A and b in lexicographic code order.
template <typename Fn>
void for_each_subspace(const Field& f, std::size_t n, std::size_t m, Fn&& fn) {
    const std::size_t cells = m * n + m;
    std::vector<std::uint32_t> code(cells, 0);
    while (true) {
        std::vector<FieldElem> a(m * n);
        for (std::size_t i = 0; i < m * n; ++i) a[i] = FieldElem{code[i]};
        Matrix A(m, n, std::move(a));
        if (rank(f, A) == m) {
            // all b for this A
            std::vector<FieldElem> b(m);
            std::vector<std::uint32_t> bc(m, 0);
            while (true) {
                for (std::size_t i = 0; i < m; ++i) b[i] = FieldElem{bc[i]};
                fn(AffineSubspace(f, A, b));
                std::size_t k = m;
                while (k > 0) {
                    if (++bc[k - 1] < f.q()) break;
                    bc[k - 1] = 0;
                    --k;
                }
                if (k == 0) break;
            }
        }
        std::size_t k = m * n;
        while (k > 0) {
            if (++code[k - 1] < f.q()) break;
            code[k - 1] = 0;
            --k;
        }
        if (k == 0) break;
    }
}

struct CorpusSpec {
    std::vector<std::uint32_t> primes{3, 5};
    std::size_t max_n = 4;
    std::size_t min_d = 0;
    std::size_t max_d = 2;
    std::uint64_t cost_cap = 1'000'000'000;  // q^{(D_L + extra) d}
    std::size_t extra = 2;
    std::size_t count = 200;
    std::uint64_t seed = 1;
};

struct CorpusEntry {
    Instance instance;
    PositionReport position;
};

/// Seeded random instances that are in general position among their translates
/// and whose power sums S_1..S_{D_L+extra} fit the cost cap.
inline std::vector<CorpusEntry> generate_corpus(const CorpusSpec& spec) {
    SplitMix64 rng(spec.seed);
    std::vector<CorpusEntry> out;
    while (out.size() < spec.count) {
        const Field f = make_field(spec.primes[rng.uniform(spec.primes.size())], 1);
        const std::size_t n = 1 + spec.min_d + rng.uniform(spec.max_n - spec.min_d);
        const std::size_t d = spec.min_d + rng.uniform(std::min(spec.max_d, n - 1) - spec.min_d + 1);
        AffineSubspace L = random_subspace(rng, f, n, d);
        auto chars = random_chars_mixed(rng, f, n);
        PositionReport rep = classify_position(L);
        if (!rep.admissible() || rep.degree < 0) continue;
        const std::uint64_t cost =
            detail::checked_pow(f.q(), (static_cast<std::uint64_t>(rep.degree) + spec.extra) * d, spec.cost_cap);
        if (cost > spec.cost_cap) continue;
        out.push_back({{std::move(L), std::move(chars)}, std::move(rep)});
    }
    return out;
}

// ---------------------------------------------------------------------------

struct CampaignConfig {
    std::string mode = "lfunction";
    std::vector<std::uint32_t> p{3};
    std::vector<std::uint32_t> a{1};
    std::optional<std::size_t> n;
    std::optional<std::size_t> d;
    std::string chars = "random";
    std::string instances = "random:10";
    std::uint64_t seed = 1;
    std::uint64_t cap = kDefaultEnumerationCap;
    std::size_t extra = 2;
    std::string out;
    std::string format = "json";
    unsigned threads = 1;
};

inline json config_to_json(const CampaignConfig& c) {
    json j = {{"mode", c.mode},   {"p", c.p},         {"a", c.a},         {"chars", c.chars},
              {"instances", c.instances}, {"seed", c.seed}, {"cap", c.cap}, {"extra", c.extra},
              {"format", c.format}, {"threads", c.threads}};
    if (c.n) j["n"] = *c.n;
    if (c.d) j["d"] = *c.d;
    if (!c.out.empty()) j["out"] = c.out;
    return j;
}

inline void validate(const CampaignConfig& c) {
    static const std::vector<std::string> modes{"verify-classic", "lfunction", "scan", "census", "param"};
    if (std::find(modes.begin(), modes.end(), c.mode) == modes.end())
        throw Error(ErrorKind::ConfigInvalid, "unknown mode: " + c.mode);
    if (c.format != "json" && c.format != "csv") throw Error(ErrorKind::ConfigInvalid, "format must be json or csv");
    if (c.p.empty() || c.a.empty()) throw Error(ErrorKind::ConfigInvalid, "need at least one p and one a");
    if (c.extra < 1) throw Error(ErrorKind::ConfigInvalid, "extra must be at least 1");
    if (c.n && *c.n < 1) throw Error(ErrorKind::ConfigInvalid, "n must be positive");
    if (c.n && c.d && *c.d >= *c.n) throw Error(ErrorKind::ConfigInvalid, "need d < n");
    if (c.threads < 1) throw Error(ErrorKind::ConfigInvalid, "threads must be positive");
}

/// Reads the keys of a config file over the defaults.
inline CampaignConfig config_from_json(const json& j, CampaignConfig c = {}) {
    try {
        auto as_list = [](const json& v) {
            return v.is_array() ? v.get<std::vector<std::uint32_t>>() : std::vector<std::uint32_t>{v.get<std::uint32_t>()};
        };
        if (j.contains("mode")) c.mode = j["mode"].get<std::string>();
        if (j.contains("p")) c.p = as_list(j["p"]);
        if (j.contains("a")) c.a = as_list(j["a"]);
        if (j.contains("n")) c.n = j["n"].get<std::size_t>();
        if (j.contains("d")) c.d = j["d"].get<std::size_t>();
        if (j.contains("chars")) {
            if (j["chars"].is_array()) {
                std::string s;
                for (const auto& e : j["chars"]) s += (s.empty() ? "" : ",") + std::to_string(e.get<std::int64_t>());
                c.chars = s;
            } else {
                c.chars = j["chars"].get<std::string>();
            }
        }
        if (j.contains("instances")) c.instances = j["instances"].get<std::string>();
        if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("cap")) c.cap = j["cap"].get<std::uint64_t>();
        if (j.contains("extra")) c.extra = j["extra"].get<std::size_t>();
        if (j.contains("out")) c.out = j["out"].get<std::string>();
        if (j.contains("format")) c.format = j["format"].get<std::string>();
        if (j.contains("threads")) c.threads = j["threads"].get<unsigned>();
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ConfigInvalid, e.what());
    }
    return c;
}

inline std::vector<Field> config_fields(const CampaignConfig& c) {
    std::vector<Field> out;
    for (auto p : c.p) {
        for (auto a : c.a) out.push_back(make_field(p, a));
    }
    return out;
}

/// Character tuples for an instance: explicit list, every nontrivial tuple, or seeded random.
inline std::vector<std::vector<MultChar>> chars_for(const CampaignConfig& c, const Field& f, std::size_t n,
                                                    SplitMix64& rng) {
    if (c.chars == "all-nontrivial") return all_nontrivial_tuples(f, n);
    if (c.chars == "random") return {random_chars_mixed(rng, f, n)};
    std::vector<MultChar> out;
    std::stringstream ss(c.chars);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.emplace_back(f, std::stoll(tok));
        } catch (const std::logic_error&) {
            throw Error(ErrorKind::ConfigInvalid, "bad character exponent: " + tok);
        }
    }
    if (out.size() != n)
        throw Error(ErrorKind::ConfigInvalid, "--chars lists " + std::to_string(out.size()) + " exponents, n = " + std::to_string(n));
    return {out};
}

struct Report {
    json rows = json::array();
    json failures = json::array();
    std::vector<std::string> csv_rows;
    std::string csv_header;
    json summary = json::object();

    bool ok() const { return failures.empty(); }

    json to_json(const CampaignConfig& c) const {
        return {{"config", config_to_json(c)}, {"rows", rows}, {"summary", summary}, {"failures", failures}};
    }

    std::string to_csv() const {
        std::string out = csv_header + "\n";
        for (const auto& r : csv_rows) out += r + "\n";
        return out;
    }
};

namespace detail {

inline std::string fmt_double(double x) {
    std::ostringstream os;
    os << std::setprecision(10) << x;
    return os.str();
}

inline std::string weights_cell(const WeightProfile& w) {
    std::string s;
    for (const auto& [weight, c] : w.counts) s += (s.empty() ? "" : ";") + std::to_string(weight) + ":" + std::to_string(c);
    if (!w.unclassified.empty()) s += (s.empty() ? "" : ";") + std::string("?:") + std::to_string(w.unclassified.size());
    return s;
}

inline const char* kInstanceCsvHeader = "q,n,d,classification,D_L,abs_S,bound,margin,weights,status";

/// Runs fn(i) for i in [0, count) on a pool; results land in per-index slots.
inline void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < std::min<std::size_t>(threads, count); ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace detail

/// Outcome of the full pipeline on one instance.
struct PipelineResult {
    PositionReport position;
    std::optional<LPolynomial> lpoly;
    std::optional<WeightProfile> weights;
    std::optional<BoundReport> bounds;
    std::optional<bool> gp_counts_ok;
    std::map<int, std::size_t> gp_counts_expected;
    bool weights_ok = true;
    std::string error;
    std::string error_kind;

    bool failed() const { return !error.empty() || !weights_ok || (gp_counts_ok && !*gp_counts_ok); }
};

/// classify -> l_polynomial -> weight_profile -> verify_bounds (+ root counts in general position).
inline PipelineResult run_pipeline(const Instance& inst, std::size_t extra, std::uint64_t cap,
                                   std::optional<PositionReport> known = std::nullopt) {
    PipelineResult res;
    res.position = known ? *known : classify_position(inst.subspace);
    if (!res.position.admissible()) return res;
    const auto& L = inst.subspace;
    try {
        LPolynomialOptions opts;
        opts.extra = extra;
        opts.sums.enumeration_cap = cap;
        res.lpoly = l_polynomial(L, inst.chars, res.position, opts);
        res.weights = weight_profile(*res.lpoly, L.field().q(), L.d());
        res.weights_ok = res.weights->unclassified.empty() && res.weights->total() == res.lpoly->degree;
        if (res.position.classification == Position::GeneralPosition) {
            const bool trivial = product_char(L.field(), inst.chars).trivial();
            res.gp_counts_expected = general_position_weights(L.n(), L.d(), trivial);
            res.gp_counts_ok = res.weights->counts == res.gp_counts_expected &&
                              res.lpoly->degree == binom(static_cast<std::int64_t>(L.n()) - 1, static_cast<std::int64_t>(L.d()));
        }
        res.bounds = verify_bounds(L, inst.chars, res.position, *res.lpoly);
    } catch (const Error& e) {
        res.error = e.what();
        res.error_kind = std::string(to_string(e.kind()));
    }
    return res;
}

inline json pipeline_to_json(const PipelineResult& r) {
    json j = {{"position", position_to_json(r.position)}};
    if (r.lpoly) j["lpoly"] = lpoly_to_json(*r.lpoly);
    if (r.weights) j["weights"] = weights_to_json(*r.weights);
    if (r.bounds) j["bounds"] = bounds_to_json(*r.bounds);
    if (r.gp_counts_ok) {
        json expected = json::object();
        for (const auto& [w, c] : r.gp_counts_expected) expected[std::to_string(w)] = c;
        j["general_position_counts"] = {{"expected", expected}, {"ok", *r.gp_counts_ok}};
    }
    if (!r.error.empty()) j["error"] = {{"kind", r.error_kind}, {"message", r.error}};
    j["status"] = !r.position.admissible() ? "skipped" : r.failed() ? "failed" : "ok";
    return j;
}

inline std::string pipeline_csv(const Instance& inst, const PipelineResult& r) {
    const auto& L = inst.subspace;
    std::ostringstream os;
    os << L.field().q() << ',' << L.n() << ',' << L.d() << ',' << to_string(r.position.classification) << ','
       << r.position.degree << ',';
    if (r.bounds) {
        os << detail::fmt_double(r.bounds->abs_sum) << ',' << detail::fmt_double(r.bounds->bound) << ','
           << detail::fmt_double(r.bounds->margin) << ',';
    } else {
        os << ",,,";
    }
    os << (r.weights ? detail::weights_cell(*r.weights) : "") << ','
       << (!r.position.admissible() ? "skipped" : r.failed() ? "failed" : "ok");
    return os.str();
}

inline json failure_record(const CampaignConfig& c, json instance, const std::string& what) {
    return {{"mode", c.mode}, {"extra", c.extra}, {"cap", c.cap}, {"instance", std::move(instance)}, {"error", what}};
}

// ---------------------------------------------------------------------------

inline Report run_verify_classic(const CampaignConfig& c) {
    Report rep;
    rep.csv_header = "q,check,cases,passed";
    const std::vector<std::size_t> ns = c.n ? std::vector<std::size_t>{*c.n} : std::vector<std::size_t>{2, 3};
    std::size_t total_cases = 0;
    auto add_row = [&](const Field& f, const std::string& check, std::size_t cases, std::size_t passed) {
        rep.rows.push_back({{"q", f.q()}, {"check", check}, {"cases", cases}, {"passed", passed}});
        rep.csv_rows.push_back(std::to_string(f.q()) + "," + check + "," + std::to_string(cases) + "," + std::to_string(passed));
        total_cases += cases;
    };
    SplitMix64 rng(c.seed);
    for (const Field& f : config_fields(c)) {
        if (f.q() < 3) continue;
        // |G(chi)|^2 = q for every nontrivial chi, for psi_1 and psi_g
        std::size_t cases = 0, passed = 0;
        for (std::uint32_t e = 1; e < f.units(); ++e) {
            for (FieldElem twist : {f.one(), f.generator()}) {
                const MultChar chi(f, e);
                const Cyclotomic g = gauss_sum(chi, AddChar{f, twist});
                const bool ok = (g * conj(g) - Cyclotomic::integer(g.order(), f.q())).is_zero();
                ++cases;
                if (ok) ++passed;
                else rep.failures.push_back(failure_record(c, {{"field", field_to_json(f)}, {"e", e}, {"psi", twist.code}},
                                                           "G(chi) conj(G(chi)) != q"));
            }
        }
        add_row(f, "gauss-modulus", cases, passed);

        for (std::size_t n : ns) {
            if (n < 2) continue;
            cases = passed = 0;
            std::size_t h_cases = 0, h_passed = 0, r_cases = 0, r_passed = 0;
            for (const auto& chars : all_nontrivial_tuples(f, n)) {
                json ej = json::array();
                for (const auto& chi : chars) ej.push_back(chi.e);
                ++cases;
                if (jacobi_sum(chars) == jacobi_via_gauss(chars)) ++passed;
                else rep.failures.push_back(failure_record(c, {{"field", field_to_json(f)}, {"chars", ej}}, "Jacobi-Gauss identity"));

                // x_1 + ... + x_n = 1 and one random general-position hyperplane
                std::vector<FieldElem> ones(n, f.one());
                std::vector<AffineSubspace> planes{AffineSubspace(f, Matrix(1, n, ones), {f.one()})};
                std::vector<FieldElem> coeffs(n);
                for (auto& x : coeffs) x = FieldElem{static_cast<std::uint32_t>(1 + rng.uniform(f.units()))};
                planes.emplace_back(f, Matrix(1, n, coeffs),
                                    std::vector<FieldElem>{FieldElem{static_cast<std::uint32_t>(1 + rng.uniform(f.units()))}});
                const bool trivial = product_char(f, chars).trivial();
                const double expected = std::pow(static_cast<double>(f.q()), 0.5 * (static_cast<double>(n) - (trivial ? 2 : 1)));
                for (const auto& H : planes) {
                    const Instance inst{H, chars};
                    ++h_cases;
                    const double mod = embed(char_sum(H, chars).value).abs();
                    if (std::abs(mod - expected) <= 1e-9 * expected) ++h_passed;
                    else rep.failures.push_back(failure_record(c, instance_to_json(inst), "hyperplane modulus"));
                    ++r_cases;
                    if (hyperplane_reduction_check(H, chars)) ++r_passed;
                    else rep.failures.push_back(failure_record(c, instance_to_json(inst), "hyperplane change of variables"));
                }
            }
            add_row(f, "jacobi-gauss-n" + std::to_string(n), cases, passed);
            add_row(f, "hyperplane-modulus-n" + std::to_string(n), h_cases, h_passed);
            add_row(f, "hyperplane-reduction-n" + std::to_string(n), r_cases, r_passed);
        }
    }
    rep.summary = {{"cases", total_cases}, {"failures", rep.failures.size()}};
    return rep;
}

inline std::vector<Instance> instances_for(const CampaignConfig& c) {
    std::vector<Instance> out;
    const std::string& src = c.instances;
    SplitMix64 rng(c.seed);
    if (src.rfind("random:", 0) == 0) {
        std::size_t count = 0;
        try {
            count = std::stoull(src.substr(7));
        } catch (const std::logic_error&) {
            throw Error(ErrorKind::ConfigInvalid, "bad instance count in " + src);
        }
        if (!c.n || !c.d) throw Error(ErrorKind::ConfigInvalid, "random instances need --n and --d");
        const auto fields = config_fields(c);
        for (std::size_t i = 0; i < count; ++i) {
            const Field& f = fields[rng.uniform(fields.size())];
            AffineSubspace L = random_subspace(rng, f, *c.n, *c.d);
            for (auto& chars : chars_for(c, f, *c.n, rng)) out.push_back({L, std::move(chars)});
        }
    } else if (src == "exhaustive") {
        if (!c.n || !c.d) throw Error(ErrorKind::ConfigInvalid, "exhaustive instances need --n and --d");
        for (const Field& f : config_fields(c)) {
            for_each_subspace(f, *c.n, *c.n - *c.d, [&](const AffineSubspace& L) {
                for (auto& chars : chars_for(c, f, *c.n, rng)) out.push_back({L, std::move(chars)});
            });
        }
    } else {
        std::ifstream in(src);
        if (!in) throw Error(ErrorKind::ConfigInvalid, "cannot open instance file " + src);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw Error(ErrorKind::ConfigInvalid, std::string("instance file: ") + e.what());
        }
        if (j.is_object() && j.contains("instances")) j = j["instances"];
        if (!j.is_array()) j = json::array({j});
        for (const auto& item : j) out.push_back(instance_from_json(item));
    }
    return out;
}

/// lfunction and scan: the full pipeline on each instance.
inline Report run_instances(const CampaignConfig& c) {
    Report rep;
    rep.csv_header = detail::kInstanceCsvHeader;
    const auto instances = instances_for(c);
    std::vector<PipelineResult> results(instances.size());
    detail::parallel_for(instances.size(), c.threads,
                         [&](std::size_t i) { results[i] = run_pipeline(instances[i], c.extra, c.cap); });
    std::size_t admissible = 0, general = 0;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const auto& r = results[i];
        json row = pipeline_to_json(r);
        row["index"] = i;
        row["instance"] = instance_to_json(instances[i]);
        rep.rows.push_back(row);
        rep.csv_rows.push_back(pipeline_csv(instances[i], r));
        if (r.position.admissible()) ++admissible;
        if (r.position.classification == Position::GeneralPosition) ++general;
        if (r.failed()) {
            std::string what = r.error;
            if (what.empty()) what = !r.weights_ok ? "unclassified reciprocal roots" : "general-position root counts differ";
            rep.failures.push_back(failure_record(c, instance_to_json(instances[i]), what));
        }
        if (c.mode == "lfunction" && !r.position.admissible())
            rep.failures.push_back(failure_record(c, instance_to_json(instances[i]),
                                                  "NotInPosition: instance is not in general position among its translates"));
    }
    rep.summary = {{"instances", instances.size()},
                   {"admissible", admissible},
                   {"general_position", general},
                   {"failures", rep.failures.size()}};
    return rep;
}

struct CensusCell {
    std::uint64_t systems = 0;
    std::uint64_t general = 0;
    std::uint64_t among_translates = 0;
    std::uint64_t neither = 0;
    std::uint64_t minors_disagree = 0;
    std::uint64_t translates_disagree = 0;
    std::uint64_t degree_violations = 0;
    std::uint64_t general_formula_violations = 0;
    /// over matrices A whose m x m minors are all nonzero: mean fraction of b giving admissible L
    double admissible_fraction = 0.0;
};

/// Exhaustive classifier cross-check for one (q, n, m).
inline CensusCell census_cell(const Field& f, std::size_t n, std::size_t m, json* failures = nullptr,
                              const CampaignConfig* c = nullptr) {
    CensusCell cell;
    const std::size_t d = n - m;
    std::uint64_t generic_a = 0;
    double fraction_sum = 0.0;
    std::vector<FieldElem> current_a;
    std::uint64_t per_a_total = 0, per_a_admissible = 0;
    bool per_a_generic = false;
    auto flush = [&] {
        if (per_a_total > 0 && per_a_generic) {
            ++generic_a;
            fraction_sum += static_cast<double>(per_a_admissible) / static_cast<double>(per_a_total);
        }
        per_a_total = per_a_admissible = 0;
    };
    auto fail = [&](const AffineSubspace& L, const std::string& what) {
        if (failures && c) failures->push_back(failure_record(*c, subspace_to_json(L), what));
    };
    for_each_subspace(f, n, m, [&](const AffineSubspace& L) {
        if (L.A().data() != current_a) {
            flush();
            current_a = L.A().data();
            per_a_generic = true;
            charsum::detail::for_each_subset(n, m, [&](std::span<const std::size_t> cols) {
                Matrix sq(m, m);
                for (std::size_t i = 0; i < m; ++i)
                    for (std::size_t j = 0; j < m; ++j) sq(i, j) = L.A()(i, cols[j]);
                if (determinant(f, std::move(sq)).code == 0) per_a_generic = false;
            });
        }
        ++cell.systems;
        const PositionReport rep = classify_position(L);
        const bool minors = minors_criterion(L);
        const bool translates = translates_criterion(L);
        ++per_a_total;
        switch (rep.classification) {
            case Position::GeneralPosition: ++cell.general; break;
            case Position::GeneralAmongTranslates: ++cell.among_translates; break;
            case Position::Neither: ++cell.neither; break;
        }
        if (rep.admissible()) ++per_a_admissible;
        if (minors != (rep.classification == Position::GeneralPosition)) {
            ++cell.minors_disagree;
            fail(L, "minor criterion disagrees with the classification");
        }
        if (translates != rep.admissible()) {
            ++cell.translates_disagree;
            fail(L, "column-span criterion disagrees with the classification");
        }
        if (rep.admissible() && rep.degree < 0) {
            ++cell.degree_violations;
            fail(L, "negative D_L for an admissible subspace");
        }
        if (rep.classification == Position::GeneralPosition) {
            bool ok = rep.degree == static_cast<std::int64_t>(binom(static_cast<std::int64_t>(n) - 1, static_cast<std::int64_t>(d)));
            for (std::size_t j = 1; j <= d; ++j) ok = ok && rep.a[j - 1] == binom(static_cast<std::int64_t>(n), static_cast<std::int64_t>(j));
            if (!ok) {
                ++cell.general_formula_violations;
                fail(L, "general position but a_j != binom(n, j) or D_L != binom(n-1, d)");
            }
        }
    });
    flush();
    cell.admissible_fraction = generic_a > 0 ? fraction_sum / static_cast<double>(generic_a) : 0.0;
    return cell;
}

inline Report run_census(const CampaignConfig& c) {
    Report rep;
    rep.csv_header = "q,n,d,systems,general,among_translates,neither,minors_disagree,translates_disagree,admissible_fraction";
    const std::size_t max_n = c.n.value_or(3);
    std::uint64_t systems = 0;
    for (const Field& f : config_fields(c)) {
        for (std::size_t n = c.n ? *c.n : 1; n <= max_n; ++n) {
            for (std::size_t d = 0; d < n; ++d) {
                if (c.d && *c.d != d) continue;
                const CensusCell cell = census_cell(f, n, n - d, &rep.failures, &c);
                systems += cell.systems;
                rep.rows.push_back({{"q", f.q()},
                                    {"n", n},
                                    {"d", d},
                                    {"systems", cell.systems},
                                    {"general", cell.general},
                                    {"among_translates", cell.among_translates},
                                    {"neither", cell.neither},
                                    {"minors_disagree", cell.minors_disagree},
                                    {"translates_disagree", cell.translates_disagree},
                                    {"degree_violations", cell.degree_violations},
                                    {"general_formula_violations", cell.general_formula_violations},
                                    {"admissible_fraction", cell.admissible_fraction}});
                std::ostringstream os;
                os << f.q() << ',' << n << ',' << d << ',' << cell.systems << ',' << cell.general << ','
                   << cell.among_translates << ',' << cell.neither << ',' << cell.minors_disagree << ','
                   << cell.translates_disagree << ',' << detail::fmt_double(cell.admissible_fraction);
                rep.csv_rows.push_back(os.str());
            }
        }
    }
    rep.summary = {{"systems", systems}, {"failures", rep.failures.size()}};
    return rep;
}

/// Random rank-d linear form systems over each configured field.
inline LinearFormSystem random_forms(SplitMix64& rng, const Field& f, std::size_t n, std::size_t d) {
    while (true) {
        std::vector<FieldElem> a(n * d);
        for (auto& x : a) x = FieldElem{static_cast<std::uint32_t>(rng.uniform(f.q()))};
        std::vector<FieldElem> b(n);
        for (auto& x : b) x = FieldElem{static_cast<std::uint32_t>(rng.uniform(f.q()))};
        Matrix A(n, d, std::move(a));
        if (rank(f, A) == d) return LinearFormSystem(f, std::move(A), std::move(b));
    }
}

struct ParamCheck {
    ParamSumResult result;
    double abs_value = 0.0;
    double bound = 0.0;
    bool bound_ok = true;
};

inline ParamCheck check_param(const LinearFormSystem& F, std::span<const MultChar> chars, std::uint64_t cap) {
    SumOptions opts;
    opts.enumeration_cap = cap;
    ParamCheck pc{param_sum(F, chars, opts)};
    const ComplexApprox v = embed(pc.result.value);
    pc.abs_value = v.abs();
    if (pc.result.hypothesis_ok) {
        pc.bound = static_cast<double>(pc.result.degree) * std::pow(static_cast<double>(F.field.q()), 0.5 * static_cast<double>(F.d));
        pc.bound_ok = pc.abs_value <= pc.bound + 1e-9 * std::max(1.0, pc.bound) + v.err_bound;
    }
    return pc;
}

inline Report run_param(const CampaignConfig& c) {
    Report rep;
    rep.csv_header = "q,n,d,hypothesis_ok,D_L,abs_value,bound,image_matches,status";
    SplitMix64 rng(c.seed);
    std::vector<std::pair<LinearFormSystem, std::vector<MultChar>>> cases;
    const std::string& src = c.instances;
    if (src.rfind("random:", 0) == 0) {
        if (!c.n || !c.d) throw Error(ErrorKind::ConfigInvalid, "param mode needs --n and --d");
        const std::size_t count = std::stoull(src.substr(7));
        const auto fields = config_fields(c);
        for (std::size_t i = 0; i < count; ++i) {
            const Field& f = fields[rng.uniform(fields.size())];
            LinearFormSystem F = random_forms(rng, f, *c.n, *c.d);
            for (auto& chars : chars_for(c, f, *c.n, rng)) cases.emplace_back(F, std::move(chars));
        }
    } else {
        std::ifstream in(src);
        if (!in) throw Error(ErrorKind::ConfigInvalid, "cannot open instance file " + src);
        json j;
        in >> j;
        if (!j.is_array()) j = json::array({j});
        for (const auto& item : j) {
            LinearFormSystem F = forms_from_json(item);
            std::vector<MultChar> chars;
            for (const auto& e : item.at("chars")) chars.emplace_back(F.field, e.get<std::int64_t>());
            cases.emplace_back(std::move(F), std::move(chars));
        }
    }
    std::vector<std::optional<ParamCheck>> results(cases.size());
    std::vector<std::string> errors(cases.size());
    detail::parallel_for(cases.size(), c.threads, [&](std::size_t i) {
        try {
            results[i] = check_param(cases[i].first, cases[i].second, c.cap);
        } catch (const Error& e) {
            errors[i] = e.what();
        }
    });
    std::size_t satisfied = 0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto& [F, chars] = cases[i];
        json inst = forms_to_json(F);
        json ej = json::array();
        for (const auto& chi : chars) ej.push_back(chi.e);
        inst["chars"] = ej;
        json row = {{"index", i}, {"instance", inst}};
        std::ostringstream os;
        os << F.field.q() << ',' << F.n() << ',' << F.d << ',';
        if (!results[i]) {
            row["error"] = errors[i];
            row["status"] = "failed";
            rep.failures.push_back(failure_record(c, inst, errors[i]));
            os << ",,,,,failed";
        } else {
            const auto& pc = *results[i];
            const bool ok = pc.result.image_matches && pc.bound_ok;
            if (pc.result.hypothesis_ok) ++satisfied;
            row["hypothesis_ok"] = pc.result.hypothesis_ok;
            row["a"] = pc.result.a;
            row["D_L"] = pc.result.degree;
            row["value"] = cyclotomic_to_json(pc.result.value);
            row["abs_value"] = pc.abs_value;
            row["bound"] = pc.bound;
            row["image_matches"] = pc.result.image_matches;
            row["status"] = ok ? "ok" : "failed";
            if (!pc.result.image_matches) rep.failures.push_back(failure_record(c, inst, "parametrized sum differs from the image-subspace sum"));
            if (!pc.bound_ok) rep.failures.push_back(failure_record(c, inst, "parametrized sum exceeds D_L q^{d/2}"));
            os << (pc.result.hypothesis_ok ? "true" : "false") << ',' << pc.result.degree << ','
               << detail::fmt_double(pc.abs_value) << ',' << detail::fmt_double(pc.bound) << ','
               << (pc.result.image_matches ? "true" : "false") << ',' << (ok ? "ok" : "failed");
        }
        rep.rows.push_back(row);
        rep.csv_rows.push_back(os.str());
    }
    rep.summary = {{"instances", cases.size()}, {"hypothesis_satisfied", satisfied}, {"failures", rep.failures.size()}};
    return rep;
}

inline Report run(const CampaignConfig& c) {
    validate(c);
    if (c.mode == "verify-classic") return run_verify_classic(c);
    if (c.mode == "census") return run_census(c);
    if (c.mode == "param") return run_param(c);
    return run_instances(c);
}

}  // namespace charsum::campaign
