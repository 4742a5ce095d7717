#pragma once

// JSON encodings for fields, cyclotomic numbers, characters, subspaces and reports.

#include <nlohmann/json.hpp>

#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "charsum/character_sum.hpp"
#include "charsum/characters.hpp"
#include "charsum/cyclotomic.hpp"
#include "charsum/error.hpp"
#include "charsum/ff_core.hpp"
#include "charsum/lfunc.hpp"
#include "charsum/subspace.hpp"

namespace charsum {

using nlohmann::json;

inline json field_to_json(const Field& f) {
    return {{"p", f.p()}, {"a", f.a()}, {"modulus", f.modulus()}, {"generator", f.generator().code}};
}

/// Rebuilds the field from (p, a) and checks any recorded modulus and generator against it.
inline Field field_from_json(const json& j, std::uint64_t cap = kDefaultFieldCap) {
    if (!j.is_object() || !j.contains("p") || !j.contains("a"))
        throw Error(ErrorKind::ConfigInvalid, "field descriptor needs p and a");
    Field f = make_field(j.at("p").get<std::uint32_t>(), j.at("a").get<std::uint32_t>(), cap);
    if (j.contains("modulus") && j.at("modulus").get<std::vector<std::uint32_t>>() != f.modulus())
        throw Error(ErrorKind::ConfigInvalid, "field modulus differs from the canonical choice");
    if (j.contains("generator") && j.at("generator").get<std::uint32_t>() != f.generator().code)
        throw Error(ErrorKind::ConfigInvalid, "field generator differs from the canonical choice");
    return f;
}

namespace detail {

inline json integer_to_json(const mpz_class& z) {
    if (z.fits_slong_p()) return static_cast<std::int64_t>(z.get_si());
    return z.get_str();
}

inline mpz_class integer_from_json(const json& j) {
    if (j.is_string()) return mpz_class(j.get<std::string>());
    if (j.is_number_unsigned()) return mpz_class(std::to_string(j.get<std::uint64_t>()));
    if (j.is_number_integer()) return mpz_class(std::to_string(j.get<std::int64_t>()));
    throw Error(ErrorKind::ConfigInvalid, "expected an integer");
}

inline json complex_to_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

inline std::vector<FieldElem> elems_from_json(const Field& f, const json& j) {
    std::vector<FieldElem> out;
    for (const auto& x : j) out.push_back(f.elem(x.get<std::uint64_t>()));
    return out;
}

inline json elems_to_json(std::span<const FieldElem> xs) {
    json out = json::array();
    for (FieldElem x : xs) out.push_back(x.code);
    return out;
}

}  // namespace detail

/// {m, coeffs: [[num, den], ...]} on the canonical form; big integers become decimal strings.
inline json cyclotomic_to_json(const Cyclotomic& z) {
    const Cyclotomic c = canonical_form(z);
    json coeffs = json::array();
    for (const auto& x : c.coeffs())
        coeffs.push_back(json::array({detail::integer_to_json(x.get_num()), detail::integer_to_json(x.get_den())}));
    return {{"m", c.order()}, {"coeffs", coeffs}};
}

inline Cyclotomic cyclotomic_from_json(const json& j) {
    const auto m = j.at("m").get<std::uint32_t>();
    std::vector<mpq_class> c;
    for (const auto& pair : j.at("coeffs")) {
        mpq_class x(detail::integer_from_json(pair.at(0)), detail::integer_from_json(pair.at(1)));
        x.canonicalize();
        c.push_back(x);
    }
    return Cyclotomic(m, std::move(c));
}

inline json approx_to_json(const ComplexApprox& z) {
    return {{"re", z.re}, {"im", z.im}, {"abs", z.abs()}, {"err_bound", z.err_bound}};
}

inline json char_to_json(const MultChar& chi) { return {{"field", field_to_json(chi.field)}, {"e", chi.e}}; }

inline MultChar char_from_json(const json& j) { return MultChar(field_from_json(j.at("field")), j.at("e").get<std::int64_t>()); }

inline json subspace_to_json(const AffineSubspace& L) {
    json rows = json::array();
    for (std::size_t i = 0; i < L.m(); ++i) rows.push_back(detail::elems_to_json(L.A().row(i)));
    return {{"field", field_to_json(L.field())}, {"A", rows}, {"b", detail::elems_to_json(L.b())}};
}

inline AffineSubspace subspace_from_json(const json& j) {
    const Field f = field_from_json(j.at("field"));
    const json& rows = j.at("A");
    if (!rows.is_array() || rows.empty()) throw Error(ErrorKind::ConfigInvalid, "A must be a nonempty array of rows");
    const std::size_t m = rows.size();
    const std::size_t n = rows.at(0).size();
    std::vector<FieldElem> data;
    for (const auto& row : rows) {
        if (row.size() != n) throw Error(ErrorKind::ConfigInvalid, "ragged matrix A");
        for (FieldElem x : detail::elems_from_json(f, row)) data.push_back(x);
    }
    return AffineSubspace(f, Matrix(m, n, std::move(data)), detail::elems_from_json(f, j.at("b")));
}

inline json position_to_json(const PositionReport& r) {
    json out = {{"classification", std::string(to_string(r.classification))}, {"a", r.a}, {"D_L", r.degree}};
    if (!r.witness.empty()) {
        json w = json::array();
        for (std::size_t i : r.witness) w.push_back(i + 1);  // coordinates are numbered from 1
        out["witness"] = w;
    }
    return out;
}

inline json char_sum_to_json(const CharSumResult& s) {
    return {{"value", cyclotomic_to_json(s.value)},
            {"approx", approx_to_json(embed(s.value))},
            {"r", s.r},
            {"point_count", s.point_count},
            {"elapsed_seconds", s.elapsed_seconds}};
}

inline json lpoly_to_json(const LPolynomial& P) {
    json coeffs = json::array();
    for (const auto& c : P.coeffs) coeffs.push_back(cyclotomic_to_json(c));
    json sums = json::array();
    for (const auto& s : P.power_sums) sums.push_back(cyclotomic_to_json(s));
    json roots = json::array();
    for (const auto& z : P.roots) roots.push_back(detail::complex_to_json(z));
    return {{"degree", P.degree},
            {"coeffs", coeffs},
            {"power_sums", sums},
            {"roots", roots},
            {"l_exponent", P.l_exponent},
            {"power_sum_sign", P.power_sum_sign},
            {"max_power_sum_deviation", P.max_power_sum_deviation},
            {"integral", P.integral},
            {"elapsed_seconds", P.elapsed_seconds}};
}

inline json weights_to_json(const WeightProfile& w) {
    json counts = json::object();
    for (const auto& [weight, c] : w.counts) counts[std::to_string(weight)] = c;
    json un = json::array();
    for (const auto& z : w.unclassified) un.push_back(detail::complex_to_json(z));
    return {{"counts", counts}, {"unclassified", un}};
}

inline json bounds_to_json(const BoundReport& b) {
    return {{"abs_S", b.abs_sum},
            {"bound", b.bound},
            {"bound_kind", b.bound_kind},
            {"degree_bound", b.degree_bound},
            {"margin", b.margin},
            {"product_trivial", b.product_trivial},
            {"root_sum_deviation", b.root_sum_deviation}};
}

inline json forms_to_json(const LinearFormSystem& F) {
    json forms = json::array();
    for (std::size_t i = 0; i < F.n(); ++i)
        forms.push_back({{"coeffs", detail::elems_to_json(F.coeffs.row(i))}, {"constant", F.constants[i].code}});
    return {{"field", field_to_json(F.field)}, {"d", F.d}, {"forms", forms}};
}

inline LinearFormSystem forms_from_json(const json& j) {
    const Field f = field_from_json(j.at("field"));
    const auto d = j.at("d").get<std::size_t>();
    std::vector<FieldElem> data;
    std::vector<FieldElem> constants;
    for (const auto& form : j.at("forms")) {
        auto row = detail::elems_from_json(f, form.at("coeffs"));
        if (row.size() != d) throw Error(ErrorKind::ConfigInvalid, "form has the wrong number of coefficients");
        data.insert(data.end(), row.begin(), row.end());
        constants.push_back(f.elem(form.at("constant").get<std::uint64_t>()));
    }
    const std::size_t n = constants.size();
    return LinearFormSystem(f, Matrix(n, d, std::move(data)), std::move(constants));
}

}  // namespace charsum
