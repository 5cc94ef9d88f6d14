#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "pba/errors.hpp"
#include "pba/horn_tarski.hpp"
#include "pba/polytope.hpp"
#include "pba/ppt.hpp"
#include "pba/quantum.hpp"

namespace pba {

using Json = nlohmann::json;

inline constexpr const char* kSchema = "pba-extend/1";

// ---------------------------------------------------------------------------
// Scalar parsing per arithmetic mode

inline Rat json_to_rational(const Json& v) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rat(v.get<long long>());
    if (v.is_number())
        throw ParseError("exact mode needs \"num/den\" or decimal strings, got a float: " + v.dump());
    throw ParseError("cannot read a rational from " + v.dump());
}

inline double json_to_double(const Json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return to_double(parse_rational(v.get<std::string>()));
    throw ParseError("cannot read a number from " + v.dump());
}

template <class Q>
Q json_to_scalar(const Json& v);
template <>
inline Rat json_to_scalar<Rat>(const Json& v) { return json_to_rational(v); }
template <>
inline double json_to_scalar<double>(const Json& v) { return json_to_double(v); }

template <class Q>
Json scalar_to_json(const Q& v);
template <>
inline Json scalar_to_json<Rat>(const Rat& v) { return rational_to_string(v); }
template <>
inline Json scalar_to_json<double>(const double& v) { return v; }

// ---------------------------------------------------------------------------
// PPT documents

struct GeneratorNames {
    std::vector<std::string> names;

    int index_of(const std::string& name) const {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return static_cast<int>(i);
        throw ParseError("unknown generator '" + name + "'");
    }
};

struct PptDocument {
    bool exact = true;
    GeneratorNames generators;
    std::optional<Ppt<Rat>> exact_ppt;
    std::optional<Ppt<double>> float_ppt;
};

namespace detail {

inline std::uint32_t parse_atom_key(const std::string& key, int arity) {
    if (static_cast<int>(key.size()) != arity)
        throw ParseError("atom key '" + key + "' does not match the context size");
    std::uint32_t atom = 0;
    for (int j = 0; j < arity; ++j) {
        if (key[j] == '1')
            atom |= std::uint32_t(1) << j;
        else if (key[j] != '0')
            throw ParseError("atom key '" + key + "' must be a bitstring");
    }
    return atom;
}

inline std::string atom_key(std::uint32_t atom, int arity) {
    std::string key(arity, '0');
    for (int j = 0; j < arity; ++j)
        if ((atom >> j) & 1u) key[j] = '1';
    return key;
}

/// "A1&A3" -> sorted generator indices.
inline std::vector<int> parse_conjunction(const std::string& expr, const GeneratorNames& names) {
    std::vector<int> gens;
    std::size_t pos = 0;
    while (pos != std::string::npos) {
        auto amp = expr.find('&', pos);
        std::string tok = expr.substr(pos, amp == std::string::npos ? amp : amp - pos);
        auto from = tok.find_first_not_of(" \t");
        auto to = tok.find_last_not_of(" \t");
        if (from == std::string::npos) throw ParseError("empty generator name in '" + expr + "'");
        gens.push_back(names.index_of(tok.substr(from, to - from + 1)));
        pos = amp == std::string::npos ? amp : amp + 1;
    }
    std::sort(gens.begin(), gens.end());
    if (std::adjacent_find(gens.begin(), gens.end()) != gens.end())
        throw ParseError("repeated generator in '" + expr + "'");
    return gens;
}

template <class Q>
Ppt<Q> parse_typed_ppt(const Json& doc, const GeneratorNames& names) {
    std::vector<Context> contexts;
    for (const auto& ctx : doc.at("contexts")) {
        std::vector<int> gens;
        for (const auto& g : ctx) gens.push_back(names.index_of(g.get<std::string>()));
        contexts.push_back(Context(gens));
    }
    Pba pba(static_cast<int>(names.names.size()), contexts);

    std::vector<std::optional<Measure<Q>>> measures(contexts.size());
    for (const auto& m : doc.at("measures")) {
        std::vector<int> gens;
        for (const auto& g : m.at("context")) gens.push_back(names.index_of(g.get<std::string>()));
        Context ctx(gens);
        int which = -1;
        for (std::size_t i = 0; i < contexts.size(); ++i)
            if (contexts[i] == ctx) which = static_cast<int>(i);
        if (which < 0) throw ParseError("measure for unknown context {" + ctx.label(&names.names) + "}");
        int k = ctx.arity();
        if (m.contains("atoms")) {
            std::vector<Q> w(std::size_t(1) << k, Q(0));
            for (const auto& [key, val] : m.at("atoms").items())
                w[parse_atom_key(key, k)] = json_to_scalar<Q>(val);
            measures[which] = Measure<Q>::from_weights(k, std::move(w));
        } else if (m.contains("intersections")) {
            std::vector<Q> values(std::size_t(1) << k, Q(0));
            std::vector<bool> seen(values.size(), false);
            values[0] = Q(1);
            seen[0] = true;
            for (const auto& [key, val] : m.at("intersections").items()) {
                auto gset = parse_conjunction(key, names);
                std::uint32_t mask = 0;
                for (int g : gset) mask |= std::uint32_t(1) << ctx.local_index(g);
                values[mask] = json_to_scalar<Q>(val);
                seen[mask] = true;
            }
            for (std::size_t i = 0; i < seen.size(); ++i)
                if (!seen[i]) throw MissingValue("intersection value missing for context {" +
                                                 ctx.label(&names.names) + "}");
            measures[which] = measure_from_intersections<Q>(k, values);
        } else {
            throw ParseError("measure needs either \"atoms\" or \"intersections\"");
        }
    }
    State<Q> state;
    for (std::size_t i = 0; i < contexts.size(); ++i) {
        if (!measures[i])
            throw ParseError("no measure given for context {" + contexts[i].label(&names.names) + "}");
        state.measures.push_back(std::move(*measures[i]));
    }
    return Ppt<Q>{pba, state};
}

}  // namespace detail

inline PptDocument parse_ppt_document(const Json& doc) {
    if (!doc.is_object()) throw ParseError("document root must be an object");
    if (doc.value("schema", std::string(kSchema)) != kSchema)
        throw ParseError("unsupported schema: " + doc.value("schema", std::string()));
    PptDocument out;
    std::string arith = doc.value("arithmetic", std::string("exact"));
    if (arith != "exact" && arith != "float") throw ParseError("arithmetic must be exact or float");
    out.exact = arith == "exact";
    for (const auto& g : doc.at("generators")) out.generators.names.push_back(g.get<std::string>());
    {
        auto sorted = out.generators.names;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw ParseError("generator names must be distinct");
    }
    if (out.exact)
        out.exact_ppt = detail::parse_typed_ppt<Rat>(doc, out.generators);
    else
        out.float_ppt = detail::parse_typed_ppt<double>(doc, out.generators);
    return out;
}

template <class Q>
Json measure_to_json(const Measure<Q>& m) {
    Json atoms = Json::object();
    for (std::uint32_t a = 0; a < m.atom_capacity(); ++a)
        if (!scalar_traits<Q>::is_zero(m.weight(a)))
            atoms[detail::atom_key(a, m.arity())] = scalar_to_json<Q>(m.weight(a));
    return atoms;
}

template <class Q>
Json ppt_to_json(const Ppt<Q>& ppt, const GeneratorNames& names) {
    Json doc;
    doc["schema"] = kSchema;
    doc["arithmetic"] = scalar_traits<Q>::is_exact ? "exact" : "float";
    doc["generators"] = names.names;
    Json ctxs = Json::array();
    Json measures = Json::array();
    for (std::size_t i = 0; i < ppt.pba.contexts.size(); ++i) {
        Json ctx = Json::array();
        for (auto g : ppt.pba.contexts[i].gens) ctx.push_back(names.names[g]);
        ctxs.push_back(ctx);
        Json m;
        m["context"] = ctx;
        m["atoms"] = measure_to_json(ppt.state.measures[i]);
        measures.push_back(m);
    }
    doc["contexts"] = ctxs;
    doc["measures"] = measures;
    return doc;
}

// ---------------------------------------------------------------------------
// Quantum documents

inline CMatrix parse_matrix(const Json& doc, int dim) {
    CMatrix m(dim);
    const auto& re = doc.at("re");
    if (static_cast<int>(re.size()) != dim) throw ParseError("matrix row count mismatch");
    for (int i = 0; i < dim; ++i) {
        if (static_cast<int>(re[i].size()) != dim) throw ParseError("matrix column count mismatch");
        for (int j = 0; j < dim; ++j) m.at(i, j) = {re[i][j].get<double>(), 0.0};
    }
    if (doc.contains("im")) {
        const auto& im = doc.at("im");
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                m.at(i, j) += std::complex<double>(0.0, im[i][j].get<double>());
    }
    return m;
}

struct ProjectorDocument {
    int dim = 0;
    std::vector<std::string> labels;
    std::vector<CMatrix> projectors;
};

inline ProjectorDocument parse_projector_document(const Json& doc) {
    ProjectorDocument out;
    out.dim = doc.at("dim").get<int>();
    for (const auto& p : doc.at("projectors")) {
        out.labels.push_back(p.at("label").get<std::string>());
        out.projectors.push_back(parse_matrix(p, out.dim));
    }
    if (out.projectors.empty()) throw ParseError("projector document lists no projectors");
    return out;
}

inline QuantumState parse_state_document(const Json& doc, int dim) {
    if (doc.contains("psi")) {
        const auto& psi = doc.at("psi");
        const auto& re = psi.at("re");
        if (static_cast<int>(re.size()) != dim) throw ParseError("state vector dimension mismatch");
        std::vector<std::complex<double>> v(dim);
        for (int i = 0; i < dim; ++i) v[i] = {re[i].get<double>(), 0.0};
        if (psi.contains("im"))
            for (int i = 0; i < dim; ++i) v[i] += std::complex<double>(0.0, psi.at("im")[i].get<double>());
        return QuantumState::pure(std::move(v));
    }
    if (doc.contains("rho")) return QuantumState::density(parse_matrix(doc.at("rho"), dim));
    throw ParseError("state document needs \"psi\" or \"rho\"");
}

// ---------------------------------------------------------------------------
// Partial function documents

inline Element parse_element(const Json& v, const GeneratorNames& names) {
    int n = static_cast<int>(names.names.size());
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s == "1") return Element::one(n);
        if (s == "0") return Element::zero(n);
        auto gens = detail::parse_conjunction(s, names);
        Element e = Element::one(n);
        for (int g : gens) e = meet(e, generator_element(g, n));
        return e;
    }
    if (v.is_object() && v.contains("atoms")) {
        Element e(n);
        for (const auto& key : v.at("atoms"))
            e.add_atom(detail::parse_atom_key(key.get<std::string>(), n));
        return e;
    }
    throw ParseError("element must be \"1\", \"0\", a conjunction string or {\"atoms\": [...]}");
}

template <class Q>
PartialFunction<Q> parse_partial_function(const Json& doc, GeneratorNames* names_out = nullptr) {
    GeneratorNames names;
    for (const auto& g : doc.at("generators")) names.names.push_back(g.get<std::string>());
    int n = static_cast<int>(names.names.size());
    std::vector<std::pair<Element, Q>> entries;
    bool has_unit = false;
    for (const auto& row : doc.at("values")) {
        Element e = parse_element(row.at("element"), names);
        if (e.is_one()) has_unit = true;
        entries.emplace_back(e, json_to_scalar<Q>(row.at("value")));
    }
    if (!has_unit) entries.emplace_back(Element::one(n), Q(1));
    if (names_out) *names_out = names;
    return PartialFunction<Q>::make(n, std::move(entries));
}

// ---------------------------------------------------------------------------
// Correlation spec documents and facet output

inline std::pair<CorrelationSpec, GeneratorNames> parse_spec_document(const Json& doc) {
    GeneratorNames names;
    for (const auto& g : doc.at("generators")) names.names.push_back(g.get<std::string>());
    int n = static_cast<int>(names.names.size());
    std::set<std::uint32_t> monos;
    for (int i = 0; i < n; ++i) monos.insert(std::uint32_t(1) << i);
    if (doc.contains("monomials"))
        for (const auto& mono : doc.at("monomials")) {
            std::uint32_t mask = 0;
            for (const auto& g : mono) mask |= std::uint32_t(1) << names.index_of(g.get<std::string>());
            if (mask) monos.insert(mask);
        }
    return {CorrelationSpec(n, std::vector<std::uint32_t>(monos.begin(), monos.end())), names};
}

inline std::string monomial_name(std::uint32_t mask, const GeneratorNames& names) {
    std::string s;
    for (std::size_t g = 0; g < names.names.size(); ++g)
        if ((mask >> g) & 1u) s += (s.empty() ? "" : "&") + names.names[g];
    return s;
}

inline Json facets_to_json(const std::vector<Facet>& facets, const CorrelationSpec& spec,
                           const GeneratorNames& names) {
    std::vector<std::string> coord_names;
    for (auto mono : spec.monomials) coord_names.push_back(monomial_name(mono, names));
    Json arr = Json::array();
    for (const auto& f : facets) {
        Json row;
        Json coeffs = Json::object();
        for (std::size_t j = 0; j < f.coeffs.size(); ++j)
            if (f.coeffs[j] != 0) coeffs[coord_names[j]] = rational_to_string(f.coeffs[j]);
        row["coefficients"] = coeffs;
        row["rhs"] = rational_to_string(f.rhs);
        row["sense"] = f.less_equal ? "<=" : ">=";
        row["inequality"] = f.to_string(coord_names);
        arr.push_back(row);
    }
    return arr;
}

}  // namespace pba
