// Command-line front end: JSON in, verdicts and certificates out.
//
// Exit codes: 0 ok/representable, 1 not representable (certificate emitted),
// 2 input error, 3 method inapplicable, 4 internal error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "pba/extension.hpp"
#include "pba/horn_tarski.hpp"
#include "pba/json_io.hpp"
#include "pba/polytope.hpp"
#include "pba/quantum.hpp"
#include "pba/quotient.hpp"
#include "pba/representability.hpp"

namespace {

using namespace pba;

enum ExitCode { kOk = 0, kNotRepresentable = 1, kInputError = 2, kInapplicable = 3, kInternal = 4 };

Json read_json(const std::string& path) {
    try {
        if (path == "-") return Json::parse(std::cin);
        std::ifstream in(path);
        if (!in) throw ParseError("cannot open input file: " + path);
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

struct Output {
    std::string path;  // empty = stdout

    void emit(const Json& doc) const {
        if (path.empty()) {
            std::cout << doc.dump(2) << "\n";
        } else {
            std::ofstream out(path);
            if (!out) throw Error("cannot write output file: " + path);
            out << doc.dump(2) << "\n";
        }
    }
};

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    long long ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                     start)
            .count();
    }
};

Json base_result(const std::string& command, bool exact) {
    Json doc;
    doc["schema"] = kSchema;
    doc["command"] = command;
    doc["arithmetic"] = exact ? "exact" : "float";
    return doc;
}

template <class Q>
Json separator_to_json(const Representability<Q>& rep, const GeneratorNames& names) {
    Json sep;
    sep["type"] = "separator";
    Json monos = Json::array(), coeffs = Json::array();
    Q at_p(0);
    for (std::size_t j = 0; j < rep.spec.dim(); ++j) {
        std::uint32_t global_mask = 0;
        for (int b = 0; b < rep.spec.n; ++b)
            if ((rep.spec.monomials[j] >> b) & 1u) global_mask |= std::uint32_t(1) << rep.covered[b];
        monos.push_back(monomial_name(global_mask, names));
        coeffs.push_back(scalar_to_json<Q>(rep.certificate.separator[j]));
        at_p += rep.certificate.separator[j] * rep.p[j];
    }
    sep["monomials"] = monos;
    sep["coefficients"] = coeffs;
    sep["rhs"] = scalar_to_json<Q>(rep.certificate.separator_rhs);
    sep["value_at_input"] = scalar_to_json<Q>(at_p);
    sep["violation"] = scalar_to_json<Q>(Q(at_p - rep.certificate.separator_rhs));
    return sep;
}

template <class Q>
Json extension_to_json(const Measure<Q>& m, const GeneratorNames& names) {
    Json ext;
    ext["type"] = "extension_measure";
    ext["generators"] = names.names;
    ext["atoms"] = measure_to_json(m);
    return ext;
}

template <class Q>
void require_valid(const Ppt<Q>& ppt, const GeneratorNames& names) {
    auto report = validate_ppt(ppt);
    if (!report.ok) {
        std::string what = "input is not a valid partial probability theory:";
        for (const auto& issue : report.issues) what += "\n  " + issue.what;
        throw ValidationError(what);
    }
    (void)names;
}

template <class Q>
int run_check(const Ppt<Q>& ppt, const GeneratorNames& names, const Output& out,
              const std::string& command) {
    Timer timer;
    require_valid(ppt, names);
    auto rep = classical_representable(ppt);
    if (!verify_certificate(rep.p, rep.spec, rep.certificate))
        throw InternalInconsistency("certificate failed re-verification");
    Json doc = base_result(command, scalar_traits<Q>::is_exact);
    doc["verdict"] = rep.representable ? "representable" : "not_representable";
    if (rep.representable) {
        doc["certificate"] = extension_to_json(*rep.extension, names);
    } else {
        doc["certificate"] = separator_to_json(rep, names);
        doc["certificate"]["verified"] = true;
    }
    doc["timings_ms"] = {{"total", timer.ms()}};
    out.emit(doc);
    return rep.representable ? kOk : kNotRepresentable;
}

template <class Q>
Measure<Q> pad_to_all_generators(const Measure<Q>& m, const std::vector<GeneratorId>& gens, int n) {
    std::vector<GeneratorId> missing;
    for (int g = 0; g < n; ++g)
        if (!std::binary_search(gens.begin(), gens.end(), g)) missing.push_back(g);
    if (missing.empty()) return m;
    return product_disjoint(m, gens, Measure<Q>::uniform(static_cast<int>(missing.size())), missing)
        .first;
}

template <class Q>
int run_extend(const Ppt<Q>& ppt, const GeneratorNames& names, const std::string& method,
               const std::optional<std::string>& chi, const std::optional<std::string>& eta,
               const Output& out) {
    Timer timer;
    require_valid(ppt, names);
    Json doc = base_result("extend", scalar_traits<Q>::is_exact);
    doc["method"] = method;

    auto finish = [&](const Measure<Q>& m) {
        doc["verdict"] = "extended";
        doc["certificate"] = extension_to_json(m, names);
        doc["timings_ms"] = {{"total", timer.ms()}};
        out.emit(doc);
        return kOk;
    };

    if (method == "lp") {
        auto rep = classical_representable(ppt);
        if (!verify_certificate(rep.p, rep.spec, rep.certificate))
            throw InternalInconsistency("certificate failed re-verification");
        if (rep.representable) return finish(*rep.extension);
        doc["verdict"] = "not_representable";
        doc["certificate"] = separator_to_json(rep, names);
        doc["certificate"]["verified"] = true;
        doc["timings_ms"] = {{"total", timer.ms()}};
        out.emit(doc);
        return kNotRepresentable;
    }
    if (method == "tree") {
        return finish(extend_tree(ppt, ppt.pba.contexts));
    }
    if (method == "three") {
        const auto& ctxs = ppt.pba.contexts;
        if (ppt.pba.n != 3 || ctxs.size() != 2 || ctxs[0].arity() != 2 || ctxs[1].arity() != 2)
            throw MethodInapplicable("method three needs two generator pairs sharing one generator");
        auto shared = ctxs[0].shared_with(ctxs[1]);
        if (shared.size() != 1)
            throw MethodInapplicable("method three needs exactly one shared generator");
        int z = shared[0];
        int x = ctxs[0].gens[0] == z ? ctxs[0].gens[1] : ctxs[0].gens[0];
        int y = ctxs[1].gens[0] == z ? ctxs[1].gens[1] : ctxs[1].gens[0];
        auto single = [&](int g) { return ppt.measure_on({g}).value(generator_element(0, 1)); };
        auto pair_value = [&](int a, int b) {
            auto m = ppt.measure_on({a, b});
            return m.value(meet(generator_element(0, 2), generator_element(1, 2)));
        };
        ThreeSpec<Q> spec{single(x), single(y), single(z), pair_value(x, z), pair_value(y, z)};
        std::optional<Q> chi_v, eta_v;
        if (chi) chi_v = json_to_scalar<Q>(Json(*chi));
        if (eta) eta_v = json_to_scalar<Q>(Json(*eta));
        auto local = extend_three(spec, chi_v, eta_v);
        // local order (x, y, z) -> global generator order
        std::vector<int> order = {x, y, z};
        std::vector<Q> w(8, Q(0));
        for (std::uint32_t a = 0; a < 8; ++a) {
            std::uint32_t global_atom = 0;
            for (int j = 0; j < 3; ++j)
                if ((a >> j) & 1u) global_atom |= std::uint32_t(1) << order[j];
            w[global_atom] = local.weight(a);
        }
        return finish(Measure<Q>::from_weights(3, std::move(w)));
    }
    if (method == "glue") {
        if (ppt.pba.contexts.size() != 2)
            throw MethodInapplicable("method glue needs exactly two contexts");
        const auto& c1 = ppt.pba.contexts[0];
        const auto& c2 = ppt.pba.contexts[1];
        auto glued = glue_pair(ppt.state.measures[0], c1.gens, ppt.state.measures[1], c2.gens);
        return finish(pad_to_all_generators(glued.first, glued.second, ppt.pba.n));
    }
    if (method == "ht") {
        std::vector<std::pair<Element, Q>> entries = {{Element::one(ppt.pba.n), Q(1)}};
        for (const auto& ctx : ppt.pba.contexts) {
            int k = ctx.arity();
            for (std::uint32_t sub = 1; sub < (std::uint32_t(1) << k); ++sub) {
                Element e = Element::one(ppt.pba.n);
                std::vector<GeneratorId> gens;
                for (int j = 0; j < k; ++j)
                    if ((sub >> j) & 1u) {
                        e = meet(e, generator_element(ctx.gens[j], ppt.pba.n));
                        gens.push_back(ctx.gens[j]);
                    }
                auto m = ppt.measure_on(gens);
                Element inter = Element::one(m.arity());
                for (int j = 0; j < m.arity(); ++j) inter = meet(inter, generator_element(j, m.arity()));
                entries.emplace_back(e, m.value(inter));
            }
        }
        auto f = PartialFunction<Q>::make(ppt.pba.n, std::move(entries));
        try {
            return finish(extend_full(f));
        } catch (const NotExtensible&) {
            auto rep = classical_representable(ppt);
            doc["verdict"] = "not_representable";
            doc["certificate"] = separator_to_json(rep, names);
            doc["certificate"]["verified"] = verify_certificate(rep.p, rep.spec, rep.certificate);
            doc["timings_ms"] = {{"total", timer.ms()}};
            out.emit(doc);
            return kNotRepresentable;
        }
    }
    throw MethodInapplicable("unknown method: " + method);
}

template <class Q>
int run_bell(const Ppt<Q>& ppt, const GeneratorNames& names, const Output& out) {
    Timer timer;
    require_valid(ppt, names);
    auto rep = chsh_condition(ppt);
    Json doc = base_result("bell", scalar_traits<Q>::is_exact);
    doc["verdict"] = rep.representable ? "representable" : "not_representable";
    Json bounds = Json::array();
    for (std::size_t i = 0; i < rep.right.size(); ++i) {
        Json row;
        row["context_generator"] = names.names[rep.right[i]];
        row["alpha"] = scalar_to_json<Q>(rep.alphas[i]);
        row["beta"] = scalar_to_json<Q>(rep.betas[i]);
        bounds.push_back(row);
    }
    doc["missing_pair"] = monomial_name((std::uint32_t(1) << rep.left[0]) | (std::uint32_t(1) << rep.left[1]),
                                        names);
    doc["bounds"] = bounds;
    doc["alpha_max"] = scalar_to_json<Q>(rep.alpha_max);
    doc["beta_min"] = scalar_to_json<Q>(rep.beta_min);
    if (rep.representable) {
        auto glue = bell_glue_extension(ppt);
        if (!glue) throw InternalInconsistency("interval overlap nonempty but gluing failed");
        doc["certificate"] = extension_to_json(*glue, names);
    }
    doc["timings_ms"] = {{"total", timer.ms()}};
    out.emit(doc);
    return rep.representable ? kOk : kNotRepresentable;
}

int run_facets(const Json& input, const Output& out) {
    Timer timer;
    auto [spec, names] = parse_spec_document(input);
    auto facets = enumerate_facets(spec);
    Json doc = base_result("facets", true);
    doc["dimension"] = spec.dim();
    doc["vertex_count"] = std::size_t(1) << spec.n;
    doc["facet_count"] = facets.size();
    doc["facets"] = facets_to_json(facets, spec, names);
    doc["timings_ms"] = {{"total", timer.ms()}};
    out.emit(doc);
    return kOk;
}

template <class Q>
int run_ht(const Json& input, int max_len, const Output& out) {
    Timer timer;
    GeneratorNames names;
    auto f = parse_partial_function<Q>(input, &names);
    Json doc = base_result("ht", scalar_traits<Q>::is_exact);
    doc["max_len"] = max_len;
    auto verdict = is_partial_measure(f, max_len);
    if (!verdict.pass_bounded) {
        doc["verdict"] = "not_partial_measure";
        Json w;
        Json lhs = Json::array(), rhs = Json::array();
        for (const auto& e : verdict.witness->lhs) lhs.push_back(e.to_atom_string());
        for (const auto& e : verdict.witness->rhs) rhs.push_back(e.to_atom_string());
        w["lhs"] = lhs;
        w["rhs"] = rhs;
        doc["witness"] = w;
        doc["timings_ms"] = {{"total", timer.ms()}};
        out.emit(doc);
        return kNotRepresentable;
    }
    doc["sequence_condition"] = "pass_bounded";
    try {
        auto m = extend_full(f);
        doc["verdict"] = "extended";
        Json ext;
        ext["type"] = "extension_measure";
        ext["generators"] = names.names;
        ext["atoms"] = measure_to_json(m);
        doc["certificate"] = ext;
        doc["timings_ms"] = {{"total", timer.ms()}};
        out.emit(doc);
        return kOk;
    } catch (const NotExtensible&) {
        doc["verdict"] = "not_extensible";
        doc["note"] = "bounded sequence check passed but the exact LP refuses; "
                      "the bound was too small to expose the violation";
        doc["timings_ms"] = {{"total", timer.ms()}};
        out.emit(doc);
        return kNotRepresentable;
    }
}

int run_quotient(const Json& projs_doc, const std::vector<Json>& state_docs,
                 const std::vector<std::string>& gen_labels, const Output& out) {
    Timer timer;
    auto projs = parse_projector_document(projs_doc);
    std::vector<QuantumState> states;
    for (const auto& sd : state_docs) states.push_back(parse_state_document(sd, projs.dim));
    if (states.empty()) throw ParseError("at least one state document is required");

    auto target = build_projection_pba(projs.labels, projs.projectors);
    std::vector<std::string> labels = gen_labels.empty() ? projs.labels : gen_labels;
    std::vector<CMatrix> gens;
    for (const auto& l : labels) {
        auto it = std::find(projs.labels.begin(), projs.labels.end(), l);
        if (it == projs.labels.end()) throw ParseError("unknown projector label '" + l + "'");
        gens.push_back(projs.projectors[it - projs.labels.begin()]);
    }

    auto free_ht = build_free_ht(target, labels, gens, states);
    auto report = verify_empirical_quotient_quantum(free_ht, states);
    auto homs = enumerate_homomorphisms(free_ht.pba, free_ht.relation);
    auto embed = check_embeddable(free_ht.pba, free_ht.relation);

    GeneratorNames names;
    names.names = labels;
    Json doc = base_result("quotient", false);
    Json ppts = Json::array();
    for (const auto& st : free_ht.states) ppts.push_back(ppt_to_json(Ppt<double>{free_ht.pba, st}, names));
    doc["free_ppt"] = ppts[0];
    doc["free_ppts"] = ppts;
    Json rel = Json::array();
    for (std::size_t ci = 0; ci < free_ht.pba.contexts.size(); ++ci) {
        Json row;
        row["context"] = free_ht.pba.contexts[ci].label(&names.names);
        Json zeros = Json::array();
        for (auto a : free_ht.relation.zero_atoms[ci].atoms())
            zeros.push_back(detail::atom_key(a, free_ht.pba.contexts[ci].arity()));
        row["zero_atoms"] = zeros;
        rel.push_back(row);
    }
    doc["relation"] = rel;
    Json rj;
    rj["ideal_coincidence"] = report.ideal_coincidence;
    rj["intersection_witnesses"] = report.intersection_witnesses;
    rj["operations_preserved"] = report.operations_preserved;
    rj["state_agreement"] = report.state_agreement;
    rj["findings"] = report.findings;
    doc["quotient_report"] = rj;
    doc["homomorphism_count"] = homs.size();
    doc["embeddable"] = embed.embeddable;
    doc["verdict"] = report.all() ? "quotient_verified" : "quotient_rejected";
    doc["timings_ms"] = {{"total", timer.ms()}};
    out.emit(doc);
    return report.all() ? kOk : kNotRepresentable;
}

int run_quantum(const Json& projs_doc, const Json& state_doc, std::uint64_t snap_den,
                const Output& out) {
    Timer timer;
    auto projs = parse_projector_document(projs_doc);
    auto state = parse_state_document(state_doc, projs.dim);
    auto ppt = free_state_from_projections(projs.labels, projs.projectors, state);
    GeneratorNames names;
    names.names = projs.labels;
    if (snap_den == 0) {
        Json doc = ppt_to_json(ppt, names);
        doc["timings_ms"] = {{"total", timer.ms()}};
        out.emit(doc);
        return kOk;
    }
    // opt-in rational snapping with an explicit denominator bound
    State<Rat> snapped;
    for (std::size_t ci = 0; ci < ppt.pba.contexts.size(); ++ci) {
        int k = ppt.pba.contexts[ci].arity();
        auto values = intersection_values(ppt.state.measures[ci]);
        std::vector<Rat> exact(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) exact[i] = snap_to_rational(values[i], snap_den);
        exact[0] = 1;
        snapped.measures.push_back(measure_from_intersections<Rat>(k, exact));
    }
    Json doc = ppt_to_json(Ppt<Rat>{ppt.pba, snapped}, names);
    doc["snap_denominator_bound"] = snap_den;
    doc["timings_ms"] = {{"total", timer.ms()}};
    out.emit(doc);
    return kOk;
}

template <class Q>
int run_graph(const Ppt<Q>& ppt, const GeneratorNames& names, const std::string& node_kind,
              bool merge, const std::string& dot_path, const Output& out) {
    require_valid(ppt, names);
    std::vector<Context> nodes;
    if (node_kind == "contexts") {
        nodes = ppt.pba.contexts;
    } else if (node_kind == "singletons") {
        for (int g = 0; g < ppt.pba.n; ++g)
            if (ppt.pba.containing_context({g}) >= 0) nodes.push_back(Context({g}));
    } else {
        throw MethodInapplicable("nodes must be 'contexts' or 'singletons'");
    }
    auto g = compatibility_graph(ppt, nodes);
    if (merge) g = merge_cliques(g, ppt.pba);
    auto dot = export_dot(g, &names.names);
    if (!dot_path.empty()) {
        std::ofstream f(dot_path);
        if (!f) throw Error("cannot write DOT file: " + dot_path);
        f << dot;
        Json doc = base_result("graph", scalar_traits<Q>::is_exact);
        doc["nodes"] = g.nodes.size();
        doc["edges"] = g.edges.size();
        doc["dot_file"] = dot_path;
        out.emit(doc);
    } else {
        std::cout << dot;
    }
    return kOk;
}

PptDocument load_ppt(const std::string& path, const std::string& arithmetic_override) {
    auto json = read_json(path);
    if (!arithmetic_override.empty()) json["arithmetic"] = arithmetic_override;
    return parse_ppt_document(json);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Partial Boolean algebra extension toolkit"};
    app.require_subcommand(1);

    std::string arithmetic;
    double tol = 1e-9;
    int max_len = 4;
    int seed = 0;
    app.add_option("--arithmetic", arithmetic, "override the document arithmetic: exact|float");
    app.add_option("--tol", tol, "absolute tolerance for float mode (default 1e-9)");
    app.add_option("--max-len", max_len, "sequence length bound for the ht checks (default 4)");
    app.add_option("--seed", seed, "accepted for compatibility; every CLI path is deterministic");

    std::string in_path, out_path, method, dot_path, node_kind = "contexts";
    std::string projs_path, state_path;
    std::vector<std::string> state_paths, gen_labels;
    std::optional<std::string> chi, eta;
    std::uint64_t snap_den = 0;
    bool merge = false;

    auto* c_check = app.add_subcommand("check", "decide classical representability of a PPT");
    c_check->add_option("input", in_path, "PPT document (or - for stdin)")->required();
    c_check->add_option("--out", out_path, "write the result document here");

    auto* c_extend = app.add_subcommand("extend", "construct an extension measure");
    c_extend->add_option("input", in_path)->required();
    c_extend->add_option("--method", method, "tree|three|glue|lp|ht")->required();
    c_extend->add_option("--chi", chi, "free weight for method three (exact string or number)");
    c_extend->add_option("--eta", eta, "free weight for method three");
    c_extend->add_option("--out", out_path);

    auto* c_bell = app.add_subcommand("bell", "interval-overlap condition for the Bell square");
    c_bell->add_option("input", in_path)->required();
    c_bell->add_option("--out", out_path);

    auto* c_facets = app.add_subcommand("facets", "enumerate correlation polytope facets");
    c_facets->add_option("input", in_path, "spec document with generators and monomials")->required();
    c_facets->add_option("--out", out_path);

    auto* c_ht = app.add_subcommand("ht", "partial-measure check and extension");
    c_ht->add_option("input", in_path, "partial function document")->required();
    c_ht->add_option("--out", out_path);

    auto* c_quot = app.add_subcommand("quotient", "free construction over projection targets");
    c_quot->add_option("--projectors", projs_path)->required();
    c_quot->add_option("--states", state_paths, "one or more state documents")->required();
    c_quot->add_option("--gens", gen_labels, "generator labels (default: all projectors)");
    c_quot->add_option("--out", out_path);

    auto* c_graph = app.add_subcommand("graph", "compatibility graph as DOT");
    c_graph->add_option("input", in_path)->required();
    c_graph->add_option("--dot", dot_path, "write DOT here (default stdout)");
    c_graph->add_option("--nodes", node_kind, "contexts|singletons (default contexts)");
    c_graph->add_flag("--merge", merge, "collapse jointly measurable cliques");

    auto* c_quantum = app.add_subcommand("quantum", "PPT induced by projections and a state");
    c_quantum->add_option("--projectors", projs_path)->required();
    c_quantum->add_option("--state", state_path)->required();
    c_quantum->add_option("--snap-den", snap_den,
                          "snap values to rationals with this denominator bound (exact output)");
    c_quantum->add_option("--out", out_path);

    CLI11_PARSE(app, argc, argv);
    float_tolerance() = tol;
    Output out{out_path};

    try {
        if (*c_check) {
            auto doc = load_ppt(in_path, arithmetic);
            return doc.exact ? run_check(*doc.exact_ppt, doc.generators, out, "check")
                             : run_check(*doc.float_ppt, doc.generators, out, "check");
        }
        if (*c_extend) {
            auto doc = load_ppt(in_path, arithmetic);
            return doc.exact ? run_extend(*doc.exact_ppt, doc.generators, method, chi, eta, out)
                             : run_extend(*doc.float_ppt, doc.generators, method, chi, eta, out);
        }
        if (*c_bell) {
            auto doc = load_ppt(in_path, arithmetic);
            return doc.exact ? run_bell(*doc.exact_ppt, doc.generators, out)
                             : run_bell(*doc.float_ppt, doc.generators, out);
        }
        if (*c_facets) return run_facets(read_json(in_path), out);
        if (*c_ht) {
            auto json = read_json(in_path);
            if (!arithmetic.empty()) json["arithmetic"] = arithmetic;
            bool exact = json.value("arithmetic", std::string("exact")) == "exact";
            return exact ? run_ht<Rat>(json, max_len, out) : run_ht<double>(json, max_len, out);
        }
        if (*c_quot) {
            std::vector<Json> states;
            for (const auto& p : state_paths) states.push_back(read_json(p));
            return run_quotient(read_json(projs_path), states, gen_labels, out);
        }
        if (*c_graph) {
            auto doc = load_ppt(in_path, arithmetic);
            return doc.exact ? run_graph(*doc.exact_ppt, doc.generators, node_kind, merge, dot_path, out)
                             : run_graph(*doc.float_ppt, doc.generators, node_kind, merge, dot_path, out);
        }
        if (*c_quantum) return run_quantum(read_json(projs_path), read_json(state_path), snap_den, out);
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const ValidationError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const MissingValue& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const NotAMeasure& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const NotAProjection& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const DimMismatch& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const NotPartialMeasure& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const MethodInapplicable& e) {
        std::cerr << "method inapplicable: " << e.what() << "\n";
        return kInapplicable;
    } catch (const WrongTopology& e) {
        std::cerr << "method inapplicable: " << e.what() << "\n";
        return kInapplicable;
    } catch (const NotAForest& e) {
        std::cerr << "method inapplicable: " << e.what() << "\n";
        return kInapplicable;
    } catch (const NoRunningIntersectionOrder& e) {
        std::cerr << "method inapplicable: " << e.what() << "\n";
        return kInapplicable;
    } catch (const PropertyGViolated& e) {
        std::cerr << "method inapplicable: " << e.what() << "\n";
        return kInapplicable;
    } catch (const IncompleteStates& e) {
        std::cerr << "method inapplicable: " << e.what() << "\n";
        return kInapplicable;
    } catch (const NotAGeneratingSet& e) {
        std::cerr << "method inapplicable: " << e.what() << "\n";
        return kInapplicable;
    } catch (const KsPropertyRequired& e) {
        std::cerr << "method inapplicable: " << e.what() << "\n";
        return kInapplicable;
    } catch (const Json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kInternal;
}
