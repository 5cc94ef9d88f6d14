#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pba/errors.hpp"
#include "pba/polytope.hpp"
#include "pba/ppt.hpp"
#include "pba/quantum.hpp"

namespace pba {

/// Extensional relation data on a free PPT: per context, the atoms whose
/// image in the target is the zero element.
struct QuotientRelation {
    std::vector<Element> zero_atoms;  // aligned with the free Pba's contexts

    Element canonical(int ctx, const Element& e) const {
        return meet(e, complement(zero_atoms[ctx]));
    }
};

/// A cross-context identification A ~ B.
struct Identification {
    int ctx_a = 0;
    Element a;
    int ctx_b = 0;
    Element b;

    Identification(int ca, Element ea, int cb, Element eb)
        : ctx_a(ca), a(std::move(ea)), ctx_b(cb), b(std::move(eb)) {}
};

// ---------------------------------------------------------------------------
// Property (G)

struct PropertyGResult {
    bool holds = true;
    bool bounded = false;  // families above the size cap were not checked
    std::string witness;
};

namespace detail {

inline bool matrix_in(const std::vector<CMatrix>& set, const CMatrix& p, double tol) {
    return std::any_of(set.begin(), set.end(),
                       [&](const CMatrix& q) { return q.max_abs_diff(p) <= tol; });
}

inline std::vector<CMatrix> matrix_intersection(const std::vector<CMatrix>& a,
                                                const std::vector<CMatrix>& b, double tol) {
    std::vector<CMatrix> out;
    for (const auto& p : a)
        if (matrix_in(b, p, tol)) insert_unique(out, p, tol);
    return out;
}

inline bool matrix_sets_equal(const std::vector<CMatrix>& a, const std::vector<CMatrix>& b,
                              double tol) {
    for (const auto& p : a)
        if (!matrix_in(b, p, tol)) return false;
    for (const auto& p : b)
        if (!matrix_in(a, p, tol)) return false;
    return true;
}

}  // namespace detail

/// Generator-set condition: for every family of maximal contexts with a
/// nontrivial common subalgebra, the shared chosen generators are nonempty
/// and generate it. Families are checked up to size max_family.
inline PropertyGResult check_property_G(const ProjectionPba& target, const std::vector<CMatrix>& gens,
                                        double tol = kDedupTol, int max_family = 4) {
    PropertyGResult res;
    int d = target.dim();
    std::size_t nc = target.contexts.size();

    // chosen generators available inside each target context
    std::vector<std::vector<int>> per_context(nc);
    for (std::size_t ci = 0; ci < nc; ++ci)
        for (std::size_t g = 0; g < gens.size(); ++g)
            if (detail::matrix_in(target.context_closure[ci], gens[g], tol))
                per_context[ci].push_back(static_cast<int>(g));

    // each maximal context must be generated by its share of the chosen set
    for (std::size_t ci = 0; ci < nc; ++ci) {
        std::vector<CMatrix> seed;
        for (int g : per_context[ci]) seed.push_back(gens[g]);
        if (!detail::matrix_sets_equal(detail::boolean_closure(seed, tol),
                                       target.context_closure[ci], tol))
            throw NotAGeneratingSet("chosen generators do not generate context " + std::to_string(ci));
    }

    res.bounded = static_cast<int>(nc) > max_family;
    std::vector<int> family;
    std::function<bool(std::size_t, int)> rec = [&](std::size_t start, int depth) {
        if (depth > 0) {
            std::vector<CMatrix> inter = target.context_closure[family[0]];
            for (int fi = 1; fi < depth; ++fi)
                inter = detail::matrix_intersection(inter, target.context_closure[family[fi]], tol);
            bool nontrivial = std::any_of(inter.begin(), inter.end(), [&](const CMatrix& p) {
                return p.max_abs() > tol && (CMatrix::identity(d) - p).max_abs() > tol;
            });
            if (nontrivial) {
                std::vector<int> shared = per_context[family[0]];
                for (int fi = 1; fi < depth; ++fi) {
                    std::vector<int> next;
                    std::set_intersection(shared.begin(), shared.end(), per_context[family[fi]].begin(),
                                          per_context[family[fi]].end(), std::back_inserter(next));
                    shared = std::move(next);
                }
                std::vector<CMatrix> seed;
                for (int g : shared) seed.push_back(gens[g]);
                if (shared.empty() ||
                    !detail::matrix_sets_equal(detail::boolean_closure(seed, tol), inter, tol)) {
                    std::string w = "contexts {";
                    for (int fi = 0; fi < depth; ++fi) w += (fi ? "," : "") + std::to_string(family[fi]);
                    w += "} share a nontrivial subalgebra not generated by shared generators";
                    res.holds = false;
                    res.witness = w;
                    return false;
                }
            }
        }
        if (depth == max_family) return true;
        for (std::size_t ci = start; ci < nc; ++ci) {
            family.push_back(static_cast<int>(ci));
            bool ok = rec(ci + 1, depth + 1);
            family.pop_back();
            if (!ok) return false;
        }
        return true;
    };
    rec(0, 0);
    return res;
}

// ---------------------------------------------------------------------------
// Free H-T construction

struct FreeHt {
    ProjectionPba gen_pba;             // projection structure of the chosen generators
    Pba pba;                           // free contexts over the chosen generators
    std::vector<State<double>> states; // one per quantum state
    QuotientRelation relation;
};

/// Builds the free PPT family of a projection target under the chosen
/// generators: free contexts are the maximal commuting generator subsets,
/// measures are pulled back from the quantum states, and the relation records
/// the atoms with vanishing image.
inline FreeHt build_free_ht(const ProjectionPba& target, const std::vector<std::string>& labels,
                            const std::vector<CMatrix>& gens, const std::vector<QuantumState>& states,
                            double tol = kDedupTol) {
    for (std::size_t g = 0; g < gens.size(); ++g)
        if (!target.contains(gens[g], tol))
            throw Error("chosen generator '" + labels[g] + "' is not an element of the target");
    auto pg = check_property_G(target, gens, tol);
    if (!pg.holds) throw PropertyGViolated(pg.witness);

    // completeness of the state family over the target elements
    for (const auto& p : target.closure) {
        if (p.max_abs() <= tol) continue;
        bool hit = false;
        for (const auto& s : states)
            if (s.expectation(p) > kQuantumTol) { hit = true; break; }
        if (!hit) throw IncompleteStates("a nonzero target element vanishes in every supplied state");
    }

    FreeHt out;
    out.gen_pba = build_projection_pba(labels, gens, kQuantumTol, tol);
    out.pba = out.gen_pba.abstract_pba();
    for (const auto& s : states) out.states.push_back(quantum_state_on_pba(s, out.gen_pba));

    for (std::size_t ci = 0; ci < out.gen_pba.contexts.size(); ++ci) {
        int k = static_cast<int>(out.gen_pba.contexts[ci].size());
        Element zeros(k);
        for (std::uint32_t atom = 0; atom < (std::uint32_t(1) << k); ++atom)
            if (element_projection(out.gen_pba, static_cast<int>(ci), Element::atom(k, atom)).max_abs() <=
                tol)
                zeros.add_atom(atom);
        out.relation.zero_atoms.push_back(zeros);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Verification of conditions (i)-(iv)

struct QuotientReport {
    bool ideal_coincidence = true;      // (i)
    bool intersection_witnesses = true; // (ii)
    bool operations_preserved = true;   // (iii)
    bool state_agreement = true;        // (iv)
    std::vector<std::string> findings;

    bool all() const {
        return ideal_coincidence && intersection_witnesses && operations_preserved && state_agreement;
    }
};

namespace detail {

/// Union-find with per-merge reasons, for transitivity witnesses.
struct ReasonedUnionFind {
    std::vector<int> parent;
    std::vector<std::tuple<int, int, std::string>> edges;

    int add() {
        parent.push_back(static_cast<int>(parent.size()));
        return static_cast<int>(parent.size()) - 1;
    }
    int find(int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); }
    void unite(int a, int b, std::string reason) {
        edges.emplace_back(a, b, std::move(reason));
        int ra = find(a), rb = find(b);
        if (ra != rb) parent[ra] = rb;
    }

    std::vector<std::string> path_reasons(int from, int to) const {
        std::vector<std::vector<std::pair<int, std::string>>> adj(parent.size());
        for (const auto& [a, b, r] : edges) {
            adj[a].emplace_back(b, r);
            adj[b].emplace_back(a, r);
        }
        std::vector<int> prev(parent.size(), -1);
        std::vector<std::string> via(parent.size());
        std::vector<int> queue = {from};
        std::vector<bool> seen(parent.size(), false);
        seen[from] = true;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            int v = queue[qi];
            if (v == to) break;
            for (const auto& [u, r] : adj[v])
                if (!seen[u]) {
                    seen[u] = true;
                    prev[u] = v;
                    via[u] = r;
                    queue.push_back(u);
                }
        }
        std::vector<std::string> out;
        for (int v = to; v != from && v >= 0; v = prev[v]) {
            out.push_back(via[v]);
            if (prev[v] < 0) break;
        }
        std::reverse(out.begin(), out.end());
        return out;
    }
};

/// Elements of the free algebra over `shared`, embedded into a context.
inline std::vector<Element> shared_subalgebra_images(const std::vector<GeneratorId>& shared,
                                                     const Context& ctx) {
    std::vector<int> pos;
    for (auto g : shared) pos.push_back(ctx.local_index(g));
    int s = static_cast<int>(shared.size());
    std::vector<Element> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << (1 << s)); ++mask) {
        Element small(s);
        for (std::uint32_t atom = 0; atom < (std::uint32_t(1) << s); ++atom)
            if ((mask >> atom) & 1u) small.add_atom(atom);
        out.push_back(small.embed(pos, ctx.arity()));
    }
    return out;
}

}  // namespace detail

/// Mechanical check of the empirical-quotient conditions on a free PPT with
/// an extensional relation. Condition (iii) is decided by closing the
/// identifications transitively and looking for two inequivalent elements of
/// one context in a single class; the witness lists the merge chain.
template <class Q>
QuotientReport verify_empirical_quotient(const Pba& pba, const std::vector<State<Q>>& states,
                                         const QuotientRelation& rel,
                                         const std::vector<Identification>& idents = {}) {
    using traits = scalar_traits<Q>;
    QuotientReport rep;

    // (i) the recorded zero atoms are exactly the all-states-null atoms
    for (std::size_t ci = 0; ci < pba.contexts.size(); ++ci) {
        int k = pba.contexts[ci].arity();
        for (std::uint32_t atom = 0; atom < (std::uint32_t(1) << k); ++atom) {
            bool vanishes = true;
            for (const auto& s : states)
                if (!traits::is_zero(s.measures[ci].weight(atom))) { vanishes = false; break; }
            if (vanishes != rel.zero_atoms[ci].contains_atom(atom)) {
                rep.ideal_coincidence = false;
                rep.findings.push_back("(i) atom " + Element::atom(k, atom).to_atom_string() +
                                       " of context {" + pba.contexts[ci].label() +
                                       "} disagrees with the state ideal");
            }
        }
    }

    // (ii) every identification is witnessed inside the shared subalgebra
    for (const auto& id : idents) {
        auto shared = pba.contexts[id.ctx_a].shared_with(pba.contexts[id.ctx_b]);
        bool found = false;
        if (static_cast<int>(shared.size()) <= 3) {
            auto in_a = detail::shared_subalgebra_images(shared, pba.contexts[id.ctx_a]);
            auto in_b = detail::shared_subalgebra_images(shared, pba.contexts[id.ctx_b]);
            for (std::size_t t = 0; t < in_a.size() && !found; ++t)
                found = rel.canonical(id.ctx_a, in_a[t]) == rel.canonical(id.ctx_a, id.a) &&
                        rel.canonical(id.ctx_b, in_b[t]) == rel.canonical(id.ctx_b, id.b);
        }
        if (!found) {
            rep.intersection_witnesses = false;
            rep.findings.push_back("(ii) no shared element witnesses " + id.a.to_atom_string() +
                                   " ~ " + id.b.to_atom_string());
        }
    }

    // (iii) transitive closure must stay inside the per-context ideals
    detail::ReasonedUnionFind uf;
    std::map<std::pair<int, Element>, int> node_of;
    auto node = [&](int ctx, const Element& e) {
        auto canon = rel.canonical(ctx, e);
        auto key = std::make_pair(ctx, canon);
        auto it = node_of.find(key);
        if (it != node_of.end()) return it->second;
        int id = uf.add();
        node_of.emplace(key, id);
        return id;
    };
    for (std::size_t i = 0; i < pba.contexts.size(); ++i)
        for (std::size_t l = i + 1; l < pba.contexts.size(); ++l) {
            auto shared = pba.contexts[i].shared_with(pba.contexts[l]);
            if (shared.empty() || static_cast<int>(shared.size()) > 3) continue;
            auto in_i = detail::shared_subalgebra_images(shared, pba.contexts[i]);
            auto in_l = detail::shared_subalgebra_images(shared, pba.contexts[l]);
            for (std::size_t t = 0; t < in_i.size(); ++t)
                uf.unite(node(static_cast<int>(i), in_i[t]), node(static_cast<int>(l), in_l[t]),
                         "shared element of {" + Context(shared).label() + "} between {" +
                             pba.contexts[i].label() + "} and {" + pba.contexts[l].label() + "}");
        }
    for (const auto& id : idents)
        uf.unite(node(id.ctx_a, id.a), node(id.ctx_b, id.b),
                 "given identification " + id.a.to_atom_string() + " ~ " + id.b.to_atom_string());

    std::map<std::pair<int, int>, std::pair<int, Element>> rep_of;  // (root, ctx) -> node
    for (const auto& [key, id] : node_of) {
        auto slot = std::make_pair(uf.find(id), key.first);
        auto it = rep_of.find(slot);
        if (it == rep_of.end()) {
            rep_of.emplace(slot, std::make_pair(id, key.second));
        } else if (it->second.second != key.second) {
            rep.operations_preserved = false;
            std::string chain;
            for (const auto& r : uf.path_reasons(it->second.first, id))
                chain += (chain.empty() ? "" : "; ") + r;
            rep.findings.push_back("(iii) context {" + pba.contexts[key.first].label() +
                                   "} identifies inequivalent elements " +
                                   it->second.second.to_atom_string() + " and " +
                                   key.second.to_atom_string() + " via: " + chain);
        }
    }

    // (iv) identified elements carry equal state values
    for (const auto& id : idents)
        for (std::size_t k = 0; k < states.size(); ++k) {
            Q va = states[k].measures[id.ctx_a].value(id.a);
            Q vb = states[k].measures[id.ctx_b].value(id.b);
            if (!traits::eq(va, vb)) {
                rep.state_agreement = false;
                rep.findings.push_back("(iv) state " + std::to_string(k) + " separates " +
                                       id.a.to_atom_string() + " and " + id.b.to_atom_string());
            }
        }
    return rep;
}

/// Quantum flavor: identifications are discovered by image equality, the
/// image map is checked to be a per-context homomorphism, and state values
/// are compared against the quantum expectations.
inline QuotientReport verify_empirical_quotient_quantum(const FreeHt& free_ht,
                                                        const std::vector<QuantumState>& states,
                                                        double tol = kDedupTol) {
    const auto& pba = free_ht.pba;
    std::vector<Identification> idents;
    std::vector<std::vector<std::pair<Element, CMatrix>>> images(pba.contexts.size());
    for (std::size_t ci = 0; ci < pba.contexts.size(); ++ci) {
        int k = pba.contexts[ci].arity();
        if (k <= 3) {
            // exhaustive element list
            for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << (1 << k)); ++mask) {
                Element e(k);
                for (std::uint32_t atom = 0; atom < (std::uint32_t(1) << k); ++atom)
                    if ((mask >> atom) & 1u) e.add_atom(atom);
                images[ci].emplace_back(e, element_projection(free_ht.gen_pba, static_cast<int>(ci), e));
            }
        } else {
            // seeded sample above the exhaustive budget
            std::uint64_t seed = 0x9e3779b97f4a7c15ULL ^ (ci * 0xbf58476d1ce4e5b9ULL);
            auto next = [&seed]() {
                seed ^= seed << 13;
                seed ^= seed >> 7;
                seed ^= seed << 17;
                return seed;
            };
            images[ci].emplace_back(Element::zero(k),
                                    element_projection(free_ht.gen_pba, static_cast<int>(ci),
                                                       Element::zero(k)));
            images[ci].emplace_back(Element::one(k),
                                    element_projection(free_ht.gen_pba, static_cast<int>(ci),
                                                       Element::one(k)));
            for (int rep = 0; rep < 32; ++rep) {
                Element e(k);
                for (std::uint32_t atom = 0; atom < (std::uint32_t(1) << k); ++atom)
                    if (next() & 1u) e.add_atom(atom);
                images[ci].emplace_back(e, element_projection(free_ht.gen_pba, static_cast<int>(ci), e));
            }
        }
    }
    for (std::size_t i = 0; i < pba.contexts.size(); ++i)
        for (std::size_t l = i + 1; l < pba.contexts.size(); ++l)
            for (const auto& [ea, ma] : images[i])
                for (const auto& [eb, mb] : images[l])
                    if (ma.max_abs_diff(mb) <= tol)
                        idents.emplace_back(static_cast<int>(i), ea, static_cast<int>(l), eb);

    auto rep = verify_empirical_quotient(pba, free_ht.states, free_ht.relation, idents);

    // (iii) image map is a homomorphism inside each context
    int d = free_ht.gen_pba.dim();
    for (std::size_t ci = 0; ci < pba.contexts.size(); ++ci) {
        for (const auto& [ea, ma] : images[ci]) {
            if ((CMatrix::identity(d) - ma).max_abs_diff(element_projection(
                    free_ht.gen_pba, static_cast<int>(ci), ea.complement())) > tol) {
                rep.operations_preserved = false;
                rep.findings.push_back("(iii) complement image mismatch in context " +
                                       std::to_string(ci));
            }
            for (const auto& [eb, mb] : images[ci]) {
                if ((ma * mb).max_abs_diff(element_projection(free_ht.gen_pba, static_cast<int>(ci),
                                                              meet(ea, eb))) > tol) {
                    rep.operations_preserved = false;
                    rep.findings.push_back("(iii) meet image mismatch in context " + std::to_string(ci));
                }
            }
        }
    }

    // (iv) abstract measure values match the quantum expectations
    for (std::size_t ci = 0; ci < pba.contexts.size(); ++ci)
        for (const auto& [e, m] : images[ci])
            for (std::size_t k = 0; k < states.size(); ++k)
                if (std::abs(free_ht.states[k].measures[ci].value(e) - states[k].expectation(m)) >
                    1e-7) {
                    rep.state_agreement = false;
                    rep.findings.push_back("(iv) value/expectation mismatch in context " +
                                           std::to_string(ci));
                }
    return rep;
}

// ---------------------------------------------------------------------------
// Homomorphisms and embeddability

/// All global 0/1 generator assignments whose induced per-context
/// multiplicative measures kill the relation's zero atoms and respect the
/// identifications.
inline std::vector<std::uint32_t> enumerate_homomorphisms(
    const Pba& pba, const QuotientRelation& rel, const std::vector<Identification>& idents = {}) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t eps = 0; eps < (std::uint32_t(1) << pba.n); ++eps) {
        bool ok = true;
        std::vector<std::uint32_t> local(pba.contexts.size());
        for (std::size_t ci = 0; ci < pba.contexts.size() && ok; ++ci) {
            const auto& ctx = pba.contexts[ci];
            std::uint32_t atom = 0;
            for (int j = 0; j < ctx.arity(); ++j) atom |= ((eps >> ctx.gens[j]) & 1u) << j;
            local[ci] = atom;
            if (rel.zero_atoms[ci].contains_atom(atom)) ok = false;
        }
        for (const auto& id : idents) {
            if (!ok) break;
            bool va = id.a.contains_atom(local[id.ctx_a]);
            bool vb = id.b.contains_atom(local[id.ctx_b]);
            if (va != vb) ok = false;
        }
        if (ok) out.push_back(eps);
    }
    return out;
}

struct EmbeddingResult {
    bool embeddable = false;
    std::vector<std::uint32_t> homomorphisms;
};

/// The quotient embeds into the power set of the homomorphism set iff every
/// atom outside the relation's ideal is selected by some homomorphism: such
/// assignments separate exactly the inequivalent element pairs per context.
inline EmbeddingResult check_embeddable(const Pba& pba, const QuotientRelation& rel,
                                        const std::vector<Identification>& idents = {}) {
    EmbeddingResult res;
    res.homomorphisms = enumerate_homomorphisms(pba, rel, idents);
    res.embeddable = true;
    for (std::size_t ci = 0; ci < pba.contexts.size() && res.embeddable; ++ci) {
        const auto& ctx = pba.contexts[ci];
        int k = ctx.arity();
        for (std::uint32_t atom = 0; atom < (std::uint32_t(1) << k) && res.embeddable; ++atom) {
            if (rel.zero_atoms[ci].contains_atom(atom)) continue;
            bool hit = false;
            for (auto eps : res.homomorphisms) {
                std::uint32_t local = 0;
                for (int j = 0; j < k; ++j) local |= ((eps >> ctx.gens[j]) & 1u) << j;
                if (local == atom) { hit = true; break; }
            }
            if (!hit) res.embeddable = false;
        }
    }
    return res;
}

/// LP representability of the quotient: the state vector must be a convex
/// combination of the homomorphism vertices (not of all free assignments).
template <class Q>
FeasibilityCertificate<Q> quotient_representable(const Ppt<Q>& ppt, const QuotientRelation& rel,
                                                 const std::vector<Identification>& idents = {}) {
    auto homs = enumerate_homomorphisms(ppt.pba, rel, idents);
    // correlation constraints: every nonempty generator subset of a context
    std::set<std::uint32_t> monos;
    for (const auto& c : ppt.pba.contexts) {
        int k = c.arity();
        for (std::uint32_t sub = 1; sub < (std::uint32_t(1) << k); ++sub) {
            std::uint32_t mask = 0;
            for (int j = 0; j < k; ++j)
                if ((sub >> j) & 1u) mask |= std::uint32_t(1) << c.gens[j];
            monos.insert(mask);
        }
    }
    std::vector<std::uint32_t> monomials(monos.begin(), monos.end());
    std::vector<std::vector<Q>> A(monomials.size() + 1, std::vector<Q>(homs.size(), Q(0)));
    std::vector<Q> b;
    for (std::size_t r = 0; r < monomials.size(); ++r) {
        for (std::size_t c = 0; c < homs.size(); ++c)
            if ((homs[c] & monomials[r]) == monomials[r]) A[r][c] = Q(1);
        std::vector<GeneratorId> gens;
        for (int g = 0; g < ppt.pba.n; ++g)
            if ((monomials[r] >> g) & 1u) gens.push_back(g);
        auto m = ppt.measure_on(gens);
        Element inter = Element::one(m.arity());
        for (int j = 0; j < m.arity(); ++j) inter = meet(inter, generator_element(j, m.arity()));
        b.push_back(m.value(inter));
    }
    for (std::size_t c = 0; c < homs.size(); ++c) A[monomials.size()][c] = Q(1);
    b.push_back(Q(1));

    auto sol = solve_feasibility(A, b);
    FeasibilityCertificate<Q> cert;
    if (sol.status == LpStatus::Optimal) {
        cert.feasible = true;
        cert.lambda = std::move(sol.x);
    } else {
        cert.feasible = false;
        cert.separator.assign(sol.farkas.begin(), sol.farkas.begin() + monomials.size());
        cert.separator_rhs = -sol.farkas[monomials.size()];
    }
    return cert;
}

}  // namespace pba
